#include "formpin/synthdoc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "formpin/error.hpp"
#include "formpin/raster.hpp"
#include "json.hpp"

namespace formpin {

namespace {

bool overlaps(const Rect& a, const Rect& b) {
  return a.x < b.right() && b.x < a.right() && a.y < b.bottom() && b.y < a.bottom();
}

// Ink box of a glyph in cell coordinates.
Rect glyph_ink_box(const BinaryImage& g) {
  int x0 = g.width(), y0 = g.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (!g.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

struct Origin {
  int x, y;
};

Origin origin_of(const PlacedWord& w) {
  return {static_cast<int>(std::lround(w.anchor.x)), static_cast<int>(std::lround(w.anchor.y))};
}

void check_word(const PlacedWord& w, const GlyphSet& glyphs) {
  if (w.text.empty()) throw InputError("layout word with empty text");
  if (w.scale < 1) throw InputError("word '" + w.text + "' has scale < 1");
  if (!w.anchor.finite()) throw InputError("word '" + w.text + "' has a non-finite anchor");
  for (char c : w.text) {
    if (!glyphs.has(c)) {
      throw InputError("unsupported character '" + std::string(1, c) + "' in word '" + w.text +
                       "'");
    }
  }
}

const std::vector<std::string>& form_labels() {
  static const std::vector<std::string> labels = {
      "Address", "Agent",    "Amount",   "Annual",    "Accident", "Approval", "Asset",
      "Auto",    "Account",  "Advance",  "Member",    "Medical",  "Monthly",  "Manager",
      "Mobile",  "Motor",    "Model",    "Mortgage",  "Minor",    "Market",   "Name",
      "Nation",  "Number",   "Network",  "Notice",    "Nearest",  "Total",    "Taxpayer",
      "Telephone", "Tenant", "Term",     "Transfer",  "Travel",   "Treatment", "Town",
      "Title",   "Vehicle",  "Vendor",   "Valid",     "Value",    "Veteran",  "Victim",
      "Visit",   "Voucher",  "Witness",  "Weekly",    "Worker",   "Weight",   "Wage",
      "Ward",    "Warranty", "Waiver",   "Year",      "Yearly",   "Young",    "Key",
      "Zone",    "Zip",      "Tax",      "Type"};
  return labels;
}

// label index, field kind
struct FormField {
  int label;
  FieldKind kind;
};

constexpr FormField kFormFields[] = {
    {0, FieldKind::Printed},  {6, FieldKind::Printed},      {12, FieldKind::Printed},
    {18, FieldKind::Printed}, {24, FieldKind::Printed},     {33, FieldKind::Printed},
    {39, FieldKind::Printed}, {45, FieldKind::Handwritten}, {51, FieldKind::Printed},
    {57, FieldKind::Printed}, {2, FieldKind::Printed},      {29, FieldKind::Handwritten}};

}  // namespace

Rect word_extent(const PlacedWord& word, const GlyphSet& glyphs) {
  check_word(word, glyphs);
  const auto o = origin_of(word);
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool first = true;
  for (std::size_t k = 0; k < word.text.size(); ++k) {
    const Rect g = glyph_ink_box(glyphs.glyph(word.text[k]));
    const int cx = o.x + static_cast<int>(k) * glyphs.advance() * word.scale;
    const int gx0 = cx + g.x * word.scale, gy0 = o.y + g.y * word.scale;
    const int gx1 = cx + g.right() * word.scale, gy1 = o.y + g.bottom() * word.scale;
    if (first) {
      x0 = gx0, y0 = gy0, x1 = gx1, y1 = gy1;
      first = false;
    } else {
      x0 = std::min(x0, gx0), y0 = std::min(y0, gy0);
      x1 = std::max(x1, gx1), y1 = std::max(y1, gy1);
    }
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

RenderedDocument render_document(const DocumentLayout& layout, const GlyphSet& glyphs) {
  if (layout.page_w < 1 || layout.page_h < 1) throw InputError("layout page size must be positive");
  std::vector<Rect> boxes;
  boxes.reserve(layout.words.size());
  for (const auto& w : layout.words) {
    const Rect box = word_extent(w, glyphs);
    if (!box.inside(layout.page_w, layout.page_h)) {
      throw InputError("word '" + w.text + "' does not fit on the page");
    }
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      if (overlaps(box, boxes[j])) {
        throw InputError("word '" + w.text + "' overlaps word '" + layout.words[j].text + "'");
      }
    }
    boxes.push_back(box);
  }

  RenderedDocument doc{GrayImage(layout.page_w, layout.page_h, 255),
                       OcrPage{{}, layout.page_w, layout.page_h}, 0, 0};
  for (std::size_t i = 0; i < layout.words.size(); ++i) {
    const auto& w = layout.words[i];
    const auto o = origin_of(w);
    std::size_t ink = 0;
    for (std::size_t k = 0; k < w.text.size(); ++k) {
      const auto& g = glyphs.glyph(w.text[k]);
      const int cx = o.x + static_cast<int>(k) * glyphs.advance() * w.scale;
      for (int gy = 0; gy < g.height(); ++gy) {
        for (int gx = 0; gx < g.width(); ++gx) {
          if (!g.at(gx, gy)) continue;
          for (int dy = 0; dy < w.scale; ++dy) {
            auto row = doc.page.row(o.y + gy * w.scale + dy);
            for (int dx = 0; dx < w.scale; ++dx) row[cx + gx * w.scale + dx] = 0;
          }
          ink += static_cast<std::size_t>(w.scale) * w.scale;
        }
      }
    }
    doc.ink_pixels += ink;
    if (w.fill) doc.fill_ink_pixels += ink;
    doc.sidecar.words.push_back({w.text, boxes[i], 100.0});
  }
  return doc;
}

DocumentLayout without_fill(const DocumentLayout& layout) {
  DocumentLayout out = layout;
  std::erase_if(out.words, [](const PlacedWord& w) { return w.fill; });
  return out;
}

void PerturbationParams::validate() const {
  const double vals[] = {rotation_deg,        translate_x,         translate_y, scale_x, scale_y,
                         perspective_skew[0], perspective_skew[1]};
  for (double v : vals) {
    if (!std::isfinite(v)) throw InputError("perturbation parameters must be finite");
  }
  if (scale_x <= 0.0 || scale_y <= 0.0) throw InputError("perturbation scale must be > 0");
}

Homography make_homography(const PerturbationParams& p, int page_w, int page_h) {
  p.validate();
  const double cx = page_w / 2.0, cy = page_h / 2.0;
  const double a = p.rotation_deg * M_PI / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  const Mat3 to_origin = {1, 0, -cx, 0, 1, -cy, 0, 0, 1};
  const Mat3 rotate = {c, -s, 0, s, c, 0, 0, 0, 1};
  const Mat3 scale = {p.scale_x, 0, 0, 0, p.scale_y, 0, 0, 0, 1};
  const Mat3 shift = {1, 0, p.translate_x * page_w, 0, 1, p.translate_y * page_h, 0, 0, 1};
  const Mat3 back = {1, 0, cx, 0, 1, cy, 0, 0, 1};
  using linalg::multiply;
  Mat3 m = multiply(back, multiply(shift, multiply(scale, multiply(rotate, to_origin))));
  m[6] = p.perspective_skew[0];
  m[7] = p.perspective_skew[1];
  m[8] = 1.0;
  return Homography::from_matrix(m);
}

PerturbedDocument perturb_document(const GrayImage& img, const PerturbationParams& p,
                                   std::uint8_t fill) {
  const auto forward = make_homography(p, img.width(), img.height());
  return {warp_perspective(img, forward, img.width(), img.height(), fill), invert(forward)};
}

OcrPage transform_sidecar(const OcrPage& page, const Homography& template_to_test, int out_w,
                          int out_h, int pad) {
  OcrPage out{{}, out_w, out_h};
  for (const auto& w : page.words) {
    const Point corners[] = {{static_cast<double>(w.box.x), static_cast<double>(w.box.y)},
                             {static_cast<double>(w.box.right()), static_cast<double>(w.box.y)},
                             {static_cast<double>(w.box.x), static_cast<double>(w.box.bottom())},
                             {static_cast<double>(w.box.right()),
                              static_cast<double>(w.box.bottom())}};
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    bool visible = true;
    for (const auto& c : corners) {
      Point q;
      try {
        q = apply_point(template_to_test, c);
      } catch (const InputError&) {
        visible = false;
        break;
      }
      if (q.x < 0 || q.y < 0 || q.x > out_w || q.y > out_h) visible = false;
      x0 = std::min(x0, q.x), y0 = std::min(y0, q.y);
      x1 = std::max(x1, q.x), y1 = std::max(y1, q.y);
    }
    if (!visible) continue;
    const int bx0 = std::max(0, static_cast<int>(std::floor(x0)) - pad);
    const int by0 = std::max(0, static_cast<int>(std::floor(y0)) - pad);
    const int bx1 = std::min(out_w, static_cast<int>(std::ceil(x1)) + pad);
    const int by1 = std::min(out_h, static_cast<int>(std::ceil(y1)) + pad);
    if (bx1 <= bx0 || by1 <= by0) continue;
    out.words.push_back({w.text, {bx0, by0, bx1 - bx0, by1 - by0}, w.confidence});
  }
  return out;
}

const std::vector<std::string>& builtin_fill_values() {
  static const std::vector<std::string> values = {"FIDO",  "Smith",  "Austin", "4471",
                                                  "Harper", "Cedar", "2019",   "Bluebird",
                                                  "Jones", "8820",   "Oakland", "Pine"};
  return values;
}

DocumentLayout builtin_form(bool filled) {
  constexpr int kScale = 2, kColumns = 5, kColumnPitch = 320, kRowPitch = 190;
  constexpr int kLeft = 40, kTop = 60;
  DocumentLayout layout;
  const auto& labels = form_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int col = static_cast<int>(i) % kColumns, row = static_cast<int>(i) / kColumns;
    layout.words.push_back({labels[i],
                            {static_cast<double>(kLeft + col * kColumnPitch),
                             static_cast<double>(kTop + row * kRowPitch)},
                            kScale,
                            false});
  }
  const auto& values = builtin_fill_values();
  for (std::size_t f = 0; f < std::size(kFormFields); ++f) {
    const auto& label = layout.words[kFormFields[f].label];
    const Rect region{static_cast<int>(label.anchor.x), static_cast<int>(label.anchor.y) + 50,
                      270, 80};
    layout.fields.push_back({to_lower(label.text), region, kFormFields[f].kind});
    if (filled) {
      layout.words.push_back({values[f],
                              {static_cast<double>(region.x + 10),
                               static_cast<double>(region.y + 20)},
                              kScale,
                              true});
    }
  }
  return layout;
}

DocumentLayout random_layout(std::uint64_t seed, int count,
                             const std::vector<std::string>& vocabulary, int page_w, int page_h,
                             int scale) {
  if (vocabulary.empty()) throw InputError("random_layout needs a vocabulary");
  if (count < 0) throw InputError("random_layout count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary.size() - 1);
  DocumentLayout layout{page_w, page_h, {}, {}};
  std::vector<Rect> taken;
  constexpr int kGap = 6;
  int attempts = 0;
  while (static_cast<int>(layout.words.size()) < count) {
    if (++attempts > 200 * (count + 1)) {
      throw InputError("could not place " + std::to_string(count) + " words on the page");
    }
    PlacedWord w{vocabulary[pick(rng)], {}, scale, false};
    const Rect probe = word_extent(w);
    if (probe.w + 2 >= page_w || probe.h + 2 >= page_h) continue;
    std::uniform_int_distribution<int> ux(1, page_w - probe.right() - 1);
    std::uniform_int_distribution<int> uy(1, page_h - probe.bottom() - 1);
    w.anchor = {static_cast<double>(ux(rng)), static_cast<double>(uy(rng))};
    const Rect box = word_extent(w);
    const Rect grown{box.x - kGap, box.y - kGap, box.w + 2 * kGap, box.h + 2 * kGap};
    if (std::any_of(taken.begin(), taken.end(),
                    [&](const Rect& r) { return overlaps(grown, r); })) {
      continue;
    }
    taken.push_back(box);
    layout.words.push_back(std::move(w));
  }
  return layout;
}

DocumentLayout parse_layout(std::string_view json_text) {
  DocumentLayout layout;
  try {
    const auto j = nlohmann::json::parse(json_text);
    layout.page_w = j.value("page_w", 1600);
    layout.page_h = j.value("page_h", 2400);
    for (const auto& w : j.at("words")) {
      layout.words.push_back({w.at("text").get<std::string>(),
                              {w.at("x").get<double>(), w.at("y").get<double>()},
                              w.value("scale", 1),
                              w.value("fill", false)});
    }
    if (j.contains("fields")) layout.fields = parse_fields(j.dump());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed layout: ") + e.what());
  }
  return layout;
}

std::string format_layout(const DocumentLayout& layout) {
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : layout.words) {
    words.push_back({{"text", w.text},
                     {"x", w.anchor.x},
                     {"y", w.anchor.y},
                     {"scale", w.scale},
                     {"fill", w.fill}});
  }
  auto j = nlohmann::json::parse(format_fields(layout.fields));
  j["page_w"] = layout.page_w;
  j["page_h"] = layout.page_h;
  j["words"] = words;
  return j.dump(1) + "\n";
}

DocumentLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_layout(ss.str());
}

void save_layout(const DocumentLayout& layout, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_layout(layout);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace formpin
