#include "formpin/pipeline.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "formpin/error.hpp"
#include "formpin/pgm.hpp"
#include "formpin/raster.hpp"
#include "json.hpp"

namespace formpin {

using nlohmann::json;

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

// Temporary directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("formpin-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::error_code ec;
    std::filesystem::create_directories(path_, ec);
    if (ec) throw IoError("cannot create scratch directory " + path_.string());
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string join_words(std::vector<WordBox> words) {
  std::stable_sort(words.begin(), words.end(), [](const WordBox& a, const WordBox& b) {
    const Point ca = a.center(), cb = b.center();
    // same line when the centers are within half a box height
    if (std::abs(ca.y - cb.y) > 0.5 * std::min(a.box.h, b.box.h)) return ca.y < cb.y;
    return ca.x < cb.x;
  });
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w.text;
  }
  return out;
}

json params_json(const PerturbationParams& p) {
  return {{"rotation_deg", p.rotation_deg},
          {"translate_x", p.translate_x},
          {"translate_y", p.translate_y},
          {"scale", p.scale_x}};
}

}  // namespace

std::string_view to_string(OcrBackend backend) {
  return backend == OcrBackend::Sidecar ? "sidecar" : "external";
}

OcrBackend parse_ocr_backend(std::string_view s) {
  if (s == "sidecar") return OcrBackend::Sidecar;
  if (s == "external") return OcrBackend::External;
  throw InputError("unknown OCR backend '" + std::string(s) + "'");
}

void PipelineConfig::validate() const {
  if (canvas_w < 100 || canvas_h < 100) throw InputError("canvas dimensions must be >= 100");
  if (binarize_threshold < 1 || binarize_threshold > 255) {
    throw InputError("binarize_threshold must be in [1, 255]");
  }
  eligibility.validate();
  neighborhood.validate();
  ransac.validate();
  if (ocr_process.psm < 0 || ocr_process.psm > 13) throw InputError("ocr psm must be in [0, 13]");
}

PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  try {
    const auto j = json::parse(json_text);
    if (!j.is_object()) throw InputError("config must be a JSON object");
    if (j.contains("canvas")) {
      c.canvas_w = j["canvas"].value("width", c.canvas_w);
      c.canvas_h = j["canvas"].value("height", c.canvas_h);
    }
    c.neighborhood = NeighborhoodParams::for_template_width(c.canvas_w);
    c.binarize_threshold = j.value("binarize_threshold", c.binarize_threshold);
    if (j.contains("eligibility")) {
      const auto& e = j["eligibility"];
      c.eligibility.min_word_len = e.value("min_word_len", c.eligibility.min_word_len);
      c.eligibility.min_box_height = e.value("min_box_height", c.eligibility.min_box_height);
      c.eligibility.require_lexicon = e.value("require_lexicon", c.eligibility.require_lexicon);
    }
    if (j.contains("neighborhood")) {
      const auto& n = j["neighborhood"];
      c.neighborhood.radius = n.value("radius", c.neighborhood.radius);
      c.neighborhood.overlap_threshold =
          n.value("overlap_threshold", c.neighborhood.overlap_threshold);
    }
    if (j.contains("ransac")) {
      const auto& r = j["ransac"];
      c.ransac.inlier_threshold = r.value("inlier_threshold", c.ransac.inlier_threshold);
      c.ransac.confidence = r.value("confidence", c.ransac.confidence);
      c.ransac.max_iterations = r.value("max_iterations", c.ransac.max_iterations);
      c.ransac.min_inliers = r.value("min_inliers", c.ransac.min_inliers);
      c.ransac.rng_seed = r.value("rng_seed", c.ransac.rng_seed);
    }
    if (j.contains("ocr")) {
      const auto& o = j["ocr"];
      c.ocr_backend = parse_ocr_backend(o.value("backend", std::string("sidecar")));
      c.ocr_process.binary = o.value("binary", c.ocr_process.binary);
      c.ocr_process.psm = o.value("psm", c.ocr_process.psm);
      c.ocr_process.extra_args = o.value("extra_args", c.ocr_process.extra_args);
    }
    if (j.contains("tip_table_path") && !j["tip_table_path"].is_null()) {
      c.tip_table_path = resolve(base_dir, j["tip_table_path"].get<std::string>());
    }
    if (j.contains("lexicon_path")) {
      c.lexicon_path = resolve(base_dir, j["lexicon_path"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text(path), path.parent_path());
}

std::string format_config(const PipelineConfig& c) {
  json j = {
      {"canvas", {{"width", c.canvas_w}, {"height", c.canvas_h}}},
      {"binarize_threshold", c.binarize_threshold},
      {"eligibility",
       {{"min_word_len", c.eligibility.min_word_len},
        {"min_box_height", c.eligibility.min_box_height},
        {"require_lexicon", c.eligibility.require_lexicon}}},
      {"neighborhood",
       {{"radius", c.neighborhood.radius},
        {"overlap_threshold", c.neighborhood.overlap_threshold}}},
      {"ransac",
       {{"inlier_threshold", c.ransac.inlier_threshold},
        {"confidence", c.ransac.confidence},
        {"max_iterations", c.ransac.max_iterations},
        {"min_inliers", c.ransac.min_inliers},
        {"rng_seed", c.ransac.rng_seed}}},
      {"ocr",
       {{"backend", std::string(to_string(c.ocr_backend))},
        {"binary", c.ocr_process.binary},
        {"psm", c.ocr_process.psm},
        {"extra_args", c.ocr_process.extra_args}}},
      {"lexicon_path", c.lexicon_path.string()},
  };
  if (c.tip_table_path) j["tip_table_path"] = c.tip_table_path->string();
  return j.dump(2) + "\n";
}

PipelineContext PipelineContext::create(const PipelineConfig& config) {
  config.validate();
  return {config, Lexicon::load(config.lexicon_path),
          config.tip_table_path ? CharTipTable::load(*config.tip_table_path)
                                : CharTipTable::defaults()};
}

PreparedPage prepare_page(const GrayImage& image, const OcrPage& words,
                          const PipelineConfig& config) {
  OcrPage sized = words;
  if (sized.image_w == 0 && sized.image_h == 0) {
    sized.image_w = image.width();
    sized.image_h = image.height();
  }
  if (sized.image_w != image.width() || sized.image_h != image.height()) {
    throw InputError("word boxes belong to a " + std::to_string(sized.image_w) + "x" +
                     std::to_string(sized.image_h) + " page, image is " +
                     std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  auto gray = resize_bilinear(image, config.canvas_w, config.canvas_h);
  auto bin = binarize(gray, config.binarize_threshold);
  return {std::move(gray), std::move(bin), rescale_page(sized, config.canvas_w, config.canvas_h)};
}

PreparedPage load_page(const std::filesystem::path& image_path, const PipelineConfig& config) {
  const auto image = load_image(image_path);
  const OcrPage words =
      config.ocr_backend == OcrBackend::Sidecar
          ? read_words_sidecar(sidecar_path_for(image_path), image.width(), image.height())
          : read_words_external(image_path, config.ocr_process);
  return prepare_page(image, words, config);
}

AlignmentResult align_pages(const PipelineContext& ctx, const PreparedPage& tmpl,
                            const PreparedPage& test) {
  const auto& cfg = ctx.config;
  AlignmentResult out{GrayImage(1, 1), {}, {}, BinaryImage(1, 1)};
  auto& report = out.report;

  auto t = std::chrono::steady_clock::now();
  const auto set = build_correspondences(tmpl.bin, tmpl.words, test.bin, test.words, ctx.tips,
                                         cfg.eligibility, cfg.neighborhood, ctx.lexicon);
  report.correspondence_count = static_cast<int>(set.pairs.size());
  report.matched_word_count = static_cast<int>(set.matches.size());
  report.timings_ms["match"] = elapsed_ms(t);
  if (set.pairs.size() < 4) {
    throw MatchError("too few correspondences: " + std::to_string(set.pairs.size()) +
                     " from " + std::to_string(set.matches.size()) +
                     " matched words (need at least 4)");
  }

  t = std::chrono::steady_clock::now();
  report.estimate = ransac_estimate(set.pairs, cfg.ransac);
  report.timings_ms["ransac"] = elapsed_ms(t);

  t = std::chrono::steady_clock::now();
  out.aligned = warp_perspective(test.gray, report.estimate.h, cfg.canvas_w, cfg.canvas_h, 255);
  out.aligned_words = transform_sidecar(test.words, report.estimate.h, cfg.canvas_w,
                                        cfg.canvas_h, 0);
  report.timings_ms["warp"] = elapsed_ms(t);

  t = std::chrono::steady_clock::now();
  auto diff = xor_diff(tmpl.bin, binarize(out.aligned, cfg.binarize_threshold));
  out.xor_diff = std::move(diff.diff);
  report.xor_residual = diff.residual_fraction;
  report.timings_ms["xor"] = elapsed_ms(t);
  return out;
}

AlignmentResult align_document(const std::filesystem::path& template_path,
                               const std::filesystem::path& test_path,
                               const PipelineConfig& config) {
  const auto ctx = PipelineContext::create(config);
  auto t = std::chrono::steady_clock::now();
  const auto tmpl = load_page(template_path, config);
  const double load_template = elapsed_ms(t);
  t = std::chrono::steady_clock::now();
  const auto test = load_page(test_path, config);
  const double load_test = elapsed_ms(t);
  auto result = align_pages(ctx, tmpl, test);
  result.report.timings_ms["load_template"] = load_template;
  result.report.timings_ms["load_test"] = load_test;
  return result;
}

std::vector<FieldCrop> extract_fields(const GrayImage& aligned,
                                      const std::vector<FieldAnnotation>& annotations,
                                      const PipelineConfig& config,
                                      const OcrPage* aligned_words) {
  for (const auto& a : annotations) {
    if (!a.region.inside(aligned.width(), aligned.height())) {
      throw InputError("field '" + a.name + "' region lies outside the " +
                       std::to_string(aligned.width()) + "x" + std::to_string(aligned.height()) +
                       " image");
    }
  }
  std::optional<ScratchDir> scratch;
  std::vector<FieldCrop> out;
  for (const auto& a : annotations) {
    FieldCrop crop_out{a, crop(aligned, a.region), std::nullopt};
    if (a.kind == FieldKind::Printed) {
      if (config.ocr_backend == OcrBackend::External) {
        if (!scratch) scratch.emplace();
        const auto patch_path = *scratch / "patch.pgm";
        save_image(crop_out.patch, patch_path);
        crop_out.recognized_text =
            join_words(read_words_external(patch_path, config.ocr_process).words);
      } else if (aligned_words) {
        std::vector<WordBox> inside;
        for (const auto& w : aligned_words->words) {
          const Point c = w.center();
          if (c.x >= a.region.x && c.x < a.region.right() && c.y >= a.region.y &&
              c.y < a.region.bottom()) {
            inside.push_back(w);
          }
        }
        crop_out.recognized_text = join_words(std::move(inside));
      }
    }
    out.push_back(std::move(crop_out));
  }
  return out;
}

std::string format_report(const AlignmentReport& r) {
  json mask = json::array();
  for (bool b : r.estimate.inlier_mask) mask.push_back(b);
  json timings = json::object();
  for (const auto& [stage, ms] : r.timings_ms) timings[stage] = ms;
  const auto& m = r.estimate.h.matrix();
  json j = {{"homography", std::vector<double>(m.begin(), m.end())},
            {"inlier_count", r.estimate.inlier_count},
            {"inlier_mask", mask},
            {"mean_inlier_reproj_error_px", r.estimate.mean_inlier_reproj_error},
            {"iterations_run", r.estimate.iterations_run},
            {"correspondences", r.correspondence_count},
            {"matched_words", r.matched_word_count},
            {"xor_residual", r.xor_residual},
            {"timings_ms", timings}};
  return j.dump(2) + "\n";
}

AlignmentReport parse_report(std::string_view json_text) {
  AlignmentReport r;
  try {
    const auto j = json::parse(json_text);
    const auto h = j.at("homography").get<std::vector<double>>();
    if (h.size() != 9) throw InputError("report homography must have 9 entries");
    Mat3 m;
    std::copy(h.begin(), h.end(), m.begin());
    r.estimate.h = Homography::from_matrix(m);
    r.estimate.inlier_count = j.at("inlier_count").get<int>();
    r.estimate.inlier_mask = j.at("inlier_mask").get<std::vector<bool>>();
    r.estimate.mean_inlier_reproj_error = j.at("mean_inlier_reproj_error_px").get<double>();
    r.estimate.iterations_run = j.value("iterations_run", 0);
    r.correspondence_count = j.at("correspondences").get<int>();
    r.matched_word_count = j.at("matched_words").get<int>();
    r.xor_residual = j.at("xor_residual").get<double>();
    r.timings_ms = j.value("timings_ms", std::map<std::string, double>{});
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  } catch (const EstimateError& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return r;
}

void write_report(const AlignmentReport& report, const std::filesystem::path& path) {
  write_text(format_report(report), path);
}

AlignmentReport read_report(const std::filesystem::path& path) {
  return parse_report(read_text(path));
}

// ---------------------------------------------------------------------------

std::vector<PerturbationParams> StressGrid::cells() const {
  if (rotations_deg.empty() || translations.empty() || scales.empty()) {
    throw InputError("stress grid lists must not be empty");
  }
  for (double s : scales) {
    if (!(s > 0.0)) throw InputError("stress grid scales must be > 0");
  }
  std::vector<PerturbationParams> out;
  auto add = [&](double r, double tx, double ty, double s) {
    PerturbationParams p{r, tx, ty, s, s, {0.0, 0.0}};
    const bool seen = std::any_of(out.begin(), out.end(), [&](const PerturbationParams& q) {
      return q.rotation_deg == r && q.translate_x == tx && q.translate_y == ty &&
             q.scale_x == s;
    });
    if (!seen) out.push_back(p);
  };
  if (cartesian) {
    for (double r : rotations_deg) {
      for (double tx : translations) {
        for (double ty : translations) {
          for (double s : scales) add(r, tx, ty, s);
        }
      }
    }
  } else {
    for (double r : rotations_deg) add(r, 0, 0, 1);
    for (double t : translations) add(0, t, 0, 1);
    for (double t : translations) add(0, 0, t, 1);
    for (double s : scales) add(0, 0, 0, s);
  }
  return out;
}

namespace {

struct Factor {
  const char* name;
  double identity;
  double (*get)(const PerturbationParams&);
};

constexpr Factor kFactors[] = {
    {"rotation_deg", 0.0, [](const PerturbationParams& p) { return p.rotation_deg; }},
    {"translate_x", 0.0, [](const PerturbationParams& p) { return p.translate_x; }},
    {"translate_y", 0.0, [](const PerturbationParams& p) { return p.translate_y; }},
    {"scale", 1.0, [](const PerturbationParams& p) { return p.scale_x; }},
};

std::vector<StressBoundary> boundaries(const std::vector<StressCell>& cells, bool cartesian) {
  std::vector<StressBoundary> out;
  for (const auto& f : kFactors) {
    std::map<double, bool> ok;
    for (const auto& c : cells) {
      bool others_identity = true;
      for (const auto& g : kFactors) {
        if (&g != &f && g.get(c.params) != g.identity) others_identity = false;
      }
      if (!cartesian && !others_identity) continue;
      const double v = f.get(c.params);
      auto [it, inserted] = ok.emplace(v, c.success);
      if (!inserted) it->second = it->second && c.success;
    }
    StressBoundary b;
    b.factor = f.name;
    std::vector<std::pair<double, bool>> values(ok.begin(), ok.end());
    for (const auto& [v, good] : values) {
      b.tested.push_back(v);
      if (!good) b.failed.push_back(v);
    }
    if (!values.empty()) {
      std::size_t start = 0;
      for (std::size_t i = 1; i < values.size(); ++i) {
        if (std::abs(values[i].first - f.identity) < std::abs(values[start].first - f.identity)) {
          start = i;
        }
      }
      if (values[start].second) {
        std::size_t lo = start, hi = start;
        while (lo > 0 && values[lo - 1].second) --lo;
        while (hi + 1 < values.size() && values[hi + 1].second) ++hi;
        b.low = values[lo].first;
        b.high = values[hi].first;
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

StressTable stress_grid(const PipelineContext& ctx, const PreparedPage& tmpl,
                        const StressGrid& grid, OcrBackend backend, double success_px) {
  const auto& cfg = ctx.config;
  StressTable table;
  table.backend = backend;
  std::optional<ScratchDir> scratch;
  for (const auto& p : grid.cells()) {
    StressCell cell;
    cell.params = p;
    try {
      const auto forward = make_homography(p, cfg.canvas_w, cfg.canvas_h);
      const auto pert = perturb_document(tmpl.gray, p);
      OcrPage words;
      if (backend == OcrBackend::Sidecar) {
        words = transform_sidecar(tmpl.words, forward, cfg.canvas_w, cfg.canvas_h);
      } else {
        if (!scratch) scratch.emplace();
        const auto path = *scratch / "cell.pgm";
        save_image(pert.image, path);
        words = read_words_external(path, cfg.ocr_process);
      }
      const auto result = align_pages(ctx, tmpl, prepare_page(pert.image, words, cfg));
      cell.correspondences = result.report.correspondence_count;
      cell.inliers = result.report.estimate.inlier_count;
      const double err = corner_error(result.report.estimate.h, pert.true_h, cfg.canvas_w,
                                      cfg.canvas_h);
      cell.corner_error_px = err;
      cell.success = std::isfinite(err) && err < success_px;
      if (!cell.success) cell.error = "corner error above threshold";
    } catch (const Error& e) {
      cell.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    if (cell.success) {
      ++table.succeeded;
      table.max_corner_error_px = std::max(table.max_corner_error_px, *cell.corner_error_px);
    }
    table.cells.push_back(std::move(cell));
  }
  table.boundaries = boundaries(table.cells, grid.cartesian);
  return table;
}

std::vector<StressTable> stress_grid(const std::filesystem::path& template_path,
                                     const PipelineConfig& config, const StressGrid& grid,
                                     bool with_external, double success_px) {
  const auto ctx = PipelineContext::create(config);
  std::vector<StressTable> out;
  PipelineConfig sidecar_cfg = config;
  sidecar_cfg.ocr_backend = OcrBackend::Sidecar;
  out.push_back(stress_grid(ctx, load_page(template_path, sidecar_cfg), grid,
                            OcrBackend::Sidecar, success_px));
  if (with_external && external_ocr_available(config.ocr_process)) {
    PipelineConfig external_cfg = config;
    external_cfg.ocr_backend = OcrBackend::External;
    out.push_back(stress_grid(ctx, load_page(template_path, external_cfg), grid,
                              OcrBackend::External, success_px));
  }
  return out;
}

std::string format_stress_report(const std::vector<StressTable>& tables, const StressGrid& grid,
                                 double success_px) {
  json backends = json::object();
  for (const auto& t : tables) {
    json cells = json::array();
    for (const auto& c : t.cells) {
      json cell = params_json(c.params);
      cell["success"] = c.success;
      cell["corner_error_px"] = c.corner_error_px ? json(*c.corner_error_px) : json(nullptr);
      cell["correspondences"] = c.correspondences;
      cell["inliers"] = c.inliers;
      if (!c.error.empty()) cell["error"] = c.error;
      cells.push_back(std::move(cell));
    }
    json bounds = json::object();
    for (const auto& b : t.boundaries) {
      bounds[b.factor] = {{"tested", b.tested},
                          {"failed", b.failed},
                          {"range", b.low ? json::array({*b.low, *b.high}) : json(nullptr)}};
    }
    backends[std::string(to_string(t.backend))] = {
        {"cells", cells},
        {"summary",
         {{"cells", t.cells.size()},
          {"succeeded", t.succeeded},
          {"all_succeeded", t.all_succeeded()},
          {"max_corner_error_px", t.max_corner_error_px},
          {"boundaries", bounds}}}};
  }
  json j = {{"mode", grid.cartesian ? "cartesian" : "sweep"},
            {"success_threshold_px", success_px},
            {"backends", backends}};
  return j.dump(2) + "\n";
}

}  // namespace formpin
