#include "formpin/keypoints.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "formpin/error.hpp"
#include "json.hpp"

namespace formpin {

namespace {

constexpr std::string_view kCurved = "ODo0QCc";

constexpr const char* kJsonKeys[] = {"begCharList", "endCharList", "topCharList",
                                     "bottomCharList"};

// Tip comparison: true when a is a better tip than b.
bool better(TipClass tip, int ax, int ay, int bx, int by) {
  switch (tip) {
    case TipClass::Left:
      return ax < bx || (ax == bx && ay > by);
    case TipClass::Right:
      return ax > bx || (ax == bx && ay > by);
    case TipClass::Top:
      return ay < by || (ay == by && ax < bx);
    case TipClass::Bottom:
      return ay > by || (ay == by && ax < bx);
  }
  return false;
}

bool is_speck(const Rect& box) { return box.w < 2 && box.h < 2; }

}  // namespace

CharTipTable CharTipTable::defaults() {
  CharTipTable t;
  t.set(TipClass::Left, "AVTYMNWKXZ4vwxyzk");
  t.set(TipClass::Right, "VTLYKXZ7rxz");
  t.set(TipClass::Top, "AMVWTY14vwy");
  t.set(TipClass::Bottom, "VWvwyL");
  return t;
}

void CharTipTable::set(TipClass tip, std::string chars) {
  for (std::size_t i = 0; i < chars.size(); ++i) {
    if (kCurved.find(chars[i]) != std::string_view::npos) {
      throw InputError("curved character '" + std::string(1, chars[i]) +
                       "' cannot be a tip character");
    }
    if (chars.find(chars[i], i + 1) != std::string::npos) {
      throw InputError("duplicate tip character '" + std::string(1, chars[i]) + "'");
    }
  }
  lists_[index(tip)] = std::move(chars);
}

bool CharTipTable::contains(TipClass tip, char c) const {
  return lists_[index(tip)].find(c) != std::string::npos;
}

CharTipTable CharTipTable::from_json(std::string_view json_text) {
  CharTipTable t = defaults();
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (!j.is_object()) throw InputError("tip table must be a JSON object");
    for (TipClass tip : kAllTips) {
      const char* key = kJsonKeys[index(tip)];
      if (!j.contains(key)) continue;
      if (!j.at(key).is_array()) throw InputError(std::string(key) + " must be an array");
      std::string chars;
      for (const auto& e : j.at(key)) {
        const auto s = e.get<std::string>();
        if (s.size() != 1) {
          throw InputError(std::string(key) + " entries must be single characters, got '" + s +
                           "'");
        }
        chars += s;
      }
      t.set(tip, std::move(chars));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tip table: ") + e.what());
  }
  return t;
}

CharTipTable CharTipTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void EligibilityParams::validate() const {
  if (min_word_len < 1) throw InputError("min_word_len must be >= 1");
  if (min_box_height < 1) throw InputError("min_box_height must be >= 1");
}

std::vector<WordBox> filter_eligible_words(const OcrPage& page, const Lexicon& lex,
                                           const EligibilityParams& params) {
  params.validate();
  std::vector<WordBox> out;
  for (const auto& w : page.words) {
    if (static_cast<int>(w.text.size()) < params.min_word_len) continue;
    if (w.box.h < params.min_box_height) continue;
    if (params.require_lexicon && !lex.contains(w.text)) continue;
    out.push_back(w);
  }
  return out;
}

Point extract_tip(std::span<const PixelCoord> pixels, TipClass tip) {
  if (pixels.empty()) throw InputError("extract_tip on an empty component");
  PixelCoord best = pixels.front();
  for (const auto& p : pixels.subspan(1)) {
    if (better(tip, p.x, p.y, best.x, best.y)) best = p;
  }
  return {best.x + 0.5, best.y + 0.5};
}

Point extract_tip(const ComponentLabeling& cc, int label, TipClass tip) {
  if (label < 1 || label > cc.count) throw InputError("extract_tip: no such label");
  const Rect& b = cc.boxes[label - 1];
  int bx = -1, by = -1;
  for (int y = b.y; y < b.bottom(); ++y) {
    for (int x = b.x; x < b.right(); ++x) {
      if (cc.label_at(x, y) != label) continue;
      if (bx < 0 || better(tip, x, y, bx, by)) bx = x, by = y;
    }
  }
  return {bx + 0.5, by + 0.5};
}

std::vector<Keypoint> word_keypoints(const BinaryImage& bin, const WordBox& word,
                                     const CharTipTable& table) {
  if (!word.box.inside(bin.width(), bin.height())) {
    throw InputError("box of '" + word.text + "' lies outside the image");
  }
  std::vector<Keypoint> out;
  if (word.text.empty()) return out;
  const auto cc = connected_components(bin, word.box);

  int leftmost = 0, rightmost = 0;
  for (int k = 1; k <= cc.count; ++k) {
    const Rect& b = cc.boxes[k - 1];
    if (is_speck(b)) continue;
    if (leftmost == 0 || b.x < cc.boxes[leftmost - 1].x) leftmost = k;
    if (rightmost == 0 || b.right() > cc.boxes[rightmost - 1].right()) rightmost = k;
  }
  if (leftmost == 0) return out;

  const auto emit = [&](int label, char c, WordEnd end, TipClass tip) {
    if (!table.contains(tip, c)) return;
    out.push_back({extract_tip(cc, label, tip), tip, c, end, word.text, word.box});
  };
  const char first = word.text.front(), last = word.text.back();
  for (TipClass tip : {TipClass::Left, TipClass::Top, TipClass::Bottom}) {
    emit(leftmost, first, WordEnd::First, tip);
  }
  for (TipClass tip : {TipClass::Right, TipClass::Top, TipClass::Bottom}) {
    emit(rightmost, last, WordEnd::Last, tip);
  }
  return out;
}

std::vector<std::vector<Keypoint>> page_keypoints(const BinaryImage& bin,
                                                  std::span<const WordBox> words,
                                                  const CharTipTable& table) {
  std::vector<std::vector<Keypoint>> out(words.size());
  const auto n = static_cast<std::ptrdiff_t>(words.size());
  // errors cannot cross the parallel region, so park the first one
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = word_keypoints(bin, words[i], table);
    } catch (...) {
#pragma omp critical(formpin_keypoints)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace formpin
