#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "formpin/components.hpp"
#include "formpin/correspondence.hpp"
#include "formpin/image.hpp"
#include "formpin/ocr.hpp"

namespace formpin {

/// Characters whose left/right/top/bottom extremity is a distinct tip.
/// Membership is case-sensitive.
class CharTipTable {
 public:
  CharTipTable() = default;

  /// Left  {A V T Y M N W K X Z 4 v w x y z k}
  /// Right {V T L Y K X Z 7 r x z}
  /// Top   {A M V W T Y 1 4 v w y}
  /// Bottom {V W v w y L}
  static CharTipTable defaults();

  /// JSON object with any of "begCharList", "endCharList", "topCharList",
  /// "bottomCharList" (arrays of one-character strings). Lists that are
  /// absent keep their default contents.
  static CharTipTable from_json(std::string_view json_text);
  static CharTipTable load(const std::filesystem::path& path);

  bool contains(TipClass tip, char c) const;
  const std::string& list(TipClass tip) const { return lists_[index(tip)]; }

  /// Throws InputError for curved characters (O D o 0 Q C c) or duplicates.
  void set(TipClass tip, std::string chars);

 private:
  static std::size_t index(TipClass tip) { return static_cast<std::size_t>(tip); }
  std::array<std::string, 4> lists_;
};

struct EligibilityParams {
  int min_word_len = 3;
  int min_box_height = 12;
  bool require_lexicon = true;

  void validate() const;  // throws InputError
};

/// Words long enough, tall enough and (optionally) in the lexicon, in page
/// order.
std::vector<WordBox> filter_eligible_words(const OcrPage& page, const Lexicon& lex,
                                           const EligibilityParams& params);

struct PixelCoord {
  int x = 0;
  int y = 0;
};

/// Extremal pixel of a component, returned at its pixel center.
///   Left: min x, then max y.    Right: max x, then max y.
///   Top: min y, then min x.     Bottom: max y, then min x.
/// Throws InputError for an empty set.
Point extract_tip(std::span<const PixelCoord> pixels, TipClass tip);

/// Same rule applied to one label of a labeling.
Point extract_tip(const ComponentLabeling& cc, int label, TipClass tip);

struct Keypoint {
  Point location;
  TipClass tip = TipClass::Left;
  char character = 0;
  WordEnd end = WordEnd::First;
  std::string word_text;
  Rect word_box;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Tips of the first and last characters of a word. The first character is
/// looked up in the left/top/bottom lists and measured on the leftmost
/// component inside the box; the last character uses the right/top/bottom
/// lists on the rightmost component. Single-pixel specks are ignored.
std::vector<Keypoint> word_keypoints(const BinaryImage& bin, const WordBox& word,
                                     const CharTipTable& table);

/// word_keypoints for every word, computed in parallel; result[i] belongs to
/// words[i].
std::vector<std::vector<Keypoint>> page_keypoints(const BinaryImage& bin,
                                                  std::span<const WordBox> words,
                                                  const CharTipTable& table);

}  // namespace formpin
