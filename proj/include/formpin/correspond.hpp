#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "formpin/correspondence.hpp"
#include "formpin/image.hpp"
#include "formpin/keypoints.hpp"
#include "formpin/ocr.hpp"

namespace formpin {

struct NeighborhoodParams {
  double radius = 160.0;  // template pixels; 0.1 x the 1600 px canvas
  double overlap_threshold = 0.9;

  static NeighborhoodParams for_template_width(int width) {
    return {0.1 * width, 0.9};
  }
  void validate() const;  // throws InputError
};

/// Lowercase text -> multiplicity.
using WordBag = std::map<std::string, int>;

/// Texts of the other words whose box centers lie within `radius` of the
/// center word's box center. One entry equal to `center_word` is skipped.
WordBag neighborhood_bag(const OcrPage& page, const WordBox& center_word, double radius);

/// |a ∩ b| as multisets.
int bag_intersection(const WordBag& a, const WordBag& b);
int bag_size(const WordBag& bag);

struct WordMatch {
  WordBox template_word;
  WordBox test_word;
  double score = 0.0;
};

/// Finds the test word with the same (case-sensitive) text whose
/// neighborhood best covers the template word's neighborhood. Ties for the
/// best score give no match. With an empty template neighborhood the text
/// must occur exactly once on each page.
std::optional<WordMatch> match_word(const OcrPage& template_page, const WordBox& template_word,
                                    const OcrPage& test_page, const NeighborhoodParams& params);

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;
  std::vector<WordMatch> matches;  // every matched eligible template word
};

/// Matches eligible template words into the test page and pairs the
/// keypoints of each matched word by (word end, tip class). Template words
/// are processed in parallel; output order follows the template page.
CorrespondenceSet build_correspondences(const BinaryImage& template_bin,
                                        const OcrPage& template_page,
                                        const BinaryImage& test_bin, const OcrPage& test_page,
                                        const CharTipTable& table,
                                        const EligibilityParams& eligibility,
                                        const NeighborhoodParams& neighborhood,
                                        const Lexicon& lexicon);

}  // namespace formpin
