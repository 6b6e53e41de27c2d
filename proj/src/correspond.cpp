#include "formpin/correspond.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "formpin/error.hpp"

namespace formpin {

void NeighborhoodParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("neighborhood radius must be > 0");
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw InputError("overlap threshold must be in (0, 1]");
  }
}

WordBag neighborhood_bag(const OcrPage& page, const WordBox& center_word, double radius) {
  WordBag bag;
  const Point c = center_word.center();
  bool skipped = false;
  for (const auto& w : page.words) {
    if (!skipped && w == center_word) {
      skipped = true;
      continue;
    }
    if (distance(w.center(), c) <= radius) ++bag[to_lower(w.text)];
  }
  return bag;
}

int bag_intersection(const WordBag& a, const WordBag& b) {
  int n = 0;
  for (const auto& [text, count] : a) {
    if (auto it = b.find(text); it != b.end()) n += std::min(count, it->second);
  }
  return n;
}

int bag_size(const WordBag& bag) {
  int n = 0;
  for (const auto& [text, count] : bag) n += count;
  return n;
}

std::optional<WordMatch> match_word(const OcrPage& template_page, const WordBox& template_word,
                                    const OcrPage& test_page, const NeighborhoodParams& params) {
  params.validate();
  std::vector<const WordBox*> candidates;
  for (const auto& w : test_page.words) {
    if (w.text == template_word.text) candidates.push_back(&w);
  }
  if (candidates.empty()) return std::nullopt;

  const WordBag bag = neighborhood_bag(template_page, template_word, params.radius);
  const int denom = bag_size(bag);
  if (denom == 0) {
    const auto in_template = std::count_if(
        template_page.words.begin(), template_page.words.end(),
        [&](const WordBox& w) { return w.text == template_word.text; });
    if (in_template != 1 || candidates.size() != 1) return std::nullopt;
    return WordMatch{template_word, *candidates.front(), 1.0};
  }

  const WordBox* best = nullptr;
  int best_hits = -1;
  bool tied = false;
  for (const WordBox* cand : candidates) {
    const int hits =
        bag_intersection(bag, neighborhood_bag(test_page, *cand, params.radius));
    if (hits > best_hits) {
      best = cand, best_hits = hits, tied = false;
    } else if (hits == best_hits) {
      tied = true;
    }
  }
  const double score = static_cast<double>(best_hits) / denom;
  if (tied || score < params.overlap_threshold) return std::nullopt;
  return WordMatch{template_word, *best, score};
}

CorrespondenceSet build_correspondences(const BinaryImage& template_bin,
                                        const OcrPage& template_page,
                                        const BinaryImage& test_bin, const OcrPage& test_page,
                                        const CharTipTable& table,
                                        const EligibilityParams& eligibility,
                                        const NeighborhoodParams& neighborhood,
                                        const Lexicon& lexicon) {
  neighborhood.validate();
  const auto eligible = filter_eligible_words(template_page, lexicon, eligibility);
  const auto n = static_cast<std::ptrdiff_t>(eligible.size());

  struct Slot {
    std::optional<WordMatch> match;
    std::vector<Correspondence> pairs;
  };
  std::vector<Slot> slots(eligible.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 2)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      Slot& slot = slots[i];
      slot.match = match_word(template_page, eligible[i], test_page, neighborhood);
      if (!slot.match) continue;
      const auto a = word_keypoints(template_bin, slot.match->template_word, table);
      const auto b = word_keypoints(test_bin, slot.match->test_word, table);
      for (const auto& ka : a) {
        for (const auto& kb : b) {
          if (ka.tip == kb.tip && ka.end == kb.end) {
            slot.pairs.push_back({ka.location, kb.location, ka.tip, ka.word_text});
          }
        }
      }
    } catch (...) {
#pragma omp critical(formpin_correspond)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  CorrespondenceSet out;
  for (auto& slot : slots) {
    if (!slot.match) continue;
    out.matches.push_back(std::move(*slot.match));
    out.pairs.insert(out.pairs.end(), slot.pairs.begin(), slot.pairs.end());
  }
  return out;
}

}  // namespace formpin
