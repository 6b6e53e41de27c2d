#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "formpin/correspondence.hpp"
#include "formpin/homography.hpp"

namespace formpin {

struct RansacParams {
  double inlier_threshold = 3.0;  // pixels
  double confidence = 0.995;
  int max_iterations = 2000;
  int min_inliers = 8;
  std::uint64_t rng_seed = 20190523;

  void validate() const;  // throws InputError
};

struct EstimateReport {
  Homography h;  // test -> template
  std::vector<bool> inlier_mask;
  int inlier_count = 0;
  double mean_inlier_reproj_error = 0.0;
  int iterations_run = 0;
};

/// Seeded RANSAC over minimal four-point samples, followed by a DLT refit
/// on the winning consensus set. Hypotheses are scored in parallel batches;
/// the winner is chosen by (inlier count, lower mean error, lower iteration
/// index) so the result does not depend on the thread count.
///
/// Throws EstimateError with fewer than four correspondences, when every
/// sample is degenerate, or when no model reaches max(min_inliers, 4).
EstimateReport ransac_estimate(std::span<const Correspondence> pairs,
                               const RansacParams& params);

/// Adaptive iteration bound log(1 - confidence) / log(1 - w^4).
int required_iterations(double inlier_ratio, double confidence, int max_iterations);

namespace serial {

/// One-hypothesis-at-a-time reference loop; identical output to the batched
/// version.
EstimateReport ransac_estimate(std::span<const Correspondence> pairs,
                               const RansacParams& params);

}  // namespace serial

}  // namespace formpin
