#include "formpin/ransac.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "formpin/error.hpp"

namespace formpin {

void RansacParams::validate() const {
  if (!(inlier_threshold > 0.0)) throw InputError("RANSAC inlier threshold must be > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InputError("RANSAC confidence must be in (0, 1)");
  }
  if (max_iterations < 1) throw InputError("RANSAC max_iterations must be >= 1");
  if (min_inliers < 0) throw InputError("RANSAC min_inliers must be >= 0");
}

int required_iterations(double inlier_ratio, double confidence, int max_iterations) {
  if (inlier_ratio >= 1.0) return 1;
  const double p4 = std::pow(inlier_ratio, 4);
  if (p4 <= 0.0) return max_iterations;
  const double denom = std::log1p(-p4);
  if (!(denom < 0.0)) return max_iterations;
  const double n = std::ceil(std::log(1.0 - confidence) / denom);
  if (!std::isfinite(n) || n > max_iterations) return max_iterations;
  return std::max(1, static_cast<int>(n));
}

namespace {

using Sample = std::array<std::size_t, 4>;

class SampleDrawer {
 public:
  SampleDrawer(std::uint64_t seed, std::size_t n) : rng_(seed), n_(n) {}

  Sample draw() {
    Sample s{};
    for (std::size_t k = 0; k < 4; ++k) {
      std::size_t v;
      do {
        v = bounded();
      } while (std::find(s.begin(), s.begin() + k, v) != s.begin() + k);
      s[k] = v;
    }
    return s;
  }

 private:
  // rejection sampling keeps the draw unbiased and library-independent
  std::size_t bounded() {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n_;
    std::uint64_t r;
    do {
      r = rng_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % n_);
  }

  std::mt19937_64 rng_;
  std::uint64_t n_;
};

double twice_area(Point a, Point b, Point c) {
  return std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

bool collinear_triple(const std::array<Point, 4>& p) {
  double min_x = p[0].x, max_x = p[0].x, min_y = p[0].y, max_y = p[0].y;
  for (const auto& q : p) {
    min_x = std::min(min_x, q.x);
    max_x = std::max(max_x, q.x);
    min_y = std::min(min_y, q.y);
    max_y = std::max(max_y, q.y);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  if (!(span > 0.0)) return true;
  const double limit = 1e-6 * span * span;
  constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    if (0.5 * twice_area(p[t[0]], p[t[1]], p[t[2]]) < limit) return true;
  }
  return false;
}

bool degenerate_sample(std::span<const Correspondence> pairs, const Sample& s) {
  std::array<Point, 4> tmpl, test;
  for (int k = 0; k < 4; ++k) {
    tmpl[k] = pairs[s[k]].template_pt;
    test[k] = pairs[s[k]].test_pt;
  }
  return collinear_triple(tmpl) || collinear_triple(test);
}

struct Score {
  int count = 0;
  double mean_error = 0.0;
};

Score score(const Homography& h, std::span<const Correspondence> pairs, double threshold,
            std::vector<bool>* mask) {
  Score s;
  double sum = 0.0;
  if (mask) mask->assign(pairs.size(), false);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double e;
    try {
      e = reprojection_error(h, pairs[i]);
    } catch (const InputError&) {
      continue;
    }
    if (e < threshold) {
      ++s.count;
      sum += e;
      if (mask) (*mask)[i] = true;
    }
  }
  s.mean_error = s.count ? sum / s.count : 0.0;
  return s;
}

struct Hypothesis {
  Homography h;
  Score score;
};

std::optional<Hypothesis> evaluate(std::span<const Correspondence> pairs, const Sample& s,
                                   double threshold) {
  if (degenerate_sample(pairs, s)) return std::nullopt;
  const std::array<Correspondence, 4> four = {pairs[s[0]], pairs[s[1]], pairs[s[2]],
                                              pairs[s[3]]};
  try {
    Homography h = solve_minimal(four);
    return Hypothesis{h, score(h, pairs, threshold, nullptr)};
  } catch (const EstimateError&) {
    return std::nullopt;
  }
}

// Sequential winner selection shared by both loops.
class Selector {
 public:
  Selector(std::size_t n, const RansacParams& p) : n_(n), params_(p), limit_(p.max_iterations) {}

  // Returns true when the loop should stop after this iteration.
  bool consider(int iteration, const std::optional<Hypothesis>& hyp) {
    iterations_run_ = iteration + 1;
    if (hyp) {
      any_valid_ = true;
      const auto& s = hyp->score;
      const bool better = !best_ || s.count > best_->score.count ||
                          (s.count == best_->score.count && s.mean_error < best_->score.mean_error);
      if (better) {
        best_ = hyp;
        limit_ = required_iterations(static_cast<double>(s.count) / static_cast<double>(n_),
                                     params_.confidence, params_.max_iterations);
      }
    }
    return iterations_run_ >= limit_;
  }

  EstimateReport finish(std::span<const Correspondence> pairs) const {
    if (!any_valid_) {
      throw EstimateError("degenerate configuration: every sampled quadruple is collinear");
    }
    const int needed = std::max(params_.min_inliers, 4);
    if (best_->score.count < needed) {
      throw EstimateError("RANSAC found no model with at least " + std::to_string(needed) +
                          " inliers (best had " + std::to_string(best_->score.count) + ")");
    }
    std::vector<bool> best_mask;
    score(best_->h, pairs, params_.inlier_threshold, &best_mask);

    EstimateReport report;
    report.iterations_run = iterations_run_;
    std::vector<Correspondence> inliers;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (best_mask[i]) inliers.push_back(pairs[i]);
    }
    try {
      const Homography refit = dlt(inliers);
      std::vector<bool> mask;
      const Score s = score(refit, pairs, params_.inlier_threshold, &mask);
      if (s.count >= best_->score.count) {
        report.h = refit;
        report.inlier_mask = std::move(mask);
        report.inlier_count = s.count;
        report.mean_inlier_reproj_error = s.mean_error;
        return report;
      }
    } catch (const EstimateError&) {
      // fall through to the minimal-sample model
    }
    report.h = best_->h;
    report.inlier_mask = std::move(best_mask);
    report.inlier_count = best_->score.count;
    report.mean_inlier_reproj_error = best_->score.mean_error;
    return report;
  }

 private:
  std::size_t n_;
  RansacParams params_;
  int limit_;
  int iterations_run_ = 0;
  bool any_valid_ = false;
  std::optional<Hypothesis> best_;
};

void check_input(std::span<const Correspondence> pairs, const RansacParams& params) {
  params.validate();
  if (pairs.size() < 4) {
    throw EstimateError("RANSAC needs at least 4 correspondences, got " +
                        std::to_string(pairs.size()));
  }
}

constexpr int kBatch = 64;

}  // namespace

EstimateReport ransac_estimate(std::span<const Correspondence> pairs,
                               const RansacParams& params) {
  check_input(pairs, params);
  SampleDrawer drawer(params.rng_seed, pairs.size());
  Selector selector(pairs.size(), params);

  std::vector<Sample> samples(kBatch);
  std::vector<std::optional<Hypothesis>> results(kBatch);
  int iteration = 0;
  bool done = false;
  while (!done && iteration < params.max_iterations) {
    const int batch = std::min(kBatch, params.max_iterations - iteration);
    for (int k = 0; k < batch; ++k) samples[k] = drawer.draw();
#pragma omp parallel for schedule(dynamic, 4)
    for (int k = 0; k < batch; ++k) {
      results[k] = evaluate(pairs, samples[k], params.inlier_threshold);
    }
    for (int k = 0; k < batch && !done; ++k) {
      done = selector.consider(iteration + k, results[k]);
    }
    iteration += batch;
  }
  return selector.finish(pairs);
}

namespace serial {

EstimateReport ransac_estimate(std::span<const Correspondence> pairs,
                               const RansacParams& params) {
  check_input(pairs, params);
  SampleDrawer drawer(params.rng_seed, pairs.size());
  Selector selector(pairs.size(), params);
  for (int it = 0; it < params.max_iterations; ++it) {
    if (selector.consider(it, evaluate(pairs, drawer.draw(), params.inlier_threshold))) break;
  }
  return selector.finish(pairs);
}

}  // namespace serial

}  // namespace formpin
