#pragma once

#include <array>
#include <span>

#include "formpin/correspondence.hpp"
#include "formpin/image.hpp"

namespace formpin {

/// Row-major 3x3 matrix: {h11, h12, h13, h21, h22, h23, h31, h32, h33}.
using Mat3 = std::array<double, 9>;

/// Invertible projective transform, stored normalized: h33 = 1 unless h33 is
/// negligible relative to the Frobenius norm, in which case the matrix has
/// unit Frobenius norm and its largest-magnitude entry is positive.
class Homography {
 public:
  Homography();  // identity

  /// Normalizes `m`. Throws EstimateError for non-finite or singular input.
  static Homography from_matrix(const Mat3& m);
  static Homography translation(double dx, double dy);

  const Mat3& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_[row * 3 + col]; }
  double determinant() const;

  friend bool operator==(const Homography&, const Homography&) = default;

 private:
  explicit Homography(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

/// Projective mapping of a point. Throws InputError when the point lies on
/// the line sent to infinity.
Point apply_point(const Homography& h, Point p);

Homography invert(const Homography& h);

/// Returns the transform that applies `second` after `first`.
Homography compose(const Homography& second, const Homography& first);

/// Normalized DLT over all correspondences, mapping test_pt to template_pt.
/// The homography is the null vector of the 9x9 normal matrix, found by
/// inverse power iteration. Throws EstimateError for fewer than four pairs
/// or a rank-deficient system.
Homography dlt(std::span<const Correspondence> pairs);

/// Exact solve for exactly four pairs through an 8x8 linear system with
/// h33 fixed to one (in normalized coordinates).
Homography solve_minimal(std::span<const Correspondence> four);

/// |H * test_pt - template_pt|
double reprojection_error(const Homography& h, const Correspondence& c);

/// Mean distance between where `a` and `b` send the four corners of a
/// width x height frame.
double corner_error(const Homography& a, const Homography& b, int width, int height);

/// Largest per-entry relative difference after both matrices are
/// normalized; entries of `truth` smaller than `floor` use `floor` as the
/// denominator.
double relative_entry_error(const Homography& estimate, const Homography& truth,
                            double floor = 1e-9);

namespace linalg {

/// Similarity that moves the centroid to the origin and the mean distance
/// from it to sqrt(2).
struct PointNormalization {
  Mat3 forward;
  Mat3 inverse;
};

/// Throws EstimateError when all points coincide.
PointNormalization hartley_normalization(std::span<const Point> points);

using Mat9 = std::array<double, 81>;

struct NullVector {
  std::array<double, 9> vector;  // unit norm
  double eigenvalue = 0.0;         // smallest eigenvalue of the normal matrix
  double second_eigenvalue = 0.0;  // next smallest, for the rank test
  int iterations = 0;
};

/// Inverse power iteration for the eigenvector of the smallest eigenvalue of
/// a symmetric positive semi-definite 9x9 matrix, followed by a deflated
/// pass that estimates the next eigenvalue. Deterministic start vector.
NullVector smallest_eigenvector(const Mat9& normal, int max_iterations = 200,
                                double tolerance = 1e-12);

Mat3 multiply(const Mat3& a, const Mat3& b);
double determinant(const Mat3& m);

}  // namespace linalg

}  // namespace formpin
