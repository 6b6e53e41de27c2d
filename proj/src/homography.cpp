#include "formpin/homography.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "formpin/error.hpp"

namespace formpin {

std::string_view to_string(TipClass tip) {
  switch (tip) {
    case TipClass::Left: return "left";
    case TipClass::Right: return "right";
    case TipClass::Top: return "top";
    case TipClass::Bottom: return "bottom";
  }
  return "unknown";
}

namespace linalg {

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (int k = 0; k < 3; ++k) sum += a[r * 3 + k] * b[k * 3 + c];
      out[r * 3 + c] = sum;
    }
  }
  return out;
}

double determinant(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

namespace {

Mat3 adjugate(const Mat3& m) {
  return {m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
          m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
          m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
}

// Gaussian elimination with partial pivoting on a dense N x N system.
// Returns nullopt when a pivot falls below `pivot_floor`.
template <std::size_t N>
std::optional<std::array<double, N>> solve(std::array<double, N * N> a,
                                           std::array<double, N> b,
                                           double pivot_floor) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r * N + col]) > std::abs(a[pivot * N + col])) pivot = r;
    }
    if (!(std::abs(a[pivot * N + col]) > pivot_floor)) return std::nullopt;
    if (pivot != col) {
      for (std::size_t c = 0; c < N; ++c) std::swap(a[col * N + c], a[pivot * N + c]);
      std::swap(b[col], b[pivot]);
    }
    const double diag = a[col * N + col];
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a[r * N + col] / diag;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) a[r * N + c] -= f * a[col * N + c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double sum = b[i];
    for (std::size_t c = i + 1; c < N; ++c) sum -= a[i * N + c] * x[c];
    x[i] = sum / a[i * N + i];
  }
  return x;
}

// LU factorization with partial pivoting, reused across inverse iterations.
struct Lu9 {
  Mat9 lu;
  std::array<int, 9> perm;

  explicit Lu9(Mat9 m) : lu(m) {
    for (int i = 0; i < 9; ++i) perm[i] = i;
    for (int col = 0; col < 9; ++col) {
      int pivot = col;
      for (int r = col + 1; r < 9; ++r) {
        if (std::abs(lu[r * 9 + col]) > std::abs(lu[pivot * 9 + col])) pivot = r;
      }
      if (pivot != col) {
        for (int c = 0; c < 9; ++c) std::swap(lu[col * 9 + c], lu[pivot * 9 + c]);
        std::swap(perm[col], perm[pivot]);
      }
      double diag = lu[col * 9 + col];
      // an exactly singular pivot still yields a usable inverse-iteration
      // direction once nudged off zero
      if (diag == 0.0) diag = lu[col * 9 + col] = 1e-300;
      for (int r = col + 1; r < 9; ++r) {
        const double f = lu[r * 9 + col] / diag;
        lu[r * 9 + col] = f;
        for (int c = col + 1; c < 9; ++c) lu[r * 9 + c] -= f * lu[col * 9 + c];
      }
    }
  }

  std::array<double, 9> solve(const std::array<double, 9>& b) const {
    std::array<double, 9> y{};
    for (int i = 0; i < 9; ++i) {
      double sum = b[perm[i]];
      for (int c = 0; c < i; ++c) sum -= lu[i * 9 + c] * y[c];
      y[i] = sum;
    }
    std::array<double, 9> x{};
    for (int i = 8; i >= 0; --i) {
      double sum = y[i];
      for (int c = i + 1; c < 9; ++c) sum -= lu[i * 9 + c] * x[c];
      x[i] = sum / lu[i * 9 + i];
    }
    return x;
  }
};

double norm(const std::array<double, 9>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::array<double, 9>& a, const std::array<double, 9>& b) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s += a[i] * b[i];
  return s;
}

double rayleigh(const Mat9& m, const std::array<double, 9>& v) {
  double s = 0.0;
  for (int r = 0; r < 9; ++r) {
    double row = 0.0;
    for (int c = 0; c < 9; ++c) row += m[r * 9 + c] * v[c];
    s += v[r] * row;
  }
  return s;
}

void remove_component(std::array<double, 9>& v, const std::array<double, 9>& along) {
  const double d = dot(v, along);
  for (int i = 0; i < 9; ++i) v[i] -= d * along[i];
}

bool normalize_in_place(std::array<double, 9>& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) return false;
  for (double& x : v) x /= n;
  return true;
}

}  // namespace

PointNormalization hartley_normalization(std::span<const Point> points) {
  if (points.empty()) throw EstimateError("degenerate configuration: no points");
  double cx = 0.0, cy = 0.0;
  for (const auto& p : points) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(points.size());
  cy /= static_cast<double>(points.size());
  double mean_dist = 0.0;
  for (const auto& p : points) mean_dist += std::hypot(p.x - cx, p.y - cy);
  mean_dist /= static_cast<double>(points.size());
  if (!(mean_dist > 1e-12) || !std::isfinite(mean_dist)) {
    throw EstimateError("degenerate configuration: points coincide");
  }
  const double s = std::sqrt(2.0) / mean_dist;
  return {{s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0},
          {1.0 / s, 0.0, cx, 0.0, 1.0 / s, cy, 0.0, 0.0, 1.0}};
}

NullVector smallest_eigenvector(const Mat9& normal, int max_iterations, double tolerance) {
  double trace = 0.0;
  for (int i = 0; i < 9; ++i) trace += normal[i * 9 + i];
  if (!(trace > 0.0) || !std::isfinite(trace)) {
    throw EstimateError("degenerate configuration: empty normal matrix");
  }
  // A tiny shift keeps the factorization regular for exact data, where the
  // smallest eigenvalue is zero up to rounding.
  Mat9 shifted = normal;
  const double shift = trace * 1e-15;
  for (int i = 0; i < 9; ++i) shifted[i * 9 + i] += shift;
  const Lu9 lu(shifted);

  NullVector out;
  std::array<double, 9> v = {0.31, -0.27, 0.44, 0.19, -0.36, 0.23, -0.41, 0.29, 0.38};
  normalize_in_place(v);
  int it = 0;
  for (; it < max_iterations; ++it) {
    auto next = lu.solve(v);
    if (!normalize_in_place(next)) break;
    if (dot(next, v) < 0.0) {
      for (double& x : next) x = -x;
    }
    double diff = 0.0;
    for (int i = 0; i < 9; ++i) diff = std::max(diff, std::abs(next[i] - v[i]));
    v = next;
    if (diff < tolerance) {
      ++it;
      break;
    }
  }
  out.vector = v;
  out.iterations = it;
  out.eigenvalue = rayleigh(normal, v);

  // Deflated pass: the same iteration restricted to the complement of v.
  std::array<double, 9> u = {-0.22, 0.35, 0.17, -0.48, 0.26, 0.31, 0.12, -0.39, 0.28};
  remove_component(u, v);
  normalize_in_place(u);
  for (int k = 0; k < max_iterations; ++k) {
    auto next = lu.solve(u);
    remove_component(next, v);
    if (!normalize_in_place(next)) break;
    if (dot(next, u) < 0.0) {
      for (double& x : next) x = -x;
    }
    double diff = 0.0;
    for (int i = 0; i < 9; ++i) diff = std::max(diff, std::abs(next[i] - u[i]));
    u = next;
    if (diff < 1e-9) break;
  }
  out.second_eigenvalue = rayleigh(normal, u);
  return out;
}

}  // namespace linalg

namespace {

Mat3 normalized(const Mat3& m) {
  double frob = 0.0;
  for (double v : m) {
    if (!std::isfinite(v)) throw EstimateError("homography has non-finite entries");
    frob += v * v;
  }
  frob = std::sqrt(frob);
  if (!(frob > 0.0)) throw EstimateError("singular homography: zero matrix");
  Mat3 out = m;
  if (std::abs(m[8]) > 1e-8 * frob) {
    const double h33 = m[8];
    for (double& v : out) v /= h33;
    out[8] = 1.0;
  } else {
    std::size_t largest = 0;
    for (std::size_t i = 1; i < 9; ++i) {
      if (std::abs(m[i]) > std::abs(m[largest])) largest = i;
    }
    const double scale = m[largest] < 0.0 ? -frob : frob;
    for (double& v : out) v /= scale;
  }
  for (double v : out) {
    if (!std::isfinite(v)) throw EstimateError("homography has non-finite entries");
  }
  return out;
}

}  // namespace

Homography::Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Homography Homography::from_matrix(const Mat3& m) {
  const Mat3 n = normalized(m);
  if (!(std::abs(linalg::determinant(n)) > 1e-12)) {
    throw EstimateError("singular homography: determinant is (near) zero");
  }
  return Homography(n);
}

Homography Homography::translation(double dx, double dy) {
  return from_matrix({1, 0, dx, 0, 1, dy, 0, 0, 1});
}

double Homography::determinant() const { return linalg::determinant(m_); }

Point apply_point(const Homography& h, Point p) {
  const auto& m = h.matrix();
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (!(std::abs(w) > 1e-12)) {
    throw InputError("point maps to infinity under homography");
  }
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

Homography invert(const Homography& h) {
  const double det = h.determinant();
  if (!(std::abs(det) > 1e-12)) throw EstimateError("singular homography cannot be inverted");
  Mat3 adj = linalg::adjugate(h.matrix());
  for (double& v : adj) v /= det;
  return Homography::from_matrix(adj);
}

Homography compose(const Homography& second, const Homography& first) {
  return Homography::from_matrix(linalg::multiply(second.matrix(), first.matrix()));
}

namespace {

struct NormalizedPairs {
  linalg::PointNormalization test;
  linalg::PointNormalization tmpl;
  std::vector<Point> test_pts;
  std::vector<Point> tmpl_pts;
};

Point transform_affine(const Mat3& t, Point p) {
  return {t[0] * p.x + t[1] * p.y + t[2], t[3] * p.x + t[4] * p.y + t[5]};
}

NormalizedPairs normalize_pairs(std::span<const Correspondence> pairs) {
  std::vector<Point> test, tmpl;
  test.reserve(pairs.size());
  tmpl.reserve(pairs.size());
  for (const auto& c : pairs) {
    if (!c.test_pt.finite() || !c.template_pt.finite()) {
      throw EstimateError("correspondence has non-finite coordinates");
    }
    test.push_back(c.test_pt);
    tmpl.push_back(c.template_pt);
  }
  NormalizedPairs out{linalg::hartley_normalization(test),
                      linalg::hartley_normalization(tmpl), {}, {}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.test_pts.push_back(transform_affine(out.test.forward, test[i]));
    out.tmpl_pts.push_back(transform_affine(out.tmpl.forward, tmpl[i]));
  }
  return out;
}

Homography denormalize(const NormalizedPairs& np, const Mat3& hn) {
  const Mat3 h = linalg::multiply(np.tmpl.inverse, linalg::multiply(hn, np.test.forward));
  try {
    return Homography::from_matrix(h);
  } catch (const EstimateError&) {
    throw EstimateError("degenerate configuration: estimate is singular");
  }
}

}  // namespace

Homography dlt(std::span<const Correspondence> pairs) {
  if (pairs.size() < 4) {
    throw EstimateError("DLT needs at least 4 correspondences, got " +
                        std::to_string(pairs.size()));
  }
  const auto np = normalize_pairs(pairs);

  linalg::Mat9 normal{};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double x = np.test_pts[i].x, y = np.test_pts[i].y;
    const double u = np.tmpl_pts[i].x, v = np.tmpl_pts[i].y;
    const std::array<double, 9> r1 = {-x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u};
    const std::array<double, 9> r2 = {0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v};
    for (int a = 0; a < 9; ++a) {
      for (int b = a; b < 9; ++b) normal[a * 9 + b] += r1[a] * r1[b] + r2[a] * r2[b];
    }
  }
  for (int a = 0; a < 9; ++a) {
    for (int b = 0; b < a; ++b) normal[a * 9 + b] = normal[b * 9 + a];
  }

  const auto nv = linalg::smallest_eigenvector(normal);
  double trace = 0.0;
  for (int i = 0; i < 9; ++i) trace += normal[i * 9 + i];
  if (!(nv.second_eigenvalue > 1e-10 * trace)) {
    throw EstimateError("degenerate configuration: constraint system has rank < 8");
  }
  Mat3 hn;
  std::copy(nv.vector.begin(), nv.vector.end(), hn.begin());
  return denormalize(np, hn);
}

Homography solve_minimal(std::span<const Correspondence> four) {
  if (four.size() != 4) {
    throw EstimateError("minimal solver needs exactly 4 correspondences, got " +
                        std::to_string(four.size()));
  }
  const auto np = normalize_pairs(four);
  std::array<double, 64> a{};
  std::array<double, 8> b{};
  for (int i = 0; i < 4; ++i) {
    const double x = np.test_pts[i].x, y = np.test_pts[i].y;
    const double u = np.tmpl_pts[i].x, v = np.tmpl_pts[i].y;
    const std::array<double, 8> r1 = {x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y};
    const std::array<double, 8> r2 = {0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y};
    std::copy(r1.begin(), r1.end(), a.begin() + (2 * i) * 8);
    std::copy(r2.begin(), r2.end(), a.begin() + (2 * i + 1) * 8);
    b[2 * i] = u;
    b[2 * i + 1] = v;
  }
  const auto h = linalg::solve<8>(a, b, 1e-10);
  if (!h) throw EstimateError("degenerate configuration: minimal system is singular");
  Mat3 hn;
  std::copy(h->begin(), h->end(), hn.begin());
  hn[8] = 1.0;
  return denormalize(np, hn);
}

double reprojection_error(const Homography& h, const Correspondence& c) {
  return distance(apply_point(h, c.test_pt), c.template_pt);
}

double corner_error(const Homography& a, const Homography& b, int width, int height) {
  const double w = width, hgt = height;
  const Point corners[] = {{0.0, 0.0}, {w, 0.0}, {0.0, hgt}, {w, hgt}};
  double sum = 0.0;
  for (const auto& c : corners) sum += distance(apply_point(a, c), apply_point(b, c));
  return sum / 4.0;
}

double relative_entry_error(const Homography& estimate, const Homography& truth,
                            double floor) {
  double worst = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double t = truth.matrix()[i];
    const double denom = std::max(std::abs(t), floor);
    worst = std::max(worst, std::abs(estimate.matrix()[i] - t) / denom);
  }
  return worst;
}

}  // namespace formpin
