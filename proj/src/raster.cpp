#include "formpin/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "formpin/error.hpp"

namespace formpin {

namespace {

void check_target(int new_w, int new_h) {
  if (new_w < 1 || new_h < 1) {
    throw InputError("target dimensions must be positive, got " + std::to_string(new_w) +
                     "x" + std::to_string(new_h));
  }
}

void check_threshold(int threshold) {
  if (threshold < 0 || threshold > 255) {
    throw InputError("binarization threshold must be in [0, 255], got " +
                     std::to_string(threshold));
  }
}

void check_same_dims(const BinaryImage& a, const BinaryImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InputError("dimension mismatch: " + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  }
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Bilinear lookup at fractional index coordinates (fx, fy), clamped to
// the image. Integral coordinates return the stored pixel exactly.
double bilinear(const GrayImage& img, double fx, double fy) {
  const int w = img.width(), h = img.height();
  fx = std::clamp(fx, 0.0, static_cast<double>(w - 1));
  fy = std::clamp(fy, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = fx - x0;
  const double ay = fy - y0;
  const double top = (1.0 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
  const double bot = (1.0 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
  return (1.0 - ay) * top + ay * bot;
}

// Source index coordinate for destination index `i` under a pixel-center
// aligned scale change.
double resize_coord(int i, int src_len, int dst_len) {
  return (i + 0.5) * static_cast<double>(src_len) / dst_len - 0.5;
}

void resize_row(const GrayImage& img, GrayImage& out, int y) {
  const double fy = resize_coord(y, img.height(), out.height());
  auto row = out.row(y);
  for (int x = 0; x < out.width(); ++x) {
    row[x] = to_byte(bilinear(img, resize_coord(x, img.width(), out.width()), fy));
  }
}

// Output pixel (x, y) has center (x + 0.5, y + 0.5); pull it back through
// the inverse and sample src at that continuous location.
void warp_row(const GrayImage& src, const Mat3& inv, std::uint8_t fill, GrayImage& out,
              int y) {
  const double cy = y + 0.5;
  const double w_max = src.width(), h_max = src.height();
  auto row = out.row(y);
  for (int x = 0; x < out.width(); ++x) {
    const double cx = x + 0.5;
    const double w = inv[6] * cx + inv[7] * cy + inv[8];
    if (!(std::abs(w) > 1e-12)) {
      row[x] = fill;
      continue;
    }
    const double u = (inv[0] * cx + inv[1] * cy + inv[2]) / w;
    const double v = (inv[3] * cx + inv[4] * cy + inv[5]) / w;
    if (!(u >= 0.0 && u <= w_max && v >= 0.0 && v <= h_max)) {
      row[x] = fill;
      continue;
    }
    row[x] = to_byte(bilinear(src, u - 0.5, v - 0.5));
  }
}

template <typename Image>
Image crop_impl(const Image& img, const Rect& rect) {
  if (!rect.inside(img.width(), img.height())) {
    throw InputError("crop rect (" + std::to_string(rect.x) + "," + std::to_string(rect.y) +
                     "," + std::to_string(rect.w) + "," + std::to_string(rect.h) +
                     ") exceeds " + std::to_string(img.width()) + "x" +
                     std::to_string(img.height()) + " image");
  }
  Image out(rect.w, rect.h);
  for (int j = 0; j < rect.h; ++j) {
    const auto src = img.row(rect.y + j).subspan(rect.x, rect.w);
    std::copy(src.begin(), src.end(), out.row(j).begin());
  }
  return out;
}

}  // namespace

GrayImage resize_bilinear(const GrayImage& img, int new_w, int new_h) {
  check_target(new_w, new_h);
  if (new_w == img.width() && new_h == img.height()) return img;
  GrayImage out(new_w, new_h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < new_h; ++y) resize_row(img, out, y);
  return out;
}

BinaryImage binarize(const GrayImage& img, int threshold) {
  check_threshold(threshold);
  BinaryImage out(img.width(), img.height());
  const auto& src = img.data();
  auto& dst = out.data();
  const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = src[i] < threshold ? 1 : 0;
  return out;
}

GrayImage crop(const GrayImage& img, const Rect& rect) { return crop_impl(img, rect); }
BinaryImage crop(const BinaryImage& img, const Rect& rect) { return crop_impl(img, rect); }

GrayImage warp_perspective(const GrayImage& src, const Homography& h, int out_w, int out_h,
                           std::uint8_t fill) {
  check_target(out_w, out_h);
  const Mat3 inv = invert(h).matrix();
  GrayImage out(out_w, out_h, fill);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_h; ++y) warp_row(src, inv, fill, out, y);
  return out;
}

XorResult xor_diff(const BinaryImage& a, const BinaryImage& b) {
  check_same_dims(a, b);
  BinaryImage diff(a.width(), a.height());
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  const auto& da = a.data();
  const auto& db = b.data();
  auto& dd = diff.data();
  std::size_t set = 0;
#pragma omp parallel for schedule(static) reduction(+ : set)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dd[i] = da[i] ^ db[i];
    set += dd[i];
  }
  return {std::move(diff), static_cast<double>(set) / static_cast<double>(n)};
}

std::size_t count_ink(const BinaryImage& mask) {
  return static_cast<std::size_t>(
      std::count(mask.data().begin(), mask.data().end(), std::uint8_t{1}));
}

GrayImage mask_to_gray(const BinaryImage& mask) {
  GrayImage out(mask.width(), mask.height());
  std::transform(mask.data().begin(), mask.data().end(), out.data().begin(),
                 [](std::uint8_t v) { return v ? std::uint8_t{0} : std::uint8_t{255}; });
  return out;
}

namespace serial {

GrayImage resize_bilinear(const GrayImage& img, int new_w, int new_h) {
  check_target(new_w, new_h);
  if (new_w == img.width() && new_h == img.height()) return img;
  GrayImage out(new_w, new_h);
  for (int y = 0; y < new_h; ++y) {
    for (int x = 0; x < new_w; ++x) {
      const double fx = resize_coord(x, img.width(), new_w);
      const double fy = resize_coord(y, img.height(), new_h);
      out.at(x, y) = to_byte(bilinear(img, fx, fy));
    }
  }
  return out;
}

BinaryImage binarize(const GrayImage& img, int threshold) {
  check_threshold(threshold);
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out.at(x, y) = img.at(x, y) < threshold ? 1 : 0;
  }
  return out;
}

GrayImage warp_perspective(const GrayImage& src, const Homography& h, int out_w, int out_h,
                           std::uint8_t fill) {
  check_target(out_w, out_h);
  const Homography inv = invert(h);
  GrayImage out(out_w, out_h, fill);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      Point p;
      try {
        p = apply_point(inv, {x + 0.5, y + 0.5});
      } catch (const InputError&) {
        continue;
      }
      if (p.x >= 0.0 && p.x <= src.width() && p.y >= 0.0 && p.y <= src.height()) {
        out.at(x, y) = to_byte(bilinear(src, p.x - 0.5, p.y - 0.5));
      }
    }
  }
  return out;
}

XorResult xor_diff(const BinaryImage& a, const BinaryImage& b) {
  check_same_dims(a, b);
  BinaryImage diff(a.width(), a.height());
  std::size_t set = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      diff.at(x, y) = a.at(x, y) != b.at(x, y) ? 1 : 0;
      set += diff.at(x, y);
    }
  }
  return {std::move(diff),
          static_cast<double>(set) / (static_cast<double>(a.width()) * a.height())};
}

}  // namespace serial

}  // namespace formpin
