#pragma once

#include <cstdint>

#include "formpin/homography.hpp"
#include "formpin/image.hpp"

namespace formpin {

inline constexpr int kDefaultThreshold = 170;

// Pixel kernels. The versions in `formpin` run rows in parallel under
// OpenMP; the ones in `formpin::serial` are the single-threaded reference
// implementations they are tested against (results are bit-identical).

/// Bilinear resampling with pixel-center alignment. Same-size input is
/// returned unchanged.
GrayImage resize_bilinear(const GrayImage& img, int new_w, int new_h);

/// Ink (1) where intensity < threshold.
BinaryImage binarize(const GrayImage& img, int threshold = kDefaultThreshold);

GrayImage crop(const GrayImage& img, const Rect& rect);
BinaryImage crop(const BinaryImage& img, const Rect& rect);

/// Inverse-mapped perspective warp. `h` maps src coordinates to output
/// coordinates; each output pixel center is pulled back through h^-1 and
/// sampled bilinearly. Samples that fall outside src take `fill`.
GrayImage warp_perspective(const GrayImage& src, const Homography& h, int out_w,
                           int out_h, std::uint8_t fill = 255);

struct XorResult {
  BinaryImage diff;
  double residual_fraction = 0.0;  // set pixels / (w * h)
};

XorResult xor_diff(const BinaryImage& a, const BinaryImage& b);

std::size_t count_ink(const BinaryImage& mask);

/// Ink (1) -> 0, background (0) -> 255.
GrayImage mask_to_gray(const BinaryImage& mask);

namespace serial {

GrayImage resize_bilinear(const GrayImage& img, int new_w, int new_h);
BinaryImage binarize(const GrayImage& img, int threshold = kDefaultThreshold);
GrayImage warp_perspective(const GrayImage& src, const Homography& h, int out_w,
                           int out_h, std::uint8_t fill = 255);
XorResult xor_diff(const BinaryImage& a, const BinaryImage& b);

}  // namespace serial

}  // namespace formpin
