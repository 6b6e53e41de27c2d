#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace formpin {

/// Axis-aligned pixel rectangle; (x, y) is the top-left pixel.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }   // one past the last column
  int bottom() const { return y + h; }  // one past the last row
  bool contains(int px, int py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool inside(int width, int height) const {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && right() <= width &&
           bottom() <= height;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Sub-pixel image coordinate. Pixel (i, j) covers [i, i+1) x [j, j+1), so
/// its center is (i + 0.5, j + 0.5).
struct Point {
  double x = 0.0;
  double y = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Row-major raster shared by GrayImage and BinaryImage.
template <typename Tag>
class Raster {
 public:
  Raster(int width, int height, std::uint8_t fill = 0);
  Raster(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return data_[index(x, y)]; }

  std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<std::uint8_t> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  Rect bounds() const { return {0, 0, width_, height_}; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

struct GrayTag {};
struct BinaryTag {};

/// 8-bit grayscale page: 0 is black ink, 255 is white paper.
using GrayImage = Raster<GrayTag>;

/// Ink mask: 1 = foreground ink, 0 = background. Values are always 0 or 1.
using BinaryImage = Raster<BinaryTag>;

extern template class Raster<GrayTag>;
extern template class Raster<BinaryTag>;

}  // namespace formpin
