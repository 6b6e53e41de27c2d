#pragma once

#include <cstdint>
#include <vector>

#include "formpin/image.hpp"

namespace formpin {

/// 8-connected labeling of the foreground inside `region`.
struct ComponentLabeling {
  Rect region;                        // in image coordinates
  std::vector<std::int32_t> labels;   // region.w * region.h, row-major; 0 = background
  int count = 0;
  std::vector<Rect> boxes;            // per label (index label - 1), image coordinates
  std::vector<int> pixel_counts;      // per label

  std::int32_t label_at(int x, int y) const {  // image coordinates
    return labels[static_cast<std::size_t>(y - region.y) * region.w + (x - region.x)];
  }
};

/// Two-pass union-find labeling. Labels are numbered in the raster order of
/// each component's first pixel. Throws InputError if `region` leaves the
/// image.
ComponentLabeling connected_components(const BinaryImage& img, const Rect& region);

inline ComponentLabeling connected_components(const BinaryImage& img) {
  return connected_components(img, img.bounds());
}

}  // namespace formpin
