#include "formpin/components.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "formpin/error.hpp"

namespace formpin {

namespace {

class UnionFind {
 public:
  std::int32_t make() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    return parent_.back();
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // smaller provisional label wins so roots stay deterministic
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<std::int32_t> parent_;
};

}  // namespace

ComponentLabeling connected_components(const BinaryImage& img, const Rect& region) {
  if (!region.inside(img.width(), img.height())) {
    throw InputError("component region (" + std::to_string(region.x) + "," +
                     std::to_string(region.y) + "," + std::to_string(region.w) + "," +
                     std::to_string(region.h) + ") is outside the " +
                     std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                     " image");
  }
  ComponentLabeling out;
  out.region = region;
  const int w = region.w, h = region.h;
  out.labels.assign(static_cast<std::size_t>(w) * h, 0);

  UnionFind uf;
  uf.make();  // provisional label 0 is background
  auto label = [&](int x, int y) -> std::int32_t& {
    return out.labels[static_cast<std::size_t>(y) * w + x];
  };

  // first pass: provisional labels from the already-visited neighbors
  // (W, NW, N, NE)
  for (int y = 0; y < h; ++y) {
    const auto row = img.row(region.y + y).subspan(region.x, w);
    for (int x = 0; x < w; ++x) {
      if (!row[x]) continue;
      std::int32_t best = 0;
      const std::int32_t neighbors[4] = {
          x > 0 ? label(x - 1, y) : 0,
          (x > 0 && y > 0) ? label(x - 1, y - 1) : 0,
          y > 0 ? label(x, y - 1) : 0,
          (x + 1 < w && y > 0) ? label(x + 1, y - 1) : 0,
      };
      for (auto n : neighbors) {
        if (n && (!best || n < best)) best = n;
      }
      if (!best) {
        best = uf.make();
      } else {
        for (auto n : neighbors) {
          if (n) uf.unite(best, n);
        }
      }
      label(x, y) = best;
    }
  }

  // second pass: resolve to roots, renumber by first raster appearance
  std::vector<std::int32_t> final_id;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto& l = label(x, y);
      if (!l) continue;
      const auto root = uf.find(l);
      if (static_cast<std::size_t>(root) >= final_id.size()) final_id.resize(root + 1, 0);
      if (!final_id[root]) {
        final_id[root] = ++out.count;
        out.boxes.push_back({region.x + x, region.y + y, 1, 1});
        out.pixel_counts.push_back(0);
      }
      l = final_id[root];
      auto& box = out.boxes[l - 1];
      const int ix = region.x + x, iy = region.y + y;
      const int x0 = std::min(box.x, ix), x1 = std::max(box.right(), ix + 1);
      const int y1 = std::max(box.bottom(), iy + 1);
      box = {x0, box.y, x1 - x0, y1 - box.y};
      ++out.pixel_counts[l - 1];
    }
  }
  return out;
}

}  // namespace formpin
