#include "doctest.h"
#include "formpin/components.hpp"
#include "formpin/error.hpp"
#include "test_support.hpp"

using namespace formpin;

namespace {

BinaryImage from_rows(const std::vector<std::string>& rows) {
  BinaryImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) img.at(x, y) = rows[y][x] == '#' ? 1 : 0;
  }
  return img;
}

}  // namespace

TEST_CASE("empty region has no components") {
  const BinaryImage img(8, 8);
  const auto cc = connected_components(img, Rect{2, 2, 3, 3});
  CHECK(cc.count == 0);
  CHECK(cc.boxes.empty());
}

TEST_CASE("a single T-shaped blob is one component with a tight box") {
  const auto img = from_rows({
      "..........",
      "..######..",
      "....##....",
      "....##....",
      "....##....",
      "..........",
  });
  const auto cc = connected_components(img);
  REQUIRE(cc.count == 1);
  CHECK(cc.boxes[0] == Rect{2, 1, 6, 4});
  CHECK(cc.pixel_counts[0] == 12);
}

TEST_CASE("diagonal contact joins, a background column separates") {
  const auto diag = from_rows({
      "#...",
      ".#..",
      "..#.",
  });
  CHECK(connected_components(diag).count == 1);

  const auto split = from_rows({
      "##.##",
      "##.##",
  });
  const auto cc = connected_components(split);
  REQUIRE(cc.count == 2);
  CHECK(cc.boxes[0] == Rect{0, 0, 2, 2});
  CHECK(cc.boxes[1] == Rect{3, 0, 2, 2});
}

TEST_CASE("labels follow first-pixel raster order") {
  // the U shape's two arms meet only at the bottom; its first pixel comes
  // before the dot's, so it must be label 1
  const auto img = from_rows({
      "#.#..#",
      "#.#...",
      "###...",
  });
  const auto cc = connected_components(img);
  REQUIRE(cc.count == 2);
  CHECK(cc.label_at(0, 0) == 1);
  CHECK(cc.label_at(2, 0) == 1);
  CHECK(cc.label_at(5, 0) == 2);
}

TEST_CASE("region restricts labeling and boxes are in image coordinates") {
  const auto img = from_rows({
      "##....##",
      "##....##",
      "........",
  });
  const auto cc = connected_components(img, Rect{4, 0, 4, 3});
  REQUIRE(cc.count == 1);
  CHECK(cc.boxes[0] == Rect{6, 0, 2, 2});
  CHECK_THROWS_AS(connected_components(img, Rect{5, 0, 4, 3}), InputError);
}

TEST_CASE("labeling agrees with a flood-fill oracle on random masks") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<int> dim(1, 64);
    const double density = 0.15 + 0.5 * (trial % 7) / 7.0;
    const auto img = testing::random_mask(rng, dim(rng), dim(rng), density);
    int oracle_count = 0;
    const auto oracle = testing::flood_fill_labels(img, &oracle_count);
    const auto cc = connected_components(img);
    REQUIRE(cc.count == oracle_count);
    std::size_t total = 0;
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        // both number components by first raster pixel, so ids coincide
        REQUIRE(cc.label_at(x, y) == oracle[static_cast<std::size_t>(y) * img.width() + x]);
        total += img.at(x, y);
      }
    }
    std::size_t summed = 0;
    for (int k = 0; k < cc.count; ++k) {
      summed += cc.pixel_counts[k];
      // box is tight: every edge row/column holds a pixel of the label
      const auto& b = cc.boxes[k];
      bool top = false, bottom = false, left = false, right = false;
      for (int y = b.y; y < b.bottom(); ++y) {
        for (int x = b.x; x < b.right(); ++x) {
          if (cc.label_at(x, y) != k + 1) continue;
          top |= y == b.y;
          bottom |= y == b.bottom() - 1;
          left |= x == b.x;
          right |= x == b.right() - 1;
        }
      }
      CHECK((top && bottom && left && right));
    }
    CHECK(summed == total);
  }
}
