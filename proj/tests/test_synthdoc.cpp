#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "formpin/error.hpp"
#include "formpin/glyphs.hpp"
#include "formpin/keypoints.hpp"
#include "formpin/raster.hpp"
#include "formpin/synthdoc.hpp"
#include "test_support.hpp"

using namespace formpin;
using formpin::testing::TempDir;

namespace {

std::size_t glyph_ink(char c) {
  const auto& g = GlyphSet::builtin().glyph(c);
  return static_cast<std::size_t>(std::count(g.data().begin(), g.data().end(), 1));
}

std::size_t ink_in(const BinaryImage& bin, const Rect& r) {
  std::size_t n = 0;
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) n += bin.at(x, y);
  }
  return n;
}

std::vector<std::string> vocabulary() {
  return {"Name", "Vehicle", "Total", "Amount", "Year", "Address", "Policy", "Date",
          "Tax",  "Weight",  "Zip",   "Key",    "Model", "Agent",   "Town",  "Value"};
}

}  // namespace

TEST_CASE("empty layout renders a blank page") {
  DocumentLayout layout{320, 200, {}, {}};
  const auto doc = render_document(layout);
  CHECK(doc.page == GrayImage(320, 200, 255));
  CHECK(doc.sidecar.words.empty());
  CHECK(doc.ink_pixels == 0);
}

TEST_CASE("two-letter word box and ink match the bitmaps") {
  DocumentLayout layout{400, 300, {{"AT", {100, 100}, 1, false}}, {}};
  const auto doc = render_document(layout);
  REQUIRE(doc.sidecar.words.size() == 1);
  const auto& g = GlyphSet::builtin();
  // both glyphs use every cell column, so the ink spans the full advance
  CHECK(doc.sidecar.words[0].box.w == 2 * g.width() + g.spacing());
  CHECK(doc.sidecar.words[0].box.x == 100);
  CHECK(doc.ink_pixels == glyph_ink('A') + glyph_ink('T'));
  CHECK(count_ink(binarize(doc.page, 170)) == glyph_ink('A') + glyph_ink('T'));
}

TEST_CASE("scaled rendering multiplies ink by scale squared") {
  for (int s : {1, 2, 3}) {
    DocumentLayout layout{600, 300, {{"Key", {20, 30}, s, false}}, {}};
    const auto doc = render_document(layout);
    CHECK(doc.ink_pixels ==
          static_cast<std::size_t>(s * s) * (glyph_ink('K') + glyph_ink('e') + glyph_ink('y')));
  }
}

TEST_CASE("random 50-word layout: boxes are tight and hold exactly their ink") {
  const auto layout = random_layout(77, 50, vocabulary(), 1600, 2400, 2);
  const auto doc = render_document(layout);
  REQUIRE(doc.sidecar.words.size() == 50);
  const auto bin = binarize(doc.page, 170);
  CHECK(count_ink(bin) == doc.ink_pixels);

  std::size_t total = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto& w = doc.sidecar.words[i];
    CHECK(w.text == layout.words[i].text);
    std::size_t expected = 0;
    for (char c : w.text) expected += 4 * glyph_ink(c);
    CHECK(ink_in(bin, w.box) == expected);
    total += expected;
    // shrinking any side by one pixel loses ink
    const Rect b = w.box;
    CHECK(ink_in(bin, {b.x + 1, b.y, b.w - 1, b.h}) < expected);
    CHECK(ink_in(bin, {b.x, b.y + 1, b.w, b.h - 1}) < expected);
    CHECK(ink_in(bin, {b.x, b.y, b.w - 1, b.h}) < expected);
    CHECK(ink_in(bin, {b.x, b.y, b.w, b.h - 1}) < expected);
  }
  CHECK(total == doc.ink_pixels);

  TempDir dir;
  write_words_sidecar(doc.sidecar, dir / "p.json");
  CHECK(read_words_sidecar(dir / "p.json", 1600, 2400).words == doc.sidecar.words);
}

TEST_CASE("render error paths") {
  CHECK_THROWS_AS(render_document({200, 100, {{"a-b", {10, 10}, 1, false}}, {}}), InputError);
  CHECK_THROWS_AS(render_document({200, 100, {{"", {10, 10}, 1, false}}, {}}), InputError);
  CHECK_THROWS_AS(render_document({200, 100, {{"Name", {190, 10}, 1, false}}, {}}), InputError);
  CHECK_THROWS_AS(
      render_document({400, 100, {{"Name", {10, 10}, 1, false}, {"Date", {40, 12}, 1, false}}, {}}),
      InputError);
  CHECK_THROWS_AS(render_document({200, 100, {{"Name", {10, 10}, 0, false}}, {}}), InputError);
}

TEST_CASE("fill ink is tracked separately") {
  const auto form = builtin_form(true);
  const auto doc = render_document(form);
  std::size_t fill = 0;
  for (const auto& w : form.words) {
    if (!w.fill) continue;
    for (char c : w.text) fill += 4 * glyph_ink(c);
  }
  CHECK(doc.fill_ink_pixels == fill);
  CHECK(doc.fill_ink_fraction() == doctest::Approx(double(fill) / (1600.0 * 2400.0)));
  CHECK(render_document(without_fill(form)).ink_pixels == doc.ink_pixels - fill);
}

TEST_CASE("builtin form layout") {
  const auto form = builtin_form(false);
  CHECK(form.page_w == 1600);
  CHECK(form.page_h == 2400);
  CHECK(form.words.size() == 60);
  CHECK(form.fields.size() == 12);
  for (std::size_t i = 0; i < form.words.size(); ++i) {
    for (std::size_t j = i + 1; j < form.words.size(); ++j) {
      CHECK(form.words[i].text != form.words[j].text);
    }
  }
  for (const auto& f : form.fields) CHECK(f.region.inside(1600, 2400));

  const auto filled = builtin_form(true);
  CHECK(filled.words.size() == 72);
  const auto& values = builtin_fill_values();
  for (std::size_t f = 0; f < filled.fields.size(); ++f) {
    const auto& w = filled.words[60 + f];
    CHECK(w.fill);
    CHECK(w.text == values[f]);
    const Rect box = word_extent(w);
    const Rect& r = filled.fields[f].region;
    CHECK(box.x >= r.x);
    CHECK(box.right() <= r.right());
    CHECK(box.y >= r.y);
    CHECK(box.bottom() <= r.bottom());
  }
}

TEST_CASE("make_homography") {
  SUBCASE("identity parameters give the identity for any page size") {
    for (auto [w, h] : {std::pair{1600, 2400}, {37, 11}, {1, 1}}) {
      CHECK(make_homography({}, w, h) == Homography());
    }
  }
  SUBCASE("pure translation") {
    PerturbationParams p;
    p.translate_x = 0.1;
    const Mat3 expected = {1, 0, 160, 0, 1, 0, 0, 0, 1};
    const auto& m = make_homography(p, 1600, 2400).matrix();
    for (int i = 0; i < 9; ++i) CHECK(m[i] == doctest::Approx(expected[i]).epsilon(1e-15));
  }
  SUBCASE("rotation about the page center") {
    PerturbationParams p;
    p.rotation_deg = 7.0;
    const auto h = make_homography(p, 1600, 2400);
    const double a = 7.0 * 3.14159265358979323846 / 180.0;
    const double cx = 800, cy = 1200;
    for (Point q : {Point{0, 0}, Point{1600, 0}, Point{0, 2400}, Point{1600, 2400}}) {
      const double ex = cx + std::cos(a) * (q.x - cx) - std::sin(a) * (q.y - cy);
      const double ey = cy + std::sin(a) * (q.x - cx) + std::cos(a) * (q.y - cy);
      const Point got = apply_point(h, q);
      CHECK(got.x == doctest::Approx(ex).epsilon(1e-12));
      CHECK(got.y == doctest::Approx(ey).epsilon(1e-12));
    }
  }
  SUBCASE("perspective row is taken verbatim") {
    PerturbationParams p;
    p.perspective_skew = {1e-5, -2e-5};
    const auto& m = make_homography(p, 800, 600).matrix();
    CHECK(m[6] == 1e-5);
    CHECK(m[7] == -2e-5);
    CHECK(m[8] == 1.0);
  }
  SUBCASE("invalid parameters") {
    PerturbationParams p;
    p.scale_x = 0.0;
    CHECK_THROWS_AS(make_homography(p, 100, 100), InputError);
    p.scale_x = 1.0;
    p.rotation_deg = std::nan("");
    CHECK_THROWS_AS(make_homography(p, 100, 100), InputError);
  }
}

TEST_CASE("perturb_document with identity parameters is a no-op") {
  const auto doc = render_document(random_layout(5, 8, vocabulary(), 600, 500, 1));
  const auto out = perturb_document(doc.page, {});
  CHECK(out.image == doc.page);
  CHECK(out.true_h == Homography());
}

TEST_CASE("translation round trip restores the page") {
  const auto doc = render_document(random_layout(9, 20, vocabulary(), 800, 600, 2));
  PerturbationParams p;
  p.translate_x = 0.0537;
  p.translate_y = -0.0412;
  const auto pert = perturb_document(doc.page, p);
  const auto back = warp_perspective(pert.image, pert.true_h, 800, 600);
  // the shift pushes about 43 px off the right and 25 px off the top
  const Rect interior{10, 40, 730, 550};
  const auto a = crop(binarize(doc.page), interior);
  const auto b = crop(binarize(back), interior);
  CHECK(xor_diff(a, b).residual_fraction < 0.005);
}

TEST_CASE("true_H inverts the perturbation") {
  PerturbationParams p;
  p.rotation_deg = 7.0;
  p.scale_x = p.scale_y = 1.5;
  const auto pert = perturb_document(GrayImage(400, 300, 255), p);
  const auto forward = make_homography(p, 400, 300);
  for (Point c : {Point{0, 0}, Point{400, 0}, Point{0, 300}, Point{400, 300}}) {
    const Point there = apply_point(forward, c);
    const Point back = apply_point(pert.true_h, there);
    CHECK(std::abs(back.x - c.x) < 1e-9);
    CHECK(std::abs(back.y - c.y) < 1e-9);
  }
}

TEST_CASE("affine perturbations are recovered at the corners to 1e-6") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> rot(-7, 7), tr(-0.4, 0.4), sc(0.5, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    PerturbationParams p{rot(rng), tr(rng), tr(rng), sc(rng), sc(rng), {0.0, 0.0}};
    const auto forward = make_homography(p, 1600, 2400);
    const auto true_h = invert(forward);
    double sum = 0;
    for (Point c : {Point{0, 0}, Point{1600, 0}, Point{0, 2400}, Point{1600, 2400}}) {
      sum += distance(formpin::testing::project(true_h.matrix(),
                                                formpin::testing::project(forward.matrix(), c)),
                      c);
    }
    CHECK(sum / 4 < 1e-6);
  }
}

TEST_CASE("transform_sidecar follows the word boxes") {
  OcrPage page{{{"Name", {100, 100, 40, 20}, 100.0}, {"Edge", {5, 5, 20, 10}, 100.0}}, 400, 300};
  const auto moved = transform_sidecar(page, Homography::translation(10, 7), 400, 300, 3);
  REQUIRE(moved.words.size() == 2);
  CHECK(moved.words[0].box == Rect{107, 104, 46, 26});
  const auto off = transform_sidecar(page, Homography::translation(-10, 0), 400, 300, 3);
  REQUIRE(off.words.size() == 1);
  CHECK(off.words[0].text == "Name");
  validate_page(off);
}

TEST_CASE("glyph set") {
  const auto& g = GlyphSet::builtin();
  CHECK(g.characters().size() == 62);
  for (char c : g.characters()) {
    CHECK(glyph_ink(c) > 0);
    CHECK(g.glyph(c).width() == 12);
    CHECK(g.glyph(c).height() == 16);
  }
  CHECK_FALSE(g.has('-'));
  CHECK_THROWS_AS(g.glyph('#'), InputError);

  // every tip-list character is one 8-connected stroke, so the first and
  // last components of a word are whole characters
  const auto table = CharTipTable::defaults();
  for (TipClass tip : kAllTips) {
    for (char c : table.list(tip)) {
      REQUIRE(g.has(c));
      int count = 0;
      formpin::testing::flood_fill_labels(g.glyph(c), &count);
      CHECK_MESSAGE(count == 1, "glyph " << c);
    }
  }

  const auto& t = g.glyph('T');
  for (int x = 0; x < 12; ++x) CHECK(t.at(x, 0) == 1);
  for (int y = 1; y < 12; ++y) {
    int first = -1, last = -1;
    for (int x = 0; x < 12; ++x) {
      if (t.at(x, y)) {
        if (first < 0) first = x;
        last = x;
      }
    }
    CHECK(first + last == 11);  // stem symmetric about the cell center
  }
}

TEST_CASE("layout and fields JSON round trip") {
  auto layout = builtin_form(true);
  layout.words[3].anchor = {12.5, 99.0};
  TempDir dir;
  save_layout(layout, dir / "layout.json");
  const auto back = load_layout(dir / "layout.json");
  CHECK(back.page_w == layout.page_w);
  CHECK(back.page_h == layout.page_h);
  CHECK(back.words == layout.words);
  CHECK(back.fields == layout.fields);

  save_fields(layout.fields, dir / "fields.json");
  CHECK(load_fields(dir / "fields.json") == layout.fields);

  CHECK_THROWS_AS(parse_layout("{\"words\":[{\"text\":1}]}"), InputError);
  CHECK_THROWS_AS(load_layout(dir / "none.json"), IoError);
  CHECK_THROWS_AS(parse_fields(R"({"fields":[{"name":"a","x":0,"y":0,"w":0,"h":3}]})"),
                  InputError);
  CHECK_THROWS_AS(parse_fields(R"({"fields":[{"name":"a","x":0,"y":0,"w":5,"h":3,"kind":"x"}]})"),
                  InputError);
  CHECK(parse_fields(R"({"fields":[{"name":"a","x":0,"y":0,"w":5,"h":3}]})")[0].kind ==
        FieldKind::Unknown);
}
