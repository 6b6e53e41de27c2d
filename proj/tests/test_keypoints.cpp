#include <algorithm>
#include <fstream>

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

// Extremal ink pixel of a glyph bitmap found by sorting on the tip's key.
Point bitmap_tip(const BinaryImage& g, TipClass tip) {
  std::vector<std::pair<int, int>> px;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (g.at(x, y)) px.emplace_back(x, y);
    }
  }
  auto key = [tip](const std::pair<int, int>& p) {
    switch (tip) {
      case TipClass::Left: return std::pair{p.first, -p.second};
      case TipClass::Right: return std::pair{-p.first, -p.second};
      case TipClass::Top: return std::pair{p.second, p.first};
      case TipClass::Bottom: return std::pair{-p.second, p.first};
    }
    return std::pair{0, 0};
  };
  std::sort(px.begin(), px.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  return {px.front().first + 0.5, px.front().second + 0.5};
}

struct Rendered {
  BinaryImage bin;
  OcrPage page;
};

Rendered render(const std::vector<PlacedWord>& words, int w = 400, int h = 200) {
  const auto doc = render_document({w, h, words, {}});
  return {binarize(doc.page, 170), doc.sidecar};
}

}  // namespace

TEST_CASE("default tip table") {
  const auto t = CharTipTable::defaults();
  for (char c : std::string("AVTY4vw")) CHECK(t.contains(TipClass::Left, c));
  for (char c : std::string("VTLY7r")) CHECK(t.contains(TipClass::Right, c));
  CHECK(t.list(TipClass::Left) == "AVTYMNWKXZ4vwxyzk");
  CHECK(t.list(TipClass::Right) == "VTLYKXZ7rxz");
  CHECK(t.list(TipClass::Top) == "AMVWTY14vwy");
  CHECK(t.list(TipClass::Bottom) == "VWvwyL");
  for (TipClass tip : kAllTips) {
    for (char c : std::string("ODo0QCc")) CHECK_FALSE(t.contains(tip, c));
  }
  CHECK_FALSE(t.contains(TipClass::Left, 'a'));  // case-sensitive
}

TEST_CASE("tip table override file") {
  const auto t = CharTipTable::from_json(R"({"begCharList":["A","W"],"bottomCharList":[]})");
  CHECK(t.list(TipClass::Left) == "AW");
  CHECK(t.list(TipClass::Bottom).empty());
  CHECK(t.list(TipClass::Right) == CharTipTable::defaults().list(TipClass::Right));

  CHECK_THROWS_AS(CharTipTable::from_json(R"({"begCharList":["O"]})"), InputError);
  CHECK_THROWS_AS(CharTipTable::from_json(R"({"begCharList":["AV"]})"), InputError);
  CHECK_THROWS_AS(CharTipTable::from_json(R"({"begCharList":["A","A"]})"), InputError);
  CHECK_THROWS_AS(CharTipTable::from_json(R"({"begCharList":"A"})"), InputError);
  CHECK_THROWS_AS(CharTipTable::from_json("[1,2"), InputError);

  TempDir dir;
  std::ofstream(dir / "tips.json") << R"({"endCharList":["r"]})";
  CHECK(CharTipTable::load(dir / "tips.json").list(TipClass::Right) == "r");
  CHECK_THROWS_AS(CharTipTable::load(dir / "missing.json"), IoError);
}

TEST_CASE("filter_eligible_words") {
  const Lexicon lex(std::vector<std::string>{"name", "to", "total"});
  OcrPage page{{{"to", {0, 0, 20, 14}, 100.0},
                {"Name", {30, 0, 40, 14}, 100.0},
                {"Xq7z", {80, 0, 40, 14}, 100.0},
                {"Total", {130, 0, 50, 11}, 100.0}},
               200, 20};
  EligibilityParams p;
  auto kept = filter_eligible_words(page, lex, p);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].text == "Name");

  p.require_lexicon = false;
  kept = filter_eligible_words(page, lex, p);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].text == "Name");
  CHECK(kept[1].text == "Xq7z");

  p.min_box_height = 11;
  CHECK(filter_eligible_words(page, lex, p).size() == 3);
  p.min_word_len = 2;
  CHECK(filter_eligible_words(page, lex, p).size() == 4);

  p.min_word_len = 0;
  CHECK_THROWS_AS(filter_eligible_words(page, lex, p), InputError);
}

TEST_CASE("extract_tip tie rules") {
  const std::vector<PixelCoord> one{{5, 7}};
  for (TipClass tip : kAllTips) {
    CHECK(extract_tip(one, tip) == Point{5.5, 7.5});
  }
  // a 3x3 block: every extremum is a tie broken by the secondary key
  std::vector<PixelCoord> block;
  for (int y = 2; y < 5; ++y) {
    for (int x = 10; x < 13; ++x) block.push_back({x, y});
  }
  CHECK(extract_tip(block, TipClass::Left) == Point{10.5, 4.5});
  CHECK(extract_tip(block, TipClass::Right) == Point{12.5, 4.5});
  CHECK(extract_tip(block, TipClass::Top) == Point{10.5, 2.5});
  CHECK(extract_tip(block, TipClass::Bottom) == Point{10.5, 4.5});
  CHECK_THROWS_AS(extract_tip(std::span<const PixelCoord>{}, TipClass::Left), InputError);

  const auto& g = GlyphSet::builtin();
  const auto cc_t = connected_components(g.glyph('T'));
  CHECK(extract_tip(cc_t, 1, TipClass::Left) == Point{0.5, 0.5});
  const auto cc_v = connected_components(g.glyph('V'));
  const Point vb = extract_tip(cc_v, 1, TipClass::Bottom);
  int lowest = 0;
  for (int x = 0; x < 12; ++x) lowest += g.glyph('V').at(x, static_cast<int>(vb.y));
  CHECK(lowest == 1);  // the vertex is a single pixel
  CHECK(vb == bitmap_tip(g.glyph('V'), TipClass::Bottom));
  CHECK_THROWS_AS(extract_tip(cc_v, 2, TipClass::Left), InputError);
}

TEST_CASE("both extract_tip forms agree on random components") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    const auto mask = formpin::testing::random_mask(rng, 24, 18, 0.45);
    const auto cc = connected_components(mask);
    for (int label = 1; label <= cc.count; ++label) {
      std::vector<PixelCoord> px;
      for (int y = 0; y < 18; ++y) {
        for (int x = 0; x < 24; ++x) {
          if (cc.label_at(x, y) == label) px.push_back({x, y});
        }
      }
      for (TipClass tip : kAllTips) CHECK(extract_tip(px, tip) == extract_tip(cc, label, tip));
    }
  }
}

TEST_CASE("rendered tips land exactly on the bitmap extremes") {
  const auto& g = GlyphSet::builtin();
  const auto table = CharTipTable::defaults();
  const Point anchor{37, 23};
  for (TipClass tip : kAllTips) {
    for (char c : table.list(tip)) {
      // the character goes first for left tips and last for right tips
      const bool leading = tip != TipClass::Right;
      const std::string text = leading ? std::string(1, c) + "nn" : "nn" + std::string(1, c);
      const auto r = render({{text, anchor, 1, false}});
      const auto kps = word_keypoints(r.bin, r.page.words[0], table);
      const double cell_x = anchor.x + (leading ? 0 : 2 * g.advance());
      const Point local = bitmap_tip(g.glyph(c), tip);
      const Point expected{cell_x + local.x, anchor.y + local.y};
      const auto it = std::find_if(kps.begin(), kps.end(), [&](const Keypoint& k) {
        return k.tip == tip && k.end == (leading ? WordEnd::First : WordEnd::Last);
      });
      REQUIRE_MESSAGE(it != kps.end(), "char " << c << " tip " << to_string(tip));
      CHECK_MESSAGE(it->location == expected, "char " << c << " tip " << to_string(tip));
      CHECK(it->character == c);
    }
  }
}

TEST_CASE("word_keypoints examples") {
  const auto table = CharTipTable::defaults();
  SUBCASE("Take") {
    const auto r = render({{"Take", {20, 30}, 2, false}});
    const auto kps = word_keypoints(r.bin, r.page.words[0], table);
    REQUIRE(kps.size() == 2);
    CHECK(kps[0].tip == TipClass::Left);
    CHECK(kps[1].tip == TipClass::Top);
    for (const auto& k : kps) {
      CHECK(k.end == WordEnd::First);
      CHECK(k.character == 'T');
      CHECK(k.word_text == "Take");
    }
    CHECK(kps[0].location == Point{20.5, 31.5});  // bottom-left pixel of the bar's left block
  }
  SUBCASE("door only yields the right tip of r") {
    const auto r = render({{"door", {20, 30}, 1, false}});
    const auto kps = word_keypoints(r.bin, r.page.words[0], table);
    REQUIRE(kps.size() == 1);
    CHECK(kps[0].tip == TipClass::Right);
    CHECK(kps[0].character == 'r');
  }
  SUBCASE("no listed end character") {
    const auto r = render({{"dome", {20, 30}, 1, false}});
    CHECK(word_keypoints(r.bin, r.page.words[0], table).empty());
  }
  SUBCASE("blank box") {
    const BinaryImage blank(100, 60);
    CHECK(word_keypoints(blank, {"Vat", {10, 10, 40, 20}, 90.0}, table).empty());
  }
  SUBCASE("box outside the image") {
    const BinaryImage blank(100, 60);
    CHECK_THROWS_AS(word_keypoints(blank, {"Vat", {70, 10, 40, 20}, 90.0}, table), InputError);
  }
  SUBCASE("single-pixel specks are ignored") {
    auto r = render({{"Vat", {20, 30}, 1, false}});
    const auto clean = word_keypoints(r.bin, r.page.words[0], table);
    WordBox grown = r.page.words[0];
    grown.box = {grown.box.x - 4, grown.box.y - 4, grown.box.w + 8, grown.box.h + 8};
    r.bin.at(grown.box.x, grown.box.y + 20) = 1;
    r.bin.at(grown.box.right() - 1, grown.box.y) = 1;
    const auto noisy = word_keypoints(r.bin, grown, table);
    REQUIRE(noisy.size() == clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) CHECK(noisy[i].location == clean[i].location);
  }
}

TEST_CASE("keypoint invariants on a random page") {
  const auto table = CharTipTable::defaults();
  const std::vector<std::string> vocab = {"Vehicle", "Total", "Year", "Key",   "Model",
                                          "Tax",     "Weight", "Zip", "Warranty", "Agent",
                                          "Value",   "Amount", "Town", "Motor", "Victim"};
  const auto layout = random_layout(321, 40, vocab, 1200, 900, 2);
  const auto doc = render_document(layout);
  const auto bin = binarize(doc.page, 170);
  const auto all = page_keypoints(bin, doc.sidecar.words, table);
  REQUIRE(all.size() == doc.sidecar.words.size());

  // shifted copy of the page on a larger canvas
  const int dx = 13, dy = 7;
  BinaryImage shifted(bin.width() + 20, bin.height() + 20);
  for (int y = 0; y < bin.height(); ++y) {
    for (int x = 0; x < bin.width(); ++x) shifted.at(x + dx, y + dy) = bin.at(x, y);
  }

  std::size_t total = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& word = doc.sidecar.words[i];
    CHECK(all[i] == word_keypoints(bin, word, table));
    for (const auto& k : all[i]) {
      CHECK(k.location.x >= word.box.x);
      CHECK(k.location.x <= word.box.right());
      CHECK(k.location.y >= word.box.y);
      CHECK(k.location.y <= word.box.bottom());
      CHECK(table.contains(k.tip, k.character));
    }
    WordBox moved = word;
    moved.box.x += dx;
    moved.box.y += dy;
    const auto kps = word_keypoints(shifted, moved, table);
    REQUIRE(kps.size() == all[i].size());
    for (std::size_t j = 0; j < kps.size(); ++j) {
      CHECK(kps[j].location == all[i][j].location + Point{dx, dy});
      CHECK(kps[j].tip == all[i][j].tip);
    }
    total += kps.size();
  }
  CHECK(total > 40);
}
