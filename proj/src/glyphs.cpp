#include "formpin/glyphs.hpp"

#include <string>

#include "formpin/error.hpp"

namespace formpin {

namespace {

struct GlyphSource {
  char ch;
  const char* rows[GlyphSet::kHeight];
};

// 12x16 cells. Capitals and digits use rows 0-11, the x-height is rows
// 4-11 and descenders reach row 15. Letters that carry tips are drawn so
// each tip is a single pixel that stays extremal under small rotations.
constexpr GlyphSource kFont[] = {
    {'A',
     {".....#......",
      "....###.....",
      "....####....",
      "...##..##...",
      "...##..##...",
      "..##....##..",
      "..########..",
      "..########..",
      ".##......##.",
      ".##......##.",
      ".##......##.",
      "##........##",
      "............",
      "............",
      "............",
      "............"}},
    {'B',
     {"#########...",
      "##......##..",
      "##.......##.",
      "##.......##.",
      "##......##..",
      "#########...",
      "##......##..",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##......##..",
      "#########...",
      "............",
      "............",
      "............",
      "............"}},
    {'C',
     {"...######...",
      "..##....##..",
      ".##......##.",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      ".##......##.",
      "..##....##..",
      "...######...",
      "............",
      "............",
      "............",
      "............"}},
    {'D',
     {"########....",
      "##.....##...",
      "##......##..",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##......##..",
      "##.....##...",
      "########....",
      "............",
      "............",
      "............",
      "............"}},
    {'E',
     {"###########.",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "#########...",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "###########.",
      "............",
      "............",
      "............",
      "............"}},
    {'F',
     {"###########.",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "#########...",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "............",
      "............",
      "............",
      "............"}},
    {'G',
     {"...######...",
      "..##....##..",
      ".##......##.",
      "##..........",
      "##..........",
      "##..........",
      "##....#####.",
      "##.......##.",
      "##.......##.",
      ".##......##.",
      "..##....###.",
      "...######.#.",
      "............",
      "............",
      "............",
      "............"}},
    {'H',
     {"##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "###########.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "............",
      "............",
      "............",
      "............"}},
    {'I',
     {"..########..",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      "..########..",
      "............",
      "............",
      "............",
      "............"}},
    {'J',
     {"....#######.",
      "........##..",
      "........##..",
      "........##..",
      "........##..",
      "........##..",
      "........##..",
      "........##..",
      "##......##..",
      "##......##..",
      ".##....##...",
      "..######....",
      "............",
      "............",
      "............",
      "............"}},
    {'K',
     {"...#...##...",
      "..##..##....",
      "..##.##.....",
      "..####......",
      "..###.......",
      "..####......",
      "..##.##.....",
      "..##..##....",
      "..##...##...",
      "..##....##..",
      "..##.....##.",
      "###.......##",
      "............",
      "............",
      "............",
      "............"}},
    {'L',
     {"##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "###########.",
      "############",
      "##..........",
      "##..........",
      "#...........",
      "............"}},
    {'M',
     {"...#........",
      "..##........",
      "..###....##.",
      "..####..###.",
      "..##.######.",
      "..##..##.##.",
      "..##.....##.",
      "..##.....##.",
      "..##.....##.",
      "..##.....##.",
      "..##.....##.",
      "####.....###",
      "............",
      "............",
      "............",
      "............"}},
    {'N',
     {"...#.....##.",
      "..###....##.",
      "..####...##.",
      "..##.##..##.",
      "..##.##..##.",
      "..##..##.##.",
      "..##..##.##.",
      "..##...####.",
      "..##...####.",
      "..##....###.",
      "..##.....##.",
      "####.....##.",
      "............",
      "............",
      "............",
      "............"}},
    {'O',
     {"...######...",
      "..##....##..",
      ".##......##.",
      "##........##",
      "##........##",
      "##........##",
      "##........##",
      "##........##",
      "##........##",
      ".##......##.",
      "..##....##..",
      "...######...",
      "............",
      "............",
      "............",
      "............"}},
    {'P',
     {"#########...",
      "##......##..",
      "##.......##.",
      "##.......##.",
      "##......##..",
      "#########...",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "............",
      "............",
      "............",
      "............"}},
    {'Q',
     {"...######...",
      "..##....##..",
      ".##......##.",
      "##........##",
      "##........##",
      "##........##",
      "##........##",
      "##........##",
      "##.....##.##",
      ".##.....###.",
      "..##....###.",
      "...#######.#",
      "............",
      "............",
      "............",
      "............"}},
    {'R',
     {"#########...",
      "##......##..",
      "##.......##.",
      "##.......##.",
      "##......##..",
      "#########...",
      "##....##....",
      "##.....##...",
      "##......##..",
      "##.......##.",
      "##.......##.",
      "##........##",
      "............",
      "............",
      "............",
      "............"}},
    {'S',
     {"..#######...",
      ".##.....##..",
      "##..........",
      "##..........",
      ".##.........",
      "..######....",
      ".......##...",
      ".........##.",
      ".........##.",
      "##.......##.",
      ".##.....##..",
      "..#######...",
      "............",
      "............",
      "............",
      "............"}},
    {'T',
     {"############",
      ".##########.",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      "............",
      "............",
      "............",
      "............"}},
    {'U',
     {"##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      ".##.....##..",
      "..##...##...",
      "...#####....",
      "............",
      "............",
      "............",
      "............"}},
    {'V',
     {"#...........",
      ".##.........",
      ".##.........",
      "..##.......#",
      "..##.....##.",
      "...##...##..",
      "...##...##..",
      "....##.##...",
      "....##.##...",
      "....#####...",
      ".....###....",
      ".....#......",
      "............",
      "............",
      "............",
      "............"}},
    {'W',
     {"#...........",
      ".##.........",
      ".##.........",
      ".##........#",
      "..##..##..##",
      "..##.####.#.",
      "..##.#..###.",
      "..####..###.",
      "...###..##..",
      "...###...#..",
      "...##.......",
      "...#........",
      "............",
      "............",
      "............",
      "............"}},
    {'X',
     {"...##..##...",
      "...##..##...",
      "...##..##...",
      "....####....",
      "....####....",
      ".....##.....",
      "....####....",
      "....####....",
      "...##..##...",
      "..##....##..",
      ".##......##.",
      "##........##",
      "............",
      "............",
      "............",
      "............"}},
    {'Y',
     {"#...........",
      ".##.........",
      ".##.........",
      "..##.......#",
      "..##.....##.",
      "...##...##..",
      "....##.##...",
      ".....###....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      "............",
      "............",
      "............",
      "............"}},
    {'Z',
     {"...#########",
      "...########.",
      "........##..",
      ".......##...",
      "......##....",
      ".....##.....",
      "....##......",
      "...##.......",
      "..##........",
      ".##.........",
      ".########...",
      "#########...",
      "............",
      "............",
      "............",
      "............"}},
    {'a',
     {"............",
      "............",
      "............",
      "............",
      "..######....",
      ".......##...",
      "........##..",
      "..########..",
      ".##.....##..",
      "##......##..",
      ".##....###..",
      "..#####.##..",
      "............",
      "............",
      "............",
      "............"}},
    {'b',
     {"##..........",
      "##..........",
      "##..........",
      "##..........",
      "##.#####....",
      "###....##...",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "###....##...",
      "##.#####....",
      "............",
      "............",
      "............",
      "............"}},
    {'c',
     {"............",
      "............",
      "............",
      "............",
      "...######...",
      "..##....##..",
      ".##.........",
      "##..........",
      "##..........",
      ".##.........",
      "..##....##..",
      "...######...",
      "............",
      "............",
      "............",
      "............"}},
    {'d',
     {"........##..",
      "........##..",
      "........##..",
      "........##..",
      "..#####.##..",
      ".##....###..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      ".##....###..",
      "..#####.##..",
      "............",
      "............",
      "............",
      "............"}},
    {'e',
     {"............",
      "............",
      "............",
      "............",
      "...#####....",
      "..##...##...",
      ".##.....##..",
      "##########..",
      "##..........",
      ".##.........",
      "..##....##..",
      "...######...",
      "............",
      "............",
      "............",
      "............"}},
    {'f',
     {"....#####...",
      "...##.......",
      "...##.......",
      "...##.......",
      ".#######....",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##.......",
      "............",
      "............",
      "............",
      "............"}},
    {'g',
     {"............",
      "............",
      "............",
      "............",
      "..#####.##..",
      ".##....###..",
      "##......##..",
      "##......##..",
      "##......##..",
      ".##....###..",
      "..#####.##..",
      "........##..",
      "........##..",
      ".##....##...",
      "..######....",
      "............"}},
    {'h',
     {"##..........",
      "##..........",
      "##..........",
      "##..........",
      "##.#####....",
      "###....##...",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "............",
      "............",
      "............",
      "............"}},
    {'i',
     {"............",
      "....##......",
      "....##......",
      "............",
      "..####......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "..######....",
      "............",
      "............",
      "............",
      "............"}},
    {'j',
     {"............",
      "......##....",
      "......##....",
      "............",
      "....####....",
      "......##....",
      "......##....",
      "......##....",
      "......##....",
      "......##....",
      "......##....",
      "......##....",
      "......##....",
      "......##....",
      "##...##.....",
      ".#####......"}},
    {'k',
     {"...#........",
      "..##........",
      "..##........",
      "..##........",
      "..##....##..",
      "..##...##...",
      "..##..##....",
      "..##.##.....",
      "..#####.....",
      "..##.##.....",
      "..##..##....",
      "###....###..",
      "............",
      "............",
      "............",
      "............"}},
    {'l',
     {"..####......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "....##......",
      "..######....",
      "............",
      "............",
      "............",
      "............"}},
    {'m',
     {"............",
      "............",
      "............",
      "............",
      "##.###.###..",
      "###..###.##.",
      "##...##..##.",
      "##...##..##.",
      "##...##..##.",
      "##...##..##.",
      "##...##..##.",
      "##...##..##.",
      "............",
      "............",
      "............",
      "............"}},
    {'n',
     {"............",
      "............",
      "............",
      "............",
      "##.#####....",
      "###....##...",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "............",
      "............",
      "............",
      "............"}},
    {'o',
     {"............",
      "............",
      "............",
      "............",
      "...#####....",
      "..##...##...",
      ".##.....##..",
      "##.......##.",
      "##.......##.",
      ".##.....##..",
      "..##...##...",
      "...#####....",
      "............",
      "............",
      "............",
      "............"}},
    {'p',
     {"............",
      "............",
      "............",
      "............",
      "##.#####....",
      "###....##...",
      "##......##..",
      "##......##..",
      "##......##..",
      "###....##...",
      "##.#####....",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##.........."}},
    {'q',
     {"............",
      "............",
      "............",
      "............",
      "....#####.##",
      "...##....###",
      "..##......##",
      "..##......##",
      "..##......##",
      "...##....###",
      "....#####.##",
      "..........##",
      "..........##",
      "..........##",
      "..........##",
      "..........##"}},
    {'r',
     {"............",
      "............",
      "............",
      "............",
      "##..#####...",
      "####........",
      "###.........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "##..........",
      "............",
      "............",
      "............",
      "............"}},
    {'s',
     {"............",
      "............",
      "............",
      "............",
      "..######....",
      ".##.....#...",
      ".##.........",
      "..######....",
      ".......##...",
      "........##..",
      ".#.....##...",
      "..######....",
      "............",
      "............",
      "............",
      "............"}},
    {'t',
     {"............",
      "...##.......",
      "...##.......",
      "...##.......",
      ".########...",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##.......",
      "...##...##..",
      "....#####...",
      "............",
      "............",
      "............",
      "............"}},
    {'u',
     {"............",
      "............",
      "............",
      "............",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      "##......##..",
      ".##....###..",
      "..#####.##..",
      "............",
      "............",
      "............",
      "............"}},
    {'v',
     {"............",
      "............",
      "............",
      "............",
      "#...........",
      ".##.........",
      ".##.......#.",
      "..##.....##.",
      "..##....##..",
      "...##..##...",
      "....####....",
      ".....#......",
      "............",
      "............",
      "............",
      "............"}},
    {'w',
     {"............",
      "............",
      "............",
      "............",
      "#...........",
      ".##.........",
      ".##..##.....",
      "..#.####..##",
      "..####.####.",
      "..###...##..",
      "...##.......",
      "...#........",
      "............",
      "............",
      "............",
      "............"}},
    {'x',
     {"............",
      "............",
      "............",
      "............",
      "..##...##...",
      "...##.##....",
      "....###.....",
      "....###.....",
      "...##.##....",
      "..##...##...",
      ".##.....##..",
      "##.......##.",
      "............",
      "............",
      "............",
      "............"}},
    {'y',
     {"............",
      "............",
      "............",
      "............",
      "#...........",
      ".##.........",
      ".##......##.",
      "..##....##..",
      "..##...##...",
      "...##..##...",
      "....####....",
      ".....###....",
      ".....##.....",
      "....##......",
      "....##......",
      "....#......."}},
    {'z',
     {"............",
      "............",
      "............",
      "............",
      "..########..",
      ".......##...",
      "......##....",
      ".....##.....",
      "....##......",
      "...##.......",
      ".#######....",
      "########....",
      "............",
      "............",
      "............",
      "............"}},
    {'0',
     {"...######...",
      "..##....##..",
      ".##......##.",
      ".##.....###.",
      ".##....####.",
      ".##...##.##.",
      ".##..##..##.",
      ".##.##...##.",
      ".####....##.",
      ".###.....##.",
      "..##....##..",
      "...######...",
      "............",
      "............",
      "............",
      "............"}},
    {'1',
     {"......#.....",
      ".....##.....",
      "....###.....",
      "...####.....",
      "..##.##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      ".....##.....",
      "..########..",
      "............",
      "............",
      "............",
      "............"}},
    {'2',
     {"..#######...",
      ".##.....##..",
      ".........##.",
      ".........##.",
      "........##..",
      ".......##...",
      ".....##.....",
      "....##......",
      "...##.......",
      "..##........",
      ".##.........",
      "###########.",
      "............",
      "............",
      "............",
      "............"}},
    {'3',
     {".########...",
      ".......##...",
      "......##....",
      ".....##.....",
      "....#####...",
      "........##..",
      ".........##.",
      ".........##.",
      ".........##.",
      "##......##..",
      ".##....##...",
      "..#####.....",
      "............",
      "............",
      "............",
      "............"}},
    {'4',
     {".......#....",
      "......###...",
      ".....####...",
      "....##.##...",
      "...##..##...",
      "..##...##...",
      ".##....##...",
      ".##....##...",
      "############",
      ".#########..",
      ".......##...",
      ".......##...",
      "............",
      "............",
      "............",
      "............"}},
    {'5',
     {"##########..",
      "##..........",
      "##..........",
      "##..........",
      "########....",
      ".......##...",
      "........##..",
      ".........##.",
      ".........##.",
      "##......##..",
      ".##....##...",
      "..#####.....",
      "............",
      "............",
      "............",
      "............"}},
    {'6',
     {"....#####...",
      "..##........",
      ".##.........",
      "##..........",
      "##.######...",
      "###.....##..",
      "##.......##.",
      "##.......##.",
      "##.......##.",
      ".##.....##..",
      "..##...##...",
      "...#####....",
      "............",
      "............",
      "............",
      "............"}},
    {'7',
     {"############",
      ".........##.",
      "........##..",
      "........##..",
      ".......##...",
      ".......##...",
      "......##....",
      "......##....",
      ".....##.....",
      ".....##.....",
      "....##......",
      "....##......",
      "............",
      "............",
      "............",
      "............"}},
    {'8',
     {"..#######...",
      ".##.....##..",
      ".##.....##..",
      ".##.....##..",
      "..##...##...",
      "...#####....",
      "..##...##...",
      ".##.....##..",
      "##.......##.",
      "##.......##.",
      ".##.....##..",
      "..#######...",
      "............",
      "............",
      "............",
      "............"}},
    {'9',
     {"..######....",
      ".##....##...",
      "##......##..",
      "##......##..",
      "##......##..",
      ".##.....###.",
      "..#######.##",
      ".........##.",
      "........##..",
      ".......##...",
      ".....##.....",
      "..####......",
      "............",
      "............",
      "............",
      "............"}},
};

}  // namespace
GlyphSet::GlyphSet() {
  for (const auto& src : kFont) {
    BinaryImage img(kWidth, kHeight);
    for (int y = 0; y < kHeight; ++y) {
      for (int x = 0; x < kWidth; ++x) img.at(x, y) = src.rows[y][x] == '#' ? 1 : 0;
    }
    glyphs_[static_cast<unsigned char>(src.ch)] = std::move(img);
  }
}

const GlyphSet& GlyphSet::builtin() {
  static const GlyphSet set;
  return set;
}

bool GlyphSet::has(char c) const {
  const auto u = static_cast<unsigned char>(c);
  return u < glyphs_.size() && glyphs_[u].has_value();
}

const BinaryImage& GlyphSet::glyph(char c) const {
  if (!has(c)) {
    throw InputError("no glyph for character '" + std::string(1, c) + "' (code " +
                     std::to_string(static_cast<unsigned char>(c)) + ")");
  }
  return *glyphs_[static_cast<unsigned char>(c)];
}

std::string GlyphSet::characters() const {
  std::string out;
  for (std::size_t i = 0; i < glyphs_.size(); ++i) {
    if (glyphs_[i]) out.push_back(static_cast<char>(i));
  }
  return out;
}

}  // namespace formpin
