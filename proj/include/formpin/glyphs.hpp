#pragma once

#include <array>
#include <optional>
#include <string>

#include "formpin/image.hpp"

namespace formpin {

/// Embedded bitmap font covering A-Z, a-z and 0-9. Every glyph occupies a
/// fixed 12x16 cell; words advance by cell width plus spacing.
class GlyphSet {
 public:
  static constexpr int kWidth = 12;
  static constexpr int kHeight = 16;
  static constexpr int kSpacing = 2;

  static const GlyphSet& builtin();

  bool has(char c) const;
  /// Throws InputError for characters outside the set.
  const BinaryImage& glyph(char c) const;
  std::string characters() const;

  int width() const { return kWidth; }
  int height() const { return kHeight; }
  int spacing() const { return kSpacing; }
  int advance() const { return kWidth + kSpacing; }

 private:
  GlyphSet();
  std::array<std::optional<BinaryImage>, 128> glyphs_;
};

}  // namespace formpin
