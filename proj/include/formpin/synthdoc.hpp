#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "formpin/fields.hpp"
#include "formpin/glyphs.hpp"
#include "formpin/homography.hpp"
#include "formpin/image.hpp"
#include "formpin/ocr.hpp"

namespace formpin {

struct PlacedWord {
  std::string text;
  Point anchor;    // top-left of the first glyph cell; rounded to whole pixels
  int scale = 1;   // integer upsampling of the glyph bitmaps
  bool fill = false;  // filled-in content rather than template text

  friend bool operator==(const PlacedWord&, const PlacedWord&) = default;
};

struct DocumentLayout {
  int page_w = 1600;
  int page_h = 2400;
  std::vector<PlacedWord> words;
  std::vector<FieldAnnotation> fields;
};

struct RenderedDocument {
  GrayImage page;
  OcrPage sidecar;                    // one entry per layout word, same order
  std::size_t ink_pixels = 0;         // every pixel the renderer set to 0
  std::size_t fill_ink_pixels = 0;    // the subset stamped by fill words

  double fill_ink_fraction() const {
    return static_cast<double>(fill_ink_pixels) / static_cast<double>(page.size());
  }
};

/// Tight ink box of a placed word.
Rect word_extent(const PlacedWord& word, const GlyphSet& glyphs = GlyphSet::builtin());

/// White page with black glyph ink. Throws InputError for empty text,
/// unsupported characters, boxes that leave the page, or overlapping words.
RenderedDocument render_document(const DocumentLayout& layout,
                                 const GlyphSet& glyphs = GlyphSet::builtin());

/// Template-only view: drops fill words.
DocumentLayout without_fill(const DocumentLayout& layout);

struct PerturbationParams {
  double rotation_deg = 0.0;
  double translate_x = 0.0;  // fraction of page width
  double translate_y = 0.0;  // fraction of page height
  double scale_x = 1.0;
  double scale_y = 1.0;
  std::array<double, 2> perspective_skew = {0.0, 0.0};  // h31, h32

  void validate() const;  // throws InputError
};

/// Template -> test transform: rotate, scale and translate about the page
/// center, with the perspective row set to (h31, h32, 1).
Homography make_homography(const PerturbationParams& p, int page_w, int page_h);

struct PerturbedDocument {
  GrayImage image;
  Homography true_h;  // test -> template
};

/// Warps a template page into a test page. Exposed background is `fill`.
PerturbedDocument perturb_document(const GrayImage& img, const PerturbationParams& p,
                                   std::uint8_t fill = 245);

/// Carries template word boxes into the test frame: corners go through
/// `template_to_test`, the box is their padded bounding box clipped to the
/// page. Words whose corners leave the test page are dropped.
OcrPage transform_sidecar(const OcrPage& page, const Homography& template_to_test, int out_w,
                          int out_h, int pad = 3);

/// 60 unique label words on a 5x12 grid (scale 2, 1600x2400) with twelve
/// fields below selected labels. `filled` adds one fill word per field.
DocumentLayout builtin_form(bool filled = false);

/// Texts of the builtin form's fill words, in field order.
const std::vector<std::string>& builtin_fill_values();

/// `count` words drawn from `vocabulary` at random non-overlapping spots.
DocumentLayout random_layout(std::uint64_t seed, int count,
                             const std::vector<std::string>& vocabulary, int page_w = 1600,
                             int page_h = 2400, int scale = 2);

DocumentLayout parse_layout(std::string_view json_text);
std::string format_layout(const DocumentLayout& layout);
DocumentLayout load_layout(const std::filesystem::path& path);
void save_layout(const DocumentLayout& layout, const std::filesystem::path& path);

}  // namespace formpin
