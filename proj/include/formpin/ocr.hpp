#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "formpin/image.hpp"

namespace formpin {

struct WordBox {
  std::string text;  // non-empty, no whitespace
  Rect box;          // image coordinates
  double confidence = 100.0;

  Point center() const { return {box.x + box.w / 2.0, box.y + box.h / 2.0}; }

  friend bool operator==(const WordBox&, const WordBox&) = default;
};

struct OcrPage {
  std::vector<WordBox> words;
  int image_w = 0;
  int image_h = 0;
};

/// Throws OcrError if a word is empty, holds whitespace, or leaves the page.
void validate_page(const OcrPage& page);

/// Scales every box from the page's own size to (new_w, new_h). Boxes are
/// grown outward to whole pixels and clipped to the new page.
OcrPage rescale_page(const OcrPage& page, int new_w, int new_h);

// ---------------------------------------------------------------------------
// Ground-truth sidecar backend

/// Parses sidecar JSON text. The page size recorded in the sidecar must
/// match (image_w, image_h) when present.
OcrPage parse_sidecar(std::string_view json_text, int image_w, int image_h);

/// Reads `path`; a missing file is an IoError, bad content an OcrError.
OcrPage read_words_sidecar(const std::filesystem::path& path, int image_w, int image_h);

std::string format_sidecar(const OcrPage& page);
void write_words_sidecar(const OcrPage& page, const std::filesystem::path& path);

/// `<dir>/<stem>.json` next to an image.
std::filesystem::path sidecar_path_for(const std::filesystem::path& image_path);

// ---------------------------------------------------------------------------
// External OCR backend

/// Word rows (level 5, conf >= 0, non-blank text) of word-level TSV output.
std::vector<WordBox> parse_ocr_tsv(std::string_view tsv_text);

struct OcrProcessConfig {
  std::string binary = "tesseract";
  int psm = 11;
  std::vector<std::string> extra_args;

  /// FORMPIN_OCR_BIN when set and non-empty, otherwise `binary`.
  std::string resolved_binary() const;
};

struct ProcessResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs argv[0] (PATH lookup) and collects stdout/stderr. Throws OcrError if
/// the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv);

/// Runs `<bin> <image> stdout --psm N [extra...] tsv`. The page size is read
/// from the image file.
OcrPage read_words_external(const std::filesystem::path& image_path,
                            const OcrProcessConfig& config);

/// True when the configured binary can be launched.
bool external_ocr_available(const OcrProcessConfig& config);

// ---------------------------------------------------------------------------

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string>& words);

  /// One word per line; blank lines and surrounding whitespace ignored.
  static Lexicon load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;  // lowercase
};

inline bool lexicon_contains(const Lexicon& lex, std::string_view word) {
  return lex.contains(word);
}

std::string to_lower(std::string_view s);

/// data/lexicon.txt shipped with the source tree.
std::filesystem::path default_lexicon_path();

}  // namespace formpin
