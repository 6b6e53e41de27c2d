#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "formpin/correspond.hpp"
#include "formpin/fields.hpp"
#include "formpin/homography.hpp"
#include "formpin/image.hpp"
#include "formpin/keypoints.hpp"
#include "formpin/ocr.hpp"
#include "formpin/ransac.hpp"
#include "formpin/synthdoc.hpp"

namespace formpin {

enum class OcrBackend { Sidecar, External };

std::string_view to_string(OcrBackend backend);
OcrBackend parse_ocr_backend(std::string_view s);  // throws InputError

struct PipelineConfig {
  int canvas_w = 1600;
  int canvas_h = 2400;
  int binarize_threshold = 170;
  EligibilityParams eligibility;
  NeighborhoodParams neighborhood;  // radius defaults to 0.1 x canvas_w
  RansacParams ransac;
  OcrBackend ocr_backend = OcrBackend::Sidecar;
  OcrProcessConfig ocr_process;
  std::optional<std::filesystem::path> tip_table_path;
  std::filesystem::path lexicon_path = default_lexicon_path();

  void validate() const;  // throws InputError
};

/// Keys: canvas{width,height}, binarize_threshold,
/// eligibility{min_word_len,min_box_height,require_lexicon},
/// neighborhood{radius,overlap_threshold},
/// ransac{inlier_threshold,confidence,max_iterations,min_inliers,rng_seed},
/// ocr{backend,binary,psm,extra_args}, tip_table_path, lexicon_path.
/// Missing keys keep their defaults. Relative paths resolve against
/// `base_dir`.
PipelineConfig parse_config(std::string_view json_text,
                            const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& config);

/// Config plus the resources it names, loaded once.
struct PipelineContext {
  PipelineConfig config;
  Lexicon lexicon;
  CharTipTable tips;

  static PipelineContext create(const PipelineConfig& config);
};

/// A page resized to the canvas, binarized, with its words in canvas
/// coordinates.
struct PreparedPage {
  GrayImage gray;
  BinaryImage bin;
  OcrPage words;
};

/// Resizes to the canvas and thresholds. `words` must be in the image's own
/// coordinates.
PreparedPage prepare_page(const GrayImage& image, const OcrPage& words,
                          const PipelineConfig& config);

/// Loads an image and runs the configured OCR backend on it. The sidecar
/// backend reads `<stem>.json` next to the image.
PreparedPage load_page(const std::filesystem::path& image_path, const PipelineConfig& config);

struct AlignmentReport {
  EstimateReport estimate;
  double xor_residual = 0.0;
  int correspondence_count = 0;
  int matched_word_count = 0;
  std::map<std::string, double> timings_ms;
};

struct AlignmentResult {
  GrayImage aligned;
  AlignmentReport report;
  OcrPage aligned_words;  // test words carried into the template frame
  BinaryImage xor_diff;
};

/// Throws MatchError below four correspondences and EstimateError when
/// RANSAC finds no acceptable model.
AlignmentResult align_pages(const PipelineContext& ctx, const PreparedPage& tmpl,
                            const PreparedPage& test);

AlignmentResult align_document(const std::filesystem::path& template_path,
                               const std::filesystem::path& test_path,
                               const PipelineConfig& config);

struct FieldCrop {
  FieldAnnotation annotation;
  GrayImage patch;
  std::optional<std::string> recognized_text;
};

/// One crop per annotation. Printed fields get recognized text: from
/// `aligned_words` with the sidecar backend (words whose centers fall in
/// the region, in reading order), from the OCR engine run on the patch with
/// the external backend. Throws InputError for regions off the image.
std::vector<FieldCrop> extract_fields(const GrayImage& aligned,
                                      const std::vector<FieldAnnotation>& annotations,
                                      const PipelineConfig& config,
                                      const OcrPage* aligned_words = nullptr);

std::string format_report(const AlignmentReport& report);
AlignmentReport parse_report(std::string_view json_text);  // throws InputError
void write_report(const AlignmentReport& report, const std::filesystem::path& path);
AlignmentReport read_report(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Stress harness

struct StressGrid {
  std::vector<double> rotations_deg{0.0};
  std::vector<double> translations{0.0};  // fraction of page size, per axis
  std::vector<double> scales{1.0};        // uniform
  /// Sweep varies one factor at a time from the identity (translations on
  /// each axis separately); cartesian takes every combination.
  bool cartesian = false;

  std::vector<PerturbationParams> cells() const;
};

struct StressCell {
  PerturbationParams params;
  bool success = false;
  std::optional<double> corner_error_px;
  int correspondences = 0;
  int inliers = 0;
  std::string error;
};

struct StressBoundary {
  std::string factor;          // rotation_deg, translate_x, translate_y, scale
  std::vector<double> tested;  // sorted
  std::vector<double> failed;
  // contiguous succeeding range around the identity value; empty when the
  // value closest to identity already fails
  std::optional<double> low;
  std::optional<double> high;
};

struct StressTable {
  OcrBackend backend = OcrBackend::Sidecar;
  std::vector<StressCell> cells;
  int succeeded = 0;
  double max_corner_error_px = 0.0;  // over succeeded cells
  std::vector<StressBoundary> boundaries;

  bool all_succeeded() const { return succeeded == static_cast<int>(cells.size()); }
};

/// Perturbs the template per cell, aligns, and scores the estimate against
/// the true homography by mean corner distance. A cell succeeds when
/// alignment completes with corner error below `success_px`. Failing cells
/// are recorded, not thrown.
StressTable stress_grid(const PipelineContext& ctx, const PreparedPage& tmpl,
                        const StressGrid& grid, OcrBackend backend, double success_px = 2.0);

/// Loads the template and runs the grid with the sidecar backend, plus the
/// external backend when its binary is available and `with_external` is set.
std::vector<StressTable> stress_grid(const std::filesystem::path& template_path,
                                     const PipelineConfig& config, const StressGrid& grid,
                                     bool with_external = true, double success_px = 2.0);

std::string format_stress_report(const std::vector<StressTable>& tables, const StressGrid& grid,
                                 double success_px);

}  // namespace formpin
