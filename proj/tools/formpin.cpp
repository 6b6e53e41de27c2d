// formpin command-line interface.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "formpin/error.hpp"
#include "formpin/pgm.hpp"
#include "formpin/pipeline.hpp"
#include "formpin/raster.hpp"
#include "formpin/synthdoc.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace formpin;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return 3;
    case ErrorKind::Ocr: return 4;
    case ErrorKind::Match: return 5;
    case ErrorKind::Estimate: return 6;
    case ErrorKind::Io: return 7;
  }
  return 1;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

// "a:b:step" (inclusive), "a,b,c", or a single number.
std::vector<double> parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError("bad number '" + s + "' in range '" + text + "'");
    }
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  if (sep == ',' || parts.size() == 1) {
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(number(p));
    if (out.empty()) throw InputError("empty range");
    return out;
  }
  if (parts.size() != 3) throw InputError("range must look like start:stop:step, got '" + text + "'");
  const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
  if (step <= 0 || b < a) throw InputError("range '" + text + "' needs start <= stop and step > 0");
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
  if (n > 100000) throw InputError("range '" + text + "' has too many values");
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(std::round((a + i * step) * 1e9) / 1e9);
  return out;
}

PipelineConfig config_from(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_config(path);
}

nlohmann::json matrix_json(const Homography& h) {
  return std::vector<double>(h.matrix().begin(), h.matrix().end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Template alignment and field extraction for scanned forms"};
  app.require_subcommand(1);

  // align
  std::string template_path, test_path, config_path, out_path, report_path, xor_out;
  auto* align = app.add_subcommand("align", "Align a test page to a template");
  align->add_option("--template", template_path, "Template image (PGM)")->required();
  align->add_option("--test", test_path, "Test image (PGM)")->required();
  align->add_option("--config", config_path, "Pipeline config JSON");
  align->add_option("--out", out_path, "Aligned image output (PGM)")->required();
  align->add_option("--report", report_path, "Report JSON output")->required();
  align->add_option("--xor-out", xor_out, "XOR difference image output (PGM)");

  // extract
  std::string aligned_path, fields_path, out_dir;
  auto* extract = app.add_subcommand("extract", "Cut annotated fields out of an aligned page");
  extract->add_option("--aligned", aligned_path, "Aligned image (PGM)")->required();
  extract->add_option("--fields", fields_path, "Field annotations JSON")->required();
  extract->add_option("--out-dir", out_dir, "Directory for crops and fields.json")->required();
  extract->add_option("--config", config_path, "Pipeline config JSON");

  // synth
  std::string layout_path, prefix;
  bool builtin = false, filled = false;
  PerturbationParams perturb;
  double scale = 1.0;
  auto* synth = app.add_subcommand("synth", "Render a synthetic page with ground truth");
  auto* layout_opt = synth->add_option("--layout", layout_path, "Layout JSON");
  auto* builtin_opt = synth->add_flag("--builtin-form", builtin, "Use the built-in 60-label form");
  layout_opt->excludes(builtin_opt);
  synth->add_flag("--filled", filled, "Include fill words of the built-in form");
  synth->add_option("--out-prefix", prefix, "Writes <prefix>.pgm, .json, .fields.json")->required();
  synth->add_option("--rotate", perturb.rotation_deg, "Rotation in degrees");
  synth->add_option("--tx", perturb.translate_x, "Translation, fraction of width");
  synth->add_option("--ty", perturb.translate_y, "Translation, fraction of height");
  synth->add_option("--scale", scale, "Uniform scale");
  synth->add_option("--skew-x", perturb.perspective_skew[0], "Perspective entry h31");
  synth->add_option("--skew-y", perturb.perspective_skew[1], "Perspective entry h32");

  // stress
  std::string rotations = "-7:7:1", translations = "-0.4:0.4:0.1", scales = "0.5:2.0:0.25";
  std::string stress_out;
  bool cartesian = false, sidecar_only = false;
  double success_px = 2.0;
  auto* stress = app.add_subcommand("stress", "Sweep perturbations of a template");
  stress->add_option("--template", template_path, "Template image (PGM) with sidecar")->required();
  stress->add_option("--config", config_path, "Pipeline config JSON");
  stress->add_option("--rotations", rotations, "Degrees, start:stop:step or a,b,c")
      ->capture_default_str();
  stress->add_option("--translations", translations, "Fractions, per axis")
      ->capture_default_str();
  stress->add_option("--scales", scales, "Uniform scales")->capture_default_str();
  stress->add_flag("--cartesian", cartesian, "Every combination instead of one factor at a time");
  stress->add_flag("--sidecar-only", sidecar_only, "Skip the external OCR backend");
  stress->add_option("--success-px", success_px, "Corner error bound for success")
      ->capture_default_str();
  stress->add_option("--out", stress_out, "Stress report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*align) {
      const auto result = align_document(template_path, test_path, config_from(config_path));
      save_image(result.aligned, out_path);
      write_report(result.report, report_path);
      // carried-over words let `extract` read printed fields without OCR
      const auto words_path = sidecar_path_for(out_path);
      if (fs::absolute(words_path) != fs::absolute(report_path)) {
        write_words_sidecar(result.aligned_words, words_path);
      }
      if (!xor_out.empty()) save_mask(result.xor_diff, xor_out);
      std::printf("aligned: %d correspondences, %d inliers, xor residual %.5f\n",
                  result.report.correspondence_count, result.report.estimate.inlier_count,
                  result.report.xor_residual);
    } else if (*extract) {
      const auto config = config_from(config_path);
      const auto aligned = load_image(aligned_path);
      const auto fields = load_fields(fields_path);
      std::optional<OcrPage> words;
      if (const auto p = sidecar_path_for(aligned_path);
          config.ocr_backend == OcrBackend::Sidecar && fs::exists(p)) {
        words = read_words_sidecar(p, aligned.width(), aligned.height());
      }
      const auto crops = extract_fields(aligned, fields, config, words ? &*words : nullptr);
      fs::create_directories(out_dir);
      nlohmann::json listing = nlohmann::json::array();
      for (std::size_t i = 0; i < crops.size(); ++i) {
        const auto& c = crops[i];
        const std::string file = std::to_string(i) + "_" + c.annotation.name + ".pgm";
        save_image(c.patch, fs::path(out_dir) / file);
        listing.push_back({{"name", c.annotation.name},
                           {"kind", std::string(to_string(c.annotation.kind))},
                           {"x", c.annotation.region.x},
                           {"y", c.annotation.region.y},
                           {"w", c.annotation.region.w},
                           {"h", c.annotation.region.h},
                           {"patch", file},
                           {"text", c.recognized_text ? nlohmann::json(*c.recognized_text)
                                                      : nlohmann::json(nullptr)}});
        std::printf("%-16s %s\n", c.annotation.name.c_str(),
                    c.recognized_text.value_or("").c_str());
      }
      write_file(fs::path(out_dir) / "fields.json",
                 nlohmann::json{{"fields", listing}}.dump(2) + "\n");
    } else if (*synth) {
      if (!builtin && layout_path.empty()) throw InputError("synth needs --layout or --builtin-form");
      DocumentLayout layout = builtin ? builtin_form(filled) : load_layout(layout_path);
      perturb.scale_x = perturb.scale_y = scale;
      const auto doc = render_document(layout);
      const bool perturbed = !(make_homography(perturb, layout.page_w, layout.page_h) ==
                               Homography());
      GrayImage page = doc.page;
      OcrPage words = doc.sidecar;
      nlohmann::json truth = {{"fill_ink_fraction", doc.fill_ink_fraction()},
                              {"ink_pixels", doc.ink_pixels},
                              {"fill_ink_pixels", doc.fill_ink_pixels}};
      if (perturbed) {
        const auto forward = make_homography(perturb, layout.page_w, layout.page_h);
        auto pert = perturb_document(doc.page, perturb);
        page = std::move(pert.image);
        words = transform_sidecar(doc.sidecar, forward, layout.page_w, layout.page_h);
        truth["true_h"] = matrix_json(pert.true_h);
        truth["template_to_test"] = matrix_json(forward);
      } else {
        truth["true_h"] = matrix_json(Homography());
      }
      truth["perturbation"] = {{"rotation_deg", perturb.rotation_deg},
                               {"translate_x", perturb.translate_x},
                               {"translate_y", perturb.translate_y},
                               {"scale", scale},
                               {"perspective_skew", perturb.perspective_skew}};
      save_image(page, prefix + ".pgm");
      write_words_sidecar(words, prefix + ".json");
      save_fields(layout.fields, prefix + ".fields.json");
      write_file(prefix + ".truth.json", truth.dump(2) + "\n");
      std::printf("wrote %s.pgm (%zu words, %zu fields)\n", prefix.c_str(), words.words.size(),
                  layout.fields.size());
    } else if (*stress) {
      StressGrid grid;
      grid.rotations_deg = parse_range(rotations);
      grid.translations = parse_range(translations);
      grid.scales = parse_range(scales);
      grid.cartesian = cartesian;
      const auto tables =
          stress_grid(template_path, config_from(config_path), grid, !sidecar_only, success_px);
      write_file(stress_out, format_stress_report(tables, grid, success_px));
      for (const auto& t : tables) {
        std::printf("%-8s %d/%zu cells succeeded, max corner error %.3f px\n",
                    std::string(to_string(t.backend)).c_str(), t.succeeded, t.cells.size(),
                    t.max_corner_error_px);
        for (const auto& b : t.boundaries) {
          if (b.tested.empty()) continue;
          if (b.low) {
            std::printf("  %-13s ok over [%g, %g]\n", b.factor.c_str(), *b.low, *b.high);
          } else {
            std::printf("  %-13s fails at identity\n", b.factor.c_str());
          }
        }
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "formpin: %s [%s]\n", e.what(), to_string(e.kind()));
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "formpin: %s\n", e.what());
    return 1;
  }
  return 0;
}
