#include "formpin/ocr.hpp"

#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "formpin/error.hpp"
#include "formpin/pgm.hpp"
#include "json.hpp"

extern char** environ;

namespace formpin {

namespace {

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  s = trim(s);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void validate_page(const OcrPage& page) {
  if (page.image_w < 1 || page.image_h < 1) throw OcrError("page has no size");
  for (const auto& w : page.words) {
    if (w.text.empty() || has_space(w.text)) {
      throw OcrError("word text must be non-empty without whitespace: '" + w.text + "'");
    }
    if (!w.box.inside(page.image_w, page.image_h)) {
      throw OcrError("box of '" + w.text + "' lies outside the " +
                     std::to_string(page.image_w) + "x" + std::to_string(page.image_h) +
                     " page");
    }
  }
}

OcrPage rescale_page(const OcrPage& page, int new_w, int new_h) {
  if (new_w < 1 || new_h < 1) throw InputError("rescale target must be positive");
  if (page.image_w == new_w && page.image_h == new_h) return page;
  const double sx = static_cast<double>(new_w) / page.image_w;
  const double sy = static_cast<double>(new_h) / page.image_h;
  OcrPage out{{}, new_w, new_h};
  for (const auto& w : page.words) {
    const int x0 = std::clamp(static_cast<int>(std::floor(w.box.x * sx)), 0, new_w - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(w.box.y * sy)), 0, new_h - 1);
    const int x1 = std::clamp(static_cast<int>(std::ceil(w.box.right() * sx)), x0 + 1, new_w);
    const int y1 = std::clamp(static_cast<int>(std::ceil(w.box.bottom() * sy)), y0 + 1, new_h);
    out.words.push_back({w.text, {x0, y0, x1 - x0, y1 - y0}, w.confidence});
  }
  return out;
}

// --- sidecar ----------------------------------------------------------------

OcrPage parse_sidecar(std::string_view json_text, int image_w, int image_h) {
  OcrPage page{{}, image_w, image_h};
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (j.contains("image_w") && j.at("image_w").get<int>() != image_w) {
      throw OcrError("sidecar image_w " + std::to_string(j.at("image_w").get<int>()) +
                     " does not match image width " + std::to_string(image_w));
    }
    if (j.contains("image_h") && j.at("image_h").get<int>() != image_h) {
      throw OcrError("sidecar image_h " + std::to_string(j.at("image_h").get<int>()) +
                     " does not match image height " + std::to_string(image_h));
    }
    for (const auto& w : j.at("words")) {
      page.words.push_back({w.at("text").get<std::string>(),
                            {w.at("x").get<int>(), w.at("y").get<int>(), w.at("w").get<int>(),
                             w.at("h").get<int>()},
                            100.0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw OcrError(std::string("malformed sidecar: ") + e.what());
  }
  validate_page(page);
  return page;
}

OcrPage read_words_sidecar(const std::filesystem::path& path, int image_w, int image_h) {
  if (!std::filesystem::exists(path)) throw IoError("sidecar not found: " + path.string());
  try {
    return parse_sidecar(read_text_file(path), image_w, image_h);
  } catch (const OcrError& e) {
    throw OcrError(path.string() + ": " + e.what());
  }
}

std::string format_sidecar(const OcrPage& page) {
  nlohmann::json words = nlohmann::json::array();
  for (const auto& w : page.words) {
    words.push_back({{"text", w.text}, {"x", w.box.x}, {"y", w.box.y}, {"w", w.box.w},
                     {"h", w.box.h}});
  }
  const nlohmann::json j = {
      {"image_w", page.image_w}, {"image_h", page.image_h}, {"words", words}};
  return j.dump(1) + "\n";
}

void write_words_sidecar(const OcrPage& page, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_sidecar(page);
  if (!out) throw IoError("write failed: " + path.string());
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& image_path) {
  auto p = image_path;
  return p.replace_extension(".json");
}

// --- TSV --------------------------------------------------------------------

std::vector<WordBox> parse_ocr_tsv(std::string_view tsv_text) {
  static constexpr std::string_view kColumns[] = {
      "level", "page_num", "block_num", "par_num", "line_num", "word_num",
      "left",  "top",      "width",     "height",  "conf",     "text"};

  std::vector<std::string_view> lines = split(tsv_text, '\n');
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i == lines.size()) throw OcrError("TSV output is empty (missing header)");

  auto header_line = lines[i++];
  if (!header_line.empty() && header_line.back() == '\r') header_line.remove_suffix(1);
  const auto header = split(header_line, '\t');
  if (header.size() < 12) throw OcrError("TSV header has fewer than 12 columns");
  for (std::size_t c = 0; c < 12; ++c) {
    if (trim(header[c]) != kColumns[c]) {
      throw OcrError("TSV header column " + std::to_string(c + 1) + " is '" +
                     std::string(header[c]) + "', expected '" + std::string(kColumns[c]) + "'");
    }
  }

  std::vector<WordBox> words;
  for (; i < lines.size(); ++i) {
    auto line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() < 11) {
      throw OcrError("TSV row " + std::to_string(i + 1) + " has " + std::to_string(f.size()) +
                     " fields");
    }
    int level = 0, left = 0, top = 0, width = 0, height = 0;
    double conf = 0.0;
    if (!parse_number(f[0], level) || !parse_number(f[6], left) || !parse_number(f[7], top) ||
        !parse_number(f[8], width) || !parse_number(f[9], height)) {
      throw OcrError("TSV row " + std::to_string(i + 1) + " has a non-numeric geometry field");
    }
    if (!parse_number(f[10], conf)) {
      throw OcrError("TSV row " + std::to_string(i + 1) + " has a non-numeric confidence");
    }
    if (level != 5 || conf < 0.0) continue;
    const auto text = f.size() > 11 ? trim(f[11]) : std::string_view{};
    if (text.empty() || has_space(text)) continue;
    if (left < 0 || top < 0 || width < 1 || height < 1) continue;
    words.push_back({std::string(text), {left, top, width, height}, std::min(conf, 100.0)});
  }
  return words;
}

// --- subprocess -------------------------------------------------------------

std::string OcrProcessConfig::resolved_binary() const {
  if (const char* env = std::getenv("FORMPIN_OCR_BIN"); env && *env) return env;
  return binary;
}

ProcessResult run_process(const std::vector<std::string>& argv) {
  if (argv.empty()) throw InputError("empty command line");
  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0) throw OcrError(std::string("pipe: ") + std::strerror(errno));
  if (pipe(err_pipe) != 0) {
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw OcrError(std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);
  for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) {
    posix_spawn_file_actions_addclose(&actions, fd);
  }

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(out_pipe[1]);
  close(err_pipe[1]);
  if (rc != 0) {
    close(out_pipe[0]);
    close(err_pipe[0]);
    throw OcrError("cannot launch OCR binary '" + argv[0] + "': " + std::strerror(rc));
  }

  ProcessResult result;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  int open_fds = 2;
  char buf[65536];
  while (open_fds > 0) {
    if (poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int k = 0; k < 2; ++k) {
      if (fds[k].fd < 0 || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = read(fds[k].fd, buf, sizeof buf);
      if (n > 0) {
        sinks[k]->append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        close(fds[k].fd);
        fds[k].fd = -1;
        --open_fds;
      }
    }
  }
  for (auto& f : fds) {
    if (f.fd >= 0) close(f.fd);
  }

  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw OcrError(std::string("waitpid: ") + std::strerror(errno));
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  }
  return result;
}

OcrPage read_words_external(const std::filesystem::path& image_path,
                            const OcrProcessConfig& config) {
  const auto img = load_image(image_path);
  const std::string bin = config.resolved_binary();
  std::vector<std::string> argv = {bin, image_path.string(), "stdout", "--psm",
                                   std::to_string(config.psm)};
  argv.insert(argv.end(), config.extra_args.begin(), config.extra_args.end());
  argv.push_back("tsv");

  const auto result = run_process(argv);
  // some libcs report a failed exec as a child exiting with 127
  if (result.exit_code == 127 && result.out.empty()) {
    throw OcrError("cannot launch OCR binary '" + bin + "' (exit 127)");
  }
  if (result.exit_code != 0) {
    auto tail = result.err.substr(0, 400);
    throw OcrError("OCR binary '" + bin + "' exited with code " +
                   std::to_string(result.exit_code) + (tail.empty() ? "" : ": " + tail));
  }

  OcrPage page{parse_ocr_tsv(result.out), img.width(), img.height()};
  // engines occasionally report boxes a pixel past the edge
  for (auto& w : page.words) {
    const int x1 = std::min(w.box.right(), page.image_w);
    const int y1 = std::min(w.box.bottom(), page.image_h);
    w.box.x = std::min(w.box.x, page.image_w - 1);
    w.box.y = std::min(w.box.y, page.image_h - 1);
    w.box.w = std::max(1, x1 - w.box.x);
    w.box.h = std::max(1, y1 - w.box.y);
  }
  validate_page(page);
  return page;
}

bool external_ocr_available(const OcrProcessConfig& config) {
  try {
    return run_process({config.resolved_binary(), "--version"}).exit_code == 0;
  } catch (const Error&) {
    return false;
  }
}

// --- lexicon ----------------------------------------------------------------

Lexicon::Lexicon(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    const auto t = trim(w);
    if (!t.empty()) entries_.insert(to_lower(t));
  }
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string> words;
  for (auto line : split(text, '\n')) words.emplace_back(trim(line));
  return Lexicon(words);
}

bool Lexicon::contains(std::string_view word) const {
  return entries_.contains(to_lower(word));
}

std::filesystem::path default_lexicon_path() {
  if (const char* env = std::getenv("FORMPIN_DATA_DIR"); env && *env) {
    return std::filesystem::path(env) / "lexicon.txt";
  }
  return std::filesystem::path(FORMPIN_DATA_DIR) / "lexicon.txt";
}

}  // namespace formpin
