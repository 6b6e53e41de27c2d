#include "formpin/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

#include "formpin/error.hpp"
#include "formpin/raster.hpp"

namespace formpin {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw InputError(std::string("malformed PGM header: expected ") + what);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000) {
        throw InputError(std::string("malformed PGM header: ") + what + " too large");
      }
      ++pos_;
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw InputError("malformed PGM header: missing P5 magic");
  }
  HeaderReader reader(bytes.subspan(2));
  const long width = reader.number("width");
  const long height = reader.number("height");
  const long maxval = reader.number("maxval");
  if (width < 1 || height < 1) {
    throw InputError("malformed PGM header: zero dimension");
  }
  if (maxval < 1) throw InputError("malformed PGM header: maxval must be positive");
  if (maxval > 255) {
    throw InputError("unsupported PGM bit depth: maxval " + std::to_string(maxval) +
                     " is not 8-bit");
  }
  // exactly one whitespace byte separates header from raster
  std::size_t offset = 2 + reader.pos();
  if (offset >= bytes.size() || !std::isspace(bytes[offset])) {
    throw InputError("malformed PGM header: missing separator before raster");
  }
  ++offset;
  const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t available = bytes.size() - offset;
  if (available < expected) {
    throw InputError("truncated PGM: header advertises " + std::to_string(expected) +
                     " pixels but only " + std::to_string(available) +
                     " payload bytes present");
  }
  std::vector<std::uint8_t> data(bytes.begin() + offset, bytes.begin() + offset + expected);
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_pgm(bytes);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_pgm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write image '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_mask(const BinaryImage& mask, const std::filesystem::path& path) {
  save_image(mask_to_gray(mask), path);
}

}  // namespace formpin
