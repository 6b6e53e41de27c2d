#include "formpin/image.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

#include "formpin/error.hpp"

namespace formpin {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::Ocr: return "OcrError";
    case ErrorKind::Match: return "MatchError";
    case ErrorKind::Estimate: return "EstimateError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw InputError("image dimensions must be positive, got " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

template <typename Tag>
Raster<Tag>::Raster(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  if constexpr (std::is_same_v<Tag, BinaryTag>) {
    if (fill > 1) throw InputError("binary image fill must be 0 or 1");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

template <typename Tag>
Raster<Tag>::Raster(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("pixel buffer holds " + std::to_string(data_.size()) +
                     " values, expected " +
                     std::to_string(static_cast<std::size_t>(width) * height));
  }
  if constexpr (std::is_same_v<Tag, BinaryTag>) {
    if (std::any_of(data_.begin(), data_.end(), [](auto v) { return v > 1; })) {
      throw InputError("binary image values must be 0 or 1");
    }
  }
}

template class Raster<GrayTag>;
template class Raster<BinaryTag>;

}  // namespace formpin
