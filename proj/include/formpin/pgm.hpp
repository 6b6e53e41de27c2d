#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "formpin/image.hpp"

namespace formpin {

// Binary PGM (P5). The header is "P5 <w> <h> <maxval>" separated by any
// whitespace, with '#' comments running to end of line, followed by exactly
// one whitespace byte and w*h raw bytes.

GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

GrayImage load_image(const std::filesystem::path& path);
void save_image(const GrayImage& img, const std::filesystem::path& path);

// Writes an ink mask as black-on-white so external tools can read it.
void save_mask(const BinaryImage& mask, const std::filesystem::path& path);

}  // namespace formpin
