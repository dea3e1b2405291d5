// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "uqx/image.hpp"

namespace uqx {

/// Decodes an 8/16-bit PNG or PGM file to grayscale intensities in [0,1].
/// Colour inputs are converted with Rec.709 luma weights; integer max maps
/// to 1.0. Throws IoError on anything unreadable or unsupported.
Image read_image(const std::filesystem::path& path);

Image decode_png(const std::vector<std::uint8_t>& bytes);
Image decode_pgm(const std::vector<std::uint8_t>& bytes);

/// Writes a 16-bit grayscale PNG; pixels are clamped to [0,1], 1.0 -> 65535.
void write_png16(const std::filesystem::path& path, const Image& img);
void write_pgm16(const std::filesystem::path& path, const Image& img);

std::vector<std::uint8_t> encode_png16(const Image& img);

}  // namespace uqx
