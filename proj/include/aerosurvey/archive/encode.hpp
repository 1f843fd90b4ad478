// Copyright 2026 The aerosurvey Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Image codecs for archived frames and thumbnails.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aerosurvey/core/image.hpp"
#include "aerosurvey/geom/camera.hpp"

namespace aerosurvey::archive {

inline constexpr int kJpegQuality = 95;

/// ".jpg", ".tif" or ".png".
std::string_view image_extension(geom::Band band);

/// RGB as JPEG (quality 95), IR as 16-bit TIFF, UV as PNG. Throws
/// ValidationError when the buffer does not match the band's pixel format
/// and IoError when the codec fails.
std::vector<std::uint8_t> encode_image(const ImageBuffer& image, geom::Band band);

/// Lossless: 8-bit frames as PNG, 16-bit frames as TIFF. Returns the
/// bytes and sets `extension`.
std::vector<std::uint8_t> encode_lossless(const ImageBuffer& image, std::string_view* extension = nullptr);

/// Decodes any of the above; 3-channel results are RGB ordered.
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);

/// 8-bit JPEG no larger than max_side on either axis. 16-bit images are
/// stretched between their 0.5th and 99.5th percentiles first.
std::vector<std::uint8_t> encode_thumbnail(const ImageBuffer& image, int max_side = 256, int quality = 80);

}  // namespace aerosurvey::archive
