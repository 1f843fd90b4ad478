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


#include "aerosurvey/archive/encode.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::archive {
namespace {

template <typename T>
cv::Mat wrap(const Image<T>& im) {
  constexpr int depth = sizeof(T) == 1 ? CV_8U : CV_16U;
  // OpenCV never writes through this header.
  return cv::Mat(im.height(), im.width(), CV_MAKETYPE(depth, im.channels()),
                 const_cast<T*>(im.pixels().data()));
}

template <typename T>
Image<T> unwrap(const cv::Mat& m) {
  Image<T> out(m.cols, m.rows, m.channels());
  const cv::Mat c = m.isContinuous() ? m : m.clone();
  std::copy_n(c.ptr<T>(), out.pixels().size(), out.pixels().begin());
  return out;
}

std::vector<std::uint8_t> encode(const std::string& ext, const cv::Mat& m, const std::vector<int>& params) {
  std::vector<std::uint8_t> buf;
  bool ok = false;
  try {
    ok = cv::imencode(ext, m, buf, params);
  } catch (const cv::Exception& e) {
    throw IoError(fmt::format("{} encoder: {}", ext, e.what()));
  }
  if (!ok) throw IoError(fmt::format("{} encoder failed", ext));
  return buf;
}

cv::Mat to_bgr(const cv::Mat& m) {
  if (m.channels() != 3) return m;
  cv::Mat bgr;
  cv::cvtColor(m, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

cv::Mat stretch_16(const Image16& im) {
  std::vector<std::uint16_t> v(im.pixels().begin(), im.pixels().end());
  double lo = 0.0, hi = 1.0;
  if (!v.empty()) {
    const auto at = [&](double q) {
      auto it = v.begin() + static_cast<std::ptrdiff_t>(q * static_cast<double>(v.size() - 1));
      std::nth_element(v.begin(), it, v.end());
      return static_cast<double>(*it);
    };
    lo = at(0.005);
    hi = at(0.995);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  cv::Mat out;
  wrap(im).convertTo(out, CV_8U, 255.0 / (hi - lo), -lo * 255.0 / (hi - lo));
  return out;
}

}  // namespace

std::string_view image_extension(geom::Band band) {
  switch (band) {
    case geom::Band::rgb: return ".jpg";
    case geom::Band::ir: return ".tif";
    case geom::Band::uv: return ".png";
  }
  return ".png";
}

std::vector<std::uint8_t> encode_image(const ImageBuffer& image, geom::Band band) {
  switch (band) {
    case geom::Band::rgb: {
      const auto* im = std::get_if<Image8>(&image);
      if (!im || im->channels() != 3) throw ValidationError("rgb frames must be 8-bit, 3 channels");
      return encode(".jpg", to_bgr(wrap(*im)), {cv::IMWRITE_JPEG_QUALITY, kJpegQuality});
    }
    case geom::Band::ir: {
      const auto* im = std::get_if<Image16>(&image);
      if (!im || im->channels() != 1) throw ValidationError("ir frames must be 16-bit, 1 channel");
      return encode(".tif", wrap(*im), {});
    }
    case geom::Band::uv: {
      const auto* im = std::get_if<Image8>(&image);
      if (!im || im->channels() != 1) throw ValidationError("uv frames must be 8-bit, 1 channel");
      return encode(".png", wrap(*im), {});
    }
  }
  throw ValidationError("unknown band");
}

std::vector<std::uint8_t> encode_lossless(const ImageBuffer& image, std::string_view* extension) {
  if (const auto* im16 = std::get_if<Image16>(&image)) {
    if (extension) *extension = ".tif";
    return encode(".tif", to_bgr(wrap(*im16)), {});
  }
  const auto& im8 = std::get<Image8>(image);
  if (extension) *extension = ".png";
  return encode(".png", to_bgr(wrap(im8)), {});
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes) {
  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8U, const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat m = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  if (m.empty()) throw IoError("image decoding failed");
  if (m.channels() == 3) cv::cvtColor(m, m, cv::COLOR_BGR2RGB);
  if (m.depth() == CV_16U) return unwrap<std::uint16_t>(m);
  if (m.depth() == CV_8U) return unwrap<std::uint8_t>(m);
  throw IoError("unsupported decoded pixel depth");
}

std::vector<std::uint8_t> encode_thumbnail(const ImageBuffer& image, int max_side, int quality) {
  if (max_side < 1) throw ValidationError("thumbnail size must be positive");
  cv::Mat m = std::visit(
      [](const auto& im) -> cv::Mat {
        using T = typename std::decay_t<decltype(im)>::value_type;
        if constexpr (sizeof(T) == 2) {
          return stretch_16(im);
        } else {
          return to_bgr(wrap(im));
        }
      },
      image);
  if (m.empty()) throw ValidationError("cannot thumbnail an empty image");
  const double scale = std::min(1.0, static_cast<double>(max_side) / std::max(m.cols, m.rows));
  cv::Mat small;
  if (scale < 1.0) {
    cv::resize(m, small, cv::Size(), scale, scale, cv::INTER_AREA);
  } else {
    small = m;
  }
  return encode(".jpg", small, {cv::IMWRITE_JPEG_QUALITY, quality});
}

}  // namespace aerosurvey::archive
