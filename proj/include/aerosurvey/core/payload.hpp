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


#pragma once

#include <memory>

#include "aerosurvey/core/image.hpp"

namespace aerosurvey {

/// Source of a frame's pixels. Simulated frames render on demand, so a
/// window can be produced without materializing the whole image.
class FramePayload {
 public:
  virtual ~FramePayload() = default;

  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual ImageBuffer render() const = 0;
  /// Must equal the same window cropped from render().
  virtual ImageBuffer render_window(const PixelWindow& window) const;
};

using PayloadRef = std::shared_ptr<const FramePayload>;

/// Payload backed by an in-memory buffer.
class BufferPayload final : public FramePayload {
 public:
  explicit BufferPayload(ImageBuffer image) : image_(std::move(image)) {}

  int width() const override { return image_width(image_); }
  int height() const override { return image_height(image_); }
  ImageBuffer render() const override { return image_; }
  ImageBuffer render_window(const PixelWindow& window) const override;

 private:
  ImageBuffer image_;
};

template <typename T>
Image<T> crop(const Image<T>& src, const PixelWindow& w) {
  Image<T> out(w.width, w.height, src.channels());
  const int c = src.channels();
  for (int y = 0; y < w.height; ++y) {
    const auto in = src.row(w.y0 + y).subspan(static_cast<std::size_t>(w.x0) * c,
                                             static_cast<std::size_t>(w.width) * c);
    std::copy(in.begin(), in.end(), out.row(y).begin());
  }
  return out;
}

ImageBuffer crop(const ImageBuffer& src, const PixelWindow& w);

}  // namespace aerosurvey
