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


#include "aerosurvey/core/payload.hpp"

#include <fmt/format.h>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey {
namespace {

void check_window(const PixelWindow& w, int width, int height) {
  if (w.x0 < 0 || w.y0 < 0 || w.width <= 0 || w.height <= 0 || w.x0 + w.width > width ||
      w.y0 + w.height > height) {
    throw SizeError(fmt::format("window ({}, {}, {}, {}) outside {}x{} frame", w.x0, w.y0, w.width,
                                w.height, width, height));
  }
}

}  // namespace

ImageBuffer crop(const ImageBuffer& src, const PixelWindow& w) {
  check_window(w, image_width(src), image_height(src));
  return std::visit([&](const auto& im) -> ImageBuffer { return crop(im, w); }, src);
}

ImageBuffer FramePayload::render_window(const PixelWindow& window) const {
  return crop(render(), window);
}

ImageBuffer BufferPayload::render_window(const PixelWindow& window) const {
  return crop(image_, window);
}

}  // namespace aerosurvey
