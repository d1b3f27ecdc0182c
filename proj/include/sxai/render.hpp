/*
 * Copyright 2026 The sxai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sxai/attribution.hpp"

namespace sxai {

enum class RenderFormat { kJson, kHtml, kSvg, kAnsi };

std::optional<RenderFormat> ParseRenderFormat(std::string_view name);

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Diverging scale anchored at 0: neutral grey at 0, reds for positive and
// blues for negative values, saturating at |value| = max_abs.
Rgb DivergingColor(double value, double max_abs);

// Word table (targets x words), paralinguistic table (targets x directions)
// and per-feature heatmaps (targets x grid parameters).
std::string RenderReport(const AttributionReport& report, RenderFormat format);

}  // namespace sxai
