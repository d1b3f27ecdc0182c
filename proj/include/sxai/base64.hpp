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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sxai {

std::string Base64Encode(std::span<const unsigned char> bytes);
// Returns nullopt on any character outside the standard alphabet or bad padding.
std::optional<std::vector<unsigned char>> Base64Decode(std::string_view text);

}  // namespace sxai
