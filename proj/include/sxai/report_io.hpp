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

#include <string>

#include "sxai/aggregate.hpp"
#include "sxai/attribution.hpp"
#include "sxai/faithfulness.hpp"

namespace sxai {

// JSON forms are stable (fixed key order, 2-space indent, trailing newline) so
// that identical inputs give byte-identical files. Parsers throw kFormat.

std::string AttributionReportToJson(const AttributionReport& report);
AttributionReport AttributionReportFromJson(const std::string& text);

std::string FaithfulnessReportToJson(const FaithfulnessReport& report);
FaithfulnessReport FaithfulnessReportFromJson(const std::string& text);

std::string GlobalSummaryToJson(const GlobalSummary& summary);
GlobalSummary GlobalSummaryFromJson(const std::string& text);

// head,word,class,mean,count,key
std::string WordSummaryToCsv(const GlobalWordSummary& summary);
// head,direction,mean,count
std::string ParalinguisticSummaryToCsv(const GlobalParalinguisticSummary& summary);

}  // namespace sxai
