// Copyright (c) 2026, The alphakit Authors. All rights reserved.
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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alphakit {

/// Shortest decimal text that round-trips the double.
std::string format_number(double value);

/// format_number, or "nan" for an undefined value.
std::string format_optional(const std::optional<double>& value);

/// Parses a number written by format_optional; "nan" maps to nullopt.
std::optional<double> parse_optional(std::string_view text);

using CsvRow = std::vector<std::string>;

/// Plain comma-separated rows; fields may be double-quoted.
std::vector<CsvRow> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// FNV-1a 64 of a file's bytes, as 16 hex digits.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace alphakit
