// Copyright 2026 The adbench Authors.
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

#ifndef ADBENCH_CSV_HPP_
#define ADBENCH_CSV_HPP_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace adbench {

using CsvRow = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may hold commas, quotes ("") and newlines.
/// Blank lines are skipped. A trailing '\r' is dropped.
std::vector<CsvRow> read_csv(std::istream& in);
std::vector<CsvRow> read_csv_file(const std::filesystem::path& path);

/// Quotes a field only when it needs it.
std::string csv_field(std::string_view text);
std::string csv_line(const CsvRow& fields);

/// Writes `content` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace adbench

#endif  // ADBENCH_CSV_HPP_
