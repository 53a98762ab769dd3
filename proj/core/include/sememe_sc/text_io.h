// Copyright 2026 The Sememe-SC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMEME_SC_TEXT_IO_H_
#define SEMEME_SC_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sememe_sc {

// Whole-file helpers. Both throw DataError on I/O failure.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Splits on `sep`, keeping empty fields ("a,,b" -> {"a", "", "b"}).
std::vector<std::string_view> SplitFields(std::string_view text, char sep);

// Splits into lines, dropping a trailing '\r' from each one. A final newline
// does not produce an empty trailing line.
std::vector<std::string_view> SplitLines(std::string_view text);

// True for blank lines and '#' comments.
bool IsSkippableLine(std::string_view line);

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

// Strict decimal parse of the whole field; false on trailing junk.
bool ParseDouble(std::string_view field, double* value);

}  // namespace sememe_sc

#endif  // SEMEME_SC_TEXT_IO_H_
