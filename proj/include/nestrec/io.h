// Copyright 2026 The Nestrec Authors.
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

#ifndef NESTREC_IO_H_
#define NESTREC_IO_H_

#include <string>
#include <string_view>
#include <vector>

namespace nestrec {

// Throws IoError if the file cannot be read.
std::string ReadFile(const std::string &path);

// Writes to a temporary sibling file, flushes it to disk and renames it
// over `path`.
void WriteFileAtomic(const std::string &path, std::string_view contents);

// Appends one line plus '\n' and fsyncs before returning.
void AppendLineDurable(const std::string &path, std::string_view line);

std::vector<std::string_view> SplitLines(std::string_view text);
std::vector<std::string_view> Split(std::string_view text, char sep);

}  // namespace nestrec

#endif  // NESTREC_IO_H_
