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

#ifndef NESTREC_TOOLS_CLI_H_
#define NESTREC_TOOLS_CLI_H_

#include <ostream>

namespace nestrec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;

// Runs one `nestrec` command line. Results go to `out` unless an output
// path is given; diagnostics and the JSON error line go to `err`.
int Run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace nestrec::cli

#endif  // NESTREC_TOOLS_CLI_H_
