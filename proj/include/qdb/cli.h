// Copyright 2026 The QDB Lab Authors
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

#ifndef QDB_CLI_H_
#define QDB_CLI_H_

#include <iosfwd>

namespace qdb {

// Exit codes of the qdb command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // invariant violation or I/O error
inline constexpr int kExitUsage = 2;    // bad arguments
inline constexpr int kExitRegime = 3;   // bound or sizing outside its regime

// Environment variable naming the directory for relative --out paths.
inline constexpr char kOutputDirEnv[] = "QDB_OUTPUT_DIR";

// Entry point of the qdb tool. Results go to `out` (or to --out files),
// diagnostics and usage text to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdb

#endif  // QDB_CLI_H_
