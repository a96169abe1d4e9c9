// Copyright 2026 The predbench Authors.
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

// The predbench command line: build | score | grid | nas | report.

#ifndef PREDBENCH_TOOLS_CLI_HPP_
#define PREDBENCH_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace predbench::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// `args` excludes the program name. Progress and log lines go to `err`;
// failures end with one JSON line {"error":{"code":..,"message":..}} on
// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace predbench::cli

#endif  // PREDBENCH_TOOLS_CLI_HPP_
