/*
 * Copyright 2026 The Readlens Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Every subcommand returns 0 when all inputs were
// processed, 1 when some input failed and 2 on usage or configuration
// errors.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace readlens::cli {

inline constexpr int kOk = 0;
inline constexpr int kPartial = 1;
inline constexpr int kUsage = 2;

// `args` excludes the program name. "-" as an output path means `out`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Flat key=value file; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

}  // namespace readlens::cli
