// Copyright 2026 The score-re Authors.
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

#ifndef SCORE_CLI_H_
#define SCORE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace score {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;  // validation, configuration, usage
inline constexpr int kExitIo = 2;

// Entry point of the score-re tool. args[0] is the program name.
int run_command(const std::vector<std::string> &args, std::ostream &out,
                std::ostream &err);

}  // namespace score

#endif  // SCORE_CLI_H_
