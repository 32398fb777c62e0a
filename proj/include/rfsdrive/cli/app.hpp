// Copyright 2026 The rfsdrive Authors
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

#ifndef RFSDRIVE__CLI__APP_HPP_
#define RFSDRIVE__CLI__APP_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace rfsdrive::cli
{

enum ExitCode : int
{
  kOk = 0,
  kFailure = 1,  // runtime error, diagnostic on stderr
  kUsage = 2,
  kGradCheckAboveThreshold = 3,
};

inline constexpr double kGradCheckThreshold = 1e-5;

/// Subcommands gen, train, eval, gradcheck and score. args excludes the
/// program name.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace rfsdrive::cli

#endif  // RFSDRIVE__CLI__APP_HPP_
