// Copyright 2026 The swbcodec Authors
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

#ifndef SWBCODEC_TOOLS_CLI_H_
#define SWBCODEC_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace swbcodec::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitFormat = 3,
  kExitWeights = 4,
  kExitIo = 5,
};

// Entry point behind the `swbcodec` binary; args excludes argv[0].
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swbcodec::cli

#endif  // SWBCODEC_TOOLS_CLI_H_
