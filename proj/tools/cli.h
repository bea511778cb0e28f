/*
Copyright 2026 The GSLR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef GSLR_TOOLS_CLI_H_
#define GSLR_TOOLS_CLI_H_

#include <ostream>

namespace gslr::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

// Runs the gslr command line. Results go to out; the resolved config, progress
// and the final one-line failure reason ("error kind=<k> reason=<text>") go
// to err.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gslr::cli

#endif  // GSLR_TOOLS_CLI_H_
