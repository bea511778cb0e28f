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

#include "gslr/init.h"

#include <string>

#include "gslr/error.h"

namespace gslr {

std::string_view InitLayoutName(InitLayout l) {
  return l == InitLayout::kGrid ? "grid" : "uniform";
}

InitLayout ParseInitLayout(std::string_view s) {
  if (s == "uniform") return InitLayout::kUniform;
  if (s == "grid") return InitLayout::kGrid;
  throw ConfigError("unknown init layout '" + std::string(s) + "'");
}

}  // namespace gslr
