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

#ifndef GSLR_INIT_H_
#define GSLR_INIT_H_

#include <string_view>

namespace gslr {

// Placement of primitive centers at initialization. kUniform draws them
// uniformly at random; kGrid spaces them evenly over the domain.
enum class InitLayout { kUniform, kGrid };

std::string_view InitLayoutName(InitLayout l);
// Throws ConfigError for unknown names.
InitLayout ParseInitLayout(std::string_view s);

}  // namespace gslr

#endif  // GSLR_INIT_H_
