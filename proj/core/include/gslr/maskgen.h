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

#ifndef GSLR_MASKGEN_H_
#define GSLR_MASKGEN_H_

#include <cstddef>
#include <cstdint>

#include "gslr/tensor.h"

namespace gslr {

// Exactly round(sr * h*w*b) observed entries drawn uniformly without
// replacement. sr must lie in (0, 1].
Mask3 RandomMask(std::size_t h, std::size_t w, std::size_t b, double sr,
                 std::uint64_t seed);

// Exactly round(sr * h*w) fully observed mode-3 tubes; all others missing.
Mask3 TubeMask(std::size_t h, std::size_t w, std::size_t b, double sr,
               std::uint64_t seed);

// First five and last five bands observed, the rest missing. Requires b > 10.
Mask3 SliceMask(std::size_t h, std::size_t w, std::size_t b);

// A x_3 T for a smooth non-negative latent A (h x w x r, sums of wide 2D
// bumps) and a smooth non-negative T (b x r), scaled so the maximum is 1.
// Mode-3 rank is at most r.
Tensor3 SynthLowTubalRank(std::size_t h, std::size_t w, std::size_t b,
                          std::size_t r, std::uint64_t seed);

// Reconstruction of a random Gaussian-splatting model with n 2D and k 1D
// primitives and positive features, scaled so the maximum is 1. The result is
// exactly representable by a model of that capacity.
Tensor3 SynthFromSplatting(std::size_t h, std::size_t w, std::size_t b,
                           std::size_t n, std::size_t k, std::size_t r,
                           std::uint64_t seed);

}  // namespace gslr

#endif  // GSLR_MASKGEN_H_
