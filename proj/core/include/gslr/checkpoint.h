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

#ifndef GSLR_CHECKPOINT_H_
#define GSLR_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "gslr/recovery.h"

namespace gslr {

// Canonical JSON of every config field.
std::string ConfigToJson(const RecoveryConfig& cfg);
RecoveryConfig ConfigFromJson(std::string_view json);

// FNV-1a over the canonical JSON with max_iters removed, so a run may be
// resumed with a larger iteration budget.
std::uint64_t ConfigHash(const RecoveryConfig& cfg);
std::string ConfigHashHex(const RecoveryConfig& cfg);

// Layout, little-endian:
//   "GSLRCKP1" | u32 json length | json metadata (config, hash, dims,
//   modes, counts, Adam scalars) | f64 params | f64 adam.m | f64 adam.v |
//   f64 trace (iter, loss, data, reg per record) | u32 crc32 of all
//   preceding bytes.
std::string EncodeCheckpoint(const RecoveryConfig& cfg, const TrainingState& st);

struct LoadedCheckpoint {
  RecoveryConfig config;
  TrainingState state;
};

// Throws FormatError on bad magic, truncation or checksum mismatch.
LoadedCheckpoint DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::string& path, const RecoveryConfig& cfg,
                    const TrainingState& st);
LoadedCheckpoint LoadCheckpoint(const std::string& path);

// Loads and fails with ConfigError when the stored config hash differs from
// ConfigHash(expected).
TrainingState LoadCheckpointFor(const std::string& path,
                                const RecoveryConfig& expected);

}  // namespace gslr

#endif  // GSLR_CHECKPOINT_H_
