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

#include "gslr/checkpoint.h"

#include <zlib.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <json.hpp>

#include "gslr/error.h"
#include "gslr/io.h"

namespace gslr {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kMagic = "GSLRCKP1";

ordered_json ConfigObject(const RecoveryConfig& c) {
  ordered_json j;
  j["n_primitives_2d"] = c.n_primitives_2d;
  j["k_primitives_1d"] = c.k_primitives_1d;
  j["latent_depth"] = c.latent_depth;
  j["factor_rank"] = c.factor_rank;
  j["lambda"] = c.lambda;
  j["max_iters"] = c.max_iters;
  j["base_lr"] = c.base_lr;
  ordered_json scales = ordered_json::object();
  for (std::size_t g = 0; g < kNumParamGroups; ++g)
    scales[std::string(ParamGroupName(static_cast<ParamGroup>(g)))] =
        c.group_lr_scale[g];
  j["group_lr_scale"] = scales;
  j["seed"] = c.seed;
  j["reg_stride"] = c.reg_stride;
  j["subgrad_tol"] = c.subgrad_tol;
  j["init_feat_std"] = c.init_feat_std;
  j["init_layout"] = std::string(InitLayoutName(c.init_layout));
  j["plateau_window"] = c.plateau_window;
  j["plateau_tol"] = c.plateau_tol;
  j["render"] = {{"tile", c.render.tile},
                 {"cutoff_sigmas", c.render.cutoff_sigmas},
                 {"naive_mode", c.render.naive_mode}};
  j["latent_mode"] = std::string(LatentModeName(c.latent_mode));
  j["transform_mode"] = std::string(TransformModeName(c.transform_mode));
  return j;
}

// JSON has no infinity; the cutoff is stored as null when infinite.
ordered_json Sanitize(ordered_json j) {
  auto& cut = j["render"]["cutoff_sigmas"];
  if (cut.is_number() && std::isinf(cut.get<double>())) cut = nullptr;
  return j;
}

RecoveryConfig ConfigFromObject(const ordered_json& j) {
  RecoveryConfig c;
  c.n_primitives_2d = j.at("n_primitives_2d");
  c.k_primitives_1d = j.at("k_primitives_1d");
  c.latent_depth = j.at("latent_depth");
  c.factor_rank = j.at("factor_rank");
  c.lambda = j.at("lambda");
  c.max_iters = j.at("max_iters");
  c.base_lr = j.at("base_lr");
  for (std::size_t g = 0; g < kNumParamGroups; ++g)
    c.group_lr_scale[g] = j.at("group_lr_scale")
                              .at(std::string(ParamGroupName(static_cast<ParamGroup>(g))));
  c.seed = j.at("seed");
  c.reg_stride = j.at("reg_stride");
  c.subgrad_tol = j.at("subgrad_tol");
  c.init_feat_std = j.at("init_feat_std");
  c.init_layout = ParseInitLayout(j.at("init_layout").get<std::string>());
  c.plateau_window = j.at("plateau_window");
  c.plateau_tol = j.at("plateau_tol");
  const auto& r = j.at("render");
  c.render.tile = r.at("tile");
  c.render.cutoff_sigmas = r.at("cutoff_sigmas").is_null()
                               ? std::numeric_limits<double>::infinity()
                               : r.at("cutoff_sigmas").get<double>();
  c.render.naive_mode = r.at("naive_mode");
  c.latent_mode = ParseLatentMode(j.at("latent_mode").get<std::string>());
  c.transform_mode = ParseTransformMode(j.at("transform_mode").get<std::string>());
  return c;
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

void PutF64(std::string& out, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  for (int s = 0; s < 64; s += 8) out.push_back(static_cast<char>((u >> s) & 0xff));
}

std::uint64_t GetLE(std::string_view b, std::size_t off, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[off + i])) << (8 * i);
  return v;
}

std::uint32_t Crc32(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

class Reader {
 public:
  explicit Reader(std::string_view b) : bytes_(b) {}
  void Need(std::size_t n, const char* what) const {
    if (bytes_.size() < off_ + n) {
      throw FormatError(std::string("checkpoint: truncated ") + what +
                        " at byte offset " + std::to_string(off_) + " (missing " +
                        std::to_string(off_ + n - bytes_.size()) + " bytes)");
    }
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    const auto v = static_cast<std::uint32_t>(GetLE(bytes_, off_, 4));
    off_ += 4;
    return v;
  }
  std::string_view Take(std::size_t n, const char* what) {
    Need(n, what);
    auto s = bytes_.substr(off_, n);
    off_ += n;
    return s;
  }
  void F64s(std::vector<double>& out, std::size_t n, const char* what) {
    Need(8 * n, what);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = std::bit_cast<double>(GetLE(bytes_, off_ + 8 * i, 8));
    off_ += 8 * n;
  }
  std::size_t offset() const { return off_; }

 private:
  std::string_view bytes_;
  std::size_t off_ = 0;
};

}  // namespace

std::string ConfigToJson(const RecoveryConfig& cfg) {
  return Sanitize(ConfigObject(cfg)).dump();
}

RecoveryConfig ConfigFromJson(std::string_view json) {
  try {
    return ConfigFromObject(ordered_json::parse(json));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config json: ") + e.what());
  }
}

std::uint64_t ConfigHash(const RecoveryConfig& cfg) {
  ordered_json j = Sanitize(ConfigObject(cfg));
  j.erase("max_iters");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string ConfigHashHex(const RecoveryConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(ConfigHash(cfg)));
  return buf;
}

std::string EncodeCheckpoint(const RecoveryConfig& cfg, const TrainingState& st) {
  const GslrModel& m = st.model;
  ordered_json meta;
  meta["config"] = Sanitize(ConfigObject(cfg));
  meta["config_hash"] = ConfigHashHex(cfg);
  meta["dims"] = {m.dims.h, m.dims.w, m.dims.b, m.dims.r};
  meta["latent_mode"] = std::string(LatentModeName(m.latent_mode));
  meta["transform_mode"] = std::string(TransformModeName(m.transform_mode));
  meta["factor_rank"] = m.factor_rank;
  meta["n2d"] = m.field2d.n;
  meta["k1d"] = m.bank1d.k;
  meta["param_count"] = m.ParameterCount();
  meta["iteration"] = st.iteration;
  meta["trace_len"] = st.trace.size();
  meta["adam"] = {{"step", st.adam.step},
                  {"beta1", st.adam.beta1},
                  {"beta2", st.adam.beta2},
                  {"eps", st.adam.eps},
                  {"base_lr", st.adam.base_lr},
                  {"group_lr_scale", st.adam.group_lr_scale},
                  {"skipped_steps", st.adam.skipped_steps}};
  const std::string json = meta.dump();

  std::string out(kMagic);
  PutU32(out, static_cast<std::uint32_t>(json.size()));
  out += json;
  for (double v : m.Flatten()) PutF64(out, v);
  for (double v : st.adam.m) PutF64(out, v);
  for (double v : st.adam.v) PutF64(out, v);
  for (const IterRecord& r : st.trace) {
    PutF64(out, static_cast<double>(r.iter));
    PutF64(out, r.loss);
    PutF64(out, r.data_term);
    PutF64(out, r.reg_term);
  }
  PutU32(out, Crc32(out));
  return out;
}

LoadedCheckpoint DecodeCheckpoint(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic)
    throw FormatError("checkpoint: bad magic at byte offset 0");
  if (bytes.size() < kMagic.size() + 8)
    throw FormatError("checkpoint: truncated header");
  const std::size_t body = bytes.size() - 4;
  const auto stored = static_cast<std::uint32_t>(GetLE(bytes, body, 4));
  const std::uint32_t actual = Crc32(bytes.substr(0, body));
  if (stored != actual) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "checkpoint: checksum mismatch at byte offset %zu "
                  "(stored %08x, computed %08x)",
                  body, stored, actual);
    throw FormatError(buf);
  }

  Reader rd(bytes.substr(0, body));
  rd.Take(kMagic.size(), "magic");
  const std::uint32_t json_len = rd.U32("metadata length");
  ordered_json meta;
  try {
    meta = ordered_json::parse(rd.Take(json_len, "metadata"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint: metadata: ") + e.what());
  }

  LoadedCheckpoint out;
  try {
    out.config = ConfigFromObject(meta.at("config"));
    if (meta.at("config_hash").get<std::string>() != ConfigHashHex(out.config))
      throw FormatError("checkpoint: stored config does not match its hash");

    GslrModel& m = out.state.model;
    const auto dims = meta.at("dims");
    m.dims = {dims[0], dims[1], dims[2], dims[3]};
    m.latent_mode = ParseLatentMode(meta.at("latent_mode").get<std::string>());
    m.transform_mode =
        ParseTransformMode(meta.at("transform_mode").get<std::string>());
    m.factor_rank = meta.at("factor_rank");
    const std::size_t h = m.dims.h, w = m.dims.w, b = m.dims.b, r = m.dims.r;
    switch (m.latent_mode) {
      case LatentMode::kGaussian2D:
        m.field2d = Gaussian2DField(meta.at("n2d").get<std::size_t>(), r);
        break;
      case LatentMode::kUnconstrained:
        m.latent = Tensor3(h, w, r);
        break;
      case LatentMode::kLowRankFactor:
        m.factor_p.resize(r * h * m.factor_rank);
        m.factor_q.resize(r * w * m.factor_rank);
        break;
    }
    switch (m.transform_mode) {
      case TransformMode::kGaussian1D:
        m.bank1d = Gaussian1DBank(r, meta.at("k1d").get<std::size_t>());
        break;
      case TransformMode::kUnconstrained:
        m.transform = Matrix(b, r);
        break;
      case TransformMode::kFixedIdentity:
        break;
    }
    const std::size_t count = meta.at("param_count");
    if (count != m.ParameterCount())
      throw FormatError("checkpoint: parameter count does not match layout");

    std::vector<double> params;
    rd.F64s(params, count, "parameters");
    m.Assign(params);

    AdamState& a = out.state.adam;
    const auto& am = meta.at("adam");
    a.step = am.at("step");
    a.beta1 = am.at("beta1");
    a.beta2 = am.at("beta2");
    a.eps = am.at("eps");
    a.base_lr = am.at("base_lr");
    a.group_lr_scale = am.at("group_lr_scale");
    a.skipped_steps = am.at("skipped_steps");
    rd.F64s(a.m, count, "adam first moments");
    rd.F64s(a.v, count, "adam second moments");

    out.state.iteration = meta.at("iteration");
    const std::size_t trace_len = meta.at("trace_len");
    std::vector<double> trace;
    rd.F64s(trace, 4 * trace_len, "trace");
    out.state.trace.resize(trace_len);
    for (std::size_t i = 0; i < trace_len; ++i) {
      out.state.trace[i] = {static_cast<std::size_t>(trace[4 * i]), trace[4 * i + 1],
                            trace[4 * i + 2], trace[4 * i + 3]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint: metadata: ") + e.what());
  }
  if (rd.offset() != body) {
    throw FormatError("checkpoint: " + std::to_string(body - rd.offset()) +
                      " unexpected bytes before checksum");
  }
  return out;
}

void SaveCheckpoint(const std::string& path, const RecoveryConfig& cfg,
                    const TrainingState& st) {
  WriteFileBytes(path, EncodeCheckpoint(cfg, st));
}

LoadedCheckpoint LoadCheckpoint(const std::string& path) {
  return DecodeCheckpoint(ReadFileBytes(path));
}

TrainingState LoadCheckpointFor(const std::string& path,
                                const RecoveryConfig& expected) {
  LoadedCheckpoint ck = LoadCheckpoint(path);
  if (ConfigHash(ck.config) != ConfigHash(expected)) {
    throw ConfigError("checkpoint '" + path + "' was written with config hash " +
                      ConfigHashHex(ck.config) + " but the current config hashes to " +
                      ConfigHashHex(expected));
  }
  return std::move(ck.state);
}

}  // namespace gslr
