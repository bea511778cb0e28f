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

#include "gslr/io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include "gslr/error.h"

namespace gslr {

namespace {

constexpr std::string_view kGsltMagic = "GSLT1";
constexpr std::string_view kNpyMagic = "\x93NUMPY";

void PutU32(std::string& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int s = 0; s < 64; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

std::uint64_t GetLE(std::string_view bytes, std::size_t off, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[off + i]))
         << (8 * i);
  return v;
}

void Require(std::string_view bytes, std::size_t off, std::size_t need,
             const char* what) {
  if (bytes.size() < off + need) {
    std::ostringstream msg;
    msg << what << ": truncated at byte offset " << off << ", need " << need
        << " bytes, have " << (bytes.size() > off ? bytes.size() - off : 0)
        << " (missing " << off + need - bytes.size() << " bytes)";
    throw FormatError(msg.str());
  }
}

std::uint32_t CheckedU32(std::size_t v, const char* what) {
  if (v > 0xffffffffu) throw FormatError(std::string(what) + ": dimension exceeds u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string EncodeGslt(const Tensor3& t) {
  std::string out(kGsltMagic);
  PutU32(out, CheckedU32(t.h(), "GSLT"));
  PutU32(out, CheckedU32(t.w(), "GSLT"));
  PutU32(out, CheckedU32(t.b(), "GSLT"));
  out.reserve(out.size() + 4 * t.size());
  for (double v : t.data())
    PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

Tensor3 DecodeGslt(std::string_view bytes) {
  Require(bytes, 0, kGsltMagic.size(), "GSLT magic");
  if (bytes.substr(0, kGsltMagic.size()) != kGsltMagic)
    throw FormatError("GSLT: bad magic at byte offset 0");
  std::size_t off = kGsltMagic.size();
  Require(bytes, off, 12, "GSLT header");
  const std::size_t h = GetLE(bytes, off, 4);
  const std::size_t w = GetLE(bytes, off + 4, 4);
  const std::size_t b = GetLE(bytes, off + 8, 4);
  off += 12;
  const std::size_t n = h * w * b;
  Require(bytes, off, 4 * n, "GSLT payload");
  if (bytes.size() != off + 4 * n) {
    throw FormatError("GSLT: " + std::to_string(bytes.size() - off - 4 * n) +
                      " trailing bytes after payload at offset " +
                      std::to_string(off + 4 * n));
  }
  std::vector<double> data(n);
  for (std::size_t p = 0; p < n; ++p) {
    data[p] = std::bit_cast<float>(
        static_cast<std::uint32_t>(GetLE(bytes, off + 4 * p, 4)));
  }
  return Tensor3(h, w, b, std::move(data));
}

std::string EncodeNpy(const Tensor3& t, NpyDtype dtype) {
  std::ostringstream dict;
  dict << "{'descr': '" << (dtype == NpyDtype::kFloat32 ? "<f4" : "<f8")
       << "', 'fortran_order': False, 'shape': (" << t.h() << ", " << t.w()
       << ", " << t.b() << "), }";
  std::string header = dict.str();
  // magic(6) + version(2) + length(2) + header + '\n' is a multiple of 64.
  const std::size_t unpadded = kNpyMagic.size() + 4 + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');
  if (header.size() > 0xffff) throw FormatError("npy: header too long for v1.0");

  std::string out(kNpyMagic);
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<char>(header.size() & 0xff));
  out.push_back(static_cast<char>(header.size() >> 8));
  out += header;
  const std::size_t width = dtype == NpyDtype::kFloat32 ? 4 : 8;
  out.reserve(out.size() + width * t.size());
  for (std::size_t i = 0; i < t.h(); ++i)
    for (std::size_t j = 0; j < t.w(); ++j)
      for (std::size_t k = 0; k < t.b(); ++k) {
        const double v = t(i, j, k);
        if (dtype == NpyDtype::kFloat32)
          PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        else
          PutU64(out, std::bit_cast<std::uint64_t>(v));
      }
  return out;
}

NpyHeader ParseNpyHeader(std::string_view bytes) {
  Require(bytes, 0, kNpyMagic.size() + 2, "npy preamble");
  if (bytes.substr(0, kNpyMagic.size()) != kNpyMagic)
    throw FormatError("npy: bad magic at byte offset 0");
  const int major = static_cast<unsigned char>(bytes[6]);
  std::size_t off = 8;
  std::size_t len = 0;
  if (major == 1) {
    Require(bytes, off, 2, "npy header length");
    len = GetLE(bytes, off, 2);
    off += 2;
  } else if (major == 2 || major == 3) {
    Require(bytes, off, 4, "npy header length");
    len = GetLE(bytes, off, 4);
    off += 4;
  } else {
    throw FormatError("npy: unsupported version " + std::to_string(major) +
                      " at byte offset 6");
  }
  Require(bytes, off, len, "npy header");
  const std::string dict(bytes.substr(off, len));

  NpyHeader h;
  h.data_offset = off + len;
  std::smatch m;
  if (!std::regex_search(dict, m, std::regex(R"('descr'\s*:\s*'([^']*)')")))
    throw FormatError("npy: header at offset " + std::to_string(off) + " lacks 'descr'");
  if (m[1] == "<f4") {
    h.dtype = NpyDtype::kFloat32;
  } else if (m[1] == "<f8") {
    h.dtype = NpyDtype::kFloat64;
  } else {
    throw FormatError("npy: unsupported dtype '" + m[1].str() +
                      "' (expected '<f4' or '<f8') in header at offset " +
                      std::to_string(off));
  }
  if (!std::regex_search(dict, m, std::regex(R"('fortran_order'\s*:\s*(True|False))")))
    throw FormatError("npy: header lacks 'fortran_order'");
  h.fortran_order = m[1] == "True";
  if (!std::regex_search(dict, m, std::regex(R"('shape'\s*:\s*\(([^)]*)\))")))
    throw FormatError("npy: header lacks 'shape'");
  const std::string dims = m[1];
  std::regex num(R"(\d+)");
  for (auto it = std::sregex_iterator(dims.begin(), dims.end(), num);
       it != std::sregex_iterator(); ++it)
    h.shape.push_back(std::stoull(it->str()));
  return h;
}

Tensor3 DecodeNpy(std::string_view bytes) {
  const NpyHeader hdr = ParseNpyHeader(bytes);
  if (hdr.shape.empty() || hdr.shape.size() > 3) {
    throw FormatError("npy: expected 1 to 3 dimensions, got " +
                      std::to_string(hdr.shape.size()));
  }
  const std::size_t h = hdr.shape[0];
  const std::size_t w = hdr.shape.size() > 1 ? hdr.shape[1] : 1;
  const std::size_t b = hdr.shape.size() > 2 ? hdr.shape[2] : 1;
  const std::size_t width = hdr.dtype == NpyDtype::kFloat32 ? 4 : 8;
  const std::size_t n = h * w * b;
  Require(bytes, hdr.data_offset, width * n, "npy payload");
  Tensor3 t(h, w, b);
  std::size_t p = 0;
  auto read_next = [&]() {
    const std::size_t off = hdr.data_offset + width * p++;
    if (width == 4)
      return static_cast<double>(
          std::bit_cast<float>(static_cast<std::uint32_t>(GetLE(bytes, off, 4))));
    return std::bit_cast<double>(GetLE(bytes, off, 8));
  };
  if (hdr.fortran_order) {
    for (std::size_t k = 0; k < b; ++k)
      for (std::size_t j = 0; j < w; ++j)
        for (std::size_t i = 0; i < h; ++i) t(i, j, k) = read_next();
  } else {
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j)
        for (std::size_t k = 0; k < b; ++k) t(i, j, k) = read_next();
  }
  return t;
}

std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to '" + path + "'");
}

namespace {
bool IsNpyPath(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".npy") == 0;
}
}  // namespace

Tensor3 ReadTensor(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  return IsNpyPath(path) ? DecodeNpy(bytes) : DecodeGslt(bytes);
}

void WriteTensor(const Tensor3& t, const std::string& path) {
  WriteFileBytes(path, IsNpyPath(path) ? EncodeNpy(t) : EncodeGslt(t));
}

Mask3 ReadMask(const std::string& path) { return Mask3::FromTensor(ReadTensor(path)); }

void WriteMask(const Mask3& m, const std::string& path) {
  WriteTensor(m.ToTensor(), path);
}

unsigned char QuantizeUnit(double v) {
  const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::floor(c * 255.0 + 0.5));
}

std::string EncodePgm(const Tensor3& t, std::size_t band) {
  if (band >= t.b())
    throw BoundsError("band " + std::to_string(band) + " outside [0, " +
                      std::to_string(t.b()) + ")");
  std::string out = "P5\n" + std::to_string(t.w()) + " " + std::to_string(t.h()) +
                    "\n255\n";
  for (double v : t.slice(band)) out.push_back(static_cast<char>(QuantizeUnit(v)));
  return out;
}

std::string EncodePpm(const Tensor3& t, std::size_t red, std::size_t green,
                      std::size_t blue) {
  for (std::size_t band : {red, green, blue}) {
    if (band >= t.b())
      throw BoundsError("band " + std::to_string(band) + " outside [0, " +
                        std::to_string(t.b()) + ")");
  }
  std::string out = "P6\n" + std::to_string(t.w()) + " " + std::to_string(t.h()) +
                    "\n255\n";
  for (std::size_t i = 0; i < t.h(); ++i)
    for (std::size_t j = 0; j < t.w(); ++j)
      for (std::size_t band : {red, green, blue})
        out.push_back(static_cast<char>(QuantizeUnit(t(i, j, band))));
  return out;
}

void WriteBandImage(const Tensor3& t, std::size_t band, const std::string& path) {
  WriteFileBytes(path, EncodePgm(t, band));
}

void WriteCompositeImage(const Tensor3& t, std::size_t red, std::size_t green,
                         std::size_t blue, const std::string& path) {
  WriteFileBytes(path, EncodePpm(t, red, green, blue));
}

std::string EncodeSpectrumCsv(const Tensor3& t, std::size_t i, std::size_t j) {
  if (i >= t.h() || j >= t.w()) {
    throw BoundsError("spatial location (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") outside " + std::to_string(t.h()) +
                      "x" + std::to_string(t.w()));
  }
  std::string out = "band,value\n";
  char buf[64];
  for (std::size_t k = 0; k < t.b(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k, t(i, j, k));
    out += buf;
  }
  return out;
}

void WriteSpectrumCsv(const Tensor3& t, std::size_t i, std::size_t j,
                      const std::string& path) {
  WriteFileBytes(path, EncodeSpectrumCsv(t, i, j));
}

}  // namespace gslr
