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

#ifndef GSLR_IO_H_
#define GSLR_IO_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gslr/tensor.h"

namespace gslr {

// Native tensor container, all fields little-endian:
//   "GSLT1" | u32 h | u32 w | u32 b | h*w*b float32 in Tensor3 index order
//   (k-major, then row i, then column j).
std::string EncodeGslt(const Tensor3& t);
Tensor3 DecodeGslt(std::string_view bytes);

enum class NpyDtype { kFloat32, kFloat64 };

struct NpyHeader {
  NpyDtype dtype = NpyDtype::kFloat64;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
  std::size_t data_offset = 0;  // first payload byte
};

// .npy version 1.0, shape (h, w, b), C order; the header is space-padded so
// the payload starts on a 64-byte boundary.
std::string EncodeNpy(const Tensor3& t, NpyDtype dtype = NpyDtype::kFloat64);
// Accepts versions 1.x/2.x, '<f4' or '<f8', either memory order and 1-3 dims
// (missing trailing dims are 1).
Tensor3 DecodeNpy(std::string_view bytes);
NpyHeader ParseNpyHeader(std::string_view bytes);

std::string ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::string_view bytes);

// Dispatches on extension: ".npy" uses DecodeNpy/EncodeNpy (float64), anything
// else the GSLT container.
Tensor3 ReadTensor(const std::string& path);
void WriteTensor(const Tensor3& t, const std::string& path);

Mask3 ReadMask(const std::string& path);
void WriteMask(const Mask3& m, const std::string& path);

// 8-bit quantization used by the image writers: clamp to [0, 1], scale by
// 255, round half up.
unsigned char QuantizeUnit(double v);

// Binary PGM (P5) of one band.
std::string EncodePgm(const Tensor3& t, std::size_t band);
// Binary PPM (P6) composite with the given bands as red, green, blue.
std::string EncodePpm(const Tensor3& t, std::size_t red, std::size_t green,
                      std::size_t blue);
void WriteBandImage(const Tensor3& t, std::size_t band, const std::string& path);
void WriteCompositeImage(const Tensor3& t, std::size_t red, std::size_t green,
                         std::size_t blue, const std::string& path);

// "band,value" header followed by one row per band of fiber (i, j).
std::string EncodeSpectrumCsv(const Tensor3& t, std::size_t i, std::size_t j);
void WriteSpectrumCsv(const Tensor3& t, std::size_t i, std::size_t j,
                      const std::string& path);

}  // namespace gslr

#endif  // GSLR_IO_H_
