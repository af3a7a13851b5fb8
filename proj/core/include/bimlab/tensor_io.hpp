// Copyright 2026 The bimlab Authors.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bimlab/types.hpp"

namespace bimlab::io {

// On-disk tensors: raw little-endian payload files described by a manifest.json
// listing name, payload file, shape, dtype ("float32" or "complex64" as
// interleaved re/im float32 pairs) and byte offset of every tensor.

enum class DType { float32, complex64 };

std::string to_string(DType dtype);
DType dtype_from_string(const std::string& text);  // throws LoadError(unknown_dtype)
std::size_t element_bytes(DType dtype);

struct TensorEntry {
  std::string name;
  std::string file;
  std::vector<std::int64_t> shape;
  DType dtype = DType::float32;
  std::uint64_t offset = 0;

  std::int64_t element_count() const;
  std::uint64_t byte_size() const { return std::uint64_t(element_count()) * element_bytes(dtype); }
};

struct Manifest {
  std::vector<TensorEntry> tensors;
  /// Additional top-level fields as a JSON object text ("{}" when empty).
  std::string extra = "{}";

  const TensorEntry& find(const std::string& name) const;  // throws LoadError(missing_tensor)
  bool contains(const std::string& name) const;
};

/// Appends tensors to one payload file inside dir.
class PayloadWriter {
 public:
  PayloadWriter(std::filesystem::path dir, std::string file_name);

  void add(const std::string& name, std::vector<std::int64_t> shape, std::span<const float> values);
  void add(const std::string& name, std::vector<std::int64_t> shape, std::span<const cplx> values);

  /// Flushes the payload. Entries stay valid afterwards.
  const std::vector<TensorEntry>& finish();
  const std::vector<TensorEntry>& entries() const { return entries_; }

 private:
  void append(const std::string& name, std::vector<std::int64_t> shape, DType dtype, const std::vector<float>& raw);

  std::filesystem::path dir_;
  std::string file_;
  std::vector<unsigned char> bytes_;
  std::vector<TensorEntry> entries_;
};

/// Writes manifest.json atomically (temporary file, then rename).
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

/// Reads one tensor's values; checks dtype and that the payload covers the extent.
std::vector<float> read_float32(const std::filesystem::path& dir, const TensorEntry& entry);
std::vector<cplx> read_complex64(const std::filesystem::path& dir, const TensorEntry& entry);

/// Round a complex double vector through complex64 storage precision.
CVector to_complex64_precision(const CVector& v);

}  // namespace bimlab::io
