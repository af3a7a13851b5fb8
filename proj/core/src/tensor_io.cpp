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

#include "bimlab/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bimlab/errors.hpp"
#include "json.hpp"

namespace bimlab::io {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(DType dtype) { return dtype == DType::float32 ? "float32" : "complex64"; }

DType dtype_from_string(const std::string& text) {
  if (text == "float32") return DType::float32;
  if (text == "complex64") return DType::complex64;
  throw LoadError(LoadErrorKind::unknown_dtype, "unknown dtype '" + text + "'");
}

std::size_t element_bytes(DType dtype) { return dtype == DType::float32 ? 4 : 8; }

std::int64_t TensorEntry::element_count() const {
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

const TensorEntry& Manifest::find(const std::string& name) const {
  for (const auto& e : tensors)
    if (e.name == name) return e;
  throw LoadError(LoadErrorKind::missing_tensor, "missing tensor '" + name + "'");
}

bool Manifest::contains(const std::string& name) const {
  for (const auto& e : tensors)
    if (e.name == name) return true;
  return false;
}

namespace {

void put_le32(std::vector<unsigned char>& out, float v) {
  auto u = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((u >> (8 * i)) & 0xffu));
}

float get_le32(const unsigned char* p) {
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= std::uint32_t(p[i]) << (8 * i);
  return std::bit_cast<float>(u);
}

std::vector<unsigned char> read_range(const fs::path& file, std::uint64_t offset, std::uint64_t size) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open payload " + file.string());
  in.seekg(0, std::ios::end);
  const auto total = std::uint64_t(in.tellg());
  if (offset + size > total)
    throw LoadError(LoadErrorKind::truncated_payload, "truncated payload " + file.string() + ": need " +
                                                          std::to_string(offset + size) + " bytes, have " +
                                                          std::to_string(total));
  std::vector<unsigned char> buf(size);
  in.seekg(std::streamoff(offset));
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(size));
  if (!in) throw IoError("read failed on " + file.string());
  return buf;
}

}  // namespace

PayloadWriter::PayloadWriter(fs::path dir, std::string file_name) : dir_(std::move(dir)), file_(std::move(file_name)) {}

void PayloadWriter::append(const std::string& name, std::vector<std::int64_t> shape, DType dtype,
                           const std::vector<float>& raw) {
  TensorEntry e{name, file_, std::move(shape), dtype, bytes_.size()};
  require(std::uint64_t(e.element_count()) * (dtype == DType::complex64 ? 2 : 1) == raw.size(),
          "tensor '" + name + "' shape does not match its data length");
  bytes_.reserve(bytes_.size() + raw.size() * 4);
  for (float v : raw) put_le32(bytes_, v);
  entries_.push_back(std::move(e));
}

void PayloadWriter::add(const std::string& name, std::vector<std::int64_t> shape, std::span<const float> values) {
  append(name, std::move(shape), DType::float32, std::vector<float>(values.begin(), values.end()));
}

void PayloadWriter::add(const std::string& name, std::vector<std::int64_t> shape, std::span<const cplx> values) {
  std::vector<float> raw;
  raw.reserve(values.size() * 2);
  for (const auto& z : values) {
    raw.push_back(static_cast<float>(z.real()));
    raw.push_back(static_cast<float>(z.imag()));
  }
  append(name, std::move(shape), DType::complex64, raw);
}

const std::vector<TensorEntry>& PayloadWriter::finish() {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  std::ofstream out(dir_ / file_, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write payload " + (dir_ / file_).string());
  out.write(reinterpret_cast<const char*>(bytes_.data()), std::streamsize(bytes_.size()));
  if (!out) throw IoError("write failed on " + (dir_ / file_).string());
  return entries_;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  json j;
  try {
    j = json::parse(manifest.extra);
  } catch (const json::parse_error&) {
    throw ContractError("manifest extra must be a JSON object");
  }
  require(j.is_object(), "manifest extra must be a JSON object");
  json list = json::array();
  for (const auto& e : manifest.tensors)
    list.push_back(
        {{"name", e.name}, {"file", e.file}, {"shape", e.shape}, {"dtype", to_string(e.dtype)}, {"offset", e.offset}});
  j["tensors"] = list;

  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed on " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot finalize manifest " + path.string() + ": " + ec.message());
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw LoadError(LoadErrorKind::malformed, "malformed manifest " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("tensors") || !j["tensors"].is_array())
    throw LoadError(LoadErrorKind::malformed, "manifest " + path.string() + " has no tensor list");

  Manifest m;
  try {
    for (const auto& t : j["tensors"]) {
      TensorEntry e;
      e.name = t.at("name").get<std::string>();
      e.file = t.at("file").get<std::string>();
      e.shape = t.at("shape").get<std::vector<std::int64_t>>();
      e.dtype = dtype_from_string(t.at("dtype").get<std::string>());
      e.offset = t.at("offset").get<std::uint64_t>();
      for (auto d : e.shape)
        if (d < 0) throw LoadError(LoadErrorKind::malformed, "negative dimension in tensor '" + e.name + "'");
      m.tensors.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw LoadError(LoadErrorKind::malformed, "malformed tensor entry in " + path.string() + ": " + e.what());
  }
  j.erase("tensors");
  m.extra = j.dump();
  return m;
}

std::vector<float> read_float32(const fs::path& dir, const TensorEntry& entry) {
  if (entry.dtype != DType::float32)
    throw LoadError(LoadErrorKind::unknown_dtype, "tensor '" + entry.name + "' is not float32");
  const auto bytes = read_range(dir / entry.file, entry.offset, entry.byte_size());
  std::vector<float> out(std::size_t(entry.element_count()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_le32(bytes.data() + 4 * i);
  return out;
}

std::vector<cplx> read_complex64(const fs::path& dir, const TensorEntry& entry) {
  if (entry.dtype != DType::complex64)
    throw LoadError(LoadErrorKind::unknown_dtype, "tensor '" + entry.name + "' is not complex64");
  const auto bytes = read_range(dir / entry.file, entry.offset, entry.byte_size());
  std::vector<cplx> out(std::size_t(entry.element_count()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = cplx(get_le32(bytes.data() + 8 * i), get_le32(bytes.data() + 8 * i + 4));
  return out;
}

CVector to_complex64_precision(const CVector& v) {
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = cplx(static_cast<float>(v(i).real()), static_cast<float>(v(i).imag()));
  return out;
}

}  // namespace bimlab::io
