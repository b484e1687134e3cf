/* Copyright 2026 The amralign Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "amralign/aam1.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/dataflow_exception.hpp>
#include <boost/archive/iterators/transform_width.hpp>

#include "amralign/errors.h"
#include "json.hpp"

namespace amralign::aam1 {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::string_view kVersion = "AAM1";
constexpr std::string_view kMixVersion = "AAM1-mix";

std::size_t width(Dtype dtype) { return dtype == Dtype::kFloat32 ? 4 : 8; }

template <typename Bits>
Bits to_little(Bits v) {
  if constexpr (std::endian::native == std::endian::big) {
    Bits out = 0;
    for (std::size_t i = 0; i < sizeof(Bits); ++i) {
      out = static_cast<Bits>((out << 8) | ((v >> (8 * i)) & 0xFF));
    }
    return out;
  }
  return v;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
T field(const ordered_json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("manifest lacks \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("manifest field \"") + key + "\" has the wrong type");
  }
}

std::string key_of(int l, int h) { return "L" + std::to_string(l) + "H" + std::to_string(h); }

}  // namespace

std::vector<ScoreMatrix> Bundle::layer(int l) const {
  std::vector<ScoreMatrix> out;
  for (const ScoreMatrix& m : matrices) {
    if (m.layer == l) out.push_back(m);
  }
  return out;
}

const ScoreMatrix& Bundle::at(int l, int h) const {
  for (const ScoreMatrix& m : matrices) {
    if (m.layer == l && m.head == h) return m;
  }
  throw ValidationError("bundle " + sentence_id + " has no matrix " + key_of(l, h));
}

double row_tolerance(Dtype dtype) { return dtype == Dtype::kFloat32 ? 1e-4 : 1e-6; }

std::string base64_encode(std::string_view bytes) {
  using namespace boost::archive::iterators;
  using It = base64_from_binary<transform_width<std::string_view::const_iterator, 6, 8>>;
  std::string out(It(bytes.begin()), It(bytes.end()));
  out.append((3 - bytes.size() % 3) % 3, '=');
  return out;
}

std::string base64_decode(std::string_view text) {
  using namespace boost::archive::iterators;
  using It = transform_width<binary_from_base64<std::string::const_iterator>, 8, 6>;
  if (text.size() % 4 != 0) throw ValidationError("base64 payload length is not a multiple of 4");
  std::size_t padding = 0;
  while (padding < 2 && padding < text.size() && text[text.size() - 1 - padding] == '=') ++padding;
  std::string body(text.substr(0, text.size() - padding));
  if (body.find('=') != std::string::npos) throw ValidationError("misplaced base64 padding");
  body.append(padding, 'A');
  try {
    std::string out(It(body.cbegin()), It(body.cend()));
    out.resize(text.size() / 4 * 3 - padding);
    return out;
  } catch (const dataflow_exception&) {
    throw ValidationError("invalid base64 payload");
  }
}

std::string encode_payload(const Matrix& m, Dtype dtype) {
  std::string out;
  out.reserve(m.data().size() * width(dtype));
  for (double v : m.data()) {
    char buf[8];
    if (dtype == Dtype::kFloat32) {
      auto bits = to_little(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      std::memcpy(buf, &bits, 4);
      out.append(buf, 4);
    } else {
      auto bits = to_little(std::bit_cast<std::uint64_t>(v));
      std::memcpy(buf, &bits, 8);
      out.append(buf, 8);
    }
  }
  return out;
}

Matrix decode_payload(std::string_view bytes, std::size_t rows, std::size_t cols, Dtype dtype) {
  std::size_t w = width(dtype);
  if (bytes.size() != rows * cols * w) {
    throw ValidationError("payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                          std::to_string(rows * cols * w) + " for " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  Matrix m(rows, cols);
  auto data = m.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (dtype == Dtype::kFloat32) {
      std::uint32_t bits;
      std::memcpy(&bits, bytes.data() + i * 4, 4);
      data[i] = std::bit_cast<float>(to_little(bits));
    } else {
      std::uint64_t bits;
      std::memcpy(&bits, bytes.data() + i * 8, 8);
      data[i] = std::bit_cast<double>(to_little(bits));
    }
  }
  return m;
}

std::string payload_name(int layer, int head, Dtype dtype) {
  return key_of(layer, head) + (dtype == Dtype::kFloat32 ? ".f32" : ".f64");
}

Bundle parse_bundle(std::string_view manifest, const fs::path& base_dir) {
  ordered_json j;
  try {
    j = ordered_json::parse(manifest);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("manifest is not a JSON object");
  auto version = field<std::string>(j, "version");
  if (version != kVersion) throw ValidationError("unknown container version '" + version + "'");

  Bundle b;
  b.sentence_id = field<std::string>(j, "sentence_id");
  b.n_layers = field<int>(j, "n_layers");
  b.n_heads = field<int>(j, "n_heads");
  if (b.n_layers < 1 || b.n_heads < 1) throw ValidationError("n_layers and n_heads must be >= 1");
  b.encoder_tokens = field<std::vector<std::string>>(j, "encoder_tokens");
  b.decoder_tokens = field<std::vector<std::string>>(j, "decoder_tokens");
  auto dtype = field<std::string>(j, "dtype");
  if (dtype == "float32") {
    b.dtype = Dtype::kFloat32;
  } else if (dtype == "float64") {
    b.dtype = Dtype::kFloat64;
  } else {
    throw ValidationError("unsupported dtype '" + dtype + "'");
  }
  if (j.contains("method")) b.method = field<std::string>(j, "method");
  if (j.contains("normalized")) b.normalized = field<bool>(j, "normalized");
  if (j.contains("scale")) {
    auto scale = field<std::string>(j, "scale");
    if (scale == "post_softmax") {
      b.scale = Scale::kPostSoftmax;
    } else if (scale == "pre_softmax") {
      b.scale = Scale::kPreSoftmax;
    } else {
      throw ValidationError("unknown scale '" + scale + "'");
    }
  }
  Storage storage = j.contains("matrices") ? Storage::kEmbedded : Storage::kSidecar;
  if (j.contains("storage")) {
    auto s = field<std::string>(j, "storage");
    if (s == "embedded") {
      storage = Storage::kEmbedded;
    } else if (s == "sidecar") {
      storage = Storage::kSidecar;
    } else {
      throw ValidationError("unknown storage '" + s + "'");
    }
  }
  if (storage == Storage::kEmbedded) {
    if (!j.contains("matrices") || !j["matrices"].is_object()) {
      throw ValidationError("embedded manifest lacks a \"matrices\" object");
    }
    if (j["matrices"].size() != static_cast<std::size_t>(b.n_layers * b.n_heads)) {
      throw ValidationError("manifest declares " + std::to_string(b.n_layers) + "x" +
                            std::to_string(b.n_heads) + " matrices but holds " +
                            std::to_string(j["matrices"].size()));
    }
  }

  std::size_t rows = b.decoder_tokens.size(), cols = b.encoder_tokens.size();
  for (int l = 0; l < b.n_layers; ++l) {
    for (int h = 0; h < b.n_heads; ++h) {
      std::string bytes;
      if (storage == Storage::kEmbedded) {
        const auto& mats = j["matrices"];
        std::string key = key_of(l, h);
        if (!mats.contains(key)) throw ValidationError("manifest lacks matrix " + key);
        if (!mats[key].is_string()) throw ValidationError("matrix " + key + " is not a string");
        bytes = base64_decode(mats[key].get<std::string>());
      } else {
        bytes = read_file(base_dir / payload_name(l, h, b.dtype));
      }
      ScoreMatrix m;
      m.values = decode_payload(bytes, rows, cols, b.dtype);
      m.layer = l;
      m.head = h;
      m.encoder_tokens = b.encoder_tokens;
      m.decoder_tokens = b.decoder_tokens;
      m.normalized = b.normalized;
      m.method = b.method;
      m.validate(row_tolerance(b.dtype));
      b.matrices.push_back(std::move(m));
    }
  }
  return b;
}

Bundle load_bundle(const fs::path& manifest_path) {
  try {
    return parse_bundle(read_file(manifest_path), manifest_path.parent_path());
  } catch (const ValidationError& e) {
    throw ValidationError(manifest_path.string() + ": " + e.what());
  }
}

std::vector<Bundle> load_bundle_dir(const fs::path& dir) {
  if (fs::is_regular_file(dir)) return {load_bundle(dir)};
  if (!fs::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      manifests.push_back(entry.path());
    }
  }
  std::sort(manifests.begin(), manifests.end());
  std::vector<Bundle> bundles;
  for (const fs::path& p : manifests) {
    std::string text = read_file(p);
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("version") ||
        j["version"] == std::string(kMixVersion)) {
      continue;
    }
    try {
      bundles.push_back(parse_bundle(text, p.parent_path()));
    } catch (const ValidationError& e) {
      throw ValidationError(p.string() + ": " + e.what());
    }
  }
  std::sort(bundles.begin(), bundles.end(),
            [](const Bundle& a, const Bundle& b) { return a.sentence_id < b.sentence_id; });
  return bundles;
}

std::vector<ScoreMatrix> load_matrices(const fs::path& path) { return load_bundle(path).matrices; }

std::string manifest_json(const Bundle& b, Storage storage) {
  ordered_json j;
  j["version"] = kVersion;
  j["sentence_id"] = b.sentence_id;
  j["n_layers"] = b.n_layers;
  j["n_heads"] = b.n_heads;
  j["encoder_tokens"] = b.encoder_tokens;
  j["decoder_tokens"] = b.decoder_tokens;
  j["dtype"] = b.dtype == Dtype::kFloat32 ? "float32" : "float64";
  j["method"] = b.method;
  j["normalized"] = b.normalized;
  j["scale"] = b.scale == Scale::kPostSoftmax ? "post_softmax" : "pre_softmax";
  j["storage"] = storage == Storage::kEmbedded ? "embedded" : "sidecar";
  if (storage == Storage::kEmbedded) {
    ordered_json mats = ordered_json::object();
    for (const ScoreMatrix& m : b.matrices) {
      mats[key_of(m.layer, m.head)] = base64_encode(encode_payload(m.values, b.dtype));
    }
    j["matrices"] = std::move(mats);
  }
  return j.dump(1) + "\n";
}

void write_bundle(const Bundle& b, const fs::path& manifest_path, Storage storage) {
  if (b.matrices.size() != static_cast<std::size_t>(b.n_layers * b.n_heads)) {
    throw ValidationError("bundle holds " + std::to_string(b.matrices.size()) +
                          " matrices, header declares " + std::to_string(b.n_layers * b.n_heads));
  }
  if (manifest_path.has_parent_path()) fs::create_directories(manifest_path.parent_path());
  write_file(manifest_path, manifest_json(b, storage));
  if (storage == Storage::kSidecar) {
    for (const ScoreMatrix& m : b.matrices) {
      write_file(manifest_path.parent_path() / payload_name(m.layer, m.head, b.dtype),
                 encode_payload(m.values, b.dtype));
    }
  }
}

std::string mix_weights_json(const MixWeights& w) {
  ordered_json j;
  j["version"] = kMixVersion;
  j["layer"] = w.layer;
  j["gamma"] = w.gamma;
  j["raw"] = w.raw;
  j["head_subset"] = w.heads();
  j["weights"] = w.softmax();
  return j.dump(1) + "\n";
}

MixWeights parse_mix_weights(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("mix weights are not valid JSON: ") + e.what());
  }
  auto version = field<std::string>(j, "version");
  if (version != kMixVersion) throw ValidationError("unknown mix weights version '" + version + "'");
  MixWeights w;
  w.layer = field<int>(j, "layer");
  w.gamma = field<double>(j, "gamma");
  w.raw = field<std::vector<double>>(j, "raw");
  if (j.contains("head_subset")) w.head_subset = field<std::vector<int>>(j, "head_subset");
  std::sort(w.head_subset.begin(), w.head_subset.end());
  w.softmax();  // validates the subset against `raw`
  return w;
}

MixWeights read_mix_weights(const fs::path& path) { return parse_mix_weights(read_file(path)); }

}  // namespace amralign::aam1
