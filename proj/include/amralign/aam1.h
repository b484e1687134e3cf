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

// AAM1 ("Amr Attention Matrices v1") container.
//
// A bundle is a JSON manifest
//
//   {
//     "version": "AAM1",
//     "sentence_id": "lpp_1943.1209",
//     "n_layers": 12, "n_heads": 16,
//     "encoder_tokens": [...], "decoder_tokens": [...],
//     "dtype": "float32",                 // or "float64"
//     "method": "attention",              // optional; "saliency", "GB", ...
//     "normalized": true,                 // optional, default false
//     "scale": "post_softmax",            // optional; or "pre_softmax"
//     "storage": "embedded",              // or "sidecar"
//     "matrices": {"L0H0": "<base64>", ...}   // embedded storage only
//   }
//
// Every (layer, head) payload is the n_decoder x n_encoder matrix, row-major,
// little-endian IEEE-754 of `dtype`. With sidecar storage the payloads live
// next to the manifest in files named L{l}H{h}.f32 (L{l}H{h}.f64 for float64).

#ifndef AMRALIGN_AAM1_H_
#define AMRALIGN_AAM1_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "amralign/score_matrix.h"

namespace amralign::aam1 {

enum class Dtype { kFloat32, kFloat64 };
enum class Scale { kPostSoftmax, kPreSoftmax };
enum class Storage { kEmbedded, kSidecar };

struct Bundle {
  std::string sentence_id;
  int n_layers = 0;
  int n_heads = 0;
  std::vector<std::string> encoder_tokens;
  std::vector<std::string> decoder_tokens;
  Dtype dtype = Dtype::kFloat32;
  std::string method = "attention";
  bool normalized = false;
  Scale scale = Scale::kPostSoftmax;
  std::vector<ScoreMatrix> matrices;  // sorted by (layer, head)

  // Matrices of one layer, in head order.
  std::vector<ScoreMatrix> layer(int l) const;
  const ScoreMatrix& at(int l, int h) const;
};

// Row-sum tolerance applied to normalized payloads of the given dtype.
double row_tolerance(Dtype dtype);

// Parses and validates a manifest. Sidecar payloads are resolved relative to
// `base_dir`. Throws ValidationError.
Bundle parse_bundle(std::string_view manifest, const std::filesystem::path& base_dir = {});
Bundle load_bundle(const std::filesystem::path& manifest_path);

// Every bundle under `dir` (files ending in .json carrying a "version" key),
// sorted by sentence id.
std::vector<Bundle> load_bundle_dir(const std::filesystem::path& dir);

// All matrices of the bundle at `path`, validated and sorted by (layer, head).
std::vector<ScoreMatrix> load_matrices(const std::filesystem::path& path);

// Writes the manifest to `manifest_path` (and sidecar payloads beside it).
void write_bundle(const Bundle& b, const std::filesystem::path& manifest_path,
                  Storage storage = Storage::kEmbedded);
std::string manifest_json(const Bundle& b, Storage storage);

// Raw little-endian payload bytes of a matrix.
std::string encode_payload(const Matrix& m, Dtype dtype);
Matrix decode_payload(std::string_view bytes, std::size_t rows, std::size_t cols, Dtype dtype);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

std::string payload_name(int layer, int head, Dtype dtype);

// Learned mix weights, consumed by the guided trainer/exporter:
//   {"version": "AAM1-mix", "layer": 3, "gamma": 1.2, "raw": [...],
//    "head_subset": [...], "weights": [...]}
std::string mix_weights_json(const MixWeights& w);
MixWeights parse_mix_weights(std::string_view text);
MixWeights read_mix_weights(const std::filesystem::path& path);

}  // namespace amralign::aam1

#endif  // AMRALIGN_AAM1_H_
