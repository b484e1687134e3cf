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

// Decoder x encoder score matrices and their reductions.

#ifndef AMRALIGN_SCORE_MATRIX_H_
#define AMRALIGN_SCORE_MATRIX_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amralign/linearization.h"
#include "amralign/sentence.h"

namespace amralign {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  std::span<double> row(std::size_t r) { return std::span<double>(data_).subspan(r * cols_, cols_); }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double sum() const;
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr int kAllHeads = -1;

struct ScoreMatrix {
  Matrix values;  // row = decoder token, column = encoder token
  int layer = 0;
  int head = kAllHeads;
  std::vector<std::string> encoder_tokens;
  std::vector<std::string> decoder_tokens;
  bool normalized = false;  // rows are probability distributions
  std::string method = "attention";

  std::size_t n_decoder() const { return values.rows(); }
  std::size_t n_encoder() const { return values.cols(); }

  // Throws ValidationError on non-finite entries, dimension/token-list
  // disagreement, or (when normalized) a row not summing to 1 within
  // `row_tolerance`.
  void validate(double row_tolerance = 1e-6) const;
};

// Scalar head mix: s = softmax(raw) over `head_subset`, mixed = gamma * sum s_h A_h.
struct MixWeights {
  std::vector<double> raw;            // one entry per head of the layer
  double gamma = 1.0;
  std::vector<int> head_subset;       // ascending; empty means every head
  int layer = 0;

  static MixWeights uniform(int n_heads, std::vector<int> subset = {}, int layer = 0);
  std::vector<int> heads() const;     // resolved subset
  std::vector<double> softmax() const;  // aligned with heads()
};

std::vector<double> softmax(std::span<const double> x);

// Sums columns of tokens belonging to the same word; special-token columns
// are dropped. Encoder tokens of the result are the words.
ScoreMatrix merge_subword_columns(const ScoreMatrix& m, const SentenceTokens& st);

// Row-merged matrix plus the unit index of each row.
struct UnitScores {
  ScoreMatrix matrix;               // decoder_tokens hold unit paths
  std::vector<std::size_t> units;   // row -> unit index
};

// Sums rows of decoder tokens belonging to the same semantic unit; rows of
// structural tokens are dropped. Rows follow unit order.
UnitScores merge_unit_rows(const ScoreMatrix& m, const GraphPosMap& gp,
                           std::span<const SemanticUnit> units);

struct LayerRange {
  int lo = 0;
  int hi = 4;  // exclusive

  bool contains(int layer) const { return layer >= lo && layer < hi; }
  // "0:4" -> [0, 4); "3" -> [3, 4).
  static LayerRange parse(std::string_view text);
  std::string str() const;
};

// Elementwise sum over every matrix whose layer is in range and, when
// `heads` is given, whose head is listed. Summation runs in (layer, head)
// order so the result does not depend on input order.
ScoreMatrix sum_layers(std::span<const ScoreMatrix> ms, LayerRange range,
                       const std::vector<int>& heads = {});

// Scalar mix of the heads of one layer. Throws ValidationError when a head of
// the subset is missing or the matrices disagree in layer/shape.
ScoreMatrix scalar_mix(std::span<const ScoreMatrix> heads, const MixWeights& w);

// "3,4,5" -> {3,4,5}
std::vector<int> parse_int_list(std::string_view text);

}  // namespace amralign

#endif  // AMRALIGN_SCORE_MATRIX_H_
