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

#include "amralign/score_matrix.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "amralign/errors.h"

namespace amralign {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw ValidationError("matrix data size does not match shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ValidationError("ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

double Matrix::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

void ScoreMatrix::validate(double row_tolerance) const {
  if (values.rows() != decoder_tokens.size() || values.cols() != encoder_tokens.size()) {
    throw ValidationError("matrix is " + std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()) + " but token lists are " +
                          std::to_string(decoder_tokens.size()) + "x" +
                          std::to_string(encoder_tokens.size()));
  }
  for (std::size_t r = 0; r < values.rows(); ++r) {
    double total = 0.0;
    for (double v : values.row(r)) {
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite value in row " + std::to_string(r) + " (layer " +
                              std::to_string(layer) + ", head " + std::to_string(head) + ")");
      }
      total += v;
    }
    if (normalized && std::abs(total - 1.0) > row_tolerance) {
      throw ValidationError("row " + std::to_string(r) + " sums to " + std::to_string(total) +
                            " in a normalized matrix (layer " + std::to_string(layer) +
                            ", head " + std::to_string(head) + ")");
    }
  }
}

std::vector<double> softmax(std::span<const double> x) {
  std::vector<double> out(x.size());
  if (x.empty()) return out;
  double peak = *std::max_element(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += out[i] = std::exp(x[i] - peak);
  for (double& v : out) v /= total;
  return out;
}

MixWeights MixWeights::uniform(int n_heads, std::vector<int> subset, int layer) {
  MixWeights w;
  w.raw.assign(static_cast<std::size_t>(n_heads), 0.0);
  w.head_subset = std::move(subset);
  std::sort(w.head_subset.begin(), w.head_subset.end());
  w.layer = layer;
  return w;
}

std::vector<int> MixWeights::heads() const {
  if (!head_subset.empty()) return head_subset;
  std::vector<int> all(raw.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::vector<double> MixWeights::softmax() const {
  std::vector<double> picked;
  for (int h : heads()) {
    if (h < 0 || static_cast<std::size_t>(h) >= raw.size()) {
      throw ValidationError("head " + std::to_string(h) + " has no mix weight");
    }
    picked.push_back(raw[static_cast<std::size_t>(h)]);
  }
  return amralign::softmax(picked);
}

ScoreMatrix merge_subword_columns(const ScoreMatrix& m, const SentenceTokens& st) {
  if (m.encoder_tokens != st.encoder_tokens || st.word_of_token.size() != m.n_encoder()) {
    throw ValidationError("score matrix encoder tokens disagree with the sentence tokens");
  }
  ScoreMatrix out;
  out.layer = m.layer;
  out.head = m.head;
  out.method = m.method;
  out.decoder_tokens = m.decoder_tokens;
  out.encoder_tokens = st.words;
  out.values = Matrix(m.n_decoder(), st.words.size());
  bool dropped = false;
  for (std::size_t c = 0; c < m.n_encoder(); ++c) {
    const auto& word = st.word_of_token[c];
    if (!word) {
      dropped = true;
      continue;
    }
    for (std::size_t r = 0; r < m.n_decoder(); ++r) out.values(r, *word) += m.values(r, c);
  }
  out.normalized = m.normalized && !dropped;
  return out;
}

UnitScores merge_unit_rows(const ScoreMatrix& m, const GraphPosMap& gp,
                           std::span<const SemanticUnit> units) {
  if (gp.size() != m.n_decoder()) {
    throw ValidationError("graph position map covers " + std::to_string(gp.size()) +
                          " decoder tokens, matrix has " + std::to_string(m.n_decoder()));
  }
  std::vector<std::optional<std::size_t>> row_of_unit(units.size());
  for (const auto& unit : gp) {
    if (!unit) continue;
    if (*unit >= units.size()) throw ValidationError("graph position map names an unknown unit");
    row_of_unit[*unit] = 0;
  }
  UnitScores out;
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (!row_of_unit[u]) continue;
    row_of_unit[u] = out.units.size();
    out.units.push_back(u);
    out.matrix.decoder_tokens.push_back(units[u].path);
  }
  out.matrix.layer = m.layer;
  out.matrix.head = m.head;
  out.matrix.method = m.method;
  out.matrix.encoder_tokens = m.encoder_tokens;
  out.matrix.values = Matrix(out.units.size(), m.n_encoder());
  for (std::size_t r = 0; r < gp.size(); ++r) {
    if (!gp[r]) continue;
    auto dst = out.matrix.values.row(*row_of_unit[*gp[r]]);
    auto src = m.values.row(r);
    for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
  }
  return out;
}

LayerRange LayerRange::parse(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ValidationError("bad layer range '" + std::string(text) + "'");
    }
    return v;
  };
  LayerRange r;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    r.lo = to_int(text.substr(0, colon));
    r.hi = to_int(text.substr(colon + 1));
  } else {
    r.lo = to_int(text);
    r.hi = r.lo + 1;
  }
  if (r.lo < 0 || r.hi <= r.lo) throw ValidationError("empty layer range '" + std::string(text) + "'");
  return r;
}

std::string LayerRange::str() const { return std::to_string(lo) + ":" + std::to_string(hi); }

ScoreMatrix sum_layers(std::span<const ScoreMatrix> ms, LayerRange range,
                       const std::vector<int>& heads) {
  std::vector<const ScoreMatrix*> picked;
  for (const ScoreMatrix& m : ms) {
    if (!range.contains(m.layer)) continue;
    if (!heads.empty() && std::find(heads.begin(), heads.end(), m.head) == heads.end()) continue;
    picked.push_back(&m);
  }
  if (picked.empty()) {
    throw ValidationError("no matrices selected by layers " + range.str());
  }
  std::stable_sort(picked.begin(), picked.end(), [](const ScoreMatrix* a, const ScoreMatrix* b) {
    return std::pair(a->layer, a->head) < std::pair(b->layer, b->head);
  });
  const ScoreMatrix& first = *picked.front();
  ScoreMatrix out;
  out.layer = range.lo;
  out.head = kAllHeads;
  out.method = first.method;
  out.encoder_tokens = first.encoder_tokens;
  out.decoder_tokens = first.decoder_tokens;
  out.values = Matrix(first.n_decoder(), first.n_encoder());
  for (const ScoreMatrix* m : picked) {
    if (m->values.rows() != out.values.rows() || m->values.cols() != out.values.cols() ||
        m->encoder_tokens != out.encoder_tokens || m->decoder_tokens != out.decoder_tokens) {
      throw ValidationError("matrices to sum disagree in shape or tokens");
    }
    auto dst = out.values.data();
    auto src = m->values.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  out.normalized = picked.size() == 1 && first.normalized;
  return out;
}

ScoreMatrix scalar_mix(std::span<const ScoreMatrix> heads, const MixWeights& w) {
  if (heads.empty()) throw ValidationError("no head matrices to mix");
  std::vector<int> subset = w.heads();
  std::vector<double> s = w.softmax();
  const ScoreMatrix& first = heads.front();
  for (const ScoreMatrix& m : heads) {
    if (m.layer != first.layer) throw ValidationError("head matrices come from different layers");
    if (m.values.rows() != first.values.rows() || m.values.cols() != first.values.cols()) {
      throw ValidationError("head matrices disagree in shape");
    }
  }
  ScoreMatrix out;
  out.layer = first.layer;
  out.head = kAllHeads;
  out.method = first.method;
  out.encoder_tokens = first.encoder_tokens;
  out.decoder_tokens = first.decoder_tokens;
  out.values = Matrix(first.n_decoder(), first.n_encoder());
  bool all_normalized = true;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    auto it = std::find_if(heads.begin(), heads.end(),
                           [&](const ScoreMatrix& m) { return m.head == subset[k]; });
    if (it == heads.end()) {
      throw ValidationError("head " + std::to_string(subset[k]) + " of the mix subset is missing");
    }
    all_normalized = all_normalized && it->normalized;
    auto dst = out.values.data();
    auto src = it->values.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += w.gamma * s[k] * src[i];
  }
  out.normalized = all_normalized && std::abs(w.gamma - 1.0) < 1e-12;
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t at = 0;
  while (at <= text.size()) {
    std::size_t comma = text.find(',', at);
    std::string_view item = text.substr(at, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - at);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size()) {
        throw ValidationError("bad integer '" + std::string(item) + "'");
      }
      out.push_back(v);
    }
    if (comma == std::string_view::npos) break;
    at = comma + 1;
  }
  return out;
}

}  // namespace amralign
