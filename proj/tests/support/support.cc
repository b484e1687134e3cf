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

#include "support.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "amralign/penman.h"

#ifndef AMRALIGN_TEST_DATA
#error "AMRALIGN_TEST_DATA must point at tests/data"
#endif

namespace amralign::testing {

std::string data_path(const std::string& name) { return std::string(AMRALIGN_TEST_DATA) + "/" + name; }

const std::vector<AmrGraph>& fixtures() {
  static const std::vector<AmrGraph> graphs = read_penman_file(data_path("fixtures.amr"));
  return graphs;
}

const AmrGraph& fixture(const std::string& id) {
  for (const AmrGraph& g : fixtures()) {
    if (g.id() == id) return g;
  }
  throw std::out_of_range("no fixture " + id);
}

AmrGraph random_graph(std::mt19937_64& rng, std::size_t n_nodes, double reentrancy) {
  static const std::vector<std::string> kConcepts = {
      "boy", "girl", "want-01", "go-02", "see-01", "thing", "person", "and", "big", "city"};
  static const std::vector<std::string> kLabels = {":ARG0", ":ARG1", ":ARG2", ":mod", ":op1",
                                                   ":domain", ":ARG0-of", ":time", ":location"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::size_t> parent(n_nodes, 0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    nodes.push_back({"x" + std::to_string(i), kConcepts[pick(kConcepts.size())]});
    if (i > 0) {
      parent[i] = pick(i);
      edges.push_back({nodes[parent[i]].variable, kLabels[pick(kLabels.size())], nodes[i].variable});
    }
  }
  for (std::size_t i = 1; i < n_nodes; ++i) {
    if (coin(rng) >= reentrancy) continue;
    std::size_t target = pick(n_nodes);
    bool ancestor = false;
    for (std::size_t a = i; !ancestor; a = parent[a]) {
      ancestor = a == target;
      if (a == 0) break;
    }
    if (ancestor) continue;
    edges.push_back({nodes[i].variable, kLabels[pick(kLabels.size())], nodes[target].variable});
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    double c = coin(rng);
    if (c < 0.1) {
      edges.push_back({nodes[i].variable, ":polarity", "-", true});
    } else if (c < 0.2) {
      edges.push_back({nodes[i].variable, ":quant", std::to_string(pick(100)), true});
    } else if (c < 0.25) {
      edges.push_back({nodes[i].variable, ":op1", "\"Paris\"", true});
    }
  }
  // Shuffle the outgoing order so re-mentions sometimes precede definitions.
  std::shuffle(edges.begin(), edges.end(), rng);
  std::string root = nodes[0].variable;
  return AmrGraph(root, std::move(nodes), std::move(edges));
}

std::vector<std::string> encoder_tokens(const std::vector<std::string>& words) {
  std::vector<std::string> out{"<s>"};
  out.insert(out.end(), words.begin(), words.end());
  out.push_back("</s>");
  return out;
}

namespace {

ScoreMatrix empty_raw(const Linearization& lin, const std::vector<std::string>& words) {
  ScoreMatrix m;
  m.encoder_tokens = encoder_tokens(words);
  m.decoder_tokens = lin.tokens;
  m.values = Matrix(lin.tokens.size(), m.encoder_tokens.size());
  return m;
}

}  // namespace

ScoreMatrix random_raw(const Linearization& lin, const std::vector<std::string>& words,
                       std::mt19937_64& rng, int levels) {
  ScoreMatrix m = empty_raw(lin, words);
  std::uniform_real_distribution<double> real(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, std::max(levels, 1) - 1);
  for (double& v : m.values.data()) v = levels > 0 ? level(rng) : real(rng);
  return m;
}

ScoreMatrix planted_raw(const Linearization& lin, const std::vector<std::string>& words,
                        const std::vector<std::size_t>& word_of_unit) {
  ScoreMatrix m = empty_raw(lin, words);
  for (std::size_t t = 0; t < lin.tokens.size(); ++t) {
    for (std::size_t c = 0; c < m.values.cols(); ++c) m.values(t, c) = 0.01;
    if (lin.unit_of_token[t]) m.values(t, word_of_unit.at(*lin.unit_of_token[t]) + 1) = 1.0;
  }
  return m;
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  std::uniform_real_distribution<double> real(lo, hi);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = real(rng);
  return m;
}

EnumeratedWilcoxon wilcoxon_by_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double below = 0, same = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) below += 1;
      if (std::abs(d[j]) == std::abs(d[i])) same += 1;
    }
    rank[i] = below + (same + 1) / 2;
  }
  EnumeratedWilcoxon out;
  for (std::size_t i = 0; i < n; ++i) (d[i] > 0 ? out.w_plus : out.w_minus) += rank[i];
  double le = 0, ge = 0;
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n); ++signs) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (signs >> i & 1) w += rank[i];
    }
    if (w <= out.w_plus) le += 1;
    if (w >= out.w_plus) ge += 1;
  }
  out.p_value = std::min(1.0, 2 * std::min(le, ge) / static_cast<double>(std::uint64_t{1} << n));
  return out;
}

double pearson_by_sums(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace amralign::testing
