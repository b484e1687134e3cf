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

// Fixtures and generators shared by the unit and acceptance tests.

#ifndef AMRALIGN_TESTS_SUPPORT_SUPPORT_H_
#define AMRALIGN_TESTS_SUPPORT_SUPPORT_H_

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "amralign/graph.h"
#include "amralign/linearization.h"
#include "amralign/score_matrix.h"
#include "amralign/sentence.h"

namespace amralign::testing {

std::string data_path(const std::string& name);

// The hand-built corpus in tests/data/fixtures.amr.
const std::vector<AmrGraph>& fixtures();
const AmrGraph& fixture(const std::string& id);

inline constexpr const char* kProtect =
    "(w / want-01 :ARG0 (h / he) :ARG1 (p / protect-01 :ARG0 h :ARG1 h))";

// Random connected graph with `n_nodes` variables, some constants and, with
// probability `reentrancy` per node, an extra edge to a non-ancestor.
AmrGraph random_graph(std::mt19937_64& rng, std::size_t n_nodes, double reentrancy = 0.2);

// Raw decoder x encoder matrix over the linearization tokens and `<s>` +
// words + `</s>`. `levels` > 0 draws integers in [0, levels) so ties are
// common; otherwise values are uniform in [0, 1).
ScoreMatrix random_raw(const Linearization& lin, const std::vector<std::string>& words,
                       std::mt19937_64& rng, int levels = 0);

// Raw matrix whose row for each unit token peaks on `word_of_unit[unit]`.
ScoreMatrix planted_raw(const Linearization& lin, const std::vector<std::string>& words,
                        const std::vector<std::size_t>& word_of_unit);

// Encoder tokens for `words` with the given special tokens around them.
std::vector<std::string> encoder_tokens(const std::vector<std::string>& words);

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo = 0.0,
                     double hi = 1.0);

// Signed-rank statistics by listing all 2^n sign assignments of the nonzero
// differences, ranks counted pairwise.
struct EnumeratedWilcoxon {
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;
};
EnumeratedWilcoxon wilcoxon_by_enumeration(const std::vector<double>& a, const std::vector<double>& b);

// r = (n Sxy - Sx Sy) / sqrt((n Sxx - Sx^2) (n Syy - Sy^2)) over raw sums.
double pearson_by_sums(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace amralign::testing

#endif  // AMRALIGN_TESTS_SUPPORT_SUPPORT_H_
