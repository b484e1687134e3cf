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

// Pointer-token linearization of AMR graphs and decoder-token mapping.

#ifndef AMRALIGN_LINEARIZATION_H_
#define AMRALIGN_LINEARIZATION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "amralign/graph.h"

namespace amralign {

// Depth-first token sequence of a graph:
//   (w / want-01 :ARG0 (h / he))  ->  ( <pointer:0> want-01 :ARG0 ( <pointer:1> he ) )
// Re-mentions emit only the pointer token. Parentheses map to no unit.
struct Linearization {
  std::vector<std::string> tokens;
  std::vector<std::optional<std::size_t>> unit_of_token;  // index into `units`
  std::vector<SemanticUnit> units;
  std::vector<std::string> pointer_variables;  // pointer k -> variable
};

Linearization linearize(const AmrGraph& g);

// Rebuilds the graph from a linearization. Variables come from
// `pointer_variables` when present, otherwise pointer k becomes "v{k}".
// Throws ParseError on malformed token sequences.
AmrGraph delinearize(const Linearization& lin);

// Decoder-token index -> unit index (nullopt for structural and special
// tokens).
using GraphPosMap = std::vector<std::optional<std::size_t>>;

// Reconciles a subword tokenization of the linearization with its tokens by
// character offsets. Special tokens (<s>, </s>, ...) that do not spell the
// next characters are skipped. Throws TokenMismatchError with the offending
// decoder-token index.
GraphPosMap map_output_tokens(const Linearization& lin,
                              const std::vector<std::string>& decoder_tokens);

std::string pointer_token(std::size_t k);

}  // namespace amralign

#endif  // AMRALIGN_LINEARIZATION_H_
