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

#include <random>

#include "doctest.h"

#include "amralign/errors.h"
#include "amralign/linearization.h"
#include "amralign/penman.h"
#include "support.h"

namespace amralign {
namespace {

using testing::fixtures;
using testing::kProtect;

TEST_CASE("minimal linearization") {
  Linearization lin = linearize(parse_penman("(t / thirst)"));
  CHECK(lin.tokens == std::vector<std::string>{"(", "<pointer:0>", "thirst", ")"});
  CHECK_FALSE(lin.unit_of_token[0]);
  CHECK(lin.unit_of_token[1] == 0u);
  CHECK(lin.unit_of_token[2] == 0u);
  CHECK_FALSE(lin.unit_of_token[3]);
}

TEST_CASE("re-mentions reuse the pointer") {
  Linearization lin = linearize(parse_penman(kProtect));
  std::vector<std::string> expected = {
      "(", "<pointer:0>", "want-01", ":ARG0", "(", "<pointer:1>", "he", ")", ":ARG1", "(",
      "<pointer:2>", "protect-01", ":ARG0", "<pointer:1>", ":ARG1", "<pointer:1>", ")", ")"};
  CHECK(lin.tokens == expected);
  std::size_t h = 2;
  REQUIRE(lin.units[h].variable == "h");
  CHECK(lin.unit_of_token[5] == h);
  CHECK(lin.unit_of_token[13] == h);
  CHECK(lin.unit_of_token[15] == h);
  for (std::size_t t = 0; t < lin.tokens.size(); ++t) {
    if (lin.tokens[t].rfind(":", 0) == 0) {
      REQUIRE(lin.unit_of_token[t]);
      CHECK(lin.units[*lin.unit_of_token[t]].is_relation());
      CHECK(lin.units[*lin.unit_of_token[t]].label == lin.tokens[t]);
    }
  }
}

TEST_CASE("every unit owns a token") {
  for (const AmrGraph& g : fixtures()) {
    CAPTURE(g.id());
    Linearization lin = linearize(g);
    std::vector<int> owned(lin.units.size(), 0);
    for (const auto& u : lin.unit_of_token) {
      if (u) owned[*u]++;
    }
    for (std::size_t u = 0; u < owned.size(); ++u) CHECK(owned[u] >= 1);
  }
}

TEST_CASE("delinearize restores fixtures and random graphs") {
  for (const AmrGraph& g : fixtures()) {
    CAPTURE(g.id());
    CHECK(structurally_equal(delinearize(linearize(g)), g));
  }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    AmrGraph g = testing::random_graph(rng, 1 + trial % 10);
    CHECK(structurally_equal(delinearize(linearize(g)), g));
  }
}

TEST_CASE("delinearize without variables names pointers") {
  Linearization lin = linearize(parse_penman(kProtect));
  lin.pointer_variables.clear();
  AmrGraph g = delinearize(lin);
  CHECK(g.root() == "v0");
  CHECK(g.mention_count("v1") == 3);
}

TEST_CASE("delinearize rejects malformed streams") {
  Linearization lin = linearize(parse_penman("(t / thirst)"));
  lin.tokens.pop_back();
  CHECK_THROWS_AS(delinearize(lin), ParseError);
}

TEST_CASE("identity tokenization maps to unit_of_token") {
  for (const AmrGraph& g : fixtures()) {
    Linearization lin = linearize(g);
    CHECK(map_output_tokens(lin, lin.tokens) == lin.unit_of_token);
  }
}

TEST_CASE("split concept maps every piece to its node") {
  Linearization lin = linearize(parse_penman(kProtect));
  std::vector<std::string> dec = {"<s>", "(", "<pointer:0>", "want", "-01", ":ARG0", "(",
                                  "<pointer:1>", "he", ")", ":ARG1", "(", "<pointer:2>",
                                  "pro", "tect", "-01", ":ARG0", "<pointer:1>", ":ARG1",
                                  "<pointer:1>", ")", ")", "</s>"};
  GraphPosMap gp = map_output_tokens(lin, dec);
  REQUIRE(gp.size() == dec.size());
  CHECK_FALSE(gp[0]);
  CHECK_FALSE(gp.back());
  std::size_t p = 4;
  REQUIRE(lin.units[p].variable == "p");
  CHECK(gp[13] == p);
  CHECK(gp[14] == p);
  CHECK(gp[15] == p);
  CHECK(gp[3] == 0u);
  CHECK(gp[4] == 0u);
}

TEST_CASE("subword markers are stripped") {
  Linearization lin = linearize(parse_penman("(t / thirst)"));
  GraphPosMap gp = map_output_tokens(lin, {"\xC4\xA0(", "\xC4\xA0<pointer:0>", "\xC4\xA0thi", "rst", "\xC4\xA0)"});
  CHECK(gp == GraphPosMap{std::nullopt, 0u, 0u, 0u, std::nullopt});
}

TEST_CASE("mismatched decoder stream reports the offset") {
  Linearization lin = linearize(parse_penman("(t / thirst)"));
  try {
    map_output_tokens(lin, {"(", "<pointer:0>", "hunger", ")"});
    FAIL("no error");
  } catch (const TokenMismatchError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(map_output_tokens(lin, {"(", "<pointer:0>", "thirst"}), TokenMismatchError);
}

}  // namespace
}  // namespace amralign
