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

#include "amralign/linearization.h"

#include <map>
#include <regex>
#include <set>

#include "amralign/errors.h"
#include "amralign/tokens.h"

namespace amralign {

std::string pointer_token(std::size_t k) { return "<pointer:" + std::to_string(k) + ">"; }

namespace {

class Linearizer {
 public:
  explicit Linearizer(const AmrGraph& g) : g_(g) { lin_.units = enumerate_units(g); }

  Linearization run() {
    if (!g_.empty()) visit();
    return std::move(lin_);
  }

 private:
  void emit(std::string token, std::optional<std::size_t> unit) {
    lin_.tokens.push_back(std::move(token));
    lin_.unit_of_token.push_back(unit);
  }

  // Consumes the node unit at `next_` and everything below it.
  void visit() {
    std::size_t self = next_++;
    const SemanticUnit& node = lin_.units[self];
    std::size_t k = lin_.pointer_variables.size();
    pointer_of_[node.variable] = k;
    lin_.pointer_variables.push_back(node.variable);
    emit("(", std::nullopt);
    emit(pointer_token(k), self);
    emit(node.concept_name, self);
    for (std::size_t i = 0; i < g_.children(node.variable).size(); ++i) {
      std::size_t rel = next_++;
      const SemanticUnit& relation = lin_.units[rel];
      emit(relation.label, rel);
      if (relation.target_unit != rel + 1) {
        emit(pointer_token(pointer_of_.at(relation.target)), relation.target_unit);
      } else if (lin_.units[rel + 1].edge) {
        ++next_;
        emit(lin_.units[rel + 1].concept_name, rel + 1);
      } else {
        visit();
      }
    }
    emit(")", std::nullopt);
  }

  const AmrGraph& g_;
  Linearization lin_;
  std::size_t next_ = 0;
  std::map<std::string, std::size_t> pointer_of_;
};

std::optional<std::size_t> parse_pointer(const std::string& token) {
  static const std::regex kPointer("<pointer:([0-9]+)>");
  std::smatch m;
  if (!std::regex_match(token, m, kPointer)) return std::nullopt;
  return std::stoul(m[1].str());
}

class Delinearizer {
 public:
  explicit Delinearizer(const Linearization& lin) : lin_(lin) {}

  AmrGraph run() {
    if (lin_.tokens.empty()) return {};
    std::string root = node();
    if (pos_ != lin_.tokens.size()) fail("trailing tokens after graph");
    return AmrGraph(root, std::move(nodes_), std::move(edges_));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ParseError::Kind::kSyntax, 1, static_cast<int>(pos_) + 1, what);
  }

  const std::string& take() {
    if (pos_ >= lin_.tokens.size()) {
      throw ParseError(ParseError::Kind::kUnbalanced, 1, static_cast<int>(pos_) + 1,
                       "linearization ends inside a node");
    }
    return lin_.tokens[pos_++];
  }

  std::string variable_for(std::size_t k) const {
    if (k < lin_.pointer_variables.size()) return lin_.pointer_variables[k];
    return "v" + std::to_string(k);
  }

  std::string node() {
    if (take() != "(") fail("expected '('");
    auto k = parse_pointer(take());
    if (!k) fail("expected pointer token");
    if (defined_.count(*k)) fail("pointer defined twice");
    defined_.insert(*k);
    std::string var = variable_for(*k);
    const std::string& concept_name = take();
    nodes_.push_back({var, concept_name});
    while (true) {
      const std::string& tok = take();
      if (tok == ")") break;
      if (tok.empty() || tok[0] != ':') fail("expected relation, got '" + tok + "'");
      std::size_t edge = edges_.size();
      edges_.push_back({var, tok, "", false});
      if (pos_ < lin_.tokens.size() && lin_.tokens[pos_] == "(") {
        edges_[edge].target = node();
        continue;
      }
      const std::string& target = take();
      if (auto p = parse_pointer(target)) {
        if (!defined_.count(*p)) fail("reference to undefined pointer " + target);
        edges_[edge].target = variable_for(*p);
      } else {
        edges_[edge].target = target;
        edges_[edge].constant = true;
      }
    }
    return var;
  }

  const Linearization& lin_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::set<std::size_t> defined_;
};

}  // namespace

Linearization linearize(const AmrGraph& g) { return Linearizer(g).run(); }

AmrGraph delinearize(const Linearization& lin) { return Delinearizer(lin).run(); }

GraphPosMap map_output_tokens(const Linearization& lin,
                              const std::vector<std::string>& decoder_tokens) {
  std::string text;
  std::vector<std::size_t> owner;  // character -> linearization token
  for (std::size_t i = 0; i < lin.tokens.size(); ++i) {
    text += lin.tokens[i];
    owner.insert(owner.end(), lin.tokens[i].size(), i);
  }

  GraphPosMap map(decoder_tokens.size());
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < decoder_tokens.size(); ++t) {
    std::string_view piece = strip_marker(decoder_tokens[t]).text;
    if (piece.empty()) continue;
    if (text.compare(cursor, piece.size(), piece) == 0 && cursor + piece.size() <= text.size()) {
      for (std::size_t c = cursor; c < cursor + piece.size(); ++c) {
        if (auto unit = lin.unit_of_token[owner[c]]) {
          map[t] = unit;
          break;
        }
      }
      cursor += piece.size();
    } else if (!is_special_token(decoder_tokens[t])) {
      throw TokenMismatchError(t, "decoder token '" + decoder_tokens[t] +
                                      "' does not match linearization at character " +
                                      std::to_string(cursor));
    }
  }
  if (cursor != text.size()) {
    throw TokenMismatchError(decoder_tokens.size(),
                             "decoder tokens end at character " + std::to_string(cursor) +
                                 " of " + std::to_string(text.size()));
  }
  return map;
}

}  // namespace amralign
