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

#include "amralign/graph.h"

#include <algorithm>
#include <map>

#include "amralign/errors.h"

namespace amralign {

AmrGraph::AmrGraph(std::string root, std::vector<Node> nodes, std::vector<Edge> edges,
                   Metadata metadata)
    : root_(std::move(root)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      metadata_(std::move(metadata)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!node_index_.emplace(nodes_[i].variable, i).second) {
      throw GraphError("variable '" + nodes_[i].variable + "' defined twice");
    }
  }
  if (nodes_.empty()) {
    if (!edges_.empty()) throw GraphError("edges in a graph without nodes");
    return;
  }
  if (!node_index_.count(root_)) throw GraphError("root '" + root_ + "' is not a node");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!node_index_.count(e.source)) {
      throw GraphError("edge " + e.label + " has undefined source '" + e.source + "'");
    }
    if (!e.constant && !node_index_.count(e.target)) {
      throw GraphError("edge " + e.label + " has undefined target '" + e.target + "'");
    }
    children_[e.source].push_back(i);
  }
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::string_view> stack{root_};
  seen[node_index_.at(root_)] = true;
  while (!stack.empty()) {
    auto var = stack.back();
    stack.pop_back();
    for (std::size_t ei : children(var)) {
      const Edge& e = edges_[ei];
      if (e.constant) continue;
      std::size_t t = node_index_.at(e.target);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(e.target);
      }
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!seen[i]) throw GraphError("node '" + nodes_[i].variable + "' unreachable from root");
  }
}

std::vector<Edge> AmrGraph::attributes() const {
  std::vector<Edge> out;
  std::copy_if(edges_.begin(), edges_.end(), std::back_inserter(out),
               [](const Edge& e) { return e.constant; });
  return out;
}

const Node* AmrGraph::find(std::string_view variable) const {
  auto it = node_index_.find(std::string(variable));
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

std::span<const std::size_t> AmrGraph::children(std::string_view variable) const {
  auto it = children_.find(std::string(variable));
  if (it == children_.end()) return {};
  return it->second;
}

int AmrGraph::mention_count(std::string_view variable) const {
  if (!find(variable)) return 0;
  int count = variable == root_ ? 1 : 0;
  for (const Edge& e : edges_) {
    if (!e.constant && e.target == variable) ++count;
  }
  return count;
}

std::string AmrGraph::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata_) {
    if (k == key) return v;
  }
  return {};
}

void AmrGraph::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

bool structurally_equal(const AmrGraph& a, const AmrGraph& b) {
  if (a.root() != b.root() || a.nodes().size() != b.nodes().size() ||
      a.edges().size() != b.edges().size()) {
    return false;
  }
  for (const Node& n : a.nodes()) {
    const Node* other = b.find(n.variable);
    if (!other || other->concept_name != n.concept_name) return false;
  }
  for (const Node& n : a.nodes()) {
    auto ca = a.children(n.variable);
    auto cb = b.children(n.variable);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (!(a.edges()[ca[i]] == b.edges()[cb[i]])) return false;
    }
  }
  return true;
}

namespace {

class UnitCollector {
 public:
  explicit UnitCollector(const AmrGraph& g) : g_(g) {}

  std::vector<SemanticUnit> run() {
    if (!g_.empty()) visit(g_.root(), "0");
    return std::move(units_);
  }

 private:
  std::size_t visit(const std::string& variable, const std::string& path) {
    std::size_t self = units_.size();
    defined_[variable] = self;
    SemanticUnit node;
    node.kind = UnitKind::kNode;
    node.path = path;
    node.variable = variable;
    node.concept_name = g_.find(variable)->concept_name;
    units_.push_back(std::move(node));

    auto kids = g_.children(variable);
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const Edge& e = g_.edges()[kids[k]];
      std::string child_path = path + "." + std::to_string(k);
      std::size_t rel = units_.size();
      SemanticUnit relation;
      relation.kind = UnitKind::kRelation;
      relation.path = child_path + ".r";
      relation.variable = e.source;
      relation.label = e.label;
      relation.target = e.target;
      relation.edge = kids[k];
      relation.source_unit = self;
      units_.push_back(std::move(relation));

      std::size_t target;
      if (e.constant) {
        target = units_.size();
        SemanticUnit literal;
        literal.kind = UnitKind::kNode;
        literal.path = child_path;
        literal.variable = "@" + child_path;
        literal.concept_name = e.target;
        literal.edge = kids[k];
        units_.push_back(std::move(literal));
      } else if (auto it = defined_.find(e.target); it != defined_.end()) {
        target = it->second;
        units_[rel].mention = ++mentions_[e.target];
      } else {
        target = visit(e.target, child_path);
      }
      units_[rel].target_unit = target;
    }
    return self;
  }

  const AmrGraph& g_;
  std::vector<SemanticUnit> units_;
  std::map<std::string, std::size_t> defined_;
  std::map<std::string, int> mentions_;
};

}  // namespace

std::vector<SemanticUnit> enumerate_units(const AmrGraph& g) {
  return UnitCollector(g).run();
}

std::optional<std::size_t> find_unit(std::span<const SemanticUnit> units,
                                     std::string_view path) {
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].path == path) return i;
  }
  return std::nullopt;
}

}  // namespace amralign
