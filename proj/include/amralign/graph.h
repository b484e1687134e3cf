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

// AMR graph representation and semantic-unit enumeration.
//
// A graph is stored the way it is written in Penman: every edge keeps the
// orientation and label it was written with (`:ARG0-of` stays inverted), and
// edges appear in depth-first order of the written tree. Constant values
// (numbers, strings, `-`) are edges with `constant == true` whose target holds
// the literal text, quotes included.

#ifndef AMRALIGN_GRAPH_H_
#define AMRALIGN_GRAPH_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace amralign {

struct Node {
  std::string variable;
  std::string concept_name;

  bool operator==(const Node&) const = default;
};

struct Edge {
  std::string source;
  std::string label;
  std::string target;
  bool constant = false;

  bool operator==(const Edge&) const = default;
};

using Metadata = std::vector<std::pair<std::string, std::string>>;

class AmrGraph {
 public:
  AmrGraph() = default;

  // Throws GraphError if the root is unknown, a variable is defined twice, an
  // edge references an undefined variable, or a node is unreachable from the
  // root.
  AmrGraph(std::string root, std::vector<Node> nodes, std::vector<Edge> edges,
           Metadata metadata = {});

  bool empty() const { return nodes_.empty(); }
  const std::string& root() const { return root_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  const Metadata& metadata() const { return metadata_; }

  // Edges whose target is a literal value.
  std::vector<Edge> attributes() const;

  const Node* find(std::string_view variable) const;

  // Outgoing edge indices of `variable`, in written order.
  std::span<const std::size_t> children(std::string_view variable) const;

  // Number of times a variable is mentioned: once as the root plus once per
  // edge targeting it. Reentrant iff > 1.
  int mention_count(std::string_view variable) const;
  bool is_reentrant(std::string_view variable) const {
    return mention_count(variable) > 1;
  }

  // Metadata lookup (`# ::id`, `# ::snt`...). Empty string when absent.
  std::string meta(std::string_view key) const;
  std::string id() const { return meta("id"); }
  std::string sentence() const { return meta("snt"); }
  void set_meta(const std::string& key, const std::string& value);

 private:
  std::string root_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  Metadata metadata_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<std::string, std::vector<std::size_t>> children_;
};

// Same root, same variable->concept map and, per source variable, the same
// ordered list of outgoing edges. Metadata and node listing order are ignored.
bool structurally_equal(const AmrGraph& a, const AmrGraph& b);

enum class UnitKind { kNode, kRelation };

// A node or relation of the graph, addressed by its dotted position in the
// written tree. The root is "0"; child k of the node at `p` sits at `p.k`.
// A node's address is the position of its defining mention; a relation's
// address is the position of its target followed by ".r".
struct SemanticUnit {
  UnitKind kind = UnitKind::kNode;
  std::string path;
  // Node: variable (or "@<path>" for constants) and concept/literal.
  // Relation: source variable, label, target variable or literal.
  std::string variable;
  std::string concept_name;
  std::string label;
  std::string target;
  // Relation units: index into AmrGraph::edges(). Constant nodes: index of the
  // edge that introduces them.
  std::optional<std::size_t> edge;
  // Relation units: whether the edge target is a re-mention of an already
  // defined node, and which re-mention it is (1-based).
  int mention = 0;
  // Relation units: indices (into the unit list) of the source and target node
  // units.
  std::size_t source_unit = 0;
  std::size_t target_unit = 0;

  bool is_node() const { return kind == UnitKind::kNode; }
  bool is_relation() const { return kind == UnitKind::kRelation; }
  bool operator==(const SemanticUnit&) const = default;
};

// Units in depth-first written order: each node unit at its definition, each
// relation unit immediately before its target.
std::vector<SemanticUnit> enumerate_units(const AmrGraph& g);

// Index of the unit whose path is `path`.
std::optional<std::size_t> find_unit(std::span<const SemanticUnit> units,
                                     std::string_view path);

}  // namespace amralign

#endif  // AMRALIGN_GRAPH_H_
