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

// Typed span <-> semantic-unit alignments and their ISI / LEAMR documents.

#ifndef AMRALIGN_ALIGNMENT_H_
#define AMRALIGN_ALIGNMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amralign {

enum class Standard { kIsi, kLeamr };

Standard parse_standard(std::string_view name);
std::string_view standard_name(Standard s);

// ISI documents only produce kSubgraph (single node) and kRelation records.
enum class AlignmentType { kSubgraph, kDuplicate, kRelation, kReentrancy };
inline constexpr AlignmentType kAlignmentTypes[] = {
    AlignmentType::kSubgraph, AlignmentType::kDuplicate, AlignmentType::kRelation,
    AlignmentType::kReentrancy};

std::string_view type_name(AlignmentType t);

// One aligned span. Units are referred to by their path addresses, so a
// record does not need the graph to be compared or serialized.
struct AlignmentRecord {
  AlignmentType type = AlignmentType::kSubgraph;
  std::vector<int> tokens;          // word indices of the span, ascending
  std::vector<std::string> nodes;   // node unit paths
  std::vector<std::string> edges;   // relation unit paths
  int mention = 0;                  // reentrancy: which re-mention (1-based)

  // The units a record is judged on: nodes for (duplicate) subgraphs, edges
  // for relations and reentrancies, both for anything else.
  std::vector<std::string> key_units() const;

  bool operator==(const AlignmentRecord&) const = default;
};

// Alignments of one sentence.
struct AlignmentSet {
  std::string id;
  Standard standard = Standard::kLeamr;
  std::vector<AlignmentRecord> records;

  std::vector<AlignmentRecord> of_type(AlignmentType t) const;
  bool operator==(const AlignmentSet&) const = default;
};

// Unit index -> span index. Units without an entry are unaligned.
struct AlignmentMap {
  std::vector<std::optional<std::size_t>> span_of_unit;

  bool operator==(const AlignmentMap&) const = default;
};

// ISI: per sentence a "# ::id" line followed by one `tokens-path` line per
// record, where tokens is "3" for a single word or "3:5" for words 3..4 and
// relation paths end in ".r". Sentences are separated by a blank line.
//
// LEAMR: a JSON object keyed by sentence id; each value lists records
//   {"type": "subgraph"|"dupl-subgraph"|"relation"|"reentrancy",
//    "tokens": [...], "nodes": [...], "edges": [...], "mention": k}
// with "mention" present on reentrancy records only.
std::string write_alignments(const std::vector<AlignmentSet>& sets, Standard standard);
std::vector<AlignmentSet> read_alignments(std::string_view text, Standard standard);
std::vector<AlignmentSet> read_alignment_file(const std::string& path, Standard standard);

}  // namespace amralign

#endif  // AMRALIGN_ALIGNMENT_H_
