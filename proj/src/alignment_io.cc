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

#include "amralign/alignment.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "amralign/errors.h"
#include "json.hpp"

namespace amralign {
namespace {

using nlohmann::ordered_json;

std::string_view leamr_type_name(AlignmentType t) {
  switch (t) {
    case AlignmentType::kSubgraph: return "subgraph";
    case AlignmentType::kDuplicate: return "dupl-subgraph";
    case AlignmentType::kRelation: return "relation";
    case AlignmentType::kReentrancy: return "reentrancy";
  }
  return "";
}

std::optional<AlignmentType> parse_leamr_type(std::string_view s) {
  for (AlignmentType t : kAlignmentTypes) {
    if (leamr_type_name(t) == s) return t;
  }
  return std::nullopt;
}

std::string token_range(const std::vector<int>& tokens) {
  if (tokens.size() == 1) return std::to_string(tokens[0]);
  return std::to_string(tokens.front()) + ":" + std::to_string(tokens.back() + 1);
}

int to_int(std::string_view s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw FormatError(line, "bad token index '" + std::string(s) + "'");
  }
  return v;
}

std::string write_isi(const std::vector<AlignmentSet>& sets) {
  std::string out;
  for (const AlignmentSet& set : sets) {
    if (!out.empty()) out += '\n';
    out += "# ::id " + set.id + "\n";
    for (const AlignmentRecord& r : set.records) {
      if (r.tokens.empty()) continue;
      std::string range = token_range(r.tokens);
      for (const auto& n : r.nodes) out += range + "-" + n + "\n";
      for (const auto& e : r.edges) out += range + "-" + e + "\n";
    }
  }
  return out;
}

std::vector<AlignmentSet> read_isi(std::string_view text) {
  static const std::regex kPath("[0-9]+(\\.[0-9]+)*(\\.r)?");
  std::vector<AlignmentSet> sets;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t") - b + 1);
    if (line.starts_with("#")) {
      std::size_t at = line.find("::id");
      if (at == std::string::npos) continue;
      std::string id = line.substr(at + 4);
      id.erase(0, id.find_first_not_of(" \t"));
      sets.push_back({id, Standard::kIsi, {}});
      continue;
    }
    if (sets.empty()) throw FormatError(line_no, "alignment line before any '# ::id' header");
    std::size_t dash = line.rfind('-');
    if (dash == std::string::npos || dash == 0) throw FormatError(line_no, "expected tokens-path");
    std::string range = line.substr(0, dash);
    std::string path = line.substr(dash + 1);
    if (!std::regex_match(path, kPath)) throw FormatError(line_no, "bad unit path '" + path + "'");
    AlignmentRecord r;
    std::size_t colon = range.find(':');
    int lo = to_int(std::string_view(range).substr(0, colon), line_no);
    int hi = colon == std::string::npos ? lo + 1 : to_int(std::string_view(range).substr(colon + 1), line_no);
    if (hi <= lo) throw FormatError(line_no, "empty token range '" + range + "'");
    for (int t = lo; t < hi; ++t) r.tokens.push_back(t);
    if (path.ends_with(".r")) {
      r.type = AlignmentType::kRelation;
      r.edges.push_back(path);
    } else {
      r.type = AlignmentType::kSubgraph;
      r.nodes.push_back(path);
    }
    sets.back().records.push_back(std::move(r));
  }
  return sets;
}

std::string write_leamr(const std::vector<AlignmentSet>& sets) {
  if (sets.empty()) return {};
  std::string out = "{\n";
  for (std::size_t s = 0; s < sets.size(); ++s) {
    out += "  " + ordered_json(sets[s].id).dump() + ": [";
    const auto& records = sets[s].records;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const AlignmentRecord& r = records[i];
      ordered_json j;
      j["type"] = leamr_type_name(r.type);
      j["tokens"] = r.tokens;
      j["nodes"] = r.nodes;
      j["edges"] = r.edges;
      if (r.type == AlignmentType::kReentrancy) j["mention"] = r.mention;
      out += (i ? ",\n    " : "\n    ") + j.dump();
    }
    out += records.empty() ? "]" : "\n  ]";
    out += s + 1 < sets.size() ? ",\n" : "\n";
  }
  out += "}\n";
  return out;
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::vector<AlignmentSet> read_leamr(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(line_of_offset(text, e.byte), e.what());
  }
  if (!doc.is_object()) throw FormatError(1, "LEAMR document must be a JSON object");
  std::vector<AlignmentSet> sets;
  for (const auto& [id, records] : doc.items()) {
    if (!records.is_array()) throw FormatError(0, "sentence " + id + ": records must be an array");
    AlignmentSet set{id, Standard::kLeamr, {}};
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& j = records[i];
      std::string where = "sentence " + id + " record " + std::to_string(i);
      try {
        AlignmentRecord r;
        auto type = parse_leamr_type(j.at("type").get<std::string>());
        if (!type) throw FormatError(0, where + ": unknown type " + j.at("type").dump());
        r.type = *type;
        r.tokens = j.at("tokens").get<std::vector<int>>();
        if (j.contains("nodes")) r.nodes = j.at("nodes").get<std::vector<std::string>>();
        if (j.contains("edges")) r.edges = j.at("edges").get<std::vector<std::string>>();
        if (j.contains("mention")) r.mention = j.at("mention").get<int>();
        set.records.push_back(std::move(r));
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(0, where + ": " + e.what());
      }
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

}  // namespace

Standard parse_standard(std::string_view name) {
  if (name == "isi") return Standard::kIsi;
  if (name == "leamr") return Standard::kLeamr;
  throw Error("unknown alignment standard '" + std::string(name) + "'");
}

std::string_view standard_name(Standard s) { return s == Standard::kIsi ? "isi" : "leamr"; }

std::string_view type_name(AlignmentType t) {
  switch (t) {
    case AlignmentType::kSubgraph: return "subgraph";
    case AlignmentType::kDuplicate: return "duplicate";
    case AlignmentType::kRelation: return "relation";
    case AlignmentType::kReentrancy: return "reentrancy";
  }
  return "";
}

std::vector<std::string> AlignmentRecord::key_units() const {
  switch (type) {
    case AlignmentType::kSubgraph:
    case AlignmentType::kDuplicate:
      if (!nodes.empty()) return nodes;
      return edges;
    case AlignmentType::kRelation:
    case AlignmentType::kReentrancy:
      if (!edges.empty()) return edges;
      return nodes;
  }
  return {};
}

std::vector<AlignmentRecord> AlignmentSet::of_type(AlignmentType t) const {
  std::vector<AlignmentRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [t](const AlignmentRecord& r) { return r.type == t; });
  return out;
}

std::string write_alignments(const std::vector<AlignmentSet>& sets, Standard standard) {
  return standard == Standard::kIsi ? write_isi(sets) : write_leamr(sets);
}

std::vector<AlignmentSet> read_alignments(std::string_view text, Standard standard) {
  return standard == Standard::kIsi ? read_isi(text) : read_leamr(text);
}

std::vector<AlignmentSet> read_alignment_file(const std::string& path, Standard standard) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_alignments(buffer.str(), standard);
}

}  // namespace amralign
