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

// Penman notation reader and writer.

#ifndef AMRALIGN_PENMAN_H_
#define AMRALIGN_PENMAN_H_

#include <string>
#include <string_view>
#include <vector>

#include "amralign/graph.h"

namespace amralign {

// Parses a single graph, optionally preceded by `# ::key value` comment lines.
// `first_line` offsets reported line numbers when the text is a slice of a
// larger file. Throws ParseError.
AmrGraph parse_penman(std::string_view text, int first_line = 1);

// Parses a file of blank-line-separated graphs.
std::vector<AmrGraph> parse_penman_corpus(std::string_view text);
std::vector<AmrGraph> read_penman_file(const std::string& path);

struct PenmanStyle {
  bool indent = true;  // one relation per line; false writes a single line
  int indent_width = 4;
};

// Depth-first from the root, children in stored order; re-mentions are
// written as the bare variable.
std::string serialize_penman(const AmrGraph& g, PenmanStyle style = {});

// Metadata comments followed by the graph, blocks separated by a blank line.
std::string write_penman_corpus(const std::vector<AmrGraph>& graphs, PenmanStyle style = {});

}  // namespace amralign

#endif  // AMRALIGN_PENMAN_H_
