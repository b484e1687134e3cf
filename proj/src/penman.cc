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

#include "amralign/penman.h"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "amralign/errors.h"

namespace amralign {
namespace {

using Kind = ParseError::Kind;

enum class Tok { kOpen, kClose, kSlash, kRole, kString, kSymbol, kEnd };

struct Token {
  Tok type;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  Lexer(std::string_view text, int first_line) : text_(text), line_(first_line) {}

  Token next() {
    skip_space_and_comments();
    int line = line_, column = column_;
    if (pos_ >= text_.size()) return {Tok::kEnd, "", line, column};
    char c = text_[pos_];
    if (c == '(') return single(Tok::kOpen);
    if (c == ')') return single(Tok::kClose);
    if (c == '/') return single(Tok::kSlash);
    if (c == '"') {
      std::string out(1, advance());
      while (true) {
        if (pos_ >= text_.size()) throw ParseError(Kind::kSyntax, line, column, "unterminated string");
        char d = advance();
        out.push_back(d);
        if (d == '\\' && pos_ < text_.size()) {
          out.push_back(advance());
        } else if (d == '"') {
          break;
        }
      }
      return {Tok::kString, out, line, column};
    }
    std::string out;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) out.push_back(advance());
    if (out.empty()) out.push_back(advance());
    return {out[0] == ':' ? Tok::kRole : Tok::kSymbol, out, line, column};
  }

  const Metadata& metadata() const { return metadata_; }

 private:
  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  Token single(Tok type) {
    int line = line_, column = column_;
    return {type, std::string(1, advance()), line, column};
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        std::string comment;
        while (pos_ < text_.size() && text_[pos_] != '\n') comment.push_back(advance());
        read_metadata(comment);
      } else {
        break;
      }
    }
  }

  // "# ::id x ::snt Some text" -> {id: x, snt: Some text}
  void read_metadata(std::string_view comment) {
    std::size_t at = comment.find("::");
    while (at != std::string_view::npos) {
      std::size_t next = comment.find(" ::", at + 2);
      std::string_view field = comment.substr(at + 2, next == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : next - at - 2);
      std::size_t space = field.find_first_of(" \t");
      std::string key(field.substr(0, space));
      std::string value;
      if (space != std::string_view::npos) {
        std::string_view rest = field.substr(space + 1);
        std::size_t b = rest.find_first_not_of(" \t");
        std::size_t e = rest.find_last_not_of(" \t\r");
        if (b != std::string_view::npos) value = std::string(rest.substr(b, e - b + 1));
      }
      if (!key.empty()) metadata_.emplace_back(std::move(key), std::move(value));
      at = next == std::string_view::npos ? next : next + 1;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int column_ = 1;
  Metadata metadata_;
};

bool looks_like_variable(const std::string& s) {
  static const std::regex kVariable("[a-z][0-9]*");
  return std::regex_match(s, kVariable);
}

class Parser {
 public:
  Parser(std::string_view text, int first_line) : lexer_(text, first_line) { shift(); }

  AmrGraph parse() {
    if (tok_.type == Tok::kEnd) return AmrGraph({}, {}, {}, lexer_.metadata());
    if (tok_.type == Tok::kClose) fail(Kind::kUnbalanced, "unmatched ')'");
    std::string root = parse_node();
    if (tok_.type == Tok::kClose) fail(Kind::kUnbalanced, "unmatched ')'");
    if (tok_.type != Tok::kEnd) fail(Kind::kSyntax, "unexpected '" + tok_.text + "' after graph");

    for (auto& [edge, where] : pending_) {
      Edge& e = edges_[edge];
      if (defined_.count(e.target)) continue;
      if (looks_like_variable(e.target)) {
        throw ParseError(Kind::kDanglingReference, where.line, where.column,
                         "reference to undefined variable '" + e.target + "'");
      }
      e.constant = true;
    }
    try {
      return AmrGraph(root, std::move(nodes_), std::move(edges_), lexer_.metadata());
    } catch (const GraphError& err) {
      throw ParseError(Kind::kSyntax, tok_.line, tok_.column, err.what());
    }
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(Kind kind, const std::string& what) const {
    throw ParseError(kind, tok_.line, tok_.column, what);
  }

  std::string parse_node() {
    Token open = tok_;
    shift();
    if (tok_.type == Tok::kEnd) {
      throw ParseError(Kind::kUnbalanced, open.line, open.column, "unclosed '('");
    }
    if (tok_.type != Tok::kSymbol) fail(Kind::kSyntax, "expected variable");
    Token var = tok_;
    shift();
    if (tok_.type == Tok::kEnd) {
      throw ParseError(Kind::kUnbalanced, open.line, open.column, "unclosed '('");
    }
    if (tok_.type != Tok::kSlash) fail(Kind::kSyntax, "expected '/' after variable");
    shift();
    if (tok_.type != Tok::kSymbol && tok_.type != Tok::kString) {
      if (tok_.type == Tok::kEnd) {
        throw ParseError(Kind::kUnbalanced, open.line, open.column, "unclosed '('");
      }
      fail(Kind::kSyntax, "expected concept");
    }
    if (!defined_.insert(var.text).second) {
      throw ParseError(Kind::kDuplicateVariable, var.line, var.column,
                       "variable '" + var.text + "' defined twice");
    }
    nodes_.push_back({var.text, tok_.text});
    shift();

    while (tok_.type == Tok::kRole) {
      std::string label = tok_.text;
      shift();
      std::size_t edge = edges_.size();
      edges_.push_back({var.text, label, "", false});
      switch (tok_.type) {
        case Tok::kOpen:
          edges_[edge].target = parse_node();
          break;
        case Tok::kString:
          edges_[edge].target = tok_.text;
          edges_[edge].constant = true;
          shift();
          break;
        case Tok::kSymbol:
          edges_[edge].target = tok_.text;
          pending_.emplace_back(edge, tok_);
          shift();
          break;
        case Tok::kEnd:
          throw ParseError(Kind::kUnbalanced, open.line, open.column, "unclosed '('");
        default:
          fail(Kind::kSyntax, "expected target after " + label);
      }
    }
    if (tok_.type == Tok::kEnd) {
      throw ParseError(Kind::kUnbalanced, open.line, open.column, "unclosed '('");
    }
    if (tok_.type != Tok::kClose) fail(Kind::kSyntax, "unexpected '" + tok_.text + "'");
    shift();
    return var.text;
  }

  Lexer lexer_;
  Token tok_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::set<std::string> defined_;
  std::vector<std::pair<std::size_t, Token>> pending_;
};

class Writer {
 public:
  Writer(const AmrGraph& g, PenmanStyle style) : g_(g), style_(style) {}

  std::string run() {
    if (g_.empty()) return {};
    write(g_.root(), 1);
    return out_.str();
  }

 private:
  void write(const std::string& variable, int depth) {
    seen_.insert(variable);
    out_ << '(' << variable << " / " << g_.find(variable)->concept_name;
    for (std::size_t ei : g_.children(variable)) {
      const Edge& e = g_.edges()[ei];
      if (style_.indent) {
        out_ << '\n' << std::string(static_cast<std::size_t>(depth * style_.indent_width), ' ');
      } else {
        out_ << ' ';
      }
      out_ << e.label << ' ';
      if (e.constant || seen_.count(e.target)) {
        out_ << e.target;
      } else {
        write(e.target, depth + 1);
      }
    }
    out_ << ')';
  }

  const AmrGraph& g_;
  PenmanStyle style_;
  std::set<std::string> seen_;
  std::ostringstream out_;
};

}  // namespace

AmrGraph parse_penman(std::string_view text, int first_line) {
  return Parser(text, first_line).parse();
}

std::vector<AmrGraph> parse_penman_corpus(std::string_view text) {
  std::vector<AmrGraph> graphs;
  std::size_t pos = 0;
  int line = 1;
  std::size_t block_start = 0;
  int block_line = 1;
  bool has_graph = false;
  auto flush = [&](std::size_t end) {
    if (has_graph) graphs.push_back(parse_penman(text.substr(block_start, end - block_start), block_line));
    has_graph = false;
  };
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view row = text.substr(pos, eol - pos);
    std::size_t first = row.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      flush(pos);
      block_start = eol + 1;
      block_line = line + 1;
    } else if (row[first] != '#') {
      has_graph = true;
    }
    pos = eol + 1;
    ++line;
  }
  flush(text.size());
  return graphs;
}

std::vector<AmrGraph> read_penman_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_penman_corpus(buffer.str());
}

std::string serialize_penman(const AmrGraph& g, PenmanStyle style) {
  return Writer(g, style).run();
}

std::string write_penman_corpus(const std::vector<AmrGraph>& graphs, PenmanStyle style) {
  std::string out;
  for (const AmrGraph& g : graphs) {
    if (!out.empty()) out += '\n';
    for (const auto& [key, value] : g.metadata()) {
      out += "# ::" + key;
      if (!value.empty()) out += " " + value;
      out += '\n';
    }
    out += serialize_penman(g, style);
    out += '\n';
  }
  return out;
}

}  // namespace amralign
