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

#include "amralign/sentence.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "amralign/errors.h"
#include "amralign/tokens.h"

namespace amralign {
namespace {

bool is_ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& words, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += words[i];
  }
  return out;
}

bool capitalized(std::string_view word) {
  return !word.empty() && std::isupper(static_cast<unsigned char>(word[0]));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::vector<std::string> word_tokenize(std::string_view sentence) {
  std::vector<std::string> words;
  for (const std::string& chunk : split_ws(sentence)) {
    std::size_t b = 0, e = chunk.size();
    while (b < e && is_ascii_punct(chunk[b])) words.emplace_back(1, chunk[b++]);
    std::size_t tail = e;
    while (tail > b && is_ascii_punct(chunk[tail - 1])) --tail;
    if (tail > b) words.push_back(chunk.substr(b, tail - b));
    for (std::size_t i = tail; i < e; ++i) words.emplace_back(1, chunk[i]);
  }
  return words;
}

bool is_punctuation(std::string_view word) {
  return std::none_of(word.begin(), word.end(), [](unsigned char c) {
    return std::isalnum(c) || c >= 0x80;
  });
}

Lexicon::Lexicon(std::vector<std::vector<std::string>> entries) {
  for (auto& entry : entries) {
    if (entry.empty()) continue;
    for (auto& w : entry) w = lower(w);
    entries_.push_back(std::move(entry));
  }
}

Lexicon Lexicon::parse(std::string_view text) {
  std::vector<std::vector<std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto words = split_ws(line);
    if (!words.empty()) entries.push_back(std::move(words));
  }
  return Lexicon(std::move(entries));
}

Lexicon Lexicon::load(const std::string& path) { return parse(read_file(path)); }

std::size_t Lexicon::longest_match(const std::vector<std::string>& words,
                                   std::size_t start) const {
  std::size_t best = 0;
  for (const auto& entry : entries_) {
    if (entry.size() <= best || start + entry.size() > words.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < entry.size() && match; ++i) {
      match = lower(words[start + i]) == entry[i];
    }
    if (match) best = entry.size();
  }
  return best;
}

SpanList::SpanList(std::vector<Span> spans, std::size_t n_words)
    : spans_(std::move(spans)), span_of_word_(n_words) {
  std::size_t next = 0;
  for (std::size_t i = 0; i < spans_.size(); ++i) {
    const Span& s = spans_[i];
    if (s.start != next || s.end <= s.start) {
      throw ValidationError("spans do not partition the sentence at span " + std::to_string(i));
    }
    for (std::size_t w = s.start; w < s.end && w < n_words; ++w) span_of_word_[w] = i;
    next = s.end;
  }
  if (next != n_words) throw ValidationError("spans do not cover all words");
}

SpanList SpanList::singletons(const std::vector<std::string>& words) {
  return from_sizes(words, std::vector<std::size_t>(words.size(), 1));
}

SpanList SpanList::from_sizes(const std::vector<std::string>& words,
                              const std::vector<std::size_t>& sizes) {
  std::vector<Span> spans;
  std::size_t at = 0;
  for (std::size_t n : sizes) {
    if (at + n > words.size()) throw ValidationError("span sizes exceed word count");
    spans.push_back({at, at + n, join(words, at, at + n)});
    at += n;
  }
  return SpanList(std::move(spans), words.size());
}

std::size_t SpanList::span_of_word(std::size_t word) const {
  if (word >= span_of_word_.size()) {
    throw ValidationError("word " + std::to_string(word) + " out of range (" +
                          std::to_string(span_of_word_.size()) + " words)");
  }
  return span_of_word_[word];
}

SpanList segment_spans(const std::vector<std::string>& words, const Lexicon& lexicon,
                       SegmentOptions options) {
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < words.size();) {
    std::size_t take = std::max<std::size_t>(1, lexicon.longest_match(words, i));
    if (options.merge_capitalized_runs) {
      std::size_t run = 0;
      while (i + run < words.size() && capitalized(words[i + run])) ++run;
      if (run >= 2) take = std::max(take, run);
    }
    sizes.push_back(take);
    i += take;
  }
  return SpanList::from_sizes(words, sizes);
}

std::vector<SpanList> parse_span_file(std::string_view text) {
  std::vector<SpanList> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> words;
    std::vector<std::size_t> sizes;
    std::size_t at = 0;
    while (true) {
      std::size_t bar = line.find('|', at);
      auto span = split_ws(line.substr(at, bar == std::string::npos ? std::string::npos : bar - at));
      if (span.empty()) throw FormatError(line_no, "empty span");
      sizes.push_back(span.size());
      words.insert(words.end(), span.begin(), span.end());
      if (bar == std::string::npos) break;
      at = bar + 1;
    }
    out.push_back(SpanList::from_sizes(words, sizes));
  }
  return out;
}

std::vector<SpanList> read_span_file(const std::string& path) {
  return parse_span_file(read_file(path));
}

std::string format_span_line(const SpanList& spans) {
  std::string out;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (i) out += " | ";
    out += spans[i].text;
  }
  return out;
}

std::vector<std::string> span_words(const SpanList& spans) {
  std::vector<std::string> words;
  for (const Span& s : spans.spans()) {
    auto w = split_ws(s.text);
    words.insert(words.end(), w.begin(), w.end());
  }
  return words;
}

SentenceTokens map_input_tokens(const std::vector<std::string>& encoder_tokens) {
  SentenceTokens st;
  st.encoder_tokens = encoder_tokens;
  st.word_of_token.resize(encoder_tokens.size());
  for (std::size_t t = 0; t < encoder_tokens.size(); ++t) {
    if (is_special_token(encoder_tokens[t])) continue;
    auto [initial, piece] = strip_marker(encoder_tokens[t]);
    if (initial || st.words.empty()) {
      if (piece.empty()) throw TokenMismatchError(t, "marker without text starts an empty word");
      st.words.emplace_back(piece);
    } else {
      st.words.back() += piece;
    }
    st.word_of_token[t] = st.words.size() - 1;
  }
  return st;
}

SentenceTokens map_input_tokens(const std::vector<std::string>& encoder_tokens,
                                const std::vector<std::string>& words) {
  SentenceTokens st;
  st.encoder_tokens = encoder_tokens;
  st.words = words;
  st.word_of_token.resize(encoder_tokens.size());

  std::string text;
  std::vector<std::size_t> owner;
  std::vector<bool> starts;
  for (std::size_t w = 0; w < words.size(); ++w) {
    text += words[w];
    owner.insert(owner.end(), words[w].size(), w);
    for (std::size_t c = 0; c < words[w].size(); ++c) starts.push_back(c == 0);
  }

  std::size_t cursor = 0;
  for (std::size_t t = 0; t < encoder_tokens.size(); ++t) {
    auto [initial, piece] = strip_marker(encoder_tokens[t]);
    if (piece.empty()) {
      if (initial && cursor < text.size()) st.word_of_token[t] = owner[cursor];
      continue;
    }
    if (cursor + piece.size() > text.size() || text.compare(cursor, piece.size(), piece) != 0) {
      if (is_special_token(encoder_tokens[t])) continue;
      throw TokenMismatchError(t, "encoder token '" + encoder_tokens[t] +
                                      "' does not match the words at character " +
                                      std::to_string(cursor));
    }
    std::size_t word = owner[cursor];
    if (initial && !starts[cursor]) {
      throw TokenMismatchError(t, "word-initial marker on a continuation of '" + words[word] + "'");
    }
    if (owner[cursor + piece.size() - 1] != word) {
      throw TokenMismatchError(t, "encoder token '" + encoder_tokens[t] + "' spans two words");
    }
    st.word_of_token[t] = word;
    cursor += piece.size();
  }
  if (cursor != text.size()) {
    throw TokenMismatchError(encoder_tokens.size(),
                             "encoder tokens end before the words (character " +
                                 std::to_string(cursor) + " of " + std::to_string(text.size()) + ")");
  }
  return st;
}

}  // namespace amralign
