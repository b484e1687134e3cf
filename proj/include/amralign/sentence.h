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

// Sentence side: word tokenization, span segmentation and encoder-token to
// word reconciliation.

#ifndef AMRALIGN_SENTENCE_H_
#define AMRALIGN_SENTENCE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amralign {

// Whitespace split, then leading/trailing ASCII punctuation peeled off into
// one-character words ("works." -> "works", ".").
std::vector<std::string> word_tokenize(std::string_view sentence);

// Multiword expressions, one per line, compared case-insensitively.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<std::vector<std::string>> entries);

  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::string& path);

  // Length (in words) of the longest entry matching words[start..], 0 if none.
  std::size_t longest_match(const std::vector<std::string>& words, std::size_t start) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::vector<std::string>> entries_;  // lower-cased
};

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
  std::string text;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t word) const { return word >= start && word < end; }
  bool operator==(const Span&) const = default;
};

// Consecutive, non-overlapping spans covering every word exactly once.
class SpanList {
 public:
  SpanList() = default;
  // Throws ValidationError unless `spans` partition [0, n_words).
  SpanList(std::vector<Span> spans, std::size_t n_words);

  // One span per word.
  static SpanList singletons(const std::vector<std::string>& words);
  // Builds spans from word counts, e.g. {2,1,1} over "New York is big".
  static SpanList from_sizes(const std::vector<std::string>& words,
                             const std::vector<std::size_t>& sizes);

  const std::vector<Span>& spans() const { return spans_; }
  std::size_t size() const { return spans_.size(); }
  const Span& operator[](std::size_t i) const { return spans_[i]; }
  std::size_t n_words() const { return span_of_word_.size(); }
  std::size_t span_of_word(std::size_t word) const;

  bool operator==(const SpanList& other) const { return spans_ == other.spans_; }

 private:
  std::vector<Span> spans_;
  std::vector<std::size_t> span_of_word_;
};

struct SegmentOptions {
  bool merge_capitalized_runs = true;
};

// Maximal munch at each position over lexicon entries and runs of
// capitalized words; everything else is a one-word span.
SpanList segment_spans(const std::vector<std::string>& words, const Lexicon& lexicon,
                       SegmentOptions options = {});

// Precomputed span file: one sentence per line, spans separated by '|', words
// by spaces.
std::vector<SpanList> parse_span_file(std::string_view text);
std::vector<SpanList> read_span_file(const std::string& path);
std::string format_span_line(const SpanList& spans);

// Words of a span list in order.
std::vector<std::string> span_words(const SpanList& spans);

struct SentenceTokens {
  std::vector<std::string> encoder_tokens;
  std::vector<std::string> words;
  // nullopt for special tokens (<s>, </s>, ...), which belong to no word.
  std::vector<std::optional<std::size_t>> word_of_token;
};

// Words are delimited by word-initial markers; the first non-special token
// always starts a word.
SentenceTokens map_input_tokens(const std::vector<std::string>& encoder_tokens);

// Reconciles the tokens against known words by character offsets. A token
// carrying a word-initial marker must start a word. Throws TokenMismatchError.
SentenceTokens map_input_tokens(const std::vector<std::string>& encoder_tokens,
                                const std::vector<std::string>& words);

// True when the word has no letter or digit.
bool is_punctuation(std::string_view word);

}  // namespace amralign

#endif  // AMRALIGN_SENTENCE_H_
