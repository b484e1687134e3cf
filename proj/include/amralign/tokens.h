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

// Subword-token conventions shared by the encoder and decoder sides.

#ifndef AMRALIGN_TOKENS_H_
#define AMRALIGN_TOKENS_H_

#include <string>
#include <string_view>

namespace amralign {

// Word-initial markers: byte-level BPE "Ġ" (U+0120), SentencePiece "▁"
// (U+2581) and a literal leading space.
struct MarkedToken {
  bool word_initial = false;
  std::string_view text;
};

inline MarkedToken strip_marker(std::string_view token) {
  for (std::string_view marker : {std::string_view("\xC4\xA0"), std::string_view("\xE2\x96\x81"),
                                  std::string_view(" ")}) {
    if (token.starts_with(marker)) return {true, token.substr(marker.size())};
  }
  return {false, token};
}

// Sequence delimiters and padding emitted by the model tokenizer; never part
// of a word or a graph token.
inline bool is_special_token(std::string_view token) {
  for (std::string_view s : {"<s>", "</s>", "<pad>", "<unk>", "<mask>", "[CLS]", "[SEP]",
                             "[PAD]", "<AMR>", "</AMR>", "<eos>", "<bos>"}) {
    if (token == s) return true;
  }
  return false;
}

}  // namespace amralign

#endif  // AMRALIGN_TOKENS_H_
