// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <unordered_set>
#include <vector>

namespace chatweave {

// Word lists backing the bundled part-of-speech tagger. Keys are code point
// sequences. The four sets are disjoint; single characters not covered by
// any lexicon fall out of tagging as one-character OTHER tokens.
const std::unordered_set<std::u32string>& verb_lexicon();
const std::unordered_set<std::u32string>& noun_lexicon();
const std::unordered_set<std::u32string>& adjective_lexicon();
// Pronouns, particles, adverbs, numerals: words that should tokenize as one
// unit but carry none of the three content tags.
const std::unordered_set<std::u32string>& function_lexicon();

// Longest entry across all four lexicons, in code points.
std::size_t lexicon_max_word_length();

// Flat word list for synthetic stream generation, deterministic order.
const std::vector<std::string>& generator_vocabulary();

}  // namespace chatweave
