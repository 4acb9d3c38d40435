// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "config.hpp"
#include "http_retry.hpp"

namespace chatweave {

enum class PosTag { VERB, NOUN, ADJ, OTHER };

const char* to_string(PosTag tag);

struct TaggedToken {
    std::string token;
    PosTag tag = PosTag::OTHER;

    bool operator==(const TaggedToken&) const = default;
};

class Tagger {
  public:
    virtual ~Tagger() = default;
    virtual std::vector<TaggedToken> tag(const std::string& sentence) const = 0;
};

// Greedy longest-match segmentation against the bundled lexicons. Ties at
// equal length resolve VERB, NOUN, ADJ, then function words. Whitespace and
// punctuation produce no tokens; an ASCII alphanumeric run is one OTHER
// token; any other uncovered character is a one-character OTHER token.
class LexiconTagger : public Tagger {
  public:
    std::vector<TaggedToken> tag(const std::string& sentence) const override;
};

const Tagger& default_tagger();

// Tags with the bundled tagger. Raises InvalidArgumentError on empty input.
std::vector<TaggedToken> pos_tags(const std::string& sentence);

// The four persona-sentence rules: token count within [min_words, max_words];
// some token equal to a first-person token; at least one VERB; at least one
// NOUN or ADJ. Word counts are tagger tokens. Empty sentences fail.
bool rule_filter(const std::string& sentence, const PersonaConfig& config,
                 const Tagger& tagger = default_tagger());

// Remote persona-fact scoring. Absence of a classifier (null pointer at the
// call sites below) means rules-only mode.
class PersonaClassifier {
  public:
    virtual ~PersonaClassifier() = default;
    // One score in [0,1] per sentence, order-preserving.
    virtual std::vector<double> scores(
        const std::vector<std::string>& sentences) const = 0;
};

// POST <endpoint>/classify {"texts":[...]} -> {"scores":[...]}; same retry
// policy as the embedding client.
class RemotePersonaClassifier : public PersonaClassifier {
  public:
    explicit RemotePersonaClassifier(std::string endpoint,
                                     HttpRetryOptions options = {});

    std::vector<double> scores(
        const std::vector<std::string>& sentences) const override;

  private:
    std::string endpoint_;
    HttpRetryOptions options_;
};

double classifier_score(const PersonaClassifier& classifier,
                        const std::string& sentence);

struct TextProfile {
    std::string streamer_id;
    std::vector<std::string> sentences;  // chronological
    std::int64_t total_length = 0;       // code points across sentences

    bool operator==(const TextProfile&) const = default;
};

// Filters history through the rules (and the classifier when given), drops
// exact duplicates keeping the newest occurrence, then keeps the newest
// sentences until the next one would push total_length past
// config.max_profile_length. Output is chronological again.
TextProfile build_text_profile(const std::vector<std::string>& history,
                               const PersonaConfig& config,
                               const Tagger& tagger = default_tagger(),
                               const PersonaClassifier* classifier = nullptr,
                               std::string streamer_id = {});

struct BasicProfile {
    std::string streamer_id;
    std::map<std::string, int> attributes;  // attribute name -> category index

    bool operator==(const BasicProfile&) const = default;
};

// Category index assignments per attribute. Index 0 is reserved for unknown
// values and never appears as a codebook entry. Age-style attributes use
// "lo-hi" keys; integer raw values select the covering band.
struct Codebook {
    std::map<std::string, std::unordered_map<std::string, int>> attributes;

    bool operator==(const Codebook&) const = default;
};

Codebook parse_codebook(const std::string& json_text);
std::string dump_codebook(const Codebook& codebook);

// Replaces every raw attribute value with its codebook index; unmatched
// values become 0. Raw strings never survive into the result.
BasicProfile anonymize_basic_profile(
    const std::map<std::string, std::string>& raw, const Codebook& codebook,
    std::string streamer_id = {});

// Line formats used by the profile store files.
std::string write_text_profile_line(const TextProfile& profile);
TextProfile parse_text_profile_line(const std::string& line, long line_number = 0);
std::string write_basic_profile_line(const BasicProfile& profile);
BasicProfile parse_basic_profile_line(const std::string& line, long line_number = 0);

}  // namespace chatweave
