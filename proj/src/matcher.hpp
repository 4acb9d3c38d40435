// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "config.hpp"
#include "model.hpp"
#include "similarity.hpp"

namespace chatweave {

// Comments matching one utterance within the reply window. Entries are
// indices into stream.comments, ascending, which is time order.
struct CandidateSet {
    std::int64_t response_seq = 0;
    std::vector<std::size_t> matched;

    bool operator==(const CandidateSet&) const = default;
};

// For every (comment, utterance) pair with 0 <= t_start - t <= delta_t and
// match_fn true, the comment joins the utterance's set. One set per
// utterance, in utterance order; unmatched utterances keep empty sets.
std::vector<CandidateSet> collect_candidates(const ChannelStream& stream,
                                             const ExtractionConfig& config,
                                             const SemanticScorer* semantic = nullptr);

// Walks utterances in order, gluing segments without a terminal punctuation
// mark onto the next segment (candidate sets union as they merge). A chain
// emits at the first segment whose accumulated text ends in config.ending_punct
// and whose newest eligible candidate passes the length-ratio test; the
// matched comment is consumed and never pairs again. Chains that exceed
// config.max_merge segments or reach the end of the stream unterminated are
// dropped. Eligible means: not yet consumed, and not newer than the chain's
// first segment (pair timestamps must satisfy 0 <= response_t - comment.t).
std::vector<MatchedPair> assemble_and_match(const ChannelStream& stream,
                                            const std::vector<CandidateSet>& candidates,
                                            const ExtractionConfig& config);

// Removes the echo prefix: the longest prefix (at least 2 code points) that
// attains the highest containment in the comment, provided that containment
// reaches config.theta_prefix, together with punctuation right after it.
// Returns nullopt when nothing but the echo remains.
std::optional<MatchedPair> strip_repetition_prefix(const MatchedPair& pair,
                                                   const ExtractionConfig& config);

// Drops pairs whose response matches any noise pattern at its start.
std::vector<MatchedPair> filter_noise(std::vector<MatchedPair> pairs,
                                      const std::vector<std::string>& noise_patterns);

struct ExtractionStats {
    std::size_t utterances = 0;
    std::size_t comments = 0;
    std::size_t assembled = 0;      // pairs before post-processing
    std::size_t dropped_empty = 0;  // nothing left after prefix stripping
    std::size_t dropped_noise = 0;  // matched a noise pattern

    bool operator==(const ExtractionStats&) const = default;
};

// Full per-channel extraction: candidates, assembly, prefix stripping, noise
// filtering. Output sorted by response_t.
std::vector<MatchedPair> extract_dialogues(const ChannelStream& stream,
                                           const ExtractionConfig& config,
                                           const SemanticScorer* semantic = nullptr,
                                           ExtractionStats* stats = nullptr);

}  // namespace chatweave
