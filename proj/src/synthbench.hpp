// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "model.hpp"
#include "similarity.hpp"

namespace chatweave {

// Parameters of the synthetic stream generator. Rates are events per minute;
// fragment_dist holds relative weights for 1..4 segments per streamer turn.
// The generator targets the default extraction thresholds: every planted link
// passes the default window, ratio, and containment rules, and no other
// comment matches any streamer text.
struct GenSpec {
    int n_audiences = 20;
    Timestamp duration = 600000;
    double comment_rate = 30.0;
    double response_rate = 10.0;
    double p_repeat = 0.7;
    double p_summarize = 0.2;
    std::vector<double> fragment_dist = {1.0};
    double noise_fraction = 0.5;
    std::vector<std::string> vocab;  // empty selects the bundled default
    std::uint64_t seed = 1;
    std::string channel_id = "synth";

    bool operator==(const GenSpec&) const = default;
};

// One planted reply: the comment (by index into the generated stream's
// comment list) and the seqs of every segment of the response that echoes it.
struct TruthLink {
    std::size_t comment_index = 0;
    std::vector<std::int64_t> chain_seqs;

    bool operator==(const TruthLink&) const = default;
};

struct GroundTruth {
    std::vector<TruthLink> links;

    bool operator==(const GroundTruth&) const = default;
};

// Counters the generator maintains while emitting events, for cross-checking
// corpus statistics without re-reading the output.
struct GenTotals {
    std::int64_t dialogues = 0;
    std::int64_t streamer_count = 0;
    std::int64_t audience_count = 0;
    std::int64_t comment_cps = 0;   // linked comments only
    std::int64_t response_cps = 0;  // raw chain texts of links

    bool operator==(const GenTotals&) const = default;
};

void validate_gen_spec(const GenSpec& spec);

// Bundled token pool: the tagger lexicon's content words minus anything
// sharing characters with the noise-pattern anchors, so generated responses
// can never trip the noise filter.
const std::vector<std::string>& default_generator_vocab();

// Deterministic for a fixed spec. Every link satisfies the default matching
// rules end to end; unlinked streamer talk and filler comments are rejected
// against every nearby window so they can never match.
ChannelStream generate_stream(const GenSpec& spec, GroundTruth& truth,
                              GenTotals* totals = nullptr);

// Adversarial generator for equivalence testing: no ground truth, heavy
// window overlap, echo collisions, timestamp ties, and broken punctuation.
// Zero counts pick a small random size; explicit counts scale it up for
// throughput corpora.
ChannelStream chaos_stream(std::uint64_t seed, std::size_t n_comments = 0,
                           std::size_t n_utterances = 0);

// Materializes the planted links as pairs (raw chain text, no stripping).
std::vector<MatchedPair> truth_pairs(const ChannelStream& stream,
                                     const GroundTruth& truth);

// Brute-force reference extraction. Enumerates every merge chain and every
// (comment, chain) combination, then applies the newest-first consumption
// policy, prefix stripping, and noise filtering by direct enumeration.
// Quadratic; refuses streams over 10,000 events.
std::vector<MatchedPair> oracle_match(const ChannelStream& stream,
                                      const ExtractionConfig& config,
                                      const SemanticScorer* semantic = nullptr);

struct EvalResult {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool undefined_precision = false;  // nothing extracted, reported as 1.0
    std::int64_t extracted_count = 0;
    std::int64_t correct_count = 0;
    std::int64_t link_count = 0;
    std::int64_t recovered_count = 0;
};

// A pair is correct iff its comment resolves to a planted link whose chain
// shares at least one seq with the pair's merged segments.
EvalResult evaluate(const ChannelStream& stream,
                    const std::vector<MatchedPair>& extracted,
                    const GroundTruth& truth);

// One row of a benchmark sweep: a generator spec, how many seeded streams to
// run, and optional score floors (negative = unchecked).
struct BenchRow {
    std::string name;
    GenSpec spec;
    int streams = 20;
    double min_precision = -1.0;
    double min_recall = -1.0;
};

struct BenchRowResult {
    std::string name;
    int streams = 0;
    std::int64_t links = 0;
    std::int64_t extracted = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool pass = true;
};

// The shipped sweep: clean echoes, summarized echoes, heavy noise, and
// uniform 1-4 fragmentation, with the floors the suite must hold.
std::vector<BenchRow> default_bench_rows();

// JSON document {"rows":[{name, streams, min_precision, min_recall,
// spec:{...GenSpec fields...}}]}. Unknown keys are errors.
std::vector<BenchRow> parse_bench_spec(const std::string& text);

// Runs generate -> extract -> evaluate over row.streams seeds (spec.seed,
// spec.seed+1, ...) and micro-averages the counts.
BenchRowResult run_bench_row(const BenchRow& row, const ExtractionConfig& config);

// Tab-separated table with a header line, one line per row result.
std::string format_bench_table(const std::vector<BenchRowResult>& results);

}  // namespace chatweave
