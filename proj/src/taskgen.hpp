// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "model.hpp"
#include "persona.hpp"

namespace chatweave {

// One record of the response-modeling task.
struct ResponsePair {
    std::string streamer_id;
    std::string comment_text;
    std::string response_text;
    std::string persona_ref;  // streamer key into the profile store

    bool operator==(const ResponsePair&) const = default;
};

struct AddresseeCandidate {
    std::string user_id;
    std::string text;

    bool operator==(const AddresseeCandidate&) const = default;
};

// One record of the addressee-recognition task: exactly K candidate comments,
// the true addressee at gold_index (the last slot unless shuffled).
struct AddresseeSession {
    std::string streamer_id;
    std::string response_text;
    std::vector<AddresseeCandidate> candidates;
    int gold_index = 0;
    bool shuffled = false;

    bool operator==(const AddresseeSession&) const = default;
};

struct StatsReport {
    std::int64_t dialogues = 0;
    std::int64_t utterances = 0;  // two per dialogue
    std::int64_t streamer_count = 0;
    std::int64_t audience_count = 0;
    double avg_sessions_per_streamer = 0.0;
    double avg_utterance_length = 0.0;  // code points

    bool operator==(const StatsReport&) const = default;
};

// 1:1 pair-to-record mapping; pairs whose streamer has no profile entry get
// counted into *missing_profiles (they still emit, with the same ref).
std::vector<ResponsePair> build_response_task(
    const std::vector<MatchedPair>& pairs,
    const std::map<std::string, TextProfile>& profiles,
    std::size_t* missing_profiles = nullptr);

// Builds one session per matched pair. The candidate pool for pair i is the
// comment run between the previous pair's matched comment (exclusive) and this
// pair's matched comment (inclusive, placed last). Pools over K keep the last
// K; short pools borrow the nearest earlier comments, keeping the gold last;
// pairs that cannot reach K candidates emit nothing.
std::vector<AddresseeSession> build_addressee_sessions(
    const ChannelStream& stream, const std::vector<MatchedPair>& pairs, int k);

// Permutes every session's candidates with the seeded generator and rewrites
// gold_index; sets the shuffled flag.
void shuffle_sessions(std::vector<AddresseeSession>& sessions, std::uint64_t seed);

// Per-streamer stratified split. Each streamer sends round(n * test_fraction)
// items to test, capped at n-1 so every test streamer keeps a train item;
// single-item streamers stay in train. Raises InsufficientDataError when
// items is empty or no streamer has two items.
template <typename Item>
struct Split {
    std::vector<Item> train;
    std::vector<Item> test;
};

Split<ResponsePair> split_by_persona(const std::vector<ResponsePair>& items,
                                     double test_fraction, std::uint64_t seed);
Split<AddresseeSession> split_by_persona(const std::vector<AddresseeSession>& items,
                                         double test_fraction, std::uint64_t seed);

// Corpus statistics. Streamers are counted across streams and pairs; the
// audience is the distinct comment user set; utterance lengths average the
// code point counts of every pair's comment and response. Empty input zeroes
// the report.
StatsReport dataset_stats(const std::vector<MatchedPair>& pairs,
                          const std::vector<ChannelStream>& streams);

// Line and document formats for the emitted task files.
std::string write_response_pair_line(const ResponsePair& pair);
ResponsePair parse_response_pair_line(const std::string& line, long line_number = 0);
std::string write_addressee_session_line(const AddresseeSession& session);
AddresseeSession parse_addressee_session_line(const std::string& line,
                                              long line_number = 0);
std::string dump_stats_report(const StatsReport& report);

// Line format for matched pairs, used by extraction output files.
std::string write_matched_pair_line(const MatchedPair& pair);
MatchedPair parse_matched_pair_line(const std::string& line, long line_number = 0);

}  // namespace chatweave
