// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chatweave {

/// Milliseconds since stream start. Relative integer time keeps window
/// arithmetic exact; wall-clock time is never needed.
using Timestamp = std::int64_t;

/// One timestamped speech-to-text fragment spoken by the streamer.
struct UtteranceSegment {
    std::string channel_id;
    std::int64_t seq = 0;
    Timestamp t_start = 0;
    Timestamp t_end = 0;
    std::string text;

    bool operator==(const UtteranceSegment&) const = default;
};

/// One timestamped audience message.
struct Comment {
    std::string channel_id;
    std::string user_id;
    Timestamp t = 0;
    std::string text;

    bool operator==(const Comment&) const = default;
};

/// All events of one channel, each sequence sorted by timestamp with ties in
/// input order. Immutable after construction; safe to share across workers.
struct ChannelStream {
    std::string channel_id;
    std::string streamer_id;
    std::vector<UtteranceSegment> utterances;
    std::vector<Comment> comments;

    bool operator==(const ChannelStream&) const = default;
};

/// A matched (comment, response) dialogue pair with provenance.
struct MatchedPair {
    std::string channel_id;
    std::string streamer_id;
    Comment comment;
    std::string response_text;
    Timestamp response_t = 0;
    std::vector<std::int64_t> merged_seqs;
    std::string raw_response_text;

    bool operator==(const MatchedPair&) const = default;
};

/// One broken validity rule. Violations are data, not failures.
struct Violation {
    std::string element;  // "utterance", "comment", or "stream"
    std::string id;       // seq or index of the offending element
    std::string rule;
    std::string message;

    bool operator==(const Violation&) const = default;
};

/// Checks every type invariant of the stream and its elements. Pure: returns
/// an empty list iff the stream is valid.
std::vector<Violation> validate_stream(const ChannelStream& stream);

}  // namespace chatweave
