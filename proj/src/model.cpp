// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "model.hpp"

#include <string>

namespace chatweave {

namespace {

void add(std::vector<Violation>& out, std::string element, std::string id,
         std::string rule, std::string message) {
    out.push_back({std::move(element), std::move(id), std::move(rule), std::move(message)});
}

}  // namespace

std::vector<Violation> validate_stream(const ChannelStream& stream) {
    std::vector<Violation> out;

    const UtteranceSegment* prev_u = nullptr;
    for (const auto& u : stream.utterances) {
        const std::string id = std::to_string(u.seq);
        if (u.channel_id != stream.channel_id)
            add(out, "utterance", id, "channel-uniform",
                "channel_id '" + u.channel_id + "' differs from stream '" + stream.channel_id + "'");
        if (u.t_end < u.t_start)
            add(out, "utterance", id, "t-end-before-t-start",
                "t_end " + std::to_string(u.t_end) + " < t_start " + std::to_string(u.t_start));
        if (u.text.empty())
            add(out, "utterance", id, "empty-text", "text empty after normalization");
        if (prev_u) {
            if (u.t_start < prev_u->t_start)
                add(out, "utterance", id, "time-order",
                    "t_start decreases after seq " + std::to_string(prev_u->seq));
            if (u.seq <= prev_u->seq)
                add(out, "utterance", id, "seq-order",
                    "seq does not increase after seq " + std::to_string(prev_u->seq));
        }
        prev_u = &u;
    }

    const Comment* prev_c = nullptr;
    std::size_t index = 0;
    for (const auto& c : stream.comments) {
        const std::string id = std::to_string(index);
        if (c.channel_id != stream.channel_id)
            add(out, "comment", id, "channel-uniform",
                "channel_id '" + c.channel_id + "' differs from stream '" + stream.channel_id + "'");
        if (c.text.empty())
            add(out, "comment", id, "empty-text", "text empty after normalization");
        if (!stream.streamer_id.empty() && c.user_id == stream.streamer_id)
            add(out, "comment", id, "user-is-streamer",
                "user_id equals the channel's streamer identifier");
        if (prev_c && c.t < prev_c->t)
            add(out, "comment", id, "time-order", "t decreases at comment index " + id);
        prev_c = &c;
        ++index;
    }

    return out;
}

}  // namespace chatweave
