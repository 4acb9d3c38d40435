// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "errors.hpp"
#include "text.hpp"

namespace chatweave {
namespace {

using nlohmann::json;

json parse_line_json(const std::string& line, long line_number) {
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError("record is not a JSON object", line_number);
    }
    return doc;
}

std::string get_string(const json& doc, const char* key, long line_number) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_string()) {
        throw ParseError(std::string("missing or non-string field '") + key + "'",
                         line_number);
    }
    return it->get<std::string>();
}

std::int64_t get_integer(const json& doc, const char* key, long line_number) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_number_integer()) {
        throw ParseError(std::string("missing or non-integer field '") + key + "'",
                         line_number);
    }
    return it->get<std::int64_t>();
}

// Identity of a comment inside one channel. Timestamps alone collide; the
// ingest dedup pass guarantees (user, t, text) is unique per channel.
std::string comment_key(const Comment& c) {
    return c.user_id + '\x1f' + std::to_string(c.t) + '\x1f' + c.text;
}

}  // namespace

std::vector<ResponsePair> build_response_task(
    const std::vector<MatchedPair>& pairs,
    const std::map<std::string, TextProfile>& profiles,
    std::size_t* missing_profiles) {
    std::vector<ResponsePair> out;
    out.reserve(pairs.size());
    std::size_t missing = 0;
    for (const MatchedPair& pair : pairs) {
        if (profiles.find(pair.streamer_id) == profiles.end()) ++missing;
        out.push_back(ResponsePair{pair.streamer_id, pair.comment.text,
                                   pair.response_text, pair.streamer_id});
    }
    if (missing_profiles != nullptr) *missing_profiles = missing;
    return out;
}

std::vector<AddresseeSession> build_addressee_sessions(
    const ChannelStream& stream, const std::vector<MatchedPair>& pairs, int k) {
    if (k < 2) throw InvalidArgumentError("candidate count must be at least 2");

    std::unordered_map<std::string, std::size_t> index_of;
    index_of.reserve(stream.comments.size());
    for (std::size_t i = 0; i < stream.comments.size(); ++i) {
        index_of.emplace(comment_key(stream.comments[i]), i);
    }

    std::vector<AddresseeSession> out;
    const std::size_t want = static_cast<std::size_t>(k);
    // End of the previous pair's pool, exclusive lower bound for the next.
    std::ptrdiff_t prev = -1;
    for (const MatchedPair& pair : pairs) {
        auto found = index_of.find(comment_key(pair.comment));
        if (found == index_of.end()) {
            throw InvalidArgumentError("matched comment not present in stream");
        }
        const std::size_t idx = found->second;
        const std::size_t lo = static_cast<std::size_t>(prev + 1);

        // A later response may match an older comment than the previous pair
        // did; the in-between run is then empty and the pool degenerates to
        // the matched comment alone.
        std::vector<std::size_t> picked;
        if (idx >= lo) {
            for (std::size_t i = lo; i < idx; ++i) picked.push_back(i);
        }
        picked.push_back(idx);
        if (picked.size() > want) {
            picked.erase(picked.begin(),
                         picked.end() - static_cast<std::ptrdiff_t>(want));
        } else if (picked.size() < want) {
            // Borrow the most recent comments before the pool, oldest first
            // so the candidate order stays chronological. The matched comment
            // must not reappear as its own distractor.
            const std::size_t need = want - picked.size();
            std::vector<std::size_t> borrowed;
            for (std::size_t i = lo; i > 0 && borrowed.size() < need; --i) {
                if (i - 1 == idx) continue;
                borrowed.push_back(i - 1);
            }
            if (borrowed.size() < need) {
                prev = static_cast<std::ptrdiff_t>(idx);
                continue;  // channel does not hold K comments up to here
            }
            std::reverse(borrowed.begin(), borrowed.end());
            picked.insert(picked.begin(), borrowed.begin(), borrowed.end());
        }

        AddresseeSession session;
        session.streamer_id = pair.streamer_id;
        session.response_text = pair.response_text;
        session.candidates.reserve(picked.size());
        for (std::size_t i : picked) {
            session.candidates.push_back(AddresseeCandidate{
                stream.comments[i].user_id, stream.comments[i].text});
        }
        session.gold_index = k - 1;
        session.shuffled = false;
        out.push_back(std::move(session));
        prev = static_cast<std::ptrdiff_t>(idx);
    }
    return out;
}

void shuffle_sessions(std::vector<AddresseeSession>& sessions, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (AddresseeSession& session : sessions) {
        const std::size_t n = session.candidates.size();
        std::size_t gold = static_cast<std::size_t>(session.gold_index);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(session.candidates[i - 1], session.candidates[j]);
            if (gold == i - 1) {
                gold = j;
            } else if (gold == j) {
                gold = i - 1;
            }
        }
        session.gold_index = static_cast<int>(gold);
        session.shuffled = true;
    }
}

namespace {

template <typename Item>
Split<Item> split_items(const std::vector<Item>& items, double test_fraction,
                        std::uint64_t seed) {
    if (items.empty()) {
        throw InsufficientDataError("no items to split");
    }
    // Stable per-streamer grouping, streamers processed in sorted order so the
    // split depends only on (items, fraction, seed).
    std::map<std::string, std::vector<std::size_t>> by_streamer;
    for (std::size_t i = 0; i < items.size(); ++i) {
        by_streamer[items[i].streamer_id].push_back(i);
    }
    bool any_splittable = false;
    for (const auto& [id, indices] : by_streamer) {
        if (indices.size() >= 2) any_splittable = true;
    }
    if (!any_splittable) {
        throw InsufficientDataError(
            "every streamer has a single item; no test split possible");
    }

    std::mt19937_64 rng(seed);
    std::vector<char> in_test(items.size(), 0);
    for (const auto& [id, indices] : by_streamer) {
        const std::size_t n = indices.size();
        if (n < 2) continue;
        std::size_t take = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * test_fraction));
        take = std::min(take, n - 1);
        if (take == 0) continue;
        // Partial Fisher-Yates over a local copy; the first `take` slots
        // become the test picks.
        std::vector<std::size_t> local(indices);
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(
                                          rng() % (local.size() - i));
            std::swap(local[i], local[j]);
        }
        for (std::size_t i = 0; i < take; ++i) in_test[local[i]] = 1;
    }

    Split<Item> split;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (in_test[i]) {
            split.test.push_back(items[i]);
        } else {
            split.train.push_back(items[i]);
        }
    }
    return split;
}

}  // namespace

Split<ResponsePair> split_by_persona(const std::vector<ResponsePair>& items,
                                     double test_fraction, std::uint64_t seed) {
    return split_items(items, test_fraction, seed);
}

Split<AddresseeSession> split_by_persona(const std::vector<AddresseeSession>& items,
                                         double test_fraction, std::uint64_t seed) {
    return split_items(items, test_fraction, seed);
}

StatsReport dataset_stats(const std::vector<MatchedPair>& pairs,
                          const std::vector<ChannelStream>& streams) {
    StatsReport report;
    report.dialogues = static_cast<std::int64_t>(pairs.size());
    report.utterances = 2 * report.dialogues;

    std::set<std::string> streamers;
    std::set<std::string> audience;
    for (const ChannelStream& stream : streams) {
        if (!stream.streamer_id.empty()) streamers.insert(stream.streamer_id);
        for (const Comment& c : stream.comments) audience.insert(c.user_id);
    }
    std::int64_t total_cps = 0;
    for (const MatchedPair& pair : pairs) {
        streamers.insert(pair.streamer_id);
        audience.insert(pair.comment.user_id);
        total_cps += static_cast<std::int64_t>(cp_length(pair.comment.text));
        total_cps += static_cast<std::int64_t>(cp_length(pair.response_text));
    }
    report.streamer_count = static_cast<std::int64_t>(streamers.size());
    report.audience_count = static_cast<std::int64_t>(audience.size());
    if (report.streamer_count > 0) {
        report.avg_sessions_per_streamer =
            static_cast<double>(report.dialogues) /
            static_cast<double>(report.streamer_count);
    }
    if (report.utterances > 0) {
        report.avg_utterance_length = static_cast<double>(total_cps) /
                                      static_cast<double>(report.utterances);
    }
    return report;
}

std::string write_response_pair_line(const ResponsePair& pair) {
    json doc;
    doc["comment"] = pair.comment_text;
    doc["response"] = pair.response_text;
    doc["streamer"] = pair.streamer_id;
    return doc.dump();
}

ResponsePair parse_response_pair_line(const std::string& line, long line_number) {
    json doc = parse_line_json(line, line_number);
    ResponsePair pair;
    pair.streamer_id = get_string(doc, "streamer", line_number);
    pair.comment_text = get_string(doc, "comment", line_number);
    pair.response_text = get_string(doc, "response", line_number);
    pair.persona_ref = pair.streamer_id;
    return pair;
}

std::string write_addressee_session_line(const AddresseeSession& session) {
    json doc;
    json cands = json::array();
    for (const AddresseeCandidate& c : session.candidates) {
        cands.push_back(json{{"text", c.text}, {"user", c.user_id}});
    }
    doc["candidates"] = std::move(cands);
    doc["gold"] = session.gold_index;
    doc["response"] = session.response_text;
    doc["shuffled"] = session.shuffled;
    doc["streamer"] = session.streamer_id;
    return doc.dump();
}

AddresseeSession parse_addressee_session_line(const std::string& line,
                                              long line_number) {
    json doc = parse_line_json(line, line_number);
    AddresseeSession session;
    session.streamer_id = get_string(doc, "streamer", line_number);
    session.response_text = get_string(doc, "response", line_number);
    auto it = doc.find("candidates");
    if (it == doc.end() || !it->is_array()) {
        throw ParseError("missing or non-array field 'candidates'", line_number);
    }
    for (const json& entry : *it) {
        if (!entry.is_object()) {
            throw ParseError("candidate entry is not an object", line_number);
        }
        session.candidates.push_back(
            AddresseeCandidate{get_string(entry, "user", line_number),
                               get_string(entry, "text", line_number)});
    }
    session.gold_index = static_cast<int>(get_integer(doc, "gold", line_number));
    auto sh = doc.find("shuffled");
    if (sh == doc.end() || !sh->is_boolean()) {
        throw ParseError("missing or non-boolean field 'shuffled'", line_number);
    }
    session.shuffled = sh->get<bool>();
    if (session.gold_index < 0 ||
        static_cast<std::size_t>(session.gold_index) >=
            session.candidates.size()) {
        throw ParseError("gold index out of range", line_number);
    }
    return session;
}

std::string dump_stats_report(const StatsReport& report) {
    json doc;
    doc["audience_count"] = report.audience_count;
    doc["avg_sessions_per_streamer"] = report.avg_sessions_per_streamer;
    doc["avg_utterance_length"] = report.avg_utterance_length;
    doc["dialogues"] = report.dialogues;
    doc["streamer_count"] = report.streamer_count;
    doc["utterances"] = report.utterances;
    return doc.dump(2) + "\n";
}

std::string write_matched_pair_line(const MatchedPair& pair) {
    json doc;
    doc["channel"] = pair.channel_id;
    doc["comment"] = json{{"t", pair.comment.t},
                          {"text", pair.comment.text},
                          {"user", pair.comment.user_id}};
    doc["merged_seqs"] = pair.merged_seqs;
    doc["raw_response"] = pair.raw_response_text;
    doc["response"] = pair.response_text;
    doc["response_t"] = pair.response_t;
    doc["streamer"] = pair.streamer_id;
    return doc.dump();
}

MatchedPair parse_matched_pair_line(const std::string& line, long line_number) {
    json doc = parse_line_json(line, line_number);
    MatchedPair pair;
    pair.channel_id = get_string(doc, "channel", line_number);
    pair.streamer_id = get_string(doc, "streamer", line_number);
    auto it = doc.find("comment");
    if (it == doc.end() || !it->is_object()) {
        throw ParseError("missing or non-object field 'comment'", line_number);
    }
    pair.comment.channel_id = pair.channel_id;
    pair.comment.user_id = get_string(*it, "user", line_number);
    pair.comment.t = get_integer(*it, "t", line_number);
    pair.comment.text = get_string(*it, "text", line_number);
    pair.response_text = get_string(doc, "response", line_number);
    pair.raw_response_text = get_string(doc, "raw_response", line_number);
    pair.response_t = get_integer(doc, "response_t", line_number);
    auto seqs = doc.find("merged_seqs");
    if (seqs == doc.end() || !seqs->is_array()) {
        throw ParseError("missing or non-array field 'merged_seqs'", line_number);
    }
    for (const json& v : *seqs) {
        if (!v.is_number_integer()) {
            throw ParseError("merged_seqs entry is not an integer", line_number);
        }
        pair.merged_seqs.push_back(v.get<std::int64_t>());
    }
    return pair;
}

}  // namespace chatweave
