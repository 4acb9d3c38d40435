// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "errors.hpp"
#include "text.hpp"

namespace chatweave {

using nlohmann::json;

namespace {

// SAX pass that only checks for duplicate keys; values are discarded.
// nlohmann's DOM parser silently keeps the last duplicate, which would hide
// corrupted records.
class DuplicateKeyCheck : public nlohmann::json_sax<json> {
  public:
    std::string duplicate;

    bool null() override { return true; }
    bool boolean(bool) override { return true; }
    bool number_integer(number_integer_t) override { return true; }
    bool number_unsigned(number_unsigned_t) override { return true; }
    bool number_float(number_float_t, const string_t&) override { return true; }
    bool string(string_t&) override { return true; }
    bool binary(binary_t&) override { return true; }
    bool start_object(std::size_t) override {
        scopes_.emplace_back();
        return true;
    }
    bool key(string_t& name) override {
        if (!scopes_.empty() && !scopes_.back().insert(name).second) {
            duplicate = name;
            return false;
        }
        return true;
    }
    bool end_object() override {
        scopes_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override { return true; }
    bool end_array() override { return true; }
    bool parse_error(std::size_t, const std::string&,
                     const nlohmann::detail::exception&) override {
        return false;
    }

  private:
    std::vector<std::unordered_set<std::string>> scopes_;
};

json parse_record(const std::string& line, long line_number) {
    DuplicateKeyCheck check;
    if (!json::sax_parse(line, &check)) {
        if (!check.duplicate.empty())
            throw ParseError("duplicate key '" + check.duplicate + "'", line_number);
        throw ParseError("record is not valid JSON", line_number);
    }
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded())
        throw ParseError("record is not valid JSON", line_number);
    if (!record.is_object())
        throw ParseError("record must be a JSON object", line_number);
    return record;
}

std::string require_string(const json& record, const char* key, long line_number) {
    if (!record.contains(key))
        throw ParseError(std::string("missing key '") + key + "'", line_number);
    const json& v = record.at(key);
    if (!v.is_string())
        throw ParseError(std::string("key '") + key + "' must be a string", line_number);
    return v.get<std::string>();
}

std::string require_identifier(const json& record, const char* key, long line_number) {
    std::string v = require_string(record, key, line_number);
    if (v.empty())
        throw ParseError(std::string("key '") + key + "' must be a non-empty identifier",
                         line_number);
    return v;
}

std::int64_t require_integer(const json& record, const char* key, long line_number) {
    if (!record.contains(key))
        throw ParseError(std::string("missing key '") + key + "'", line_number);
    const json& v = record.at(key);
    if (!v.is_number_integer())
        throw ParseError(std::string("key '") + key + "' must be an integer", line_number);
    return v.get<std::int64_t>();
}

std::string require_normalized_text(const json& record, long line_number) {
    std::string text = normalize_text(require_string(record, "text", line_number));
    if (text.empty())
        throw ParseError("text is empty after normalization", line_number);
    return text;
}

bool blank_line(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

template <typename Record, typename Parse>
void read_lines(std::istream& in, Parse parse, const std::string& source,
                std::string* channel, std::vector<Record>& out) {
    std::string line;
    long line_number = 0;
    try {
        while (std::getline(in, line)) {
            ++line_number;
            if (blank_line(line)) continue;
            Record record = parse(line, line_number);
            if (channel->empty())
                *channel = record.channel_id;
            else if (record.channel_id != *channel)
                throw ParseError("channel '" + record.channel_id +
                                     "' differs from '" + *channel + "'",
                                 line_number);
            out.push_back(std::move(record));
        }
    } catch (const ParseError& err) {
        if (source.empty()) throw;
        ParseError wrapped(source + ": " + err.what());
        wrapped.line_number = err.line_number;
        throw wrapped;
    }
}

}  // namespace

UtteranceSegment parse_transcript_line(const std::string& line, long line_number) {
    json record = parse_record(line, line_number);
    UtteranceSegment segment;
    segment.channel_id = require_identifier(record, "channel", line_number);
    segment.seq = require_integer(record, "seq", line_number);
    segment.t_start = require_integer(record, "t_start", line_number);
    segment.t_end = require_integer(record, "t_end", line_number);
    segment.text = require_normalized_text(record, line_number);
    return segment;
}

Comment parse_comment_line(const std::string& line, long line_number) {
    json record = parse_record(line, line_number);
    Comment comment;
    comment.channel_id = require_identifier(record, "channel", line_number);
    comment.user_id = require_identifier(record, "user", line_number);
    comment.t = require_integer(record, "t", line_number);
    comment.text = require_normalized_text(record, line_number);
    return comment;
}

std::string write_transcript_line(const UtteranceSegment& segment) {
    json record{{"channel", segment.channel_id},
                {"seq", segment.seq},
                {"t_start", segment.t_start},
                {"t_end", segment.t_end},
                {"text", segment.text}};
    return record.dump();
}

std::string write_comment_line(const Comment& comment) {
    json record{{"channel", comment.channel_id},
                {"user", comment.user_id},
                {"t", comment.t},
                {"text", comment.text}};
    return record.dump();
}

ChannelStream load_channel_stream(std::istream& transcript_source,
                                  std::istream& comment_source,
                                  const ExtractionConfig& config,
                                  std::vector<Violation>* violations,
                                  const std::string& transcript_name,
                                  const std::string& comment_name) {
    ChannelStream stream;
    std::string channel;
    read_lines<UtteranceSegment>(transcript_source, parse_transcript_line,
                                 transcript_name, &channel, stream.utterances);
    read_lines<Comment>(comment_source, parse_comment_line, comment_name,
                        &channel, stream.comments);
    stream.channel_id = channel;
    stream.streamer_id = channel;

    std::stable_sort(stream.utterances.begin(), stream.utterances.end(),
                     [](const UtteranceSegment& a, const UtteranceSegment& b) {
                         return a.t_start < b.t_start;
                     });
    std::stable_sort(stream.comments.begin(), stream.comments.end(),
                     [](const Comment& a, const Comment& b) { return a.t < b.t; });

    // Burst dedup: the first occurrence is kept and anchors the window; a
    // repeat beyond dedup_window of the last kept occurrence opens a new burst.
    std::unordered_map<std::string, Timestamp> last_kept;
    std::vector<Comment> kept;
    kept.reserve(stream.comments.size());
    for (auto& c : stream.comments) {
        std::string key = c.user_id + '\x1f' + c.text;
        auto it = last_kept.find(key);
        if (it != last_kept.end() && c.t - it->second <= config.dedup_window)
            continue;
        last_kept[key] = c.t;
        kept.push_back(std::move(c));
    }
    stream.comments = std::move(kept);

    std::vector<Violation> found = validate_stream(stream);
    if (!found.empty()) {
        if (!violations)
            throw ParseError("stream invariant violated: " + found.front().element +
                             " " + found.front().id + ": " + found.front().message);
        violations->insert(violations->end(), found.begin(), found.end());
    }
    return stream;
}

ChannelStream load_channel_stream_files(const std::string& transcript_path,
                                        const std::string& comment_path,
                                        const ExtractionConfig& config,
                                        std::vector<Violation>* violations) {
    std::ifstream transcript(transcript_path, std::ios::binary);
    if (!transcript)
        throw ParseError("cannot open transcript file: " + transcript_path);
    std::ifstream comments(comment_path, std::ios::binary);
    if (!comments)
        throw ParseError("cannot open comment file: " + comment_path);
    return load_channel_stream(transcript, comments, config, violations,
                               transcript_path, comment_path);
}

void save_channel_stream(const ChannelStream& stream,
                         std::ostream& transcript_sink,
                         std::ostream& comment_sink) {
    for (const auto& u : stream.utterances)
        transcript_sink << write_transcript_line(u) << '\n';
    for (const auto& c : stream.comments)
        comment_sink << write_comment_line(c) << '\n';
}

}  // namespace chatweave
