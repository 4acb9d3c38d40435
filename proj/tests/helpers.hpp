// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace chatweave::testing {

inline UtteranceSegment make_utterance(std::int64_t seq, Timestamp t_start,
                                       std::string text,
                                       std::string channel = "c1",
                                       Timestamp dur = 1000) {
    UtteranceSegment u;
    u.channel_id = std::move(channel);
    u.seq = seq;
    u.t_start = t_start;
    u.t_end = t_start + dur;
    u.text = std::move(text);
    return u;
}

inline Comment make_comment(std::string user, Timestamp t, std::string text,
                            std::string channel = "c1") {
    Comment c;
    c.channel_id = std::move(channel);
    c.user_id = std::move(user);
    c.t = t;
    c.text = std::move(text);
    return c;
}

inline ChannelStream make_stream(std::vector<UtteranceSegment> utterances,
                                 std::vector<Comment> comments,
                                 std::string channel = "c1",
                                 std::string streamer = "c1") {
    ChannelStream s;
    s.channel_id = std::move(channel);
    s.streamer_id = std::move(streamer);
    s.utterances = std::move(utterances);
    s.comments = std::move(comments);
    return s;
}

// Self-deleting scratch directory for file-based tests.
class TempDir {
  public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0; attempt < 100; ++attempt) {
            auto candidate = base / ("chatweave_test_" + std::to_string(rd()) +
                                     "_" + std::to_string(counter.fetch_add(1)));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const {
        return (path_ / name).string();
    }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace chatweave::testing
