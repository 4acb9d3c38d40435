// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. Each criterion prints one [PASS] or [FAIL] line; the exit
// status is the number of failed criteria. Thresholds are pinned here and in
// the bundled benchmark rows; loosening them is not a fix.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "ingest.hpp"
#include "matcher.hpp"
#include "model.hpp"
#include "persona.hpp"
#include "pipeline.hpp"
#include "synthbench.hpp"
#include "taskgen.hpp"
#include "text.hpp"

namespace cw = chatweave;
namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value, int digits = 4) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << value;
    return out.str();
}

// On success, `detail` becomes a parenthesized note; on failure, the reason.
void criterion(const std::string& name,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (ok) {
        std::cout << "[PASS] " << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
    } else {
        std::cout << "[FAIL] " << name;
        if (!detail.empty()) std::cout << ": " << detail;
        ++failures;
    }
    std::cout << std::endl;
}

std::vector<std::string> sorted_pair_lines(
    const std::vector<cw::MatchedPair>& pairs) {
    std::vector<std::string> lines;
    lines.reserve(pairs.size());
    for (const auto& p : pairs) lines.push_back(cw::write_matched_pair_line(p));
    std::sort(lines.begin(), lines.end());
    return lines;
}

std::string comment_key(const cw::Comment& c) {
    return c.user_id + '\x1f' + std::to_string(c.t) + '\x1f' + c.text;
}

// Window soundness plus single-use consumption over one extracted stream.
bool extraction_invariants_hold(const std::vector<cw::MatchedPair>& pairs,
                                const cw::ExtractionConfig& config,
                                std::string& detail) {
    std::unordered_set<std::string> used;
    for (const auto& p : pairs) {
        const cw::Timestamp gap = p.response_t - p.comment.t;
        if (gap < 0 || gap > config.delta_t) {
            detail = "pair gap " + std::to_string(gap) + " ms outside [0, " +
                     std::to_string(config.delta_t) + "]";
            return false;
        }
        if (!used.insert(comment_key(p.comment)).second) {
            detail = "comment consumed by two pairs: " + p.comment.text;
            return false;
        }
        if (p.response_text.empty() || p.merged_seqs.empty()) {
            detail = "pair with empty response or segment list";
            return false;
        }
    }
    return true;
}

struct MicroCounts {
    std::int64_t correct = 0;
    std::int64_t extracted = 0;
    std::int64_t links = 0;
    std::int64_t recovered = 0;

    void add(const cw::EvalResult& r) {
        correct += r.correct_count;
        extracted += r.extracted_count;
        links += r.link_count;
        recovered += r.recovered_count;
    }
    double precision() const {
        return extracted == 0 ? 1.0
                              : static_cast<double>(correct) /
                                    static_cast<double>(extracted);
    }
    double recall() const {
        return links == 0 ? 1.0
                          : static_cast<double>(recovered) /
                                static_cast<double>(links);
    }
};

std::string read_binary_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Writes a stream under `channel` into `dir` in the on-disk channel layout.
void save_as_channel(cw::ChannelStream stream, const std::string& channel,
                     const fs::path& dir) {
    stream.channel_id = channel;
    stream.streamer_id = channel;
    for (auto& u : stream.utterances) u.channel_id = channel;
    for (auto& c : stream.comments) c.channel_id = channel;
    std::ofstream transcript(dir / (channel + ".transcript.jsonl"),
                             std::ios::binary);
    std::ofstream comments(dir / (channel + ".comments.jsonl"),
                           std::ios::binary);
    cw::save_channel_stream(stream, transcript, comments);
}

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               (tag + "_" +
                std::to_string(Clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

int main() {
    const cw::ExtractionConfig extraction;

    criterion(
        "matcher agrees with the brute-force reference on 500 adversarial "
        "streams in under 30 s",
        [&](std::string& detail) {
            const auto start = Clock::now();
            for (std::uint64_t seed = 1; seed <= 500; ++seed) {
                const auto stream = cw::chaos_stream(seed);
                if (sorted_pair_lines(cw::extract_dialogues(stream, extraction)) !=
                    sorted_pair_lines(cw::oracle_match(stream, extraction))) {
                    detail = "divergence at seed " + std::to_string(seed);
                    return false;
                }
            }
            const double elapsed = seconds_since(start);
            detail = fmt(elapsed, 1) + " s";
            return elapsed < 30.0;
        });

    criterion(
        "clean echo corpus extracts with precision 1.0 and recall 1.0 over "
        "100 streams",
        [&](std::string& detail) {
            cw::GenSpec spec;
            spec.p_repeat = 1.0;
            spec.p_summarize = 0.0;
            spec.noise_fraction = 0.0;
            spec.fragment_dist = {1.0};
            MicroCounts micro;
            for (int i = 0; i < 100; ++i) {
                spec.seed = 1001 + static_cast<std::uint64_t>(i);
                cw::GroundTruth truth;
                const auto stream = cw::generate_stream(spec, truth);
                micro.add(cw::evaluate(
                    stream, cw::extract_dialogues(stream, extraction), truth));
            }
            detail = std::to_string(micro.links) + " links, precision=" +
                     fmt(micro.precision()) + " recall=" + fmt(micro.recall());
            return micro.links > 0 && micro.correct == micro.extracted &&
                   micro.recovered == micro.links;
        });

    criterion(
        "fragmented corpus (uniform 1-4 segments) holds precision >= 0.98 and "
        "recall >= 0.95 over 100 streams",
        [&](std::string& detail) {
            cw::GenSpec spec;
            spec.comment_rate = 25.0;
            spec.response_rate = 10.0;
            spec.noise_fraction = 0.3;
            spec.fragment_dist = {1.0, 1.0, 1.0, 1.0};
            MicroCounts micro;
            for (int i = 0; i < 100; ++i) {
                spec.seed = 3301 + static_cast<std::uint64_t>(i);
                cw::GroundTruth truth;
                const auto stream = cw::generate_stream(spec, truth);
                micro.add(cw::evaluate(
                    stream, cw::extract_dialogues(stream, extraction), truth));
            }
            detail = "precision=" + fmt(micro.precision()) +
                     " recall=" + fmt(micro.recall()) + " over " +
                     std::to_string(micro.links) + " links";
            return micro.links > 0 && micro.precision() >= 0.98 &&
                   micro.recall() >= 0.95;
        });

    criterion(
        "the newest matching comment wins in all 200 constructed ambiguity "
        "cases",
        [&](std::string& detail) {
            static const std::vector<std::string> texts = {
                "想听情歌", "今天吃什么", "主播唱歌好听", "晚上吃火锅"};
            for (int i = 0; i < 200; ++i) {
                const auto& text = texts[static_cast<std::size_t>(i) % texts.size()];
                cw::ChannelStream stream;
                stream.channel_id = "c";
                stream.streamer_id = "s";
                const cw::Timestamp base = 1000 + 1000LL * i;
                stream.comments.push_back({"c", "u1", base, text});
                stream.comments.push_back(
                    {"c", "u2", base + 6000 + (i % 38) * 1000LL, text});
                cw::UtteranceSegment seg;
                seg.channel_id = "c";
                seg.seq = 1;
                seg.t_start = stream.comments[1].t + 1000 + (i % 15) * 1000LL;
                seg.t_end = seg.t_start + 2000;
                seg.text = text + "好的好的。";
                stream.utterances.push_back(seg);

                const auto pairs = cw::extract_dialogues(stream, extraction);
                if (pairs.size() != 1 || pairs[0].comment.user_id != "u2" ||
                    pairs[0].comment.t != stream.comments[1].t) {
                    detail = "case " + std::to_string(i) +
                             " picked the older comment";
                    return false;
                }
            }
            detail = "200/200";
            return true;
        });

    criterion(
        "reply window and single-use consumption hold across the full "
        "benchmark sweep",
        [&](std::string& detail) {
            std::size_t pairs_checked = 0;
            for (const auto& row : cw::default_bench_rows()) {
                cw::GenSpec spec = row.spec;
                for (int i = 0; i < row.streams; ++i) {
                    spec.seed = row.spec.seed + static_cast<std::uint64_t>(i);
                    cw::GroundTruth truth;
                    const auto stream = cw::generate_stream(spec, truth);
                    const auto pairs = cw::extract_dialogues(stream, extraction);
                    if (!extraction_invariants_hold(pairs, extraction, detail)) {
                        detail = row.name + " seed " +
                                 std::to_string(spec.seed) + ": " + detail;
                        return false;
                    }
                    pairs_checked += pairs.size();
                }
            }
            for (std::uint64_t seed = 701; seed <= 740; ++seed) {
                const auto stream = cw::chaos_stream(seed);
                const auto pairs = cw::extract_dialogues(stream, extraction);
                if (!extraction_invariants_hold(pairs, extraction, detail)) {
                    detail = "chaos seed " + std::to_string(seed) + ": " + detail;
                    return false;
                }
                pairs_checked += pairs.size();
            }
            if (pairs_checked < 1000) {
                detail = "only " + std::to_string(pairs_checked) +
                         " pairs checked; sweep too small to be meaningful";
                return false;
            }
            detail = std::to_string(pairs_checked) + " pairs checked";
            return true;
        });

    criterion(
        "persona rule fixture classifies with full agreement",
        [&](std::string& detail) {
            std::ifstream in(std::string(CHATWEAVE_TEST_DATA_DIR) +
                             "/persona_rules.jsonl");
            if (!in) {
                detail = "fixture file missing";
                return false;
            }
            const cw::PersonaConfig persona;
            int rows = 0;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const json row = json::parse(line);
                const auto sentence = row.at("sentence").get<std::string>();
                if (cw::rule_filter(sentence, persona) !=
                    row.at("expected").get<bool>()) {
                    detail = "disagrees on: " + sentence;
                    return false;
                }
                ++rows;
            }
            detail = std::to_string(rows) + "/" + std::to_string(rows);
            return rows == 20;
        });

    criterion(
        "every addressee session has 10 candidates with the matched comment "
        "gold and last",
        [&](std::string& detail) {
            cw::GenSpec spec;
            spec.noise_fraction = 0.4;
            spec.fragment_dist = {1.0, 1.0};
            std::size_t total_sessions = 0;
            for (std::uint64_t seed = 7001; seed <= 7005; ++seed) {
                spec.seed = seed;
                cw::GroundTruth truth;
                const auto stream = cw::generate_stream(spec, truth);
                const auto pairs = cw::extract_dialogues(stream, extraction);
                const auto sessions =
                    cw::build_addressee_sessions(stream, pairs, 10);

                std::unordered_set<std::string> stream_comments;
                for (const auto& c : stream.comments)
                    stream_comments.insert(c.user_id + '\x1f' + c.text);

                for (const auto& s : sessions) {
                    if (s.candidates.size() != 10 || s.gold_index != 9 ||
                        s.shuffled) {
                        detail = "session shape broken at seed " +
                                 std::to_string(seed);
                        return false;
                    }
                    for (const auto& cand : s.candidates) {
                        if (!stream_comments.count(cand.user_id + '\x1f' +
                                                   cand.text)) {
                            detail = "candidate not drawn from the stream";
                            return false;
                        }
                    }
                }
                // Sessions are emitted in pair order; each one's gold slot
                // must be its pair's matched comment.
                std::size_t cursor = 0;
                for (const auto& p : pairs) {
                    if (cursor == sessions.size()) break;
                    const auto& s = sessions[cursor];
                    const auto& gold =
                        s.candidates[static_cast<std::size_t>(s.gold_index)];
                    if (s.response_text == p.response_text &&
                        gold.user_id == p.comment.user_id &&
                        gold.text == p.comment.text)
                        ++cursor;
                }
                if (cursor != sessions.size()) {
                    detail = "a session's gold slot does not line up with its "
                             "pair at seed " +
                             std::to_string(seed);
                    return false;
                }
                total_sessions += sessions.size();
            }
            if (total_sessions < 100) {
                detail = "only " + std::to_string(total_sessions) +
                         " sessions; corpus too small to be meaningful";
                return false;
            }
            detail = std::to_string(total_sessions) + " sessions checked";
            return true;
        });

    criterion(
        "test-split streamers always appear in the train split across 50 "
        "seeds",
        [&](std::string& detail) {
            std::vector<cw::ResponsePair> items;
            for (int s = 0; s < 20; ++s) {
                const int count = 1 + (s * 7) % 12;
                for (int j = 0; j < count; ++j) {
                    cw::ResponsePair p;
                    p.streamer_id = "streamer" + std::to_string(s);
                    p.comment_text =
                        "c" + std::to_string(s) + "_" + std::to_string(j);
                    p.response_text = "r" + std::to_string(j);
                    p.persona_ref = p.streamer_id;
                    items.push_back(std::move(p));
                }
            }
            for (std::uint64_t seed = 1; seed <= 50; ++seed) {
                const auto split = cw::split_by_persona(items, 0.2, seed);
                if (split.train.size() + split.test.size() != items.size() ||
                    split.test.empty()) {
                    detail = "split lost items at seed " + std::to_string(seed);
                    return false;
                }
                std::set<std::string> train_ids;
                for (const auto& p : split.train) train_ids.insert(p.streamer_id);
                for (const auto& p : split.test) {
                    if (!train_ids.count(p.streamer_id)) {
                        detail = p.streamer_id +
                                 " appears only in test at seed " +
                                 std::to_string(seed);
                        return false;
                    }
                }
            }
            detail = "50 seeds";
            return true;
        });

    criterion(
        "corpus statistics equal the generator's own bookkeeping exactly",
        [&](std::string& detail) {
            cw::GenSpec spec;
            spec.noise_fraction = 0.3;
            spec.fragment_dist = {1.0, 1.0};
            for (std::uint64_t seed = 9001; seed <= 9005; ++seed) {
                spec.seed = seed;
                cw::GroundTruth truth;
                cw::GenTotals totals;
                const auto stream = cw::generate_stream(spec, truth, &totals);
                const auto pairs = cw::truth_pairs(stream, truth);
                const auto report = cw::dataset_stats(pairs, {stream});

                std::set<std::string> audience;
                for (const auto& c : stream.comments) audience.insert(c.user_id);
                const auto dialogues =
                    static_cast<std::int64_t>(truth.links.size());
                if (dialogues == 0) {
                    detail = "no links planted at seed " + std::to_string(seed);
                    return false;
                }
                const bool ok =
                    report.dialogues == dialogues &&
                    totals.dialogues == dialogues &&
                    report.utterances == 2 * dialogues &&
                    report.streamer_count == 1 &&
                    totals.streamer_count == 1 &&
                    report.audience_count ==
                        static_cast<std::int64_t>(audience.size()) &&
                    totals.audience_count == report.audience_count &&
                    report.avg_sessions_per_streamer ==
                        static_cast<double>(dialogues) &&
                    report.avg_utterance_length ==
                        static_cast<double>(totals.comment_cps +
                                            totals.response_cps) /
                            static_cast<double>(2 * dialogues);
                if (!ok) {
                    detail = "field mismatch at seed " + std::to_string(seed);
                    return false;
                }
            }
            detail = "5 corpora";
            return true;
        });

    criterion(
        "one million events extract in under 60 s on 4 workers with "
        "worker-count-independent output bytes",
        [&](std::string& detail) {
            ScratchDir scratch("chatweave_accept");
            const fs::path big_in = scratch.path / "in";
            fs::create_directories(big_in);
            std::size_t events = 0;
            for (int c = 0; c < 8; ++c) {
                const auto stream = cw::chaos_stream(
                    9100 + static_cast<std::uint64_t>(c), 100000, 25000);
                events += stream.utterances.size() + stream.comments.size();
                save_as_channel(stream, "ch" + std::to_string(c), big_in);
            }
            if (events != 1000000) {
                detail = "corpus holds " + std::to_string(events) +
                         " events, expected 1000000";
                return false;
            }

            cw::PipelineConfig config;
            config.input_dir = big_in.string();
            config.output_dir = (scratch.path / "out4").string();
            config.worker_count = 4;
            const auto start = Clock::now();
            const auto summary = cw::run_extract(config);
            const double elapsed = seconds_since(start);
            if (summary.channels != 8) {
                detail = "expected 8 channels, saw " +
                         std::to_string(summary.channels);
                return false;
            }
            if (elapsed >= 60.0) {
                detail = "took " + fmt(elapsed, 1) + " s";
                return false;
            }

            config.output_dir = (scratch.path / "out8").string();
            config.worker_count = 8;
            cw::run_extract(config);
            if (read_binary_file(scratch.path / "out4" / "pairs.jsonl") !=
                read_binary_file(scratch.path / "out8" / "pairs.jsonl")) {
                detail = "merged output differs between 4 and 8 workers";
                return false;
            }

            // Single-worker identity at reduced scale keeps the wall time sane.
            const fs::path small_in = scratch.path / "small";
            fs::create_directories(small_in);
            for (int c = 0; c < 2; ++c) {
                save_as_channel(cw::chaos_stream(
                                    9200 + static_cast<std::uint64_t>(c), 12500,
                                    3125),
                                "sc" + std::to_string(c), small_in);
            }
            config.input_dir = small_in.string();
            config.output_dir = (scratch.path / "small1").string();
            config.worker_count = 1;
            cw::run_extract(config);
            config.output_dir = (scratch.path / "small4").string();
            config.worker_count = 4;
            cw::run_extract(config);
            if (read_binary_file(scratch.path / "small1" / "pairs.jsonl") !=
                read_binary_file(scratch.path / "small4" / "pairs.jsonl")) {
                detail = "merged output differs between 1 and 4 workers";
                return false;
            }

            detail = std::to_string(events) + " events in " + fmt(elapsed, 1) +
                     " s; merged bytes identical across 1/4/8 workers";
            return true;
        });

    if (failures == 0) {
        std::cout << "all criteria passed" << std::endl;
    } else {
        std::cout << failures << " criteria failed" << std::endl;
    }
    return failures;
}
