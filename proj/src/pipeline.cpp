// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "embed_client.hpp"
#include "errors.hpp"
#include "ingest.hpp"
#include "matcher.hpp"
#include "persona.hpp"
#include "synthbench.hpp"
#include "taskgen.hpp"

namespace fs = std::filesystem;

namespace chatweave {
namespace {

using nlohmann::json;

constexpr const char* kTranscriptSuffix = ".transcript.jsonl";
constexpr const char* kCommentSuffix = ".comments.jsonl";

// Runs fn(i) for i in [0, count) across up to worker_count threads. The first
// exception wins and is rethrown after every worker has stopped.
void parallel_for(std::size_t count, int worker_count,
                  const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(
        std::max(worker_count, 1), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (error) return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out.good()) throw Error("write failed for '" + path.string() + "'");
}

std::vector<std::string> read_lines_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

// Removes every file this run created, best effort, for fatal-error cleanup.
void remove_files(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) {
        std::error_code ec;
        fs::remove(p, ec);
    }
}

ChannelStream load_channel(const ChannelFiles& files,
                           const ExtractionConfig& config,
                           std::vector<Violation>* violations = nullptr) {
    return load_channel_stream_files(files.transcript_path, files.comment_path,
                                     config, violations);
}

std::vector<MatchedPair> load_pairs_file(const fs::path& path) {
    std::vector<MatchedPair> pairs;
    long line_number = 0;
    for (const std::string& line : read_lines_file(path)) {
        ++line_number;
        pairs.push_back(parse_matched_pair_line(line, line_number));
    }
    return pairs;
}

fs::path merged_pairs_path(const PipelineConfig& config) {
    return fs::path(config.output_dir) / "pairs.jsonl";
}

}  // namespace

std::vector<ChannelFiles> discover_channels(const std::string& input_dir,
                                            bool require_pairs) {
    if (!fs::is_directory(input_dir))
        throw ConfigError("input directory '" + input_dir + "' does not exist");

    std::map<std::string, ChannelFiles> found;
    auto stem_of = [](const std::string& name, const char* suffix) {
        const std::size_t len = std::string(suffix).size();
        if (name.size() <= len || name.compare(name.size() - len, len, suffix) != 0)
            return std::string();
        return name.substr(0, name.size() - len);
    };
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (std::string stem = stem_of(name, kTranscriptSuffix); !stem.empty()) {
            found[stem].channel_id = stem;
            found[stem].transcript_path = entry.path().string();
        } else if (std::string cstem = stem_of(name, kCommentSuffix);
                   !cstem.empty()) {
            found[cstem].channel_id = cstem;
            found[cstem].comment_path = entry.path().string();
        }
    }

    std::vector<ChannelFiles> channels;
    channels.reserve(found.size());
    for (auto& [id, files] : found) {
        if (require_pairs) {
            if (files.transcript_path.empty())
                throw ConfigError("channel '" + id + "' has comments but no " +
                                  id + kTranscriptSuffix);
            if (files.comment_path.empty())
                throw ConfigError("channel '" + id + "' has a transcript but no " +
                                  id + kCommentSuffix);
        }
        channels.push_back(std::move(files));
    }
    return channels;
}

ExtractSummary run_extract(const PipelineConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const auto channels = discover_channels(config.input_dir);
    if (channels.empty())
        throw ConfigError("no channel streams found in '" + config.input_dir + "'");

    fs::create_directories(config.output_dir);

    struct ChannelResult {
        std::string lines;
        std::int64_t pairs = 0;
        std::int64_t dropped = 0;
        fs::path out_path;
    };
    std::vector<ChannelResult> results(channels.size());
    std::vector<fs::path> created;
    std::mutex created_mutex;

    try {
        parallel_for(channels.size(), config.worker_count, [&](std::size_t i) {
            const ChannelStream stream = load_channel(channels[i],
                                                      config.extraction);
            std::unique_ptr<RemoteSemanticScorer> scorer;
            if (!config.embed_endpoint.empty())
                scorer = std::make_unique<RemoteSemanticScorer>(
                    config.embed_endpoint);
            ExtractionStats stats;
            const auto pairs =
                extract_dialogues(stream, config.extraction, scorer.get(), &stats);

            ChannelResult& result = results[i];
            for (const MatchedPair& pair : pairs) {
                result.lines += write_matched_pair_line(pair);
                result.lines += '\n';
            }
            result.pairs = static_cast<std::int64_t>(pairs.size());
            result.dropped = static_cast<std::int64_t>(stats.dropped_empty +
                                                       stats.dropped_noise);
            result.out_path = fs::path(config.output_dir) /
                              (channels[i].channel_id + ".pairs.jsonl");
            {
                std::lock_guard<std::mutex> lock(created_mutex);
                created.push_back(result.out_path);
            }
            write_text_file(result.out_path, result.lines);
        });

        ExtractSummary summary;
        summary.channels = static_cast<std::int64_t>(channels.size());
        std::string merged;
        for (const ChannelResult& result : results) {
            summary.pairs += result.pairs;
            summary.dropped += result.dropped;
            merged += result.lines;
        }
        {
            std::lock_guard<std::mutex> lock(created_mutex);
            created.push_back(merged_pairs_path(config));
        }
        write_text_file(merged_pairs_path(config), merged);
        summary.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
        return summary;
    } catch (...) {
        std::lock_guard<std::mutex> lock(created_mutex);
        remove_files(created);
        throw;
    }
}

std::string run_ingest_check(const PipelineConfig& config, bool* ok) {
    const auto channels = discover_channels(config.input_dir, false);

    bool all_ok = true;
    json report_channels = json::array();
    for (const ChannelFiles& files : channels) {
        json entry;
        entry["channel"] = files.channel_id;
        if (files.transcript_path.empty() || files.comment_path.empty()) {
            entry["error"] = files.transcript_path.empty()
                                 ? "missing transcript file"
                                 : "missing comments file";
            all_ok = false;
            report_channels.push_back(std::move(entry));
            continue;
        }
        try {
            std::vector<Violation> violations;
            const ChannelStream stream =
                load_channel(files, config.extraction, &violations);
            entry["utterances"] = stream.utterances.size();
            entry["comments"] = stream.comments.size();
            json list = json::array();
            for (const Violation& v : violations) {
                list.push_back(json{{"element", v.element},
                                    {"id", v.id},
                                    {"rule", v.rule},
                                    {"message", v.message}});
            }
            entry["violations"] = std::move(list);
            if (!violations.empty()) all_ok = false;
        } catch (const Error& err) {
            entry["error"] = err.what();
            all_ok = false;
        }
        report_channels.push_back(std::move(entry));
    }

    json report;
    report["ok"] = all_ok;
    report["channels"] = std::move(report_channels);
    if (ok != nullptr) *ok = all_ok;
    return report.dump(2) + "\n";
}

std::int64_t run_persona(const PipelineConfig& config) {
    const auto channels = discover_channels(config.input_dir);
    if (channels.empty())
        throw ConfigError("no channel streams found in '" + config.input_dir + "'");
    fs::create_directories(config.output_dir);

    std::vector<std::string> lines(channels.size());
    parallel_for(channels.size(), config.worker_count, [&](std::size_t i) {
        const ChannelStream stream = load_channel(channels[i], config.extraction);
        std::vector<std::string> history;
        history.reserve(stream.utterances.size());
        for (const UtteranceSegment& u : stream.utterances)
            history.push_back(u.text);
        std::unique_ptr<RemotePersonaClassifier> classifier;
        if (!config.persona.classifier_endpoint.empty())
            classifier = std::make_unique<RemotePersonaClassifier>(
                config.persona.classifier_endpoint);
        const TextProfile profile =
            build_text_profile(history, config.persona, default_tagger(),
                               classifier.get(), stream.streamer_id);
        lines[i] = write_text_profile_line(profile) + "\n";
    });

    std::string merged;
    for (const std::string& line : lines) merged += line;
    write_text_file(fs::path(config.output_dir) / "profiles.jsonl", merged);
    return static_cast<std::int64_t>(lines.size());
}

TaskgenSummary run_taskgen(const PipelineConfig& config) {
    const fs::path pairs_path = merged_pairs_path(config);
    if (!fs::is_regular_file(pairs_path))
        throw ConfigError("'" + pairs_path.string() +
                          "' not found; run extract first");
    const auto all_pairs = load_pairs_file(pairs_path);

    std::map<std::string, TextProfile> profiles;
    const fs::path profiles_path = fs::path(config.output_dir) / "profiles.jsonl";
    if (fs::is_regular_file(profiles_path)) {
        long line_number = 0;
        for (const std::string& line : read_lines_file(profiles_path)) {
            ++line_number;
            TextProfile profile = parse_text_profile_line(line, line_number);
            profiles.emplace(profile.streamer_id, std::move(profile));
        }
    }

    TaskgenSummary summary;

    std::size_t missing = 0;
    const auto response_pairs = build_response_task(all_pairs, profiles, &missing);
    summary.missing_profiles = static_cast<std::int64_t>(missing);
    summary.response_pairs = static_cast<std::int64_t>(response_pairs.size());
    std::string response_lines;
    for (const ResponsePair& pair : response_pairs) {
        response_lines += write_response_pair_line(pair);
        response_lines += '\n';
    }
    fs::create_directories(config.output_dir);
    write_text_file(fs::path(config.output_dir) / "response_task.jsonl",
                    response_lines);

    // Addressee sessions need each channel's full comment run.
    std::map<std::string, std::vector<MatchedPair>> by_channel;
    for (const MatchedPair& pair : all_pairs)
        by_channel[pair.channel_id].push_back(pair);
    const auto channels = discover_channels(config.input_dir);
    std::map<std::string, const ChannelFiles*> files_by_id;
    for (const ChannelFiles& files : channels)
        files_by_id.emplace(files.channel_id, &files);

    std::vector<AddresseeSession> sessions;
    for (const auto& [channel_id, pairs] : by_channel) {
        auto found = files_by_id.find(channel_id);
        if (found == files_by_id.end())
            throw ConfigError("pairs reference channel '" + channel_id +
                              "' with no input stream");
        const ChannelStream stream =
            load_channel(*found->second, config.extraction);
        auto channel_sessions = build_addressee_sessions(
            stream, pairs, config.task.candidate_count);
        sessions.insert(sessions.end(),
                        std::make_move_iterator(channel_sessions.begin()),
                        std::make_move_iterator(channel_sessions.end()));
    }
    if (config.task.shuffle_candidates) shuffle_sessions(sessions, config.seed);
    summary.addressee_sessions = static_cast<std::int64_t>(sessions.size());
    std::string session_lines;
    for (const AddresseeSession& session : sessions) {
        session_lines += write_addressee_session_line(session);
        session_lines += '\n';
    }
    write_text_file(fs::path(config.output_dir) / "addressee_task.jsonl",
                    session_lines);

    auto write_split = [&](const char* stem, const auto& split) {
        std::string train;
        for (const auto& item : split.train) {
            if constexpr (std::is_same_v<std::decay_t<decltype(item)>,
                                         ResponsePair>)
                train += write_response_pair_line(item);
            else
                train += write_addressee_session_line(item);
            train += '\n';
        }
        std::string test;
        for (const auto& item : split.test) {
            if constexpr (std::is_same_v<std::decay_t<decltype(item)>,
                                         ResponsePair>)
                test += write_response_pair_line(item);
            else
                test += write_addressee_session_line(item);
            test += '\n';
        }
        write_text_file(fs::path(config.output_dir) /
                            (std::string(stem) + ".train.jsonl"),
                        train);
        write_text_file(fs::path(config.output_dir) /
                            (std::string(stem) + ".test.jsonl"),
                        test);
    };

    // An empty task file yields empty splits; a non-empty one with no
    // splittable streamer still raises.
    const auto response_split =
        response_pairs.empty()
            ? Split<ResponsePair>{}
            : split_by_persona(response_pairs, config.task.test_fraction,
                               config.seed);
    summary.response_train = static_cast<std::int64_t>(response_split.train.size());
    summary.response_test = static_cast<std::int64_t>(response_split.test.size());
    write_split("response_task", response_split);

    const auto addressee_split =
        sessions.empty()
            ? Split<AddresseeSession>{}
            : split_by_persona(sessions, config.task.test_fraction, config.seed);
    summary.addressee_train =
        static_cast<std::int64_t>(addressee_split.train.size());
    summary.addressee_test = static_cast<std::int64_t>(addressee_split.test.size());
    write_split("addressee_task", addressee_split);

    return summary;
}

std::string run_stats(const PipelineConfig& config) {
    const fs::path pairs_path = merged_pairs_path(config);
    if (!fs::is_regular_file(pairs_path))
        throw ConfigError("'" + pairs_path.string() +
                          "' not found; run extract first");
    const auto pairs = load_pairs_file(pairs_path);

    std::vector<ChannelStream> streams;
    for (const ChannelFiles& files : discover_channels(config.input_dir))
        streams.push_back(load_channel(files, config.extraction));

    const StatsReport report = dataset_stats(pairs, streams);
    const std::string doc = dump_stats_report(report);
    fs::create_directories(config.output_dir);
    write_text_file(fs::path(config.output_dir) / "stats.json", doc);
    return doc;
}

std::string run_bench(const PipelineConfig& config, const std::string& spec_path,
                      int* rows_failed) {
    std::vector<BenchRow> rows;
    if (spec_path.empty()) {
        rows = default_bench_rows();
    } else {
        std::ifstream in(spec_path, std::ios::binary);
        if (!in) throw ConfigError("cannot open benchmark spec '" + spec_path + "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        rows = parse_bench_spec(text);
    }

    std::vector<BenchRowResult> results(rows.size());
    parallel_for(rows.size(), config.worker_count, [&](std::size_t i) {
        results[i] = run_bench_row(rows[i], config.extraction);
    });

    int failed = 0;
    json rows_json = json::array();
    for (const BenchRowResult& result : results) {
        if (!result.pass) ++failed;
        rows_json.push_back(json{{"name", result.name},
                                 {"streams", result.streams},
                                 {"links", result.links},
                                 {"extracted", result.extracted},
                                 {"precision", result.precision},
                                 {"recall", result.recall},
                                 {"f1", result.f1},
                                 {"pass", result.pass}});
    }
    const std::string table = format_bench_table(results);
    fs::create_directories(config.output_dir);
    write_text_file(fs::path(config.output_dir) / "bench.tsv", table);
    json doc;
    doc["rows"] = std::move(rows_json);
    doc["rows_failed"] = failed;
    write_text_file(fs::path(config.output_dir) / "bench.json", doc.dump(2) + "\n");
    if (rows_failed != nullptr) *rows_failed = failed;
    return table;
}

}  // namespace chatweave
