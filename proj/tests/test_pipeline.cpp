// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "helpers.hpp"
#include "ingest.hpp"
#include "matcher.hpp"
#include "persona.hpp"
#include "pipeline.hpp"
#include "synthbench.hpp"
#include "taskgen.hpp"

using namespace chatweave;
using namespace chatweave::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_channel(const fs::path& dir, const ChannelStream& stream) {
    std::ofstream transcript(dir / (stream.channel_id + ".transcript.jsonl"));
    std::ofstream comments(dir / (stream.channel_id + ".comments.jsonl"));
    save_channel_stream(stream, transcript, comments);
}

ChannelStream synth_channel(std::uint64_t seed, const std::string& channel) {
    GenSpec spec;
    spec.seed = seed;
    spec.duration = 180000;
    spec.channel_id = channel;
    spec.fragment_dist = {1.0, 1.0};
    spec.noise_fraction = 0.3;
    GroundTruth truth;
    return generate_stream(spec, truth);
}

PipelineConfig make_config(const fs::path& in, const fs::path& out) {
    PipelineConfig config;
    config.input_dir = in.string();
    config.output_dir = out.string();
    config.worker_count = 2;
    return config;
}

std::vector<std::string> file_lines(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> expected_pair_lines(const ChannelFiles& files,
                                             const PipelineConfig& config) {
    const ChannelStream stream = load_channel_stream_files(
        files.transcript_path, files.comment_path, config.extraction);
    std::vector<std::string> lines;
    for (const MatchedPair& pair : extract_dialogues(stream, config.extraction))
        lines.push_back(write_matched_pair_line(pair));
    return lines;
}

}  // namespace

TEST_CASE("discover_channels pairs transcript and comment files") {
    TempDir tmp;
    for (const char* name :
         {"b.transcript.jsonl", "b.comments.jsonl", "a.transcript.jsonl",
          "a.comments.jsonl", "c.transcript.jsonl", "notes.txt"})
        write_file(tmp.file(name), "");

    const auto lenient = discover_channels(tmp.str(), false);
    REQUIRE(lenient.size() == 3);
    CHECK(lenient[0].channel_id == "a");
    CHECK(lenient[1].channel_id == "b");
    CHECK(lenient[2].channel_id == "c");
    CHECK(!lenient[0].transcript_path.empty());
    CHECK(!lenient[0].comment_path.empty());
    CHECK(lenient[2].comment_path.empty());

    try {
        discover_channels(tmp.str(), true);
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("c.comments.jsonl") !=
              std::string::npos);
    }

    CHECK_THROWS_AS(discover_channels((tmp.path() / "missing").string()),
                    ConfigError);
    fs::create_directory(tmp.path() / "empty");
    CHECK(discover_channels((tmp.path() / "empty").string()).empty());
}

TEST_CASE("run_extract writes per-channel and merged pair files") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    const fs::path out = tmp.path() / "out";
    fs::create_directories(in);
    write_channel(in, synth_channel(11, "alpha"));
    write_channel(in, synth_channel(12, "beta"));

    PipelineConfig config = make_config(in, out);
    const ExtractSummary summary = run_extract(config);
    CHECK(summary.channels == 2);
    CHECK(summary.duration_ms >= 0);

    const auto channels = discover_channels(config.input_dir);
    const auto alpha_lines = expected_pair_lines(channels[0], config);
    const auto beta_lines = expected_pair_lines(channels[1], config);
    CHECK(summary.pairs ==
          static_cast<std::int64_t>(alpha_lines.size() + beta_lines.size()));
    REQUIRE(summary.pairs > 0);

    CHECK(file_lines(out / "alpha.pairs.jsonl") == alpha_lines);
    CHECK(file_lines(out / "beta.pairs.jsonl") == beta_lines);
    auto merged = alpha_lines;
    merged.insert(merged.end(), beta_lines.begin(), beta_lines.end());
    CHECK(file_lines(out / "pairs.jsonl") == merged);

    SUBCASE("reruns and worker counts do not change the bytes") {
        const std::string first = file_bytes(out / "pairs.jsonl");
        run_extract(config);
        CHECK(file_bytes(out / "pairs.jsonl") == first);

        config.worker_count = 1;
        run_extract(config);
        CHECK(file_bytes(out / "pairs.jsonl") == first);

        config.worker_count = 8;
        run_extract(config);
        CHECK(file_bytes(out / "pairs.jsonl") == first);
    }
    SUBCASE("every merged line parses as a matched pair") {
        long line_number = 0;
        for (const std::string& line : file_lines(out / "pairs.jsonl"))
            CHECK_NOTHROW(parse_matched_pair_line(line, ++line_number));
    }
}

TEST_CASE("run_extract removes its outputs when a channel fails") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    const fs::path out = tmp.path() / "out";
    fs::create_directories(in);
    fs::create_directories(out);
    write_channel(in, synth_channel(13, "alpha"));
    write_file((in / "zeta.transcript.jsonl").string(), "not json\n");
    write_file((in / "zeta.comments.jsonl").string(), "");
    write_file((out / "keep.txt").string(), "untouched");

    CHECK_THROWS_AS(run_extract(make_config(in, out)), ParseError);
    CHECK(!fs::exists(out / "alpha.pairs.jsonl"));
    CHECK(!fs::exists(out / "zeta.pairs.jsonl"));
    CHECK(!fs::exists(out / "pairs.jsonl"));
    CHECK(fs::exists(out / "keep.txt"));
}

TEST_CASE("run_ingest_check reports per-channel health") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    fs::create_directories(in);
    write_channel(in, synth_channel(14, "alpha"));

    PipelineConfig config = make_config(in, tmp.path() / "out");

    SUBCASE("clean corpus") {
        bool ok = false;
        const json report = json::parse(run_ingest_check(config, &ok));
        CHECK(ok);
        CHECK(report.at("ok").get<bool>());
        REQUIRE(report.at("channels").size() == 1);
        const json& entry = report.at("channels").at(0);
        CHECK(entry.at("channel") == "alpha");
        CHECK(entry.at("utterances").get<int>() > 0);
        CHECK(entry.at("comments").get<int>() > 0);
        CHECK(entry.at("violations").empty());
    }
    SUBCASE("unreadable channel carries an error entry") {
        write_file((in / "zeta.transcript.jsonl").string(), "not json\n");
        write_file((in / "zeta.comments.jsonl").string(), "");
        bool ok = true;
        const json report = json::parse(run_ingest_check(config, &ok));
        CHECK(!ok);
        CHECK(!report.at("ok").get<bool>());
        REQUIRE(report.at("channels").size() == 2);
        CHECK(report.at("channels").at(1).contains("error"));
    }
    SUBCASE("one-sided channel carries an error entry") {
        write_file((in / "solo.transcript.jsonl").string(), "");
        bool ok = true;
        json report = json::parse(run_ingest_check(config, &ok));
        CHECK(!ok);
        CHECK(report.at("channels").at(1).at("error") ==
              "missing comments file");
    }
    SUBCASE("content violations are listed but not fatal to the run") {
        // t_end before t_start inside an otherwise parseable stream.
        write_file((in / "bad.transcript.jsonl").string(),
                   R"({"channel":"bad","seq":1,"t_start":5000,"t_end":1000,)"
                   R"("text":"大家晚上好。"})"
                   "\n");
        write_file((in / "bad.comments.jsonl").string(),
                   R"({"channel":"bad","user":"u1","t":1000,"text":"晚上好"})"
                   "\n");
        bool ok = true;
        const json report = json::parse(run_ingest_check(config, &ok));
        CHECK(!ok);
        const json& entry = report.at("channels").at(1);
        CHECK(entry.at("channel") == "bad");
        REQUIRE(entry.at("violations").size() == 1);
        CHECK(entry.at("violations").at(0).at("element") == "utterance");
        CHECK(!entry.at("violations").at(0).at("rule").get<std::string>().empty());
    }
}

TEST_CASE("run_persona writes one profile per channel") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    const fs::path out = tmp.path() / "out";
    fs::create_directories(in);
    write_channel(in, synth_channel(15, "alpha"));

    ChannelStream gamma = make_stream(
        {make_utterance(1, 1000, "我每天晚上八点直播唱歌", "gamma"),
         make_utterance(2, 3000, "谢谢大家", "gamma"),
         make_utterance(3, 5000, "我周末去爬山和游泳", "gamma")},
        {make_comment("u1", 500, "晚上好", "gamma")}, "gamma", "gamma");
    write_channel(in, gamma);

    const std::int64_t written = run_persona(make_config(in, out));
    CHECK(written == 2);
    const auto lines = file_lines(out / "profiles.jsonl");
    REQUIRE(lines.size() == 2);

    const TextProfile alpha = parse_text_profile_line(lines[0]);
    CHECK(alpha.streamer_id == "alpha");
    const TextProfile parsed = parse_text_profile_line(lines[1]);
    CHECK(parsed.streamer_id == "gamma");
    REQUIRE(parsed.sentences.size() == 2);
    CHECK(parsed.sentences[0] == "我每天晚上八点直播唱歌");
    CHECK(parsed.sentences[1] == "我周末去爬山和游泳");

    CHECK_THROWS_AS(
        run_persona(make_config(tmp.path() / "nowhere", out)), ConfigError);
}

TEST_CASE("run_taskgen builds both task files and their splits") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    const fs::path out = tmp.path() / "out";
    fs::create_directories(in);
    write_channel(in, synth_channel(16, "alpha"));
    write_channel(in, synth_channel(17, "beta"));

    PipelineConfig config = make_config(in, out);
    config.task.test_fraction = 0.1;
    config.seed = 5;

    SUBCASE("taskgen before extract is an error") {
        try {
            run_taskgen(config);
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            CHECK(std::string(err.what()).find("extract") != std::string::npos);
        }
    }

    const ExtractSummary extracted = run_extract(config);
    run_persona(config);
    const TaskgenSummary summary = run_taskgen(config);

    CHECK(summary.response_pairs == extracted.pairs);
    CHECK(summary.missing_profiles == 0);
    CHECK(summary.addressee_sessions > 0);

    const auto response_lines = file_lines(out / "response_task.jsonl");
    CHECK(static_cast<std::int64_t>(response_lines.size()) ==
          summary.response_pairs);
    const auto session_lines = file_lines(out / "addressee_task.jsonl");
    CHECK(static_cast<std::int64_t>(session_lines.size()) ==
          summary.addressee_sessions);
    for (const std::string& line : session_lines) {
        const AddresseeSession session = parse_addressee_session_line(line);
        CHECK(session.candidates.size() ==
              static_cast<std::size_t>(config.task.candidate_count));
        CHECK(session.gold_index == config.task.candidate_count - 1);
        CHECK(!session.shuffled);
    }

    auto check_split = [&](const char* stem, const std::vector<std::string>& all,
                           std::int64_t train_count, std::int64_t test_count) {
        const auto train = file_lines(out / (std::string(stem) + ".train.jsonl"));
        const auto test = file_lines(out / (std::string(stem) + ".test.jsonl"));
        CHECK(static_cast<std::int64_t>(train.size()) == train_count);
        CHECK(static_cast<std::int64_t>(test.size()) == test_count);
        auto combined = train;
        combined.insert(combined.end(), test.begin(), test.end());
        std::sort(combined.begin(), combined.end());
        auto expected = all;
        std::sort(expected.begin(), expected.end());
        CHECK(combined == expected);
    };
    check_split("response_task", response_lines, summary.response_train,
                summary.response_test);
    check_split("addressee_task", session_lines, summary.addressee_train,
                summary.addressee_test);

    SUBCASE("shuffled candidates keep the flag in every record") {
        config.task.shuffle_candidates = true;
        const TaskgenSummary shuffled = run_taskgen(config);
        CHECK(shuffled.addressee_sessions == summary.addressee_sessions);
        for (const std::string& line : file_lines(out / "addressee_task.jsonl"))
            CHECK(parse_addressee_session_line(line).shuffled);
    }
}

TEST_CASE("run_taskgen on an empty extraction writes empty files") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    const fs::path out = tmp.path() / "out";
    fs::create_directories(in);
    const ChannelStream delta = make_stream(
        {make_utterance(1, 60000, "大家晚上好。", "delta")},
        {make_comment("u1", 30000, "zz999", "delta")}, "delta", "delta");
    write_channel(in, delta);

    PipelineConfig config = make_config(in, out);
    const ExtractSummary extracted = run_extract(config);
    REQUIRE(extracted.pairs == 0);

    const TaskgenSummary summary = run_taskgen(config);
    CHECK(summary.response_pairs == 0);
    CHECK(summary.addressee_sessions == 0);
    CHECK(summary.response_train == 0);
    CHECK(summary.response_test == 0);
    CHECK(summary.addressee_train == 0);
    CHECK(summary.addressee_test == 0);
    for (const char* name :
         {"response_task.jsonl", "addressee_task.jsonl",
          "response_task.train.jsonl", "response_task.test.jsonl",
          "addressee_task.train.jsonl", "addressee_task.test.jsonl"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(out / name));
        CHECK(file_bytes(out / name).empty());
    }
}

TEST_CASE("run_stats matches a direct computation over the corpus") {
    TempDir tmp;
    const fs::path in = tmp.path() / "in";
    const fs::path out = tmp.path() / "out";
    fs::create_directories(in);
    write_channel(in, synth_channel(18, "alpha"));
    write_channel(in, synth_channel(19, "beta"));

    PipelineConfig config = make_config(in, out);
    run_extract(config);
    const std::string report = run_stats(config);
    CHECK(file_bytes(out / "stats.json") == report);

    std::vector<MatchedPair> pairs;
    long line_number = 0;
    for (const std::string& line : file_lines(out / "pairs.jsonl"))
        pairs.push_back(parse_matched_pair_line(line, ++line_number));
    std::vector<ChannelStream> streams;
    for (const ChannelFiles& files : discover_channels(config.input_dir))
        streams.push_back(load_channel_stream_files(
            files.transcript_path, files.comment_path, config.extraction));
    CHECK(report == dump_stats_report(dataset_stats(pairs, streams)));

    const json doc = json::parse(report);
    CHECK(doc.at("dialogues").get<std::int64_t>() > 0);
    CHECK(doc.at("streamer_count").get<std::int64_t>() == 2);
}

TEST_CASE("run_bench honors a custom sweep file and reports failures") {
    TempDir tmp;
    const fs::path out = tmp.path() / "out";
    PipelineConfig config = make_config(tmp.path(), out);

    const std::string spec = R"({
        "rows": [
            {"name": "tiny_clean", "streams": 2, "min_precision": 0.99,
             "min_recall": 0.99,
             "spec": {"p_repeat": 1.0, "p_summarize": 0.0,
                      "noise_fraction": 0.0, "seed": 71, "duration": 120000}},
            {"name": "unreachable", "streams": 2, "min_precision": 1.01,
             "spec": {"p_repeat": 1.0, "p_summarize": 0.0,
                      "noise_fraction": 0.0, "seed": 72, "duration": 120000}}
        ]
    })";
    const fs::path spec_path = tmp.path() / "sweep.json";
    write_file(spec_path.string(), spec);

    int rows_failed = -1;
    const std::string table =
        run_bench(config, spec_path.string(), &rows_failed);
    CHECK(rows_failed == 1);
    CHECK(table.find("tiny_clean") != std::string::npos);
    CHECK(table.find("unreachable") != std::string::npos);
    CHECK(file_bytes(out / "bench.tsv") == table);

    const json doc = json::parse(file_bytes(out / "bench.json"));
    CHECK(doc.at("rows_failed").get<int>() == 1);
    REQUIRE(doc.at("rows").size() == 2);
    CHECK(doc.at("rows").at(0).at("name") == "tiny_clean");
    CHECK(doc.at("rows").at(0).at("pass").get<bool>());
    CHECK(!doc.at("rows").at(1).at("pass").get<bool>());

    SUBCASE("the shipped sweep passes its own floors") {
        int failed = -1;
        run_bench(config, "", &failed);
        CHECK(failed == 0);
    }
}
