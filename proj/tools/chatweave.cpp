// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the pipeline exclusively through the C
// API so the executable exercises the same surface other embedders get.
#include <chatweave/chatweave.h>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

namespace {

// Exit codes are a stable contract: 0 success, 1 fatal error, 2 a completed
// run whose checks did not pass (benchmark floors, ingest violations).
constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitCheckFailed = 2;

struct ConfigDeleter {
    void operator()(cw_config* c) const { cw_config_free(c); }
};
using ConfigHandle = std::unique_ptr<cw_config, ConfigDeleter>;

struct StringDeleter {
    void operator()(char* s) const { cw_string_free(s); }
};
using StringHandle = std::unique_ptr<char, StringDeleter>;

int fatal(const std::string& what) {
    std::fprintf(stderr, "chatweave: %s: %s\n", what.c_str(), cw_last_error());
    return kExitFatal;
}

struct CommonFlags {
    std::string config_path;
    std::string input_dir;
    std::string out_dir;
    int workers = 0;
    std::uint64_t seed = 0;
    bool workers_given = false;
    bool seed_given = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool with_input) {
    cmd->add_option("--config", flags->config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--workers", flags->workers, "worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags->seed, "random seed");
    cmd->add_option("--out", flags->out_dir, "output directory");
    if (with_input)
        cmd->add_option("input", flags->input_dir,
                        "directory of <channel>.transcript.jsonl / "
                        "<channel>.comments.jsonl files");
}

// Builds the effective config: file, then CHATWEAVE_* environment
// variables, then explicit flags, strongest last.
int build_config(const CLI::App* cmd, const CommonFlags& flags,
                 ConfigHandle* out) {
    ConfigHandle config;
    if (!flags.config_path.empty()) {
        cw_config* raw = nullptr;
        if (cw_config_load(flags.config_path.c_str(), &raw) != CW_OK)
            return fatal("loading '" + flags.config_path + "'");
        config.reset(raw);
    } else {
        config.reset(cw_config_default());
        if (!config) {
            std::fprintf(stderr, "chatweave: out of memory\n");
            return kExitFatal;
        }
    }
    if (cw_config_apply_env(config.get()) != CW_OK)
        return fatal("applying environment overrides");

    auto set = [&](const char* key, const std::string& value) {
        return cw_config_set(config.get(), key, value.c_str()) == CW_OK;
    };
    if (!flags.input_dir.empty() && !set("input_dir", flags.input_dir))
        return fatal("setting input_dir");
    if (!flags.out_dir.empty() && !set("output_dir", flags.out_dir))
        return fatal("setting output_dir");
    if (cmd->count("--workers") > 0 &&
        !set("worker_count", std::to_string(flags.workers)))
        return fatal("setting worker_count");
    if (cmd->count("--seed") > 0 && !set("seed", std::to_string(flags.seed)))
        return fatal("setting seed");

    if (cw_config_validate(config.get()) != CW_OK) return fatal("config");
    *out = std::move(config);
    return kExitOk;
}

int cmd_ingest_check(const ConfigHandle& config) {
    char* report = nullptr;
    int ok = 0;
    if (cw_run_ingest_check(config.get(), &report, &ok) != CW_OK)
        return fatal("ingest-check");
    StringHandle guard(report);
    std::fputs(report, stdout);
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_extract(const ConfigHandle& config) {
    char* summary = nullptr;
    if (cw_run_extract(config.get(), &summary) != CW_OK)
        return fatal("extract");
    StringHandle guard(summary);
    std::fputs(summary, stdout);
    return kExitOk;
}

int cmd_persona(const ConfigHandle& config) {
    int64_t profiles = 0;
    if (cw_run_persona(config.get(), &profiles) != CW_OK)
        return fatal("persona");
    std::printf("{\n  \"profiles\": %lld\n}\n",
                static_cast<long long>(profiles));
    return kExitOk;
}

int cmd_taskgen(const ConfigHandle& config) {
    char* summary = nullptr;
    if (cw_run_taskgen(config.get(), &summary) != CW_OK)
        return fatal("taskgen");
    StringHandle guard(summary);
    std::fputs(summary, stdout);
    return kExitOk;
}

int cmd_stats(const ConfigHandle& config) {
    char* doc = nullptr;
    if (cw_run_stats(config.get(), &doc) != CW_OK) return fatal("stats");
    StringHandle guard(doc);
    std::fputs(doc, stdout);
    return kExitOk;
}

int cmd_bench(const ConfigHandle& config, const std::string& spec_path) {
    char* table = nullptr;
    int rows_failed = 0;
    if (cw_run_bench(config.get(),
                     spec_path.empty() ? nullptr : spec_path.c_str(), &table,
                     &rows_failed) != CW_OK)
        return fatal("bench");
    StringHandle guard(table);
    std::fputs(table, stdout);
    return rows_failed > 0 ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chatweave: builds dialogue datasets from livestream "
                 "transcript and comment logs"};
    app.set_version_flag("--version", std::string(cw_version()));
    app.require_subcommand(1);

    CommonFlags ingest_flags, extract_flags, persona_flags, taskgen_flags,
        stats_flags, bench_flags;
    std::string bench_spec;

    CLI::App* ingest = app.add_subcommand(
        "ingest-check", "validate channel inputs and report violations");
    add_common_flags(ingest, &ingest_flags, true);

    CLI::App* extract = app.add_subcommand(
        "extract", "extract dialogue pairs from every channel");
    add_common_flags(extract, &extract_flags, true);

    CLI::App* persona = app.add_subcommand(
        "persona", "build one text profile per channel");
    add_common_flags(persona, &persona_flags, true);

    CLI::App* taskgen = app.add_subcommand(
        "taskgen", "emit benchmark task files from extracted pairs");
    add_common_flags(taskgen, &taskgen_flags, true);

    CLI::App* stats = app.add_subcommand(
        "stats", "corpus statistics over extracted pairs");
    add_common_flags(stats, &stats_flags, true);

    CLI::App* bench = app.add_subcommand(
        "bench", "synthetic benchmark sweep against declared floors");
    add_common_flags(bench, &bench_flags, false);
    bench->add_option("spec", bench_spec, "benchmark spec JSON (default: bundled rows)")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    struct Dispatch {
        CLI::App* cmd;
        CommonFlags* flags;
        int (*run)(const ConfigHandle&);
    };
    const Dispatch table[] = {
        {ingest, &ingest_flags, cmd_ingest_check},
        {extract, &extract_flags, cmd_extract},
        {persona, &persona_flags, cmd_persona},
        {taskgen, &taskgen_flags, cmd_taskgen},
        {stats, &stats_flags, cmd_stats},
    };
    for (const Dispatch& entry : table) {
        if (!entry.cmd->parsed()) continue;
        ConfigHandle config;
        if (int rc = build_config(entry.cmd, *entry.flags, &config)) return rc;
        return entry.run(config);
    }
    if (bench->parsed()) {
        ConfigHandle config;
        if (int rc = build_config(bench, bench_flags, &config)) return rc;
        return cmd_bench(config, bench_spec);
    }
    return kExitFatal;
}
