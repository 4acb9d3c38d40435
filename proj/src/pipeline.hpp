// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace chatweave {

// One channel's input file pair inside config.input_dir, named
// <channel>.transcript.jsonl and <channel>.comments.jsonl. A missing
// counterpart leaves its path empty (callers decide whether that is fatal).
struct ChannelFiles {
    std::string channel_id;
    std::string transcript_path;
    std::string comment_path;
};

// Sorted by channel id. Errors if the directory cannot be read. With
// require_pairs, a one-sided channel is an error instead of an entry.
std::vector<ChannelFiles> discover_channels(const std::string& input_dir,
                                            bool require_pairs = true);

struct ExtractSummary {
    std::int64_t channels = 0;
    std::int64_t pairs = 0;
    std::int64_t dropped = 0;  // assembled pairs lost to stripping or noise
    std::int64_t duration_ms = 0;
};

// Loads every channel, extracts dialogue pairs with worker_count workers,
// writes <channel>.pairs.jsonl per channel plus a merged pairs.jsonl in
// channel-id order. Any failure removes the files this run created before
// rethrowing. Output bytes are independent of worker_count.
ExtractSummary run_extract(const PipelineConfig& config);

// Validates every channel without writing anything. Returns the structured
// report document; *ok is true only if every channel parses cleanly with
// zero violations.
std::string run_ingest_check(const PipelineConfig& config, bool* ok);

// Builds one text profile per channel from its transcript history and writes
// profiles.jsonl. Uses the remote classifier when the endpoint is set.
// Returns the number of profiles written.
std::int64_t run_persona(const PipelineConfig& config);

struct TaskgenSummary {
    std::int64_t response_pairs = 0;
    std::int64_t addressee_sessions = 0;
    std::int64_t missing_profiles = 0;
    std::int64_t response_train = 0;
    std::int64_t response_test = 0;
    std::int64_t addressee_train = 0;
    std::int64_t addressee_test = 0;
};

// Reads pairs.jsonl and profiles.jsonl from output_dir plus the input
// streams, then writes response_task.jsonl, addressee_task.jsonl, and their
// .train/.test splits.
TaskgenSummary run_taskgen(const PipelineConfig& config);

// Computes corpus statistics over pairs.jsonl and the input streams and
// writes stats.json. Returns the document.
std::string run_stats(const PipelineConfig& config);

// Runs the benchmark sweep (the bundled rows, or spec_path when non-empty),
// writes bench.tsv and bench.json, and returns the table. *rows_failed
// counts rows below their floors.
std::string run_bench(const PipelineConfig& config, const std::string& spec_path,
                      int* rows_failed);

}  // namespace chatweave
