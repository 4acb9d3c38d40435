// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <regex>
#include <string>
#include <vector>

namespace chatweave {

// Thresholds and windows for dialogue extraction. Durations are in
// milliseconds, lengths in Unicode code points.
struct ExtractionConfig {
    std::int64_t delta_t = 60000;       // max comment-to-response gap
    double tau = 1.0;                   // response/comment length ratio, strict
    double theta_lex = 0.5;             // lexical containment threshold
    double theta_sem = 0.8;             // semantic score threshold
    double theta_prefix = 0.6;          // echo-prefix stripping threshold
    int max_merge = 5;                  // max transcript segments per response
    std::string ending_punct = "。？！．!?.";
    std::vector<std::string> noise_patterns{"谢谢", "欢迎"};
    int ngram_order = 2;
    std::int64_t dedup_window = 5000;   // duplicate-comment collapse window

    bool operator==(const ExtractionConfig&) const = default;
};

// Persona sentence filtering and profile assembly.
struct PersonaConfig {
    int min_words = 4;
    int max_words = 20;
    std::vector<std::string> first_person_tokens{"我"};
    std::int64_t max_profile_length = 512;  // code points per profile
    double classifier_threshold = 0.5;
    std::string classifier_endpoint;        // empty: rules-only mode

    bool operator==(const PersonaConfig&) const = default;
};

// Benchmark task emission.
struct TaskConfig {
    int candidate_count = 10;        // comments per addressee session
    bool shuffle_candidates = false; // permute candidates, rewrite gold index
    double test_fraction = 0.025;

    bool operator==(const TaskConfig&) const = default;
};

struct PipelineConfig {
    ExtractionConfig extraction;
    PersonaConfig persona;
    TaskConfig task;
    std::string embed_endpoint;  // empty: lexical matching only
    std::string input_dir;
    std::string output_dir;
    int worker_count = 4;
    std::uint64_t seed = 0;

    bool operator==(const PipelineConfig&) const = default;
};

// Parses a JSON config document. Missing keys keep defaults; unknown keys
// and invariant violations raise ConfigError.
PipelineConfig parse_config(const std::string& json_text);

// Reads the document from disk, then parse_config.
PipelineConfig load_config_file(const std::string& path);

// Serializes to the same JSON shape parse_config accepts.
std::string dump_config(const PipelineConfig& config);

// Replaces the value at a dotted key path ("extraction.delta_t"). Values are
// plain text: numbers, true/false, strings, comma-separated lists. The whole
// document must stay valid after each application; a rejected key or value
// raises ConfigError and leaves the config unchanged.
void apply_override(PipelineConfig& config, const std::string& key,
                    const std::string& value);

// Applies CHATWEAVE_* environment overrides; the variable name is the key
// path upper-cased with dots replaced by underscores.
void apply_env_overrides(PipelineConfig& config);

// All dotted key paths apply_override accepts, in document order.
const std::vector<std::string>& config_keys();

// Throws ConfigError on any invariant violation, including noise patterns
// that fail to compile.
void validate_config(const PipelineConfig& config);

// Compiles noise patterns for anchored matching; raises ConfigError naming
// the offending pattern.
std::vector<std::regex> compile_noise_patterns(
    const std::vector<std::string>& patterns);

}  // namespace chatweave
