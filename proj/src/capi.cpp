// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "chatweave/chatweave.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "embed_client.hpp"
#include "errors.hpp"
#include "ingest.hpp"
#include "matcher.hpp"
#include "model.hpp"
#include "pipeline.hpp"
#include "taskgen.hpp"

struct cw_config {
    chatweave::PipelineConfig impl;
};

struct cw_stream {
    chatweave::ChannelStream impl;
};

struct cw_pairs {
    std::vector<chatweave::MatchedPair> impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Maps the active exception to a status code and records its message.
cw_status classify_error() {
    try {
        throw;
    } catch (const chatweave::ConfigError& e) {
        set_error(e.what());
        return CW_ERR_CONFIG;
    } catch (const chatweave::ParseError& e) {
        set_error(e.what());
        return CW_ERR_PARSE;
    } catch (const chatweave::TransportError& e) {
        set_error(e.what());
        return CW_ERR_TRANSPORT;
    } catch (const chatweave::SizeLimitError& e) {
        set_error(e.what());
        return CW_ERR_SIZE_LIMIT;
    } catch (const chatweave::InvalidArgumentError& e) {
        set_error(e.what());
        return CW_ERR_INVALID_ARGUMENT;
    } catch (const chatweave::InsufficientDataError& e) {
        set_error(e.what());
        return CW_ERR_INSUFFICIENT_DATA;
    } catch (const chatweave::Error& e) {
        set_error(e.what());
        return CW_ERR_RUNTIME;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CW_ERR_UNKNOWN;
    } catch (...) {
        set_error("unknown error");
        return CW_ERR_UNKNOWN;
    }
}

template <typename Fn>
cw_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CW_OK;
    } catch (...) {
        return classify_error();
    }
}

cw_status require(bool condition, const char* message) {
    if (condition) return CW_OK;
    set_error(message);
    return CW_ERR_INVALID_ARGUMENT;
}

// Copies into a malloc-style buffer released by cw_string_free.
char* copy_string(const std::string& text) {
    char* out = new (std::nothrow) char[text.size() + 1];
    if (out == nullptr) return nullptr;
    std::memcpy(out, text.data(), text.size());
    out[text.size()] = '\0';
    return out;
}

cw_status hand_out(const std::string& text, char** out) {
    *out = copy_string(text);
    if (*out == nullptr) {
        set_error("out of memory");
        return CW_ERR_RUNTIME;
    }
    return CW_OK;
}

}  // namespace

extern "C" {

const char* cw_last_error(void) { return g_last_error.c_str(); }

const char* cw_version(void) { return "1.0.0"; }

void cw_string_free(char* s) { delete[] s; }

cw_config* cw_config_default(void) {
    return new (std::nothrow) cw_config{};
}

cw_status cw_config_load(const char* path, cw_config** out) {
    if (auto rc = require(path != nullptr && out != nullptr,
                          "cw_config_load: null argument"))
        return rc;
    *out = nullptr;
    return guarded([&] {
        auto* handle = new cw_config{chatweave::load_config_file(path)};
        *out = handle;
    });
}

cw_status cw_config_parse(const char* json_text, cw_config** out) {
    if (auto rc = require(json_text != nullptr && out != nullptr,
                          "cw_config_parse: null argument"))
        return rc;
    *out = nullptr;
    return guarded([&] {
        auto* handle = new cw_config{chatweave::parse_config(json_text)};
        *out = handle;
    });
}

cw_status cw_config_apply_env(cw_config* config) {
    if (auto rc = require(config != nullptr, "cw_config_apply_env: null config"))
        return rc;
    return guarded([&] { chatweave::apply_env_overrides(config->impl); });
}

cw_status cw_config_set(cw_config* config, const char* key, const char* value) {
    if (auto rc = require(config != nullptr && key != nullptr && value != nullptr,
                          "cw_config_set: null argument"))
        return rc;
    return guarded([&] { chatweave::apply_override(config->impl, key, value); });
}

cw_status cw_config_dump(const cw_config* config, char** out_json) {
    if (auto rc = require(config != nullptr && out_json != nullptr,
                          "cw_config_dump: null argument"))
        return rc;
    *out_json = nullptr;
    std::string doc;
    if (auto rc = guarded([&] { doc = chatweave::dump_config(config->impl); }))
        return rc;
    return hand_out(doc, out_json);
}

cw_status cw_config_validate(const cw_config* config) {
    if (auto rc = require(config != nullptr, "cw_config_validate: null config"))
        return rc;
    return guarded([&] { chatweave::validate_config(config->impl); });
}

void cw_config_free(cw_config* config) { delete config; }

cw_status cw_stream_load(const char* transcript_path, const char* comment_path,
                         const cw_config* config, cw_stream** out) {
    if (auto rc = require(transcript_path != nullptr && comment_path != nullptr &&
                              config != nullptr && out != nullptr,
                          "cw_stream_load: null argument"))
        return rc;
    *out = nullptr;
    return guarded([&] {
        auto* handle = new cw_stream{chatweave::load_channel_stream_files(
            transcript_path, comment_path, config->impl.extraction)};
        *out = handle;
    });
}

cw_status cw_stream_counts(const cw_stream* stream, int64_t* utterances,
                           int64_t* comments) {
    if (auto rc = require(stream != nullptr, "cw_stream_counts: null stream"))
        return rc;
    if (utterances != nullptr)
        *utterances = static_cast<int64_t>(stream->impl.utterances.size());
    if (comments != nullptr)
        *comments = static_cast<int64_t>(stream->impl.comments.size());
    g_last_error.clear();
    return CW_OK;
}

void cw_stream_free(cw_stream* stream) { delete stream; }

cw_status cw_extract(const cw_stream* stream, const cw_config* config,
                     cw_pairs** out) {
    if (auto rc = require(stream != nullptr && config != nullptr && out != nullptr,
                          "cw_extract: null argument"))
        return rc;
    *out = nullptr;
    return guarded([&] {
        std::unique_ptr<chatweave::RemoteSemanticScorer> scorer;
        if (!config->impl.embed_endpoint.empty())
            scorer = std::make_unique<chatweave::RemoteSemanticScorer>(
                config->impl.embed_endpoint);
        auto* handle = new cw_pairs{chatweave::extract_dialogues(
            stream->impl, config->impl.extraction, scorer.get())};
        *out = handle;
    });
}

int64_t cw_pairs_count(const cw_pairs* pairs) {
    if (pairs == nullptr) return -1;
    return static_cast<int64_t>(pairs->impl.size());
}

cw_status cw_pairs_jsonl(const cw_pairs* pairs, char** out_text) {
    if (auto rc = require(pairs != nullptr && out_text != nullptr,
                          "cw_pairs_jsonl: null argument"))
        return rc;
    *out_text = nullptr;
    std::string text;
    if (auto rc = guarded([&] {
            for (const chatweave::MatchedPair& pair : pairs->impl) {
                text += chatweave::write_matched_pair_line(pair);
                text += '\n';
            }
        }))
        return rc;
    return hand_out(text, out_text);
}

cw_status cw_pairs_write(const cw_pairs* pairs, const char* path) {
    if (auto rc = require(pairs != nullptr && path != nullptr,
                          "cw_pairs_write: null argument"))
        return rc;
    return guarded([&] {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw chatweave::Error(std::string("cannot open '") + path +
                                   "' for writing");
        for (const chatweave::MatchedPair& pair : pairs->impl)
            out << chatweave::write_matched_pair_line(pair) << '\n';
        out.flush();
        if (!out.good())
            throw chatweave::Error(std::string("write failed for '") + path + "'");
    });
}

void cw_pairs_free(cw_pairs* pairs) { delete pairs; }

cw_status cw_run_ingest_check(const cw_config* config, char** out_report_json,
                              int* out_ok) {
    if (auto rc = require(config != nullptr, "cw_run_ingest_check: null config"))
        return rc;
    if (out_report_json != nullptr) *out_report_json = nullptr;
    std::string report;
    bool ok = false;
    if (auto rc = guarded(
            [&] { report = chatweave::run_ingest_check(config->impl, &ok); }))
        return rc;
    if (out_ok != nullptr) *out_ok = ok ? 1 : 0;
    if (out_report_json != nullptr) return hand_out(report, out_report_json);
    return CW_OK;
}

cw_status cw_run_extract(const cw_config* config, char** out_summary_json) {
    if (auto rc = require(config != nullptr, "cw_run_extract: null config"))
        return rc;
    if (out_summary_json != nullptr) *out_summary_json = nullptr;
    chatweave::ExtractSummary summary;
    if (auto rc =
            guarded([&] { summary = chatweave::run_extract(config->impl); }))
        return rc;
    if (out_summary_json != nullptr) {
        nlohmann::json doc{{"channels", summary.channels},
                           {"pairs", summary.pairs},
                           {"dropped", summary.dropped},
                           {"duration_ms", summary.duration_ms}};
        return hand_out(doc.dump(2) + "\n", out_summary_json);
    }
    return CW_OK;
}

cw_status cw_run_persona(const cw_config* config, int64_t* out_profiles) {
    if (auto rc = require(config != nullptr, "cw_run_persona: null config"))
        return rc;
    std::int64_t profiles = 0;
    if (auto rc =
            guarded([&] { profiles = chatweave::run_persona(config->impl); }))
        return rc;
    if (out_profiles != nullptr) *out_profiles = profiles;
    return CW_OK;
}

cw_status cw_run_taskgen(const cw_config* config, char** out_summary_json) {
    if (auto rc = require(config != nullptr, "cw_run_taskgen: null config"))
        return rc;
    if (out_summary_json != nullptr) *out_summary_json = nullptr;
    chatweave::TaskgenSummary summary;
    if (auto rc =
            guarded([&] { summary = chatweave::run_taskgen(config->impl); }))
        return rc;
    if (out_summary_json != nullptr) {
        nlohmann::json doc{{"response_pairs", summary.response_pairs},
                           {"addressee_sessions", summary.addressee_sessions},
                           {"missing_profiles", summary.missing_profiles},
                           {"response_train", summary.response_train},
                           {"response_test", summary.response_test},
                           {"addressee_train", summary.addressee_train},
                           {"addressee_test", summary.addressee_test}};
        return hand_out(doc.dump(2) + "\n", out_summary_json);
    }
    return CW_OK;
}

cw_status cw_run_stats(const cw_config* config, char** out_stats_json) {
    if (auto rc = require(config != nullptr, "cw_run_stats: null config"))
        return rc;
    if (out_stats_json != nullptr) *out_stats_json = nullptr;
    std::string doc;
    if (auto rc = guarded([&] { doc = chatweave::run_stats(config->impl); }))
        return rc;
    if (out_stats_json != nullptr) return hand_out(doc, out_stats_json);
    return CW_OK;
}

cw_status cw_run_bench(const cw_config* config, const char* spec_path,
                       char** out_table, int* out_rows_failed) {
    if (auto rc = require(config != nullptr, "cw_run_bench: null config"))
        return rc;
    if (out_table != nullptr) *out_table = nullptr;
    std::string table;
    int failed = 0;
    const std::string spec = spec_path == nullptr ? std::string() : spec_path;
    if (auto rc = guarded(
            [&] { table = chatweave::run_bench(config->impl, spec, &failed); }))
        return rc;
    if (out_rows_failed != nullptr) *out_rows_failed = failed;
    if (out_table != nullptr) return hand_out(table, out_table);
    return CW_OK;
}

}  // extern "C"
