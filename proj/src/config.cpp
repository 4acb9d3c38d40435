// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "errors.hpp"

namespace chatweave {

using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    if (value.empty()) return out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(value.substr(start));
            return out;
        }
        out.push_back(value.substr(start, comma - start));
        start = comma + 1;
    }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

template <typename T>
void read_field(const json& obj, const std::string& section, const char* name,
                T& out) {
    if (!obj.contains(name)) return;
    const json& v = obj.at(name);
    try {
        out = v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + name + ": wrong value type");
    }
}

void check_known_keys(const json& obj, const std::string& section,
                      std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) { found = true; break; }
        if (!found)
            throw ConfigError("unknown config key '" + section + it.key() + "'");
    }
}

json section_or_empty(const json& root, const char* name) {
    if (!root.contains(name)) return json::object();
    const json& v = root.at(name);
    if (!v.is_object())
        throw ConfigError(std::string(name) + ": expected an object");
    return v;
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded()) throw ConfigError("config is not valid JSON");
    if (!root.is_object()) throw ConfigError("config root must be an object");

    check_known_keys(root, "",
                     {"extraction", "persona", "task", "embed_endpoint",
                      "input_dir", "output_dir", "worker_count", "seed"});

    PipelineConfig config;

    json ext = section_or_empty(root, "extraction");
    check_known_keys(ext, "extraction.",
                     {"delta_t", "tau", "theta_lex", "theta_sem", "theta_prefix",
                      "max_merge", "ending_punct", "noise_patterns",
                      "ngram_order", "dedup_window"});
    read_field(ext, "extraction.", "delta_t", config.extraction.delta_t);
    read_field(ext, "extraction.", "tau", config.extraction.tau);
    read_field(ext, "extraction.", "theta_lex", config.extraction.theta_lex);
    read_field(ext, "extraction.", "theta_sem", config.extraction.theta_sem);
    read_field(ext, "extraction.", "theta_prefix", config.extraction.theta_prefix);
    read_field(ext, "extraction.", "max_merge", config.extraction.max_merge);
    read_field(ext, "extraction.", "ending_punct", config.extraction.ending_punct);
    read_field(ext, "extraction.", "noise_patterns", config.extraction.noise_patterns);
    read_field(ext, "extraction.", "ngram_order", config.extraction.ngram_order);
    read_field(ext, "extraction.", "dedup_window", config.extraction.dedup_window);

    json per = section_or_empty(root, "persona");
    check_known_keys(per, "persona.",
                     {"min_words", "max_words", "first_person_tokens",
                      "max_profile_length", "classifier_threshold",
                      "classifier_endpoint"});
    read_field(per, "persona.", "min_words", config.persona.min_words);
    read_field(per, "persona.", "max_words", config.persona.max_words);
    read_field(per, "persona.", "first_person_tokens",
               config.persona.first_person_tokens);
    read_field(per, "persona.", "max_profile_length",
               config.persona.max_profile_length);
    read_field(per, "persona.", "classifier_threshold",
               config.persona.classifier_threshold);
    read_field(per, "persona.", "classifier_endpoint",
               config.persona.classifier_endpoint);

    json task = section_or_empty(root, "task");
    check_known_keys(task, "task.",
                     {"candidate_count", "shuffle_candidates", "test_fraction"});
    read_field(task, "task.", "candidate_count", config.task.candidate_count);
    read_field(task, "task.", "shuffle_candidates", config.task.shuffle_candidates);
    read_field(task, "task.", "test_fraction", config.task.test_fraction);

    read_field(root, "", "embed_endpoint", config.embed_endpoint);
    read_field(root, "", "input_dir", config.input_dir);
    read_field(root, "", "output_dir", config.output_dir);
    read_field(root, "", "worker_count", config.worker_count);
    read_field(root, "", "seed", config.seed);

    validate_config(config);
    return config;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_config(const PipelineConfig& config) {
    json root;
    root["extraction"] = {
        {"delta_t", config.extraction.delta_t},
        {"tau", config.extraction.tau},
        {"theta_lex", config.extraction.theta_lex},
        {"theta_sem", config.extraction.theta_sem},
        {"theta_prefix", config.extraction.theta_prefix},
        {"max_merge", config.extraction.max_merge},
        {"ending_punct", config.extraction.ending_punct},
        {"noise_patterns", config.extraction.noise_patterns},
        {"ngram_order", config.extraction.ngram_order},
        {"dedup_window", config.extraction.dedup_window},
    };
    root["persona"] = {
        {"min_words", config.persona.min_words},
        {"max_words", config.persona.max_words},
        {"first_person_tokens", config.persona.first_person_tokens},
        {"max_profile_length", config.persona.max_profile_length},
        {"classifier_threshold", config.persona.classifier_threshold},
        {"classifier_endpoint", config.persona.classifier_endpoint},
    };
    root["task"] = {
        {"candidate_count", config.task.candidate_count},
        {"shuffle_candidates", config.task.shuffle_candidates},
        {"test_fraction", config.task.test_fraction},
    };
    root["embed_endpoint"] = config.embed_endpoint;
    root["input_dir"] = config.input_dir;
    root["output_dir"] = config.output_dir;
    root["worker_count"] = config.worker_count;
    root["seed"] = config.seed;
    return root.dump(2) + "\n";
}

void apply_override(PipelineConfig& target, const std::string& key,
                    const std::string& value) {
    // Staged on a copy so a rejected value leaves the config untouched.
    PipelineConfig c = target;
    auto& e = c.extraction;
    auto& p = c.persona;
    auto& t = c.task;
    if (key == "extraction.delta_t") e.delta_t = to_int(key, value);
    else if (key == "extraction.tau") e.tau = to_double(key, value);
    else if (key == "extraction.theta_lex") e.theta_lex = to_double(key, value);
    else if (key == "extraction.theta_sem") e.theta_sem = to_double(key, value);
    else if (key == "extraction.theta_prefix") e.theta_prefix = to_double(key, value);
    else if (key == "extraction.max_merge") e.max_merge = static_cast<int>(to_int(key, value));
    else if (key == "extraction.ending_punct") e.ending_punct = value;
    else if (key == "extraction.noise_patterns") e.noise_patterns = split_list(value);
    else if (key == "extraction.ngram_order") e.ngram_order = static_cast<int>(to_int(key, value));
    else if (key == "extraction.dedup_window") e.dedup_window = to_int(key, value);
    else if (key == "persona.min_words") p.min_words = static_cast<int>(to_int(key, value));
    else if (key == "persona.max_words") p.max_words = static_cast<int>(to_int(key, value));
    else if (key == "persona.first_person_tokens") p.first_person_tokens = split_list(value);
    else if (key == "persona.max_profile_length") p.max_profile_length = to_int(key, value);
    else if (key == "persona.classifier_threshold") p.classifier_threshold = to_double(key, value);
    else if (key == "persona.classifier_endpoint") p.classifier_endpoint = value;
    else if (key == "task.candidate_count") t.candidate_count = static_cast<int>(to_int(key, value));
    else if (key == "task.shuffle_candidates") t.shuffle_candidates = to_bool(key, value);
    else if (key == "task.test_fraction") t.test_fraction = to_double(key, value);
    else if (key == "embed_endpoint") c.embed_endpoint = value;
    else if (key == "input_dir") c.input_dir = value;
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "worker_count") c.worker_count = static_cast<int>(to_int(key, value));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
    validate_config(c);
    target = std::move(c);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "extraction.delta_t", "extraction.tau", "extraction.theta_lex",
        "extraction.theta_sem", "extraction.theta_prefix",
        "extraction.max_merge", "extraction.ending_punct",
        "extraction.noise_patterns", "extraction.ngram_order",
        "extraction.dedup_window", "persona.min_words", "persona.max_words",
        "persona.first_person_tokens", "persona.max_profile_length",
        "persona.classifier_threshold", "persona.classifier_endpoint",
        "task.candidate_count", "task.shuffle_candidates",
        "task.test_fraction", "embed_endpoint", "input_dir", "output_dir",
        "worker_count", "seed",
    };
    return keys;
}

void apply_env_overrides(PipelineConfig& config) {
    for (const std::string& key : config_keys()) {
        std::string name = "CHATWEAVE_";
        for (char ch : key)
            name += ch == '.' ? '_' : static_cast<char>(std::toupper(
                                          static_cast<unsigned char>(ch)));
        if (const char* value = std::getenv(name.c_str()))
            apply_override(config, key, value);
    }
}

void validate_config(const PipelineConfig& c) {
    const auto& e = c.extraction;
    if (e.delta_t <= 0) throw ConfigError("extraction.delta_t must be > 0");
    if (e.tau <= 0) throw ConfigError("extraction.tau must be > 0");
    for (auto [name, v] : {std::pair<const char*, double>{"theta_lex", e.theta_lex},
                           {"theta_sem", e.theta_sem},
                           {"theta_prefix", e.theta_prefix}})
        if (v < 0.0 || v > 1.0)
            throw ConfigError(std::string("extraction.") + name +
                              " must be in [0,1]");
    if (e.max_merge < 1) throw ConfigError("extraction.max_merge must be >= 1");
    if (e.ngram_order < 1) throw ConfigError("extraction.ngram_order must be >= 1");
    if (e.dedup_window < 0) throw ConfigError("extraction.dedup_window must be >= 0");
    if (e.ending_punct.empty()) throw ConfigError("extraction.ending_punct must be non-empty");
    compile_noise_patterns(e.noise_patterns);

    const auto& p = c.persona;
    if (p.min_words < 1) throw ConfigError("persona.min_words must be >= 1");
    if (p.max_words < p.min_words)
        throw ConfigError("persona.max_words must be >= min_words");
    if (p.max_profile_length < 1)
        throw ConfigError("persona.max_profile_length must be >= 1");
    if (p.classifier_threshold < 0.0 || p.classifier_threshold > 1.0)
        throw ConfigError("persona.classifier_threshold must be in [0,1]");
    for (const auto& tok : p.first_person_tokens)
        if (tok.empty())
            throw ConfigError("persona.first_person_tokens entries must be non-empty");

    if (c.task.candidate_count < 2)
        throw ConfigError("task.candidate_count must be >= 2");
    if (c.task.test_fraction <= 0.0 || c.task.test_fraction >= 0.5)
        throw ConfigError("task.test_fraction must be in (0, 0.5)");
    if (c.worker_count < 1) throw ConfigError("worker_count must be >= 1");
}

std::vector<std::regex> compile_noise_patterns(
    const std::vector<std::string>& patterns) {
    std::vector<std::regex> out;
    out.reserve(patterns.size());
    for (const auto& p : patterns) {
        if (p.empty())
            throw ConfigError("noise pattern must be non-empty");
        try {
            out.emplace_back(p, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& err) {
            throw ConfigError("noise pattern '" + p +
                              "' does not compile: " + err.what());
        }
    }
    return out;
}

}  // namespace chatweave
