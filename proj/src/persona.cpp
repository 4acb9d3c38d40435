// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "persona.hpp"

#include <algorithm>
#include <unordered_set>

#include "json.hpp"

#include "errors.hpp"
#include "lexicon.hpp"
#include "text.hpp"

namespace chatweave {

using nlohmann::json;

const char* to_string(PosTag tag) {
    switch (tag) {
        case PosTag::VERB: return "VERB";
        case PosTag::NOUN: return "NOUN";
        case PosTag::ADJ: return "ADJ";
        case PosTag::OTHER: return "OTHER";
    }
    return "OTHER";
}

namespace {

bool is_ascii_alnum(char32_t cp) {
    return (cp >= U'0' && cp <= U'9') || (cp >= U'A' && cp <= U'Z') ||
           (cp >= U'a' && cp <= U'z');
}

bool lookup(const std::u32string& word, PosTag* tag) {
    if (verb_lexicon().count(word)) { *tag = PosTag::VERB; return true; }
    if (noun_lexicon().count(word)) { *tag = PosTag::NOUN; return true; }
    if (adjective_lexicon().count(word)) { *tag = PosTag::ADJ; return true; }
    if (function_lexicon().count(word)) { *tag = PosTag::OTHER; return true; }
    return false;
}

}  // namespace

std::vector<TaggedToken> LexiconTagger::tag(const std::string& sentence) const {
    const CodePoints decoded = decode_utf8(sentence);
    const auto& cps = decoded.cps;
    const std::size_t n = cps.size();
    const std::size_t max_len = lexicon_max_word_length();

    std::vector<TaggedToken> out;
    std::size_t i = 0;
    while (i < n) {
        const char32_t cp = cps[i];
        if (is_space_cp(cp) || is_punct_cp(cp)) {
            ++i;
            continue;
        }
        if (is_ascii_alnum(cp)) {
            std::size_t j = i;
            while (j < n && is_ascii_alnum(cps[j])) ++j;
            out.push_back({std::string(cp_slice(sentence, decoded, i, j)),
                           PosTag::OTHER});
            i = j;
            continue;
        }
        std::size_t len = std::min(max_len, n - i);
        bool matched = false;
        for (; len >= 1; --len) {
            std::u32string word(cps.begin() + static_cast<std::ptrdiff_t>(i),
                                cps.begin() + static_cast<std::ptrdiff_t>(i + len));
            PosTag tag;
            if (lookup(word, &tag)) {
                out.push_back({std::string(cp_slice(sentence, decoded, i, i + len)),
                               tag});
                i += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.push_back({std::string(cp_slice(sentence, decoded, i, i + 1)),
                           PosTag::OTHER});
            ++i;
        }
    }
    return out;
}

const Tagger& default_tagger() {
    static const LexiconTagger tagger;
    return tagger;
}

std::vector<TaggedToken> pos_tags(const std::string& sentence) {
    if (sentence.empty()) throw InvalidArgumentError("pos_tags: empty sentence");
    return default_tagger().tag(sentence);
}

bool rule_filter(const std::string& sentence, const PersonaConfig& config,
                 const Tagger& tagger) {
    if (sentence.empty()) return false;
    const std::vector<TaggedToken> tokens = tagger.tag(sentence);

    const std::size_t count = tokens.size();
    if (count < static_cast<std::size_t>(config.min_words) ||
        count > static_cast<std::size_t>(config.max_words))
        return false;

    bool first_person = false;
    bool has_verb = false;
    bool has_content = false;
    for (const auto& t : tokens) {
        if (t.tag == PosTag::VERB) has_verb = true;
        if (t.tag == PosTag::NOUN || t.tag == PosTag::ADJ) has_content = true;
        if (!first_person)
            first_person = std::find(config.first_person_tokens.begin(),
                                     config.first_person_tokens.end(),
                                     t.token) != config.first_person_tokens.end();
    }
    return first_person && has_verb && has_content;
}

RemotePersonaClassifier::RemotePersonaClassifier(std::string endpoint,
                                                 HttpRetryOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
    if (endpoint_.empty())
        throw ConfigError("classifier endpoint is not configured");
}

std::vector<double> RemotePersonaClassifier::scores(
    const std::vector<std::string>& sentences) const {
    if (sentences.empty()) throw InvalidArgumentError("classify: no sentences");
    for (const auto& s : sentences)
        if (s.empty()) throw InvalidArgumentError("classify: empty sentence");

    json request{{"texts", sentences}};
    const std::string body =
        post_json_with_retry(endpoint_, "/classify", request.dump(), options_);

    json response = json::parse(body, nullptr, false);
    if (response.is_discarded() || !response.is_object() ||
        !response.contains("scores") || !response["scores"].is_array())
        throw ParseError("classifier service returned a malformed body");
    const json& scores = response["scores"];
    if (scores.size() != sentences.size())
        throw ParseError("classifier service returned " +
                         std::to_string(scores.size()) + " scores for " +
                         std::to_string(sentences.size()) + " sentences");
    std::vector<double> out;
    out.reserve(scores.size());
    for (const json& x : scores) {
        if (!x.is_number())
            throw ParseError("classifier service returned a non-numeric score");
        const double v = x.get<double>();
        if (v < 0.0 || v > 1.0)
            throw ParseError("classifier service returned a score outside [0,1]");
        out.push_back(v);
    }
    return out;
}

double classifier_score(const PersonaClassifier& classifier,
                        const std::string& sentence) {
    return classifier.scores({sentence})[0];
}

TextProfile build_text_profile(const std::vector<std::string>& history,
                               const PersonaConfig& config,
                               const Tagger& tagger,
                               const PersonaClassifier* classifier,
                               std::string streamer_id) {
    std::vector<std::string> kept;
    for (const auto& sentence : history)
        if (rule_filter(sentence, config, tagger)) kept.push_back(sentence);

    if (classifier && !kept.empty()) {
        const std::vector<double> scores = classifier->scores(kept);
        std::vector<std::string> refined;
        refined.reserve(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (scores[i] >= config.classifier_threshold)
                refined.push_back(std::move(kept[i]));
        kept = std::move(refined);
    }

    // Newest occurrence wins the dedup, then newest sentences fill the
    // length budget; the budget closes at the first sentence that does not fit.
    std::unordered_set<std::string> seen;
    std::vector<std::string> chosen;
    std::int64_t total = 0;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        if (!seen.insert(*it).second) continue;
        const std::int64_t length = static_cast<std::int64_t>(cp_length(*it));
        if (total + length > config.max_profile_length) break;
        chosen.push_back(*it);
        total += length;
    }

    TextProfile profile;
    profile.streamer_id = std::move(streamer_id);
    profile.sentences.assign(chosen.rbegin(), chosen.rend());
    profile.total_length = total;
    return profile;
}

Codebook parse_codebook(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded() || !root.is_object())
        throw ConfigError("codebook is not a JSON object");
    Codebook book;
    for (auto it = root.begin(); it != root.end(); ++it) {
        if (!it.value().is_object())
            throw ConfigError("codebook attribute '" + it.key() +
                              "' must map raw values to indices");
        auto& table = book.attributes[it.key()];
        for (auto entry = it.value().begin(); entry != it.value().end(); ++entry) {
            if (!entry.value().is_number_integer())
                throw ConfigError("codebook index for '" + it.key() + "." +
                                  entry.key() + "' must be an integer");
            const int index = entry.value().get<int>();
            if (index < 1)
                throw ConfigError("codebook index for '" + it.key() + "." +
                                  entry.key() + "' must be >= 1; 0 is reserved");
            table[entry.key()] = index;
        }
    }
    return book;
}

std::string dump_codebook(const Codebook& codebook) {
    json root = json::object();
    for (const auto& [attribute, table] : codebook.attributes) {
        json entry = json::object();
        for (const auto& [raw, index] : table) entry[raw] = index;
        root[attribute] = entry;
    }
    return root.dump(2) + "\n";
}

namespace {

// "lo-hi" band containing the value, if the key parses as a band.
bool band_contains(const std::string& key, long long value) {
    const std::size_t dash = key.find('-', 1);  // skip a leading minus sign
    if (dash == std::string::npos) return false;
    try {
        std::size_t used = 0;
        const long long lo = std::stoll(key.substr(0, dash), &used);
        if (used != dash) return false;
        const std::string hi_text = key.substr(dash + 1);
        const long long hi = std::stoll(hi_text, &used);
        if (used != hi_text.size()) return false;
        return lo <= value && value <= hi;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

BasicProfile anonymize_basic_profile(
    const std::map<std::string, std::string>& raw, const Codebook& codebook,
    std::string streamer_id) {
    BasicProfile profile;
    profile.streamer_id = std::move(streamer_id);
    for (const auto& [attribute, value] : raw) {
        int index = 0;
        auto table_it = codebook.attributes.find(attribute);
        if (table_it != codebook.attributes.end()) {
            const auto& table = table_it->second;
            auto hit = table.find(value);
            if (hit != table.end()) {
                index = hit->second;
            } else {
                // Numeric raw values can select a covering band. The lowest
                // matching key wins so overlapping bands stay deterministic.
                try {
                    std::size_t used = 0;
                    const long long numeric = std::stoll(value, &used);
                    if (used == value.size()) {
                        std::string best_key;
                        for (const auto& [key, band_index] : table) {
                            if (!band_contains(key, numeric)) continue;
                            if (best_key.empty() || key < best_key) {
                                best_key = key;
                                index = band_index;
                            }
                        }
                    }
                } catch (const std::exception&) {
                    index = 0;
                }
            }
        }
        profile.attributes[attribute] = index;
    }
    return profile;
}

std::string write_text_profile_line(const TextProfile& profile) {
    json record{{"streamer", profile.streamer_id},
                {"sentences", profile.sentences},
                {"length", profile.total_length}};
    return record.dump();
}

TextProfile parse_text_profile_line(const std::string& line, long line_number) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object())
        throw ParseError("text profile record is not a JSON object", line_number);
    TextProfile profile;
    try {
        profile.streamer_id = record.at("streamer").get<std::string>();
        profile.sentences = record.at("sentences").get<std::vector<std::string>>();
        profile.total_length = record.at("length").get<std::int64_t>();
    } catch (const json::exception& err) {
        throw ParseError(std::string("text profile record: ") + err.what(),
                         line_number);
    }
    return profile;
}

std::string write_basic_profile_line(const BasicProfile& profile) {
    json attributes = json::object();
    for (const auto& [name, index] : profile.attributes) attributes[name] = index;
    json record{{"streamer", profile.streamer_id}, {"attributes", attributes}};
    return record.dump();
}

BasicProfile parse_basic_profile_line(const std::string& line, long line_number) {
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object())
        throw ParseError("basic profile record is not a JSON object", line_number);
    BasicProfile profile;
    try {
        profile.streamer_id = record.at("streamer").get<std::string>();
        const json& attributes = record.at("attributes");
        for (auto it = attributes.begin(); it != attributes.end(); ++it)
            profile.attributes[it.key()] = it.value().get<int>();
    } catch (const json::exception& err) {
        throw ParseError(std::string("basic profile record: ") + err.what(),
                         line_number);
    }
    return profile;
}

}  // namespace chatweave
