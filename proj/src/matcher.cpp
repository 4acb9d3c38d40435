// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "matcher.hpp"

#include <algorithm>
#include <regex>
#include <unordered_set>

#include "errors.hpp"
#include "text.hpp"

namespace chatweave {

namespace {

std::unordered_set<char32_t> punct_set(const std::string& ending_punct) {
    std::unordered_set<char32_t> out;
    for (char32_t cp : decode_utf8(ending_punct).cps) out.insert(cp);
    return out;
}

bool ends_with_punct(const std::vector<char32_t>& cps,
                     const std::unordered_set<char32_t>& punct) {
    return !cps.empty() && punct.count(cps.back()) > 0;
}

}  // namespace

std::vector<CandidateSet> collect_candidates(const ChannelStream& stream,
                                             const ExtractionConfig& config,
                                             const SemanticScorer* semantic) {
    const auto& comments = stream.comments;
    const auto& utterances = stream.utterances;

    std::vector<SparseBag> comment_bags;
    comment_bags.reserve(comments.size());
    for (const auto& c : comments)
        comment_bags.push_back(bow_vector(c.text, config.ngram_order));

    std::vector<CandidateSet> sets;
    sets.reserve(utterances.size());

    // Both sequences are time-sorted, so the reply window over comments
    // advances monotonically with the utterance index.
    std::size_t lo = 0;
    for (const auto& u : utterances) {
        CandidateSet set;
        set.response_seq = u.seq;
        while (lo < comments.size() && comments[lo].t < u.t_start - config.delta_t)
            ++lo;
        SparseBag response_bag = bow_vector(u.text, config.ngram_order);
        for (std::size_t i = lo; i < comments.size() && comments[i].t <= u.t_start;
             ++i) {
            if (match_fn(comment_bags[i], comments[i].text, response_bag, u.text,
                         config, semantic))
                set.matched.push_back(i);
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

std::vector<MatchedPair> assemble_and_match(const ChannelStream& stream,
                                            const std::vector<CandidateSet>& candidates,
                                            const ExtractionConfig& config) {
    if (candidates.size() != stream.utterances.size())
        throw InvalidArgumentError("assemble_and_match: candidate sets do not "
                                   "cover the stream");

    const auto punct = punct_set(config.ending_punct);

    // Code point lengths of comments, computed on demand for the ratio test.
    std::vector<std::size_t> comment_lengths(stream.comments.size(), 0);
    auto comment_length = [&](std::size_t i) {
        if (comment_lengths[i] == 0)
            comment_lengths[i] = cp_length(stream.comments[i].text);
        return comment_lengths[i];
    };

    std::vector<bool> consumed(stream.comments.size(), false);

    std::vector<MatchedPair> pairs;

    // The pending chain: text accumulated so far, the union of candidate
    // indices, the seqs merged in, and the first segment's t_start.
    bool chain_open = false;
    std::string chain_text;
    std::vector<char32_t> chain_cps;
    std::vector<std::size_t> chain_set;
    std::vector<std::int64_t> chain_seqs;
    Timestamp chain_start_t = 0;

    auto close_chain = [&] {
        chain_open = false;
        chain_text.clear();
        chain_cps.clear();
        chain_set.clear();
        chain_seqs.clear();
    };

    for (std::size_t j = 0; j < stream.utterances.size(); ++j) {
        const UtteranceSegment& u = stream.utterances[j];

        std::vector<std::size_t> own;
        own.reserve(candidates[j].matched.size());
        for (std::size_t i : candidates[j].matched)
            if (!consumed[i]) own.push_back(i);

        if (!chain_open) {
            if (own.empty()) continue;  // nothing matched, segment stands alone
            chain_open = true;
            chain_text = u.text;
            chain_cps = decode_utf8(u.text).cps;
            chain_set = std::move(own);
            chain_seqs = {u.seq};
            chain_start_t = u.t_start;
        } else {
            chain_text += u.text;
            for (char32_t cp : decode_utf8(u.text).cps) chain_cps.push_back(cp);
            chain_seqs.push_back(u.seq);
            if (!own.empty()) {
                std::vector<std::size_t> merged;
                merged.reserve(chain_set.size() + own.size());
                std::set_union(chain_set.begin(), chain_set.end(), own.begin(),
                               own.end(), std::back_inserter(merged));
                chain_set = std::move(merged);
            }
        }

        bool emitted = false;
        if (ends_with_punct(chain_cps, punct)) {
            // Newest comment first; the first one passing the ratio test wins.
            for (auto it = chain_set.rbegin(); it != chain_set.rend(); ++it) {
                const Comment& c = stream.comments[*it];
                if (consumed[*it]) continue;
                if (c.t > chain_start_t) continue;  // pair would predate the comment
                const double ratio = static_cast<double>(chain_cps.size()) /
                                     static_cast<double>(comment_length(*it));
                if (ratio > config.tau) {
                    MatchedPair pair;
                    pair.channel_id = stream.channel_id;
                    pair.streamer_id = stream.streamer_id;
                    pair.comment = c;
                    pair.response_text = chain_text;
                    pair.response_t = chain_start_t;
                    pair.merged_seqs = chain_seqs;
                    pair.raw_response_text = chain_text;
                    pairs.push_back(std::move(pair));
                    consumed[*it] = true;
                    emitted = true;
                    break;
                }
            }
        }

        if (emitted) {
            close_chain();
        } else if (chain_seqs.size() >= static_cast<std::size_t>(config.max_merge)) {
            close_chain();  // over the merge budget, drop the chain
        }
        // otherwise the chain rolls into the next segment
    }

    // A chain still open at end of stream never terminated; drop it.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const MatchedPair& a, const MatchedPair& b) {
                         return a.response_t < b.response_t;
                     });
    return pairs;
}

std::optional<MatchedPair> strip_repetition_prefix(const MatchedPair& pair,
                                                   const ExtractionConfig& config) {
    const CodePoints decoded = decode_utf8(pair.response_text);
    const auto& cps = decoded.cps;
    const std::size_t n = cps.size();
    if (n < 2) return pair;

    const SparseBag comment_bag = bow_vector(pair.comment.text, config.ngram_order);
    const std::size_t order = static_cast<std::size_t>(config.ngram_order);

    // One pass over prefix lengths; containment updates incrementally as each
    // new gram enters. Best prefix: highest containment, then longest.
    double best_score = -1.0;
    std::size_t best_len = 0;

    std::unordered_map<std::u32string, std::int64_t> used;
    std::int64_t shared = 0;
    for (std::size_t len = 2; len <= n; ++len) {
        double score;
        if (len < order) {
            // Whole prefix is the single gram of this short text.
            std::u32string gram(cps.begin(), cps.begin() + len);
            score = comment_bag.counts.count(gram) ? 1.0 : 0.0;
        } else {
            if (len == order) {
                // Entering the sliding regime: count every gram up to here.
                used.clear();
                shared = 0;
            }
            std::u32string gram(cps.begin() + (len - order), cps.begin() + len);
            auto count = ++used[gram];
            auto it = comment_bag.counts.find(gram);
            if (it != comment_bag.counts.end() && count <= it->second) ++shared;
            score = static_cast<double>(shared) / static_cast<double>(len - order + 1);
        }
        if (score >= config.theta_prefix &&
            (score > best_score || (score == best_score && len > best_len))) {
            best_score = score;
            best_len = len;
        }
    }

    if (best_len == 0) return pair;

    std::size_t start = best_len;
    while (start < n && is_punct_cp(cps[start])) ++start;
    while (start < n && is_space_cp(cps[start])) ++start;
    if (start >= n) return std::nullopt;

    MatchedPair out = pair;
    out.response_text = std::string(cp_slice(pair.response_text, decoded, start, n));
    return out;
}

std::vector<MatchedPair> filter_noise(std::vector<MatchedPair> pairs,
                                      const std::vector<std::string>& noise_patterns) {
    const std::vector<std::regex> patterns = compile_noise_patterns(noise_patterns);
    auto is_noise = [&](const MatchedPair& pair) {
        for (const auto& re : patterns)
            if (std::regex_search(pair.response_text, re,
                                  std::regex_constants::match_continuous))
                return true;
        return false;
    };
    pairs.erase(std::remove_if(pairs.begin(), pairs.end(), is_noise), pairs.end());
    return pairs;
}

std::vector<MatchedPair> extract_dialogues(const ChannelStream& stream,
                                           const ExtractionConfig& config,
                                           const SemanticScorer* semantic,
                                           ExtractionStats* stats) {
    const auto candidates = collect_candidates(stream, config, semantic);
    const auto assembled = assemble_and_match(stream, candidates, config);

    ExtractionStats local;
    local.utterances = stream.utterances.size();
    local.comments = stream.comments.size();
    local.assembled = assembled.size();

    std::vector<MatchedPair> stripped;
    stripped.reserve(assembled.size());
    for (const auto& pair : assembled) {
        if (auto kept = strip_repetition_prefix(pair, config))
            stripped.push_back(std::move(*kept));
        else
            ++local.dropped_empty;
    }

    std::size_t before = stripped.size();
    std::vector<MatchedPair> kept = filter_noise(std::move(stripped),
                                                 config.noise_patterns);
    local.dropped_noise = before - kept.size();

    std::stable_sort(kept.begin(), kept.end(),
                     [](const MatchedPair& a, const MatchedPair& b) {
                         return a.response_t < b.response_t;
                     });
    if (stats) *stats = local;
    return kept;
}

}  // namespace chatweave
