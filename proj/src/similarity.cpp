// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "similarity.hpp"

#include <algorithm>

#include "errors.hpp"
#include "text.hpp"

namespace chatweave {

SparseBag bow_vector(const std::string& text, int ngram_order) {
    if (text.empty()) throw InvalidArgumentError("bow_vector: empty text");
    CodePoints decoded = decode_utf8(text);
    const auto& cps = decoded.cps;
    SparseBag bag;
    const std::size_t order = static_cast<std::size_t>(ngram_order);
    if (cps.size() < order) {
        bag.counts[std::u32string(cps.begin(), cps.end())] = 1;
        bag.total = 1;
        return bag;
    }
    for (std::size_t i = 0; i + order <= cps.size(); ++i)
        ++bag.counts[std::u32string(cps.begin() + i, cps.begin() + i + order)];
    bag.total = static_cast<std::int64_t>(cps.size() - order + 1);
    return bag;
}

double lexical_containment(const SparseBag& comment_bag,
                           const SparseBag& response_bag) {
    if (comment_bag.total == 0) throw InvalidArgumentError("containment: empty bag");
    std::int64_t shared = 0;
    for (const auto& [gram, count] : comment_bag.counts) {
        auto it = response_bag.counts.find(gram);
        if (it != response_bag.counts.end())
            shared += std::min(count, it->second);
    }
    return static_cast<double>(shared) / static_cast<double>(comment_bag.total);
}

double lexical_containment(const std::string& comment, const std::string& response,
                           int ngram_order) {
    return lexical_containment(bow_vector(comment, ngram_order),
                               bow_vector(response, ngram_order));
}

bool match_fn(const std::string& comment, const std::string& response,
              const ExtractionConfig& config, const SemanticScorer* semantic) {
    return match_fn(bow_vector(comment, config.ngram_order), comment,
                    bow_vector(response, config.ngram_order), response, config,
                    semantic);
}

bool match_fn(const SparseBag& comment_bag, const std::string& comment,
              const SparseBag& response_bag, const std::string& response,
              const ExtractionConfig& config, const SemanticScorer* semantic) {
    if (comment.empty() || response.empty())
        throw InvalidArgumentError("match_fn: empty text");
    if (lexical_containment(comment_bag, response_bag) >= config.theta_lex)
        return true;
    return semantic && semantic->score(comment, response) >= config.theta_sem;
}

}  // namespace chatweave
