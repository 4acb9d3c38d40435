// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "config.hpp"

namespace chatweave {

// Character n-gram counts. Grams are code point sequences; a text shorter
// than the order contributes itself as its only gram.
struct SparseBag {
    std::unordered_map<std::u32string, std::int64_t> counts;
    std::int64_t total = 0;  // sum of all counts

    bool operator==(const SparseBag&) const = default;
};

// Raises InvalidArgumentError on empty text.
SparseBag bow_vector(const std::string& text, int ngram_order);

// Fraction of the comment's grams (with multiplicity) found in the response:
// sum_g min(comment[g], response[g]) / comment.total.
double lexical_containment(const SparseBag& comment_bag,
                           const SparseBag& response_bag);
double lexical_containment(const std::string& comment, const std::string& response,
                           int ngram_order);

// Semantic similarity backend. Implementations must be safe to share across
// threads and must satisfy score(a,a)=1 and score(a,b)=score(b,a) within 1e-6.
class SemanticScorer {
  public:
    virtual ~SemanticScorer() = default;
    virtual double score(const std::string& a, const std::string& b) const = 0;
};

// The matching predicate: lexical containment at theta_lex, or, when a scorer
// is supplied, semantic similarity at theta_sem.
bool match_fn(const std::string& comment, const std::string& response,
              const ExtractionConfig& config,
              const SemanticScorer* semantic = nullptr);

// Hot-path variant over precomputed bags; texts are still needed for the
// semantic branch.
bool match_fn(const SparseBag& comment_bag, const std::string& comment,
              const SparseBag& response_bag, const std::string& response,
              const ExtractionConfig& config,
              const SemanticScorer* semantic = nullptr);

}  // namespace chatweave
