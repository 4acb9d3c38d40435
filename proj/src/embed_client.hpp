// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "http_retry.hpp"
#include "similarity.hpp"

namespace chatweave {

// Client for the embedding service: POST <endpoint>/embed with
// {"texts":[...]}, expecting {"vectors":[[...],...]} in the same order.
// Safe to share across worker threads.
class EmbeddingClient {
  public:
    explicit EmbeddingClient(std::string endpoint, HttpRetryOptions options = {});

    // Returns one unit vector per input text, L2-normalized client-side.
    // Raises TransportError once retries are exhausted, ParseError when the
    // service returns vectors of inconsistent dimension or a zero vector.
    std::vector<std::vector<double>> embed(
        const std::vector<std::string>& texts) const;

    const std::string& endpoint() const { return endpoint_; }

  private:
    std::string endpoint_;
    HttpRetryOptions options_;
};

// Cosine similarity over remote embeddings.
class RemoteSemanticScorer : public SemanticScorer {
  public:
    explicit RemoteSemanticScorer(std::string endpoint,
                                  HttpRetryOptions options = {});

    double score(const std::string& a, const std::string& b) const override;

  private:
    EmbeddingClient client_;
};

}  // namespace chatweave
