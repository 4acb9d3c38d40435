// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "embed_client.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "errors.hpp"

namespace chatweave {

using nlohmann::json;

EmbeddingClient::EmbeddingClient(std::string endpoint, HttpRetryOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
    if (endpoint_.empty())
        throw ConfigError("embedding endpoint is not configured");
}

std::vector<std::vector<double>> EmbeddingClient::embed(
    const std::vector<std::string>& texts) const {
    if (texts.empty()) throw InvalidArgumentError("embed: no texts");
    for (const auto& t : texts)
        if (t.empty()) throw InvalidArgumentError("embed: empty text");

    json request{{"texts", texts}};
    const std::string body =
        post_json_with_retry(endpoint_, "/embed", request.dump(), options_);

    json response = json::parse(body, nullptr, false);
    if (response.is_discarded() || !response.is_object() ||
        !response.contains("vectors") || !response["vectors"].is_array())
        throw ParseError("embedding service returned a malformed body");
    const json& vectors = response["vectors"];
    if (vectors.size() != texts.size())
        throw ParseError("embedding service returned " +
                         std::to_string(vectors.size()) + " vectors for " +
                         std::to_string(texts.size()) + " texts");

    std::vector<std::vector<double>> out;
    out.reserve(vectors.size());
    std::size_t dimension = 0;
    for (const json& row : vectors) {
        if (!row.is_array())
            throw ParseError("embedding service returned a non-array vector");
        std::vector<double> v;
        v.reserve(row.size());
        for (const json& x : row) {
            if (!x.is_number())
                throw ParseError("embedding service returned a non-numeric value");
            v.push_back(x.get<double>());
        }
        if (out.empty())
            dimension = v.size();
        else if (v.size() != dimension)
            throw ParseError("embedding service returned vectors of mixed dimension");
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        if (norm_sq <= 0.0)
            throw ParseError("embedding service returned a zero vector");
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
        out.push_back(std::move(v));
    }
    return out;
}

RemoteSemanticScorer::RemoteSemanticScorer(std::string endpoint,
                                           HttpRetryOptions options)
    : client_(std::move(endpoint), options) {}

double RemoteSemanticScorer::score(const std::string& a,
                                   const std::string& b) const {
    auto vectors = client_.embed({a, b});
    double dot = 0.0;
    for (std::size_t i = 0; i < vectors[0].size(); ++i)
        dot += vectors[0][i] * vectors[1][i];
    return std::clamp(dot, -1.0, 1.0);
}

}  // namespace chatweave
