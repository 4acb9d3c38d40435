// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "http_retry.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "httplib.h"

#include "errors.hpp"

namespace chatweave {

std::string post_json_with_retry(const std::string& endpoint,
                                 const std::string& path,
                                 const std::string& body,
                                 const HttpRetryOptions& options) {
    if (endpoint.empty())
        throw ConfigError("service endpoint is not configured");
    if (options.max_attempts < 1)
        throw ConfigError("http client needs at least one attempt");

    std::string failure;
    int backoff = options.initial_backoff_ms;
    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        httplib::Client client(endpoint);
        client.set_connection_timeout(0, options.timeout_ms * 1000LL);
        client.set_read_timeout(0, options.timeout_ms * 1000LL);
        auto res = client.Post(path, body, "application/json");
        if (res && res->status == 200) return res->body;
        failure = res ? "status " + std::to_string(res->status)
                      : "connection failed";
        if (attempt < options.max_attempts) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff = std::min(backoff * 2, options.max_backoff_ms);
        }
    }
    throw TransportError("service " + endpoint + path + ": " + failure +
                         " after " + std::to_string(options.max_attempts) +
                         " attempts");
}

}  // namespace chatweave
