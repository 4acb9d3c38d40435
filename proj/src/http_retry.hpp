// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace chatweave {

struct HttpRetryOptions {
    int max_attempts = 3;
    int initial_backoff_ms = 100;  // doubled per retry
    int max_backoff_ms = 1000;
    int timeout_ms = 5000;
};

// POSTs a JSON body and returns the response body. Connection failures and
// non-200 statuses are retried with capped exponential backoff; once the
// attempts are spent a TransportError describes the last failure. A fresh
// connection is opened per call, so callers may share freely across threads.
std::string post_json_with_retry(const std::string& endpoint,
                                 const std::string& path,
                                 const std::string& body,
                                 const HttpRetryOptions& options);

}  // namespace chatweave
