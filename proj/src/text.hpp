// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace chatweave {

/// Decoded view of a UTF-8 string: code points plus the byte offset where
/// each one starts. `offsets` has size()+1 entries; the last one is the total
/// byte length, so the bytes of code point i are [offsets[i], offsets[i+1]).
struct CodePoints {
    std::vector<char32_t> cps;
    std::vector<std::size_t> offsets;

    std::size_t size() const { return cps.size(); }
    bool empty() const { return cps.empty(); }
};

CodePoints decode_utf8(std::string_view text);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

/// Number of code points in a UTF-8 string.
std::size_t cp_length(std::string_view text);

/// Byte-slice of `text` covering code points [first, last).
std::string_view cp_slice(std::string_view text, const CodePoints& decoded,
                          std::size_t first, std::size_t last);

bool is_space_cp(char32_t cp);
bool is_punct_cp(char32_t cp);

/// Canonical text form used throughout the pipeline: surrounding whitespace
/// trimmed, internal whitespace runs collapsed to one ASCII space, full-width
/// ASCII letters and digits folded to half-width, control characters removed.
/// May return an empty string; callers treat that as "drop this record".
std::string normalize_text(std::string_view raw);

}  // namespace chatweave
