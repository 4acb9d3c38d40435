// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "text.hpp"

namespace chatweave {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Returns the code point starting at text[i] and advances i past it.
// Invalid sequences decode to U+FFFD and advance one byte.
char32_t decode_one(std::string_view text, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kReplacement;
    }
    if (i + len > text.size()) {
        ++i;
        return kReplacement;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char b = byte(i + k);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong encodings and surrogates.
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kReplacement;
    }
    i += len;
    return cp;
}

bool is_fullwidth_alnum(char32_t cp) {
    return (cp >= 0xFF21 && cp <= 0xFF3A) ||  // Ａ-Ｚ
           (cp >= 0xFF41 && cp <= 0xFF5A) ||  // ａ-ｚ
           (cp >= 0xFF10 && cp <= 0xFF19);    // ０-９
}

bool is_control_cp(char32_t cp) {
    return (cp < 0x20) || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F);
}

}  // namespace

CodePoints decode_utf8(std::string_view text) {
    CodePoints out;
    out.cps.reserve(text.size());
    out.offsets.reserve(text.size() + 1);
    std::size_t i = 0;
    while (i < text.size()) {
        out.offsets.push_back(i);
        out.cps.push_back(decode_one(text, i));
    }
    out.offsets.push_back(text.size());
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 3);
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::size_t cp_length(std::string_view text) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        decode_one(text, i);
        ++n;
    }
    return n;
}

std::string_view cp_slice(std::string_view text, const CodePoints& decoded,
                          std::size_t first, std::size_t last) {
    const std::size_t lo = decoded.offsets[first];
    const std::size_t hi = decoded.offsets[last];
    return text.substr(lo, hi - lo);
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case 0x09:
        case 0x0A:
        case 0x0B:
        case 0x0C:
        case 0x0D:
        case 0x20:
        case 0xA0:    // no-break space
        case 0x3000:  // ideographic space
            return true;
        default:
            return false;
    }
}

bool is_punct_cp(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    return (cp >= 0x2000 && cp <= 0x206F) ||  // general punctuation
           (cp >= 0x3001 && cp <= 0x303F) ||  // CJK symbols and punctuation
           (cp >= 0xFF01 && cp <= 0xFF0F) ||  // full-width forms of ASCII punct
           (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) ||
           (cp >= 0xFF5B && cp <= 0xFF65) ||
           cp == 0x00B7;
}

std::string normalize_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < raw.size()) {
        char32_t cp = decode_one(raw, i);
        if (is_fullwidth_alnum(cp)) cp -= 0xFEE0;
        if (is_space_cp(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (is_control_cp(cp)) continue;
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        append_utf8(out, cp);
    }
    return out;
}

}  // namespace chatweave
