// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "errors.hpp"
#include "lexicon.hpp"
#include "matcher.hpp"
#include "text.hpp"

namespace chatweave {
namespace {

using nlohmann::json;

// The generator aims every planted link at the default extraction thresholds;
// a non-default config may legitimately score differently.
constexpr Timestamp kDeltaT = 60000;
constexpr Timestamp kMinDelay = 1000;
constexpr Timestamp kMaxDelay = 50000;
constexpr Timestamp kDedupWindow = 5000;
constexpr double kThetaLex = 0.5;
constexpr double kThetaPrefix = 0.6;
constexpr int kOrder = 2;
// Any two distinct comments stay below this mutual containment, which keeps a
// response's echo from pulling in the wrong comment.
constexpr double kPairGuard = 0.34;
// A summarized echo must still contain this much of its comment.
constexpr double kEchoFloor = 0.55;
// Filler is at least this many times the echo length: random cuts then land
// mostly outside the echo, and no response can be stripped to nothing.
constexpr std::size_t kFillerScale = 5;
constexpr std::size_t kTauPad = 4;

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    return n == 0 ? 0 : rng() % n;
}

struct VocabSplit {
    std::vector<std::string> content;
    std::vector<std::string> noise;
};

// Partitions the token pool into two character-disjoint halves. Tokens whose
// characters straddle both halves are discarded. Character disjointness makes
// a noise comment's grams provably absent from any streamer text.
VocabSplit split_vocab(const std::vector<std::string>& vocab) {
    VocabSplit split;
    std::unordered_set<char32_t> content_chars;
    std::unordered_set<char32_t> noise_chars;
    for (const std::string& token : vocab) {
        const auto cps = decode_utf8(token).cps;
        if (cps.empty()) continue;
        bool hits_content = false;
        bool hits_noise = false;
        for (char32_t cp : cps) {
            if (content_chars.count(cp)) hits_content = true;
            if (noise_chars.count(cp)) hits_noise = true;
        }
        const bool prefer_content = split.content.size() <= split.noise.size();
        auto add = [&](bool to_content) {
            auto& side = to_content ? split.content : split.noise;
            auto& chars = to_content ? content_chars : noise_chars;
            side.push_back(token);
            for (char32_t cp : cps) chars.insert(cp);
        };
        if (!hits_noise && !hits_content) {
            add(prefer_content);
        } else if (!hits_noise) {
            add(true);
        } else if (!hits_content) {
            add(false);
        }
        // straddling token: dropped
    }
    return split;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) out += t;
    return out;
}

std::vector<std::string> pick_tokens(std::mt19937_64& rng,
                                     const std::vector<std::string>& pool,
                                     std::size_t count) {
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(pool[below(rng, pool.size())]);
    return out;
}

enum class TurnKind { kRepeat, kSummarize, kTalk };

struct PlannedTurn {
    TurnKind kind = TurnKind::kTalk;
    Timestamp t_first = 0;
    Timestamp step = 1500;
    int fragments = 1;
    int comment_slot = -1;  // index into the planned comment list
};

struct PlannedComment {
    Timestamp t = 0;
    std::string user;
    std::string text;
    std::vector<std::string> tokens;
    int owner = -1;  // planned turn index for linked comments
};

int sample_fragments(std::mt19937_64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = u01(rng) * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        x -= weights[i];
        if (x < 0.0) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(weights.size());
}

// Simulates the prefix-strip rule on a candidate response so the generator
// can guarantee every planted link survives post-processing. Highest
// containment wins, ties to the longest prefix, minimum two characters.
bool strip_leaves_content(const std::string& response, const std::string& comment) {
    const CodePoints decoded = decode_utf8(response);
    const std::size_t n = decoded.cps.size();
    if (n < 2) return true;
    double best_score = -1.0;
    std::size_t best_len = 0;
    for (std::size_t len = 2; len <= n; ++len) {
        const std::string prefix(cp_slice(response, decoded, 0, len));
        const double score = lexical_containment(prefix, comment, kOrder);
        if (score >= kThetaPrefix &&
            (score > best_score || (score == best_score && len > best_len))) {
            best_score = score;
            best_len = len;
        }
    }
    if (best_len == 0) return true;
    std::size_t start = best_len;
    while (start < n && is_punct_cp(decoded.cps[start])) ++start;
    while (start < n && is_space_cp(decoded.cps[start])) ++start;
    return start < n;
}

}  // namespace

void validate_gen_spec(const GenSpec& spec) {
    if (spec.n_audiences < 1)
        throw ConfigError("n_audiences must be at least 1");
    if (spec.duration <= 0) throw ConfigError("duration must be positive");
    if (spec.comment_rate < 0.0 || spec.response_rate < 0.0)
        throw ConfigError("event rates must be non-negative");
    auto probability = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0)
            throw ConfigError(std::string(name) + " must be in [0, 1]");
    };
    probability(spec.p_repeat, "p_repeat");
    probability(spec.p_summarize, "p_summarize");
    probability(spec.noise_fraction, "noise_fraction");
    if (spec.p_repeat + spec.p_summarize > 1.0)
        throw ConfigError("p_repeat + p_summarize must not exceed 1");
    if (spec.fragment_dist.empty() || spec.fragment_dist.size() > 4)
        throw ConfigError("fragment_dist needs 1 to 4 weights");
    double total = 0.0;
    for (double w : spec.fragment_dist) {
        if (w < 0.0) throw ConfigError("fragment_dist weights must be non-negative");
        total += w;
    }
    if (total <= 0.0)
        throw ConfigError("fragment_dist weights must not all be zero");
    if (spec.channel_id.empty()) throw ConfigError("channel_id must be non-empty");
    for (const std::string& token : spec.vocab) {
        if (decode_utf8(token).cps.empty())
            throw ConfigError("vocabulary tokens must be non-empty");
    }
}

const std::vector<std::string>& default_generator_vocab() {
    static const std::vector<std::string> vocab = [] {
        // Characters of the default noise anchors; any token touching them
        // could reassemble an anchor at a stripped-response boundary.
        const std::unordered_set<char32_t> banned = [] {
            std::unordered_set<char32_t> set;
            for (char32_t cp : decode_utf8("谢欢迎").cps) set.insert(cp);
            return set;
        }();
        std::vector<std::string> out;
        for (const std::string& token : generator_vocabulary()) {
            bool ok = true;
            for (char32_t cp : decode_utf8(token).cps)
                if (banned.count(cp)) ok = false;
            if (ok) out.push_back(token);
        }
        return out;
    }();
    return vocab;
}

ChannelStream generate_stream(const GenSpec& spec, GroundTruth& truth,
                              GenTotals* totals) {
    validate_gen_spec(spec);
    const std::vector<std::string>& vocab =
        spec.vocab.empty() ? default_generator_vocab() : spec.vocab;
    const VocabSplit pools = split_vocab(vocab);
    if (pools.content.size() < 8)
        throw ConfigError("vocabulary too small to build streamer text");

    std::mt19937_64 rng(spec.seed);

    const auto n_turns = static_cast<std::size_t>(
        std::llround(spec.response_rate * static_cast<double>(spec.duration) / 60000.0));
    const auto n_comments = static_cast<std::size_t>(
        std::llround(spec.comment_rate * static_cast<double>(spec.duration) / 60000.0));
    const auto n_noise = static_cast<std::size_t>(
        std::llround(spec.noise_fraction * static_cast<double>(n_comments)));
    if (n_noise > 0 && pools.noise.size() < 4)
        throw ConfigError("vocabulary too small to build noise comments");

    // Phase 1: place every streamer turn on the timeline and decide its kind.
    const Timestamp spacing =
        spec.duration / static_cast<Timestamp>(std::max<std::size_t>(n_turns, 1));
    std::vector<PlannedTurn> turns(n_turns);
    Timestamp next_free = 0;
    for (std::size_t r = 0; r < n_turns; ++r) {
        PlannedTurn& turn = turns[r];
        const Timestamp nominal =
            static_cast<Timestamp>(r) * spacing + spacing / 8 +
            static_cast<Timestamp>(below(rng, static_cast<std::uint64_t>(
                                                  std::max<Timestamp>(spacing / 4, 1))));
        turn.t_first = std::max(nominal, next_free);
        turn.step = 1200 + static_cast<Timestamp>(below(rng, 800));
        turn.fragments = sample_fragments(rng, spec.fragment_dist);
        const double u = u01(rng);
        if (turn.t_first < kMinDelay) {
            turn.kind = TurnKind::kTalk;
        } else if (u < spec.p_repeat) {
            turn.kind = TurnKind::kRepeat;
        } else if (u < spec.p_repeat + spec.p_summarize) {
            turn.kind = TurnKind::kSummarize;
        } else {
            turn.kind = TurnKind::kTalk;
        }
        next_free = turn.t_first +
                    static_cast<Timestamp>(turn.fragments) * turn.step + 1;
    }

    // Phase 2: comment texts. Every content comment keeps its containment
    // against every nearby content comment under the pair guard, both ways,
    // so only a turn's own comment can ever match its echo. Minute buckets
    // bound the neighborhood scan.
    std::vector<PlannedComment> planned;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> content_by_minute;
    std::unordered_map<std::string, std::vector<Timestamp>> seen_times;

    auto dedup_ok = [&](const std::string& user, const std::string& text,
                        Timestamp t) {
        auto it = seen_times.find(user + '\x1f' + text);
        if (it == seen_times.end()) return true;
        for (Timestamp prior : it->second)
            if (std::llabs(prior - t) <= kDedupWindow) return false;
        return true;
    };
    auto record_comment = [&](PlannedComment&& c, bool content) {
        seen_times[c.user + '\x1f' + c.text].push_back(c.t);
        if (content)
            content_by_minute[c.t / 60000].push_back(planned.size());
        planned.push_back(std::move(c));
    };
    auto neighbors_clear = [&](const std::string& text, Timestamp t) {
        for (std::int64_t b = t / 60000 - 2; b <= t / 60000 + 2; ++b) {
            auto it = content_by_minute.find(b);
            if (it == content_by_minute.end()) continue;
            for (std::size_t idx : it->second) {
                const std::string& other = planned[idx].text;
                if (lexical_containment(text, other, kOrder) >= kPairGuard ||
                    lexical_containment(other, text, kOrder) >= kPairGuard)
                    return false;
            }
        }
        return true;
    };
    auto make_content_comment = [&](Timestamp t, int owner) {
        for (int attempt = 0; attempt < 500; ++attempt) {
            auto tokens = pick_tokens(rng, pools.content, 4 + below(rng, 3));
            std::string text = join_tokens(tokens);
            std::string user = "aud" + std::to_string(below(rng, spec.n_audiences));
            if (!neighbors_clear(text, t) || !dedup_ok(user, text, t)) continue;
            PlannedComment c;
            c.t = t;
            c.user = std::move(user);
            c.text = std::move(text);
            c.tokens = std::move(tokens);
            c.owner = owner;
            record_comment(std::move(c), true);
            return static_cast<int>(planned.size()) - 1;
        }
        throw Error("synthetic generation failed to place a distinct comment; "
                    "vocabulary too small");
    };

    std::size_t n_linked = 0;
    for (std::size_t r = 0; r < n_turns; ++r) {
        if (turns[r].kind == TurnKind::kTalk) continue;
        const Timestamp t_first = turns[r].t_first;
        const Timestamp max_delay = std::min(kMaxDelay, t_first);
        const Timestamp delay =
            kMinDelay + static_cast<Timestamp>(
                            below(rng, static_cast<std::uint64_t>(
                                           max_delay - kMinDelay + 1)));
        turns[r].comment_slot =
            make_content_comment(t_first - delay, static_cast<int>(r));
        ++n_linked;
    }
    const std::size_t n_unanswered =
        n_comments > n_noise + n_linked ? n_comments - n_noise - n_linked : 0;
    for (std::size_t i = 0; i < n_unanswered; ++i)
        make_content_comment(static_cast<Timestamp>(below(
                                 rng, static_cast<std::uint64_t>(spec.duration))),
                             -1);
    for (std::size_t i = 0; i < n_noise; ++i) {
        const auto t = static_cast<Timestamp>(
            below(rng, static_cast<std::uint64_t>(spec.duration)));
        for (int attempt = 0;; ++attempt) {
            if (attempt >= 500)
                throw Error("synthetic generation failed to place a noise comment");
            std::string text =
                join_tokens(pick_tokens(rng, pools.noise, 2 + below(rng, 3)));
            std::string user = "aud" + std::to_string(below(rng, spec.n_audiences));
            if (!dedup_ok(user, text, t)) continue;
            PlannedComment c;
            c.t = t;
            c.user = std::move(user);
            c.text = std::move(text);
            record_comment(std::move(c), false);
            break;
        }
    }

    // Chronological order; equal timestamps keep generation order.
    std::vector<std::size_t> order(planned.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return planned[a].t < planned[b].t;
    });
    std::vector<std::size_t> final_index(planned.size());
    ChannelStream stream;
    stream.channel_id = spec.channel_id;
    stream.streamer_id = spec.channel_id;
    stream.comments.reserve(planned.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const PlannedComment& c = planned[order[pos]];
        final_index[order[pos]] = pos;
        stream.comments.push_back(
            Comment{spec.channel_id, c.user, c.t, c.text});
    }

    // Phase 3: streamer text. The echo repeats (or subsets) the linked
    // comment, filler pads it past the ratio and strip hazards, and the whole
    // turn is rejected until no other nearby comment matches any fragment.
    truth.links.clear();
    GenTotals tally;
    tally.streamer_count = 1;
    std::int64_t next_seq = 1;
    std::set<std::string> audience;
    for (const auto& c : stream.comments) audience.insert(c.user_id);
    tally.audience_count = static_cast<std::int64_t>(audience.size());

    auto window_range = [&](Timestamp lo_t, Timestamp hi_t) {
        auto lo = std::lower_bound(
            stream.comments.begin(), stream.comments.end(), lo_t,
            [](const Comment& c, Timestamp t) { return c.t < t; });
        auto hi = std::upper_bound(
            stream.comments.begin(), stream.comments.end(), hi_t,
            [](Timestamp t, const Comment& c) { return t < c.t; });
        return std::pair(lo - stream.comments.begin(), hi - stream.comments.begin());
    };

    for (std::size_t r = 0; r < n_turns; ++r) {
        const PlannedTurn& turn = turns[r];

        std::string echo;
        std::string comment_text;
        if (turn.kind != TurnKind::kTalk) {
            const PlannedComment& linked = planned[static_cast<std::size_t>(
                turn.comment_slot)];
            comment_text = linked.text;
            if (turn.kind == TurnKind::kRepeat) {
                echo = linked.text;
            } else {
                const std::size_t t_count = linked.tokens.size();
                const std::size_t min_keep = (t_count + 1) / 2;
                for (int attempt = 0; attempt < 50; ++attempt) {
                    const std::size_t keep =
                        min_keep + below(rng, t_count - min_keep + 1);
                    std::vector<std::size_t> idx(t_count);
                    for (std::size_t i = 0; i < t_count; ++i) idx[i] = i;
                    for (std::size_t i = 0; i < keep; ++i) {
                        const std::size_t j =
                            i + below(rng, idx.size() - i);
                        std::swap(idx[i], idx[j]);
                    }
                    idx.resize(keep);
                    std::sort(idx.begin(), idx.end());
                    std::vector<std::string> kept;
                    kept.reserve(keep);
                    for (std::size_t i : idx) kept.push_back(linked.tokens[i]);
                    std::string candidate = join_tokens(kept);
                    if (lexical_containment(comment_text, candidate, kOrder) >=
                        kEchoFloor) {
                        echo = std::move(candidate);
                        break;
                    }
                }
                if (echo.empty()) echo = linked.text;  // subset too lossy
            }
        }

        const std::size_t echo_cps = cp_length(echo);
        const std::size_t comment_cps = cp_length(comment_text);
        const std::size_t min_filler =
            turn.kind == TurnKind::kTalk
                ? 8 + below(rng, 9)
                : std::max(echo_cps * kFillerScale,
                           comment_cps + kTauPad > echo_cps
                               ? comment_cps + kTauPad - echo_cps
                               : std::size_t{1});

        const int k = turn.fragments;
        const auto [w_lo, w_hi] = window_range(
            turn.t_first - kDeltaT,
            turn.t_first + static_cast<Timestamp>(k - 1) * turn.step);

        std::vector<std::string> fragment_texts;
        std::string full_text;
        bool accepted = false;
        for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
            std::string filler;
            while (cp_length(filler) < min_filler)
                filler += pools.content[below(rng, pools.content.size())];
            std::string body = echo + filler;
            const CodePoints body_cps = decode_utf8(body);
            const std::size_t n_body = body_cps.cps.size();
            const int cuts_wanted = std::min<int>(k - 1, static_cast<int>(n_body) - 1);
            std::set<std::size_t> cuts;
            while (static_cast<int>(cuts.size()) < cuts_wanted)
                cuts.insert(1 + below(rng, n_body - 1));
            fragment_texts.clear();
            std::size_t prev = 0;
            for (std::size_t cut : cuts) {
                fragment_texts.emplace_back(cp_slice(body, body_cps, prev, cut));
                prev = cut;
            }
            fragment_texts.emplace_back(cp_slice(body, body_cps, prev, n_body));
            fragment_texts.back() += "。";
            full_text = body + "。";

            accepted = true;
            if (turn.kind != TurnKind::kTalk &&
                !strip_leaves_content(full_text, comment_text))
                accepted = false;
            for (std::ptrdiff_t ci = w_lo; accepted && ci < w_hi; ++ci) {
                if (turn.comment_slot >= 0 &&
                    static_cast<std::size_t>(ci) ==
                        final_index[static_cast<std::size_t>(turn.comment_slot)])
                    continue;
                for (const std::string& frag : fragment_texts) {
                    if (lexical_containment(stream.comments[static_cast<std::size_t>(
                                                ci)].text,
                                            frag, kOrder) >= kThetaLex) {
                        accepted = false;
                        break;
                    }
                }
            }
        }
        if (!accepted)
            throw Error("synthetic generation failed to isolate a streamer turn; "
                        "vocabulary too small");

        std::vector<std::int64_t> seqs;
        for (std::size_t f = 0; f < fragment_texts.size(); ++f) {
            UtteranceSegment seg;
            seg.channel_id = spec.channel_id;
            seg.seq = next_seq++;
            seg.t_start = turn.t_first + static_cast<Timestamp>(f) * turn.step;
            seg.t_end = seg.t_start + (turn.step * 2) / 3;
            seg.text = fragment_texts[f];
            seqs.push_back(seg.seq);
            stream.utterances.push_back(std::move(seg));
        }

        if (turn.kind != TurnKind::kTalk) {
            TruthLink link;
            link.comment_index =
                final_index[static_cast<std::size_t>(turn.comment_slot)];
            link.chain_seqs = std::move(seqs);
            truth.links.push_back(std::move(link));
            ++tally.dialogues;
            tally.comment_cps += static_cast<std::int64_t>(comment_cps);
            tally.response_cps += static_cast<std::int64_t>(cp_length(full_text));
        }
    }

    if (totals != nullptr) *totals = tally;
    return stream;
}

ChannelStream chaos_stream(std::uint64_t seed, std::size_t n_comments,
                           std::size_t n_utterances) {
    std::mt19937_64 rng(seed);
    if (n_comments == 0) n_comments = 30 + below(rng, 51);
    if (n_utterances == 0) n_utterances = 20 + below(rng, 41);
    // A deliberately tiny pool forces echo collisions and shared grams; the
    // noise anchors are present so the filter path is exercised too.
    static const std::vector<std::string> tokens = {
        "唱",  "歌",   "今天", "晚上", "谢谢", "好",
        "听",  "想",   "你",   "我们", "欢迎", "火锅"};
    static const std::vector<std::string> puncts = {"。", "？", "！", "?", "."};

    const auto span = static_cast<Timestamp>(
        std::max<std::size_t>(n_comments + n_utterances, 10) * 2000);
    ChannelStream stream;
    stream.channel_id = "chaos";
    stream.streamer_id = "chaos";

    for (std::size_t i = 0; i < n_comments; ++i) {
        Comment c;
        c.channel_id = "chaos";
        c.user_id = "aud" + std::to_string(below(rng, 6));
        c.t = (i > 0 && u01(rng) < 0.15)
                  ? stream.comments.back().t
                  : static_cast<Timestamp>(below(
                        rng, static_cast<std::uint64_t>(span) + 1));
        c.text = join_tokens(pick_tokens(rng, tokens, 1 + below(rng, 5)));
        stream.comments.push_back(std::move(c));
    }
    std::stable_sort(stream.comments.begin(), stream.comments.end(),
                     [](const Comment& a, const Comment& b) { return a.t < b.t; });

    std::vector<Timestamp> starts(n_utterances);
    for (auto& t : starts)
        t = static_cast<Timestamp>(below(rng, static_cast<std::uint64_t>(span) + 1));
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 0; i < n_utterances; ++i) {
        UtteranceSegment seg;
        seg.channel_id = "chaos";
        seg.seq = static_cast<std::int64_t>(i) + 1;
        seg.t_start = (i > 0 && u01(rng) < 0.15) ? stream.utterances.back().t_start
                                                 : starts[i];
        if (i > 0) seg.t_start = std::max(seg.t_start,
                                          stream.utterances.back().t_start);
        seg.t_end = seg.t_start + static_cast<Timestamp>(below(rng, 3000));
        if (u01(rng) < 0.5 && !stream.comments.empty()) {
            // Echo a random comment, whole or clipped, possibly with a tail.
            const Comment& c =
                stream.comments[below(rng, stream.comments.size())];
            const CodePoints cps = decode_utf8(c.text);
            std::size_t a = 0;
            std::size_t b = cps.cps.size();
            if (u01(rng) < 0.5 && cps.cps.size() > 1) {
                a = below(rng, cps.cps.size() - 1);
                b = a + 1 + below(rng, cps.cps.size() - a);
            }
            seg.text = std::string(cp_slice(c.text, cps, a, b));
            if (u01(rng) < 0.5)
                seg.text += join_tokens(pick_tokens(rng, tokens, 1 + below(rng, 2)));
        } else {
            seg.text = join_tokens(pick_tokens(rng, tokens, 1 + below(rng, 6)));
        }
        if (u01(rng) < 0.45) seg.text += puncts[below(rng, puncts.size())];
        stream.utterances.push_back(std::move(seg));
    }
    return stream;
}

std::vector<MatchedPair> truth_pairs(const ChannelStream& stream,
                                     const GroundTruth& truth) {
    std::unordered_map<std::int64_t, std::size_t> seg_by_seq;
    for (std::size_t i = 0; i < stream.utterances.size(); ++i)
        seg_by_seq.emplace(stream.utterances[i].seq, i);

    std::vector<MatchedPair> pairs;
    pairs.reserve(truth.links.size());
    for (const TruthLink& link : truth.links) {
        if (link.comment_index >= stream.comments.size())
            throw InvalidArgumentError("truth link comment index out of range");
        MatchedPair pair;
        pair.channel_id = stream.channel_id;
        pair.streamer_id = stream.streamer_id;
        pair.comment = stream.comments[link.comment_index];
        std::string text;
        Timestamp first_t = 0;
        for (std::size_t i = 0; i < link.chain_seqs.size(); ++i) {
            auto it = seg_by_seq.find(link.chain_seqs[i]);
            if (it == seg_by_seq.end())
                throw InvalidArgumentError("truth link seq not in stream");
            if (i == 0) first_t = stream.utterances[it->second].t_start;
            text += stream.utterances[it->second].text;
        }
        pair.response_text = text;
        pair.raw_response_text = std::move(text);
        pair.response_t = first_t;
        pair.merged_seqs = link.chain_seqs;
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<MatchedPair> oracle_match(const ChannelStream& stream,
                                      const ExtractionConfig& config,
                                      const SemanticScorer* semantic) {
    if (stream.utterances.size() + stream.comments.size() > 10000)
        throw SizeLimitError("oracle matcher is quadratic; stream exceeds "
                             "10000 events");

    std::unordered_set<char32_t> punct;
    for (char32_t cp : decode_utf8(config.ending_punct).cps) punct.insert(cp);

    const auto& segs = stream.utterances;
    const auto& comments = stream.comments;

    // Window and matching-function test for one (comment, segment) pairing,
    // recomputed from scratch every time.
    auto matches = [&](std::size_t m, std::size_t j) {
        const Timestamp gap = segs[j].t_start - comments[m].t;
        if (gap < 0 || gap > config.delta_t) return false;
        return match_fn(comments[m].text, segs[j].text, config, semantic);
    };

    std::vector<bool> consumed(comments.size(), false);
    std::vector<MatchedPair> raw;

    std::size_t i = 0;
    while (i < segs.size()) {
        bool opens = false;
        for (std::size_t m = 0; m < comments.size() && !opens; ++m)
            if (!consumed[m] && matches(m, i)) opens = true;
        if (!opens) {
            ++i;
            continue;
        }

        const std::size_t longest = std::min<std::size_t>(
            static_cast<std::size_t>(config.max_merge), segs.size() - i);
        bool emitted = false;
        std::string chain_text;
        for (std::size_t len = 1; len <= longest && !emitted; ++len) {
            chain_text += segs[i + len - 1].text;
            const CodePoints chain_cps = decode_utf8(chain_text);
            if (chain_cps.cps.empty() || punct.count(chain_cps.cps.back()) == 0)
                continue;
            for (std::size_t m = comments.size(); m-- > 0;) {
                if (consumed[m] || comments[m].t > segs[i].t_start) continue;
                bool eligible = false;
                for (std::size_t j = i; j < i + len && !eligible; ++j)
                    if (matches(m, j)) eligible = true;
                if (!eligible) continue;
                const double ratio =
                    static_cast<double>(chain_cps.cps.size()) /
                    static_cast<double>(cp_length(comments[m].text));
                if (ratio > config.tau) {
                    MatchedPair pair;
                    pair.channel_id = stream.channel_id;
                    pair.streamer_id = stream.streamer_id;
                    pair.comment = comments[m];
                    pair.response_text = chain_text;
                    pair.raw_response_text = chain_text;
                    pair.response_t = segs[i].t_start;
                    for (std::size_t j = i; j < i + len; ++j)
                        pair.merged_seqs.push_back(segs[j].seq);
                    raw.push_back(std::move(pair));
                    consumed[m] = true;
                    emitted = true;
                    i += len;
                    break;
                }
            }
        }
        if (!emitted) i += longest;  // chain never terminated; drop it
    }

    // Post-processing by direct enumeration: best prefix by containment, ties
    // to the longest, then the anchored noise patterns.
    std::vector<MatchedPair> kept;
    const std::vector<std::regex> noise = compile_noise_patterns(config.noise_patterns);
    for (MatchedPair& pair : raw) {
        const CodePoints decoded = decode_utf8(pair.response_text);
        const std::size_t n = decoded.cps.size();
        double best_score = -1.0;
        std::size_t best_len = 0;
        for (std::size_t len = 2; len <= n; ++len) {
            const std::string prefix(cp_slice(pair.response_text, decoded, 0, len));
            const double score =
                lexical_containment(prefix, pair.comment.text, config.ngram_order);
            if (score >= config.theta_prefix &&
                (score > best_score || (score == best_score && len > best_len))) {
                best_score = score;
                best_len = len;
            }
        }
        if (best_len > 0) {
            std::size_t start = best_len;
            while (start < n && is_punct_cp(decoded.cps[start])) ++start;
            while (start < n && is_space_cp(decoded.cps[start])) ++start;
            if (start >= n) continue;  // nothing beyond the echo
            pair.response_text =
                std::string(cp_slice(pair.response_text, decoded, start, n));
        }
        bool noisy = false;
        for (const auto& re : noise) {
            if (std::regex_search(pair.response_text, re,
                                  std::regex_constants::match_continuous)) {
                noisy = true;
                break;
            }
        }
        if (!noisy) kept.push_back(std::move(pair));
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const MatchedPair& a, const MatchedPair& b) {
                         return a.response_t < b.response_t;
                     });
    return kept;
}

EvalResult evaluate(const ChannelStream& stream,
                    const std::vector<MatchedPair>& extracted,
                    const GroundTruth& truth) {
    std::unordered_map<std::string, std::size_t> index_of;
    index_of.reserve(stream.comments.size());
    for (std::size_t i = 0; i < stream.comments.size(); ++i) {
        const Comment& c = stream.comments[i];
        index_of.emplace(c.user_id + '\x1f' + std::to_string(c.t) + '\x1f' + c.text,
                         i);
    }
    std::unordered_map<std::size_t, std::size_t> link_by_comment;
    for (std::size_t l = 0; l < truth.links.size(); ++l)
        link_by_comment.emplace(truth.links[l].comment_index, l);

    EvalResult result;
    result.extracted_count = static_cast<std::int64_t>(extracted.size());
    result.link_count = static_cast<std::int64_t>(truth.links.size());

    std::set<std::size_t> recovered;
    for (const MatchedPair& pair : extracted) {
        const Comment& c = pair.comment;
        auto found = index_of.find(c.user_id + '\x1f' + std::to_string(c.t) +
                                   '\x1f' + c.text);
        if (found == index_of.end()) continue;
        auto link_it = link_by_comment.find(found->second);
        if (link_it == link_by_comment.end()) continue;
        const TruthLink& link = truth.links[link_it->second];
        bool overlap = false;
        for (std::int64_t seq : pair.merged_seqs) {
            if (std::find(link.chain_seqs.begin(), link.chain_seqs.end(), seq) !=
                link.chain_seqs.end()) {
                overlap = true;
                break;
            }
        }
        if (overlap) {
            ++result.correct_count;
            recovered.insert(link_it->second);
        }
    }
    result.recovered_count = static_cast<std::int64_t>(recovered.size());

    if (result.extracted_count == 0) {
        result.precision = 1.0;
        result.undefined_precision = true;
    } else {
        result.precision = static_cast<double>(result.correct_count) /
                           static_cast<double>(result.extracted_count);
    }
    result.recall = result.link_count == 0
                        ? 1.0
                        : static_cast<double>(result.recovered_count) /
                              static_cast<double>(result.link_count);
    result.f1 = result.precision + result.recall > 0.0
                    ? 2.0 * result.precision * result.recall /
                          (result.precision + result.recall)
                    : 0.0;
    return result;
}

std::vector<BenchRow> default_bench_rows() {
    std::vector<BenchRow> rows;

    BenchRow clean;
    clean.name = "clean_echo";
    clean.spec.n_audiences = 10;
    clean.spec.comment_rate = 12.0;
    clean.spec.response_rate = 6.0;
    clean.spec.p_repeat = 1.0;
    clean.spec.p_summarize = 0.0;
    clean.spec.fragment_dist = {1.0};
    clean.spec.noise_fraction = 0.0;
    clean.spec.seed = 2001;
    clean.streams = 20;
    clean.min_precision = 1.0;
    clean.min_recall = 1.0;
    rows.push_back(clean);

    BenchRow summarized = clean;
    summarized.name = "summarized";
    summarized.spec.p_repeat = 0.0;
    summarized.spec.p_summarize = 1.0;
    summarized.spec.noise_fraction = 0.3;
    summarized.spec.seed = 2101;
    summarized.min_precision = 1.0;
    summarized.min_recall = 1.0;
    rows.push_back(summarized);

    BenchRow noisy = clean;
    noisy.name = "noise_heavy";
    noisy.spec.comment_rate = 30.0;
    noisy.spec.noise_fraction = 0.8;
    noisy.spec.seed = 2201;
    rows.push_back(noisy);

    BenchRow frag2 = clean;
    frag2.name = "fragmented_2";
    frag2.spec.p_repeat = 0.7;
    frag2.spec.p_summarize = 0.2;
    frag2.spec.fragment_dist = {0.0, 1.0};
    frag2.spec.noise_fraction = 0.3;
    frag2.spec.comment_rate = 25.0;
    frag2.spec.response_rate = 10.0;
    frag2.spec.n_audiences = 20;
    frag2.spec.seed = 2301;
    frag2.min_precision = 0.98;
    frag2.min_recall = 0.96;
    rows.push_back(frag2);

    BenchRow uniform = frag2;
    uniform.name = "fragmented_uniform";
    uniform.spec.fragment_dist = {1.0, 1.0, 1.0, 1.0};
    uniform.spec.seed = 2401;
    uniform.min_precision = 0.98;
    uniform.min_recall = 0.95;
    rows.push_back(uniform);

    BenchRow heavy = frag2;
    heavy.name = "fragmented_4";
    heavy.spec.fragment_dist = {0.0, 0.0, 0.0, 1.0};
    heavy.spec.seed = 2501;
    heavy.min_precision = 0.98;
    heavy.min_recall = -1.0;  // curve observation point
    rows.push_back(heavy);

    return rows;
}

namespace {

GenSpec parse_gen_spec_object(const json& doc) {
    GenSpec spec;
    static const std::unordered_set<std::string> known = {
        "n_audiences",  "duration",       "comment_rate", "response_rate",
        "p_repeat",     "p_summarize",    "fragment_dist", "noise_fraction",
        "vocab",        "seed",           "channel_id"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key))
            throw ConfigError("unknown generator key '" + key + "'");
    }
    auto number = [&](const char* key, double fallback) {
        auto it = doc.find(key);
        if (it == doc.end()) return fallback;
        if (!it->is_number())
            throw ConfigError(std::string("generator key '") + key +
                              "' must be a number");
        return it->get<double>();
    };
    auto integer = [&](const char* key, std::int64_t fallback) {
        auto it = doc.find(key);
        if (it == doc.end()) return fallback;
        if (!it->is_number_integer())
            throw ConfigError(std::string("generator key '") + key +
                              "' must be an integer");
        return it->get<std::int64_t>();
    };
    spec.n_audiences = static_cast<int>(integer("n_audiences", spec.n_audiences));
    spec.duration = integer("duration", spec.duration);
    spec.comment_rate = number("comment_rate", spec.comment_rate);
    spec.response_rate = number("response_rate", spec.response_rate);
    spec.p_repeat = number("p_repeat", spec.p_repeat);
    spec.p_summarize = number("p_summarize", spec.p_summarize);
    spec.noise_fraction = number("noise_fraction", spec.noise_fraction);
    spec.seed = static_cast<std::uint64_t>(
        integer("seed", static_cast<std::int64_t>(spec.seed)));
    if (auto it = doc.find("channel_id"); it != doc.end()) {
        if (!it->is_string())
            throw ConfigError("generator key 'channel_id' must be a string");
        spec.channel_id = it->get<std::string>();
    }
    if (auto it = doc.find("fragment_dist"); it != doc.end()) {
        if (!it->is_array())
            throw ConfigError("generator key 'fragment_dist' must be an array");
        spec.fragment_dist.clear();
        for (const json& w : *it) {
            if (!w.is_number())
                throw ConfigError("fragment_dist entries must be numbers");
            spec.fragment_dist.push_back(w.get<double>());
        }
    }
    if (auto it = doc.find("vocab"); it != doc.end()) {
        if (!it->is_array())
            throw ConfigError("generator key 'vocab' must be an array");
        spec.vocab.clear();
        for (const json& t : *it) {
            if (!t.is_string())
                throw ConfigError("vocab entries must be strings");
            spec.vocab.push_back(t.get<std::string>());
        }
    }
    validate_gen_spec(spec);
    return spec;
}

}  // namespace

std::vector<BenchRow> parse_bench_spec(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ConfigError("benchmark spec is not a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "rows")
            throw ConfigError("unknown benchmark spec key '" + key + "'");
    }
    auto rows_it = doc.find("rows");
    if (rows_it == doc.end() || !rows_it->is_array())
        throw ConfigError("benchmark spec needs a 'rows' array");

    std::vector<BenchRow> rows;
    for (const json& entry : *rows_it) {
        if (!entry.is_object())
            throw ConfigError("benchmark row is not an object");
        static const std::unordered_set<std::string> known = {
            "name", "streams", "min_precision", "min_recall", "spec"};
        for (const auto& [key, value] : entry.items()) {
            if (!known.count(key))
                throw ConfigError("unknown benchmark row key '" + key + "'");
        }
        BenchRow row;
        auto name_it = entry.find("name");
        if (name_it == entry.end() || !name_it->is_string())
            throw ConfigError("benchmark row needs a string 'name'");
        row.name = name_it->get<std::string>();
        if (auto it = entry.find("streams"); it != entry.end()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 1)
                throw ConfigError("benchmark row 'streams' must be a positive "
                                  "integer");
            row.streams = static_cast<int>(it->get<std::int64_t>());
        }
        auto floor_of = [&](const char* key, double fallback) {
            auto it = entry.find(key);
            if (it == entry.end()) return fallback;
            if (!it->is_number())
                throw ConfigError(std::string("benchmark row '") + key +
                                  "' must be a number");
            return it->get<double>();
        };
        row.min_precision = floor_of("min_precision", row.min_precision);
        row.min_recall = floor_of("min_recall", row.min_recall);
        if (auto it = entry.find("spec"); it != entry.end()) {
            if (!it->is_object())
                throw ConfigError("benchmark row 'spec' must be an object");
            row.spec = parse_gen_spec_object(*it);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

BenchRowResult run_bench_row(const BenchRow& row, const ExtractionConfig& config) {
    BenchRowResult result;
    result.name = row.name;
    result.streams = row.streams;

    std::int64_t correct = 0;
    std::int64_t extracted = 0;
    std::int64_t recovered = 0;
    std::int64_t links = 0;
    for (int s = 0; s < row.streams; ++s) {
        GenSpec spec = row.spec;
        spec.seed = row.spec.seed + static_cast<std::uint64_t>(s);
        GroundTruth truth;
        const ChannelStream stream = generate_stream(spec, truth);
        const auto pairs = extract_dialogues(stream, config, nullptr, nullptr);
        const EvalResult eval = evaluate(stream, pairs, truth);
        correct += eval.correct_count;
        extracted += eval.extracted_count;
        recovered += eval.recovered_count;
        links += eval.link_count;
    }
    result.links = links;
    result.extracted = extracted;
    result.precision = extracted == 0
                           ? 1.0
                           : static_cast<double>(correct) /
                                 static_cast<double>(extracted);
    result.recall = links == 0 ? 1.0
                               : static_cast<double>(recovered) /
                                     static_cast<double>(links);
    result.f1 = result.precision + result.recall > 0.0
                    ? 2.0 * result.precision * result.recall /
                          (result.precision + result.recall)
                    : 0.0;
    result.pass = (row.min_precision < 0.0 || result.precision >= row.min_precision) &&
                  (row.min_recall < 0.0 || result.recall >= row.min_recall);
    return result;
}

std::string format_bench_table(const std::vector<BenchRowResult>& results) {
    std::string out = "name\tstreams\tlinks\textracted\tprecision\trecall\tf1\tstatus\n";
    char buf[64];
    for (const BenchRowResult& row : results) {
        out += row.name;
        out += '\t' + std::to_string(row.streams);
        out += '\t' + std::to_string(row.links);
        out += '\t' + std::to_string(row.extracted);
        std::snprintf(buf, sizeof(buf), "%.4f", row.precision);
        out += '\t';
        out += buf;
        std::snprintf(buf, sizeof(buf), "%.4f", row.recall);
        out += '\t';
        out += buf;
        std::snprintf(buf, sizeof(buf), "%.4f", row.f1);
        out += '\t';
        out += buf;
        out += '\t';
        out += row.pass ? "pass" : "fail";
        out += '\n';
    }
    return out;
}

}  // namespace chatweave
