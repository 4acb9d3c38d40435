// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "helpers.hpp"
#include "persona.hpp"
#include "stub_server.hpp"
#include "text.hpp"

using namespace chatweave;
using namespace chatweave::testing;
using nlohmann::json;

namespace {

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<json> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

std::string data_path(const char* name) {
    return std::string(CHATWEAVE_TEST_DATA_DIR) + "/" + name;
}

class FakeClassifier : public PersonaClassifier {
  public:
    explicit FakeClassifier(std::map<std::string, double> table)
        : table_(std::move(table)) {}

    std::vector<double> scores(
        const std::vector<std::string>& sentences) const override {
        calls.push_back(sentences);
        std::vector<double> out;
        for (const auto& s : sentences) {
            auto it = table_.find(s);
            out.push_back(it == table_.end() ? 1.0 : it->second);
        }
        return out;
    }

    mutable std::vector<std::vector<std::string>> calls;

  private:
    std::map<std::string, double> table_;
};

HttpRetryOptions fast_retry() {
    HttpRetryOptions options;
    options.initial_backoff_ms = 1;
    options.max_backoff_ms = 4;
    options.timeout_ms = 2000;
    return options;
}

}  // namespace

TEST_CASE("pos tag names") {
    CHECK(std::string(to_string(PosTag::VERB)) == "VERB");
    CHECK(std::string(to_string(PosTag::NOUN)) == "NOUN");
    CHECK(std::string(to_string(PosTag::ADJ)) == "ADJ");
    CHECK(std::string(to_string(PosTag::OTHER)) == "OTHER");
}

TEST_CASE("pos_tags segments greedily against the lexicons") {
    const auto tags = pos_tags("我喜欢唱歌");
    REQUIRE(tags.size() == 3);
    CHECK(tags[0] == TaggedToken{"我", PosTag::OTHER});
    CHECK(tags[1] == TaggedToken{"喜欢", PosTag::VERB});
    CHECK(tags[2] == TaggedToken{"唱歌", PosTag::VERB});
}

TEST_CASE("pos_tags rejects empty input") {
    CHECK_THROWS_AS(pos_tags(""), InvalidArgumentError);
}

TEST_CASE("tagger token mechanics") {
    SUBCASE("an ASCII alphanumeric run is one token") {
        const auto tags = pos_tags("我喜欢ABC123这首歌");
        REQUIRE(tags.size() == 6);
        CHECK(tags[2] == TaggedToken{"ABC123", PosTag::OTHER});
    }
    SUBCASE("whitespace and punctuation yield no tokens") {
        CHECK(pos_tags("我 喜欢， 唱歌。").size() == 3);
        CHECK(pos_tags("！？。").empty());
    }
    SUBCASE("an uncovered character is a one-character token") {
        const auto tags = pos_tags("魟");
        REQUIRE(tags.size() == 1);
        CHECK(tags[0] == TaggedToken{"魟", PosTag::OTHER});
    }
    SUBCASE("the longest lexicon word wins") {
        // 梦想 is a noun; the embedded 想 must not surface as a verb.
        const auto tags = pos_tags("梦想");
        REQUIRE(tags.size() == 1);
        CHECK(tags[0] == TaggedToken{"梦想", PosTag::NOUN});
        const auto tags2 = pos_tags("直播间");
        REQUIRE(tags2.size() == 1);
        CHECK(tags2[0] == TaggedToken{"直播间", PosTag::NOUN});
    }
}

TEST_CASE("rule_filter applies the four sentence rules") {
    PersonaConfig config;
    CHECK(rule_filter("我每天晚上八点直播唱歌", config));
    CHECK(!rule_filter("你唱得真好", config));  // no first person
    CHECK(!rule_filter("我好", config));        // too short
    CHECK(!rule_filter("我的猫非常可爱", config));   // no verb
    CHECK(!rule_filter("我想说我们都想看", config)); // no noun or adjective
    CHECK(!rule_filter("", config));

    SUBCASE("token bounds come from the config") {
        PersonaConfig tight = config;
        tight.min_words = 3;
        CHECK(rule_filter("我去学校", tight));
        tight.max_words = 3;
        CHECK(!rule_filter("我想唱情歌", tight));
    }
    SUBCASE("first-person tokens come from the config") {
        PersonaConfig ours = config;
        ours.first_person_tokens = {"我们"};
        CHECK(rule_filter("我们每天晚上直播唱歌", ours));
        CHECK(!rule_filter("我每天晚上直播唱歌", ours));
    }
}

TEST_CASE("rule fixture holds exactly") {
    PersonaConfig config;
    for (const json& row : read_jsonl(data_path("persona_rules.jsonl"))) {
        const std::string sentence = row.at("sentence").get<std::string>();
        const bool expected = row.at("expected").get<bool>();
        CAPTURE(sentence);
        CHECK(rule_filter(sentence, config) == expected);
    }
}

TEST_CASE("tagger verb detection agrees with the reference set") {
    const auto rows = read_jsonl(data_path("tagger_reference.jsonl"));
    REQUIRE(rows.size() == 200);
    int matches = 0;
    for (const json& row : rows) {
        const std::string sentence = row.at("sentence").get<std::string>();
        const bool expected = row.at("has_verb").get<bool>();
        bool tagged = false;
        for (const TaggedToken& t : pos_tags(sentence))
            if (t.tag == PosTag::VERB) tagged = true;
        if (tagged == expected) ++matches;
    }
    const double agreement = matches / 200.0;
    CAPTURE(agreement);
    CHECK(agreement >= 0.90);
}

TEST_CASE("build_text_profile on empty history") {
    PersonaConfig config;
    const TextProfile profile = build_text_profile({}, config);
    CHECK(profile.sentences.empty());
    CHECK(profile.total_length == 0);
}

TEST_CASE("build_text_profile keeps rule-passing sentences in order") {
    PersonaConfig config;
    const std::vector<std::string> history = {
        "我每天晚上八点直播唱歌",  // passes
        "你唱得真好",              // fails: no first person
        "我喜欢吃火锅",            // passes
        "666",                     // fails
        "我周末去爬山和游泳",      // passes
    };
    const TextProfile profile =
        build_text_profile(history, config, default_tagger(), nullptr, "s1");
    CHECK(profile.streamer_id == "s1");
    REQUIRE(profile.sentences.size() == 3);
    CHECK(profile.sentences[0] == "我每天晚上八点直播唱歌");
    CHECK(profile.sentences[1] == "我喜欢吃火锅");
    CHECK(profile.sentences[2] == "我周末去爬山和游泳");
    CHECK(profile.total_length ==
          static_cast<std::int64_t>(cp_length(history[0]) +
                                    cp_length(history[2]) +
                                    cp_length(history[4])));
}

TEST_CASE("build_text_profile keeps the newest duplicate") {
    PersonaConfig config;
    const std::string a = "我每天晚上八点直播唱歌";
    const std::string b = "我喜欢吃火锅";
    const TextProfile profile = build_text_profile({a, b, a}, config);
    REQUIRE(profile.sentences.size() == 2);
    CHECK(profile.sentences[0] == b);
    CHECK(profile.sentences[1] == a);
}

TEST_CASE("build_text_profile stops at the length budget") {
    PersonaConfig config;
    REQUIRE(config.max_profile_length == 512);
    // 100 distinct sentences of exactly 10 code points each; the newest 51
    // fit (510 <= 512) and the 52nd would not.
    std::vector<std::string> history;
    for (int i = 0; i < 100; ++i) {
        char suffix[8];
        std::snprintf(suffix, sizeof suffix, "a%02d", i);
        history.push_back(std::string("我晚上喜欢唱歌") + suffix);
    }
    REQUIRE(cp_length(history[0]) == 10);
    const TextProfile profile = build_text_profile(history, config);
    REQUIRE(profile.sentences.size() == 51);
    CHECK(profile.total_length == 510);
    CHECK(profile.sentences.front() == history[49]);
    CHECK(profile.sentences.back() == history[99]);
    for (std::size_t i = 0; i < profile.sentences.size(); ++i)
        CHECK(profile.sentences[i] == history[49 + i]);
}

TEST_CASE("the classifier sees only rule-passing sentences") {
    PersonaConfig config;
    FakeClassifier classifier({{"我喜欢吃火锅", 0.4}});
    const std::vector<std::string> history = {
        "我每天晚上八点直播唱歌",  // passes rules, score 1.0
        "你唱得真好",              // fails rules: classifier never sees it
        "我喜欢吃火锅",            // passes rules, score 0.4 < threshold
    };
    const TextProfile profile =
        build_text_profile(history, config, default_tagger(), &classifier);
    REQUIRE(profile.sentences.size() == 1);
    CHECK(profile.sentences[0] == "我每天晚上八点直播唱歌");
    REQUIRE(classifier.calls.size() == 1);
    CHECK(classifier.calls[0] ==
          std::vector<std::string>{"我每天晚上八点直播唱歌", "我喜欢吃火锅"});

    SUBCASE("threshold boundary keeps an exact-score sentence") {
        FakeClassifier at_threshold({{"我喜欢吃火锅", 0.5}});
        const TextProfile kept = build_text_profile(
            history, config, default_tagger(), &at_threshold);
        CHECK(kept.sentences.size() == 2);
    }
    SUBCASE("an empty rule survivor set skips the classifier") {
        FakeClassifier untouched({});
        const TextProfile empty = build_text_profile(
            {"你唱得真好"}, config, default_tagger(), &untouched);
        CHECK(empty.sentences.empty());
        CHECK(untouched.calls.empty());
    }
}

TEST_CASE("classifier_score forwards a single sentence") {
    FakeClassifier classifier({{"我喜欢吃火锅", 0.25}});
    CHECK(classifier_score(classifier, "我喜欢吃火锅") == doctest::Approx(0.25));
}

TEST_CASE("remote classifier round trip") {
    StubServer server;
    int hits = 0;
    server.post("/classify", [&](const httplib::Request& req,
                                 httplib::Response& res) {
        ++hits;
        const json body = json::parse(req.body);
        json scores = json::array();
        for (const auto& text : body.at("texts"))
            scores.push_back(text.get<std::string>() == "你好" ? 0.25 : 0.75);
        res.set_content(json{{"scores", scores}}.dump(), "application/json");
    });
    const std::string endpoint = server.start();
    RemotePersonaClassifier classifier(endpoint, fast_retry());
    const auto scores = classifier.scores({"我喜欢吃火锅", "你好"});
    REQUIRE(scores.size() == 2);
    CHECK(scores[0] == doctest::Approx(0.75));
    CHECK(scores[1] == doctest::Approx(0.25));
    CHECK(hits == 1);
}

TEST_CASE("remote classifier validates the response") {
    StubServer server;
    SUBCASE("score count mismatch") {
        server.post("/classify", [](const httplib::Request&,
                                    httplib::Response& res) {
            res.set_content(R"({"scores":[0.5]})", "application/json");
        });
        RemotePersonaClassifier classifier(server.start(), fast_retry());
        CHECK_THROWS_AS(classifier.scores({"我喜欢吃火锅", "我想唱情歌"}),
                        ParseError);
    }
    SUBCASE("score outside [0,1]") {
        server.post("/classify", [](const httplib::Request&,
                                    httplib::Response& res) {
            res.set_content(R"({"scores":[1.5]})", "application/json");
        });
        RemotePersonaClassifier classifier(server.start(), fast_retry());
        CHECK_THROWS_AS(classifier.scores({"我喜欢吃火锅"}), ParseError);
    }
    SUBCASE("malformed body") {
        server.post("/classify", [](const httplib::Request&,
                                    httplib::Response& res) {
            res.set_content("not json", "application/json");
        });
        RemotePersonaClassifier classifier(server.start(), fast_retry());
        CHECK_THROWS_AS(classifier.scores({"我喜欢吃火锅"}), ParseError);
    }
    SUBCASE("persistent server errors exhaust the retry budget") {
        int hits = 0;
        server.post("/classify", [&](const httplib::Request&,
                                     httplib::Response& res) {
            ++hits;
            res.status = 503;
        });
        RemotePersonaClassifier classifier(server.start(), fast_retry());
        CHECK_THROWS_AS(classifier.scores({"我喜欢吃火锅"}), TransportError);
        CHECK(hits == 3);
    }
}

TEST_CASE("remote classifier argument contracts") {
    CHECK_THROWS_AS(RemotePersonaClassifier(""), ConfigError);
    RemotePersonaClassifier classifier("http://127.0.0.1:9", fast_retry());
    CHECK_THROWS_AS(classifier.scores({}), InvalidArgumentError);
    CHECK_THROWS_AS(classifier.scores({""}), InvalidArgumentError);
    CHECK_THROWS_AS(classifier.scores({"我喜欢吃火锅"}), TransportError);
}

TEST_CASE("codebook parsing and anonymization") {
    const std::string text = R"({
        "age": {"18-24": 1, "25-30": 2},
        "gender": {"女": 1, "男": 2}
    })";
    const Codebook book = parse_codebook(text);

    SUBCASE("numeric values select the covering band") {
        const BasicProfile profile = anonymize_basic_profile(
            {{"age", "23"}, {"gender", "女"}}, book, "s1");
        CHECK(profile.streamer_id == "s1");
        CHECK(profile.attributes ==
              std::map<std::string, int>{{"age", 1}, {"gender", 1}});
    }
    SUBCASE("values outside every band and unknown attributes map to zero") {
        const BasicProfile profile = anonymize_basic_profile(
            {{"age", "40"}, {"city", "北京"}}, book);
        CHECK(profile.attributes ==
              std::map<std::string, int>{{"age", 0}, {"city", 0}});
    }
    SUBCASE("exact keys win before band lookup") {
        Codebook exact = book;
        exact.attributes["age"]["23"] = 9;
        const BasicProfile profile =
            anonymize_basic_profile({{"age", "23"}}, exact);
        CHECK(profile.attributes.at("age") == 9);
    }
    SUBCASE("non-numeric values never match a band") {
        const BasicProfile profile =
            anonymize_basic_profile({{"age", "二十三"}}, book);
        CHECK(profile.attributes.at("age") == 0);
    }
    SUBCASE("round trip through dump") {
        CHECK(parse_codebook(dump_codebook(book)) == book);
    }
}

TEST_CASE("codebook rejects malformed input") {
    CHECK_THROWS_AS(parse_codebook("[]"), ConfigError);
    CHECK_THROWS_AS(parse_codebook(R"({"age": 3})"), ConfigError);
    CHECK_THROWS_AS(parse_codebook(R"({"age": {"18-24": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_codebook(R"({"age": {"18-24": "x"}})"), ConfigError);
}

TEST_CASE("profile line formats round trip") {
    SUBCASE("text profile") {
        TextProfile profile;
        profile.streamer_id = "s9";
        profile.sentences = {"我每天晚上八点直播唱歌", "我喜欢吃火锅"};
        profile.total_length = 16;
        const std::string line = write_text_profile_line(profile);
        CHECK(parse_text_profile_line(line) == profile);
        CHECK_THROWS_AS(parse_text_profile_line("{", 7), ParseError);
        try {
            parse_text_profile_line(R"({"streamer":"s"})", 7);
            FAIL("expected ParseError");
        } catch (const ParseError& err) {
            CHECK(std::string(err.what()).find("7") != std::string::npos);
        }
    }
    SUBCASE("basic profile with eight attributes") {
        BasicProfile profile;
        profile.streamer_id = "s10";
        for (int i = 0; i < 8; ++i)
            profile.attributes["attr" + std::to_string(i)] = i % 3;
        const std::string line = write_basic_profile_line(profile);
        CHECK(parse_basic_profile_line(line) == profile);
        CHECK_THROWS_AS(parse_basic_profile_line("nope", 3), ParseError);
    }
}
