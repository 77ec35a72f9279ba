#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/tokenize.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace diacrit;
using fixtures::u32;

namespace {

std::vector<std::u32string> surfaces(const TokenizedSentence& tokens) {
    std::vector<std::u32string> out;
    for (const Token& t : tokens) out.push_back(t.surface);
    return out;
}

}  // namespace

TEST_CASE("word tokenization splits letters, digits and punctuation") {
    TokenizedSentence tokens = word_tokenize(u32("řekl 42 slov!"));
    CHECK(surfaces(tokens) ==
          std::vector<std::u32string>{u32("řekl"), u32("42"), u32("slov"), u32("!")});
    CHECK_FALSE(tokens[0].is_continuation);

    SUBCASE("spans point back into the sentence") {
        std::u32string line = u32("a-b  c7d");
        for (const Token& t : word_tokenize(line))
            CHECK(line.substr(t.begin, t.end - t.begin) == t.surface);
    }
    SUBCASE("every non-space, non-digit, non-letter char stands alone") {
        CHECK(surfaces(word_tokenize(u32("a--b"))) ==
              std::vector<std::u32string>{u32("a"), u32("-"), u32("-"), u32("b")});
    }
    SUBCASE("digits split from letters") {
        CHECK(surfaces(word_tokenize(u32("abc123def"))) ==
              std::vector<std::u32string>{u32("abc"), u32("123"), u32("def")});
    }
    SUBCASE("empty and all-space lines have no tokens") {
        CHECK(word_tokenize(u32("")).empty());
        CHECK(word_tokenize(u32("   \t")).empty());
    }
}

TEST_CASE("split_words cuts on whitespace only") {
    CHECK(split_words(u32("ab cd  ef")) ==
          std::vector<std::u32string>{u32("ab"), u32("cd"), u32("ef")});
    CHECK(split_words(u32(" slovo, ")) == std::vector<std::u32string>{u32("slovo,")});
    CHECK(split_words(u32("")).empty());
}

TEST_CASE("detokenize splices tokens back verbatim") {
    for (const fixtures::LanguagePack& pack : fixtures::language_packs()) {
        for (const std::u32string& line : fixtures::generate_corpus(pack, 30, 3)) {
            CHECK(detokenize(line, word_tokenize(line)) == line);
        }
    }

    SUBCASE("replaced surfaces land in the right place") {
        std::u32string line = u32("kun a kun");
        TokenizedSentence tokens = word_tokenize(line);
        tokens[0].surface = u32("kůň");
        tokens[2].surface = u32("kůň");
        CHECK(detokenize(line, tokens) == u32("kůň a kůň"));
    }
    SUBCASE("overlapping spans are an error") {
        TokenizedSentence tokens = word_tokenize(u32("abc def"));
        tokens[1].begin = 2;
        CHECK_THROWS_AS(detokenize(u32("abc def"), tokens), SpanOverlapError);
    }
    SUBCASE("spans past the end are an error") {
        TokenizedSentence tokens = word_tokenize(u32("abc"));
        tokens[0].end = 9;
        CHECK_THROWS_AS(detokenize(u32("abc"), tokens), SpanOverlapError);
    }
}

TEST_CASE("subword vocabulary learning") {
    std::vector<std::pair<std::u32string, uint64_t>> counts = {
        {u32("unknown"), 10}, {u32("unhappy"), 8}, {u32("known"), 5}};

    SUBCASE("observed single characters survive any cap") {
        SubwordVocabulary vocab = SubwordVocabulary::learn(counts, 4);
        // Word-initial singles: only u and k start a training word.
        for (char32_t c : u32("uk")) {
            CAPTURE(c);
            CHECK(vocab.contains(std::u32string(1, c), false));
        }
        for (char32_t c : u32("nkowhapy")) {
            CAPTURE(c);
            CHECK(vocab.contains(std::u32string(1, c), true));
        }
        CHECK(!vocab.contains(u32("u"), true));    // never seen word-internally
        CHECK(!vocab.contains(u32("un"), false));  // the cap leaves no room for pairs
    }
    SUBCASE("frequent multi-character pieces join up to the cap") {
        SubwordVocabulary small = SubwordVocabulary::learn(counts, 20);
        SubwordVocabulary large = SubwordVocabulary::learn(counts, 400);
        CHECK(small.size() == 20);
        CHECK(large.size() > small.size());
        CHECK(large.contains(u32("un"), false));  // shared prefix of 18 occurrences
    }
    SUBCASE("max_ngram bounds piece length") {
        SubwordVocabulary vocab = SubwordVocabulary::learn(counts, 4000, 3);
        CHECK(vocab.max_entry_length() <= 3);
    }
}

TEST_CASE("greedy longest-match segmentation") {
    std::vector<std::pair<std::u32string, uint64_t>> counts = {{u32("unknown"), 10},
                                                               {u32("known"), 5}};
    SubwordVocabulary vocab = SubwordVocabulary::learn(counts, 4000);

    Token word;
    word.surface = u32("unknown");
    word.begin = 4;
    word.end = 11;
    TokenizedSentence pieces = subword_tokenize(word, vocab);
    REQUIRE(!pieces.empty());
    CHECK_FALSE(pieces[0].is_continuation);

    std::u32string glued;
    size_t pos = word.begin;
    for (const Token& p : pieces) {
        CHECK(p.begin == pos);  // contiguous spans across the word
        CHECK(p.end - p.begin == p.surface.size());
        if (&p != &pieces[0]) CHECK(p.is_continuation);
        glued += p.surface;
        pos = p.end;
    }
    CHECK(glued == word.surface);
    CHECK(pos == word.end);

    SUBCASE("the whole word is one piece when listed") {
        // "unknown" occurs 10 times, well above any competitor.
        CHECK(pieces.size() == 1);
        CHECK(pieces[0].surface == u32("unknown"));
    }
    SUBCASE("unseen characters fall back to singles") {
        Token odd;
        odd.surface = u32("qxq");
        odd.end = 3;
        TokenizedSentence fallback = subword_tokenize(odd, vocab);
        CHECK(fallback.size() == 3);  // nothing matches, singles still segment it
        CHECK(fallback[1].is_continuation);
    }
    SUBCASE("matching is case-folded but surfaces keep their case") {
        Token cap;
        cap.surface = u32("UNKNOWN");
        cap.end = 7;
        TokenizedSentence caps = subword_tokenize(cap, vocab);
        CHECK(caps.size() == 1);
        CHECK(caps[0].surface == u32("UNKNOWN"));
    }
}

TEST_CASE("tokenize_line dispatches on the vocabulary") {
    std::u32string line = u32("unknown 42!");
    CHECK(tokenize_line(line, nullptr) == word_tokenize(line));

    std::vector<std::pair<std::u32string, uint64_t>> counts = {{u32("unknown"), 3}};
    SubwordVocabulary vocab = SubwordVocabulary::learn(counts, 40);
    TokenizedSentence pieces = tokenize_line(line, &vocab);
    CHECK(pieces.size() >= 3);  // word pieces + number + mark
    CHECK(detokenize(line, pieces) == line);
}

TEST_CASE("vocabulary file format") {
    std::vector<std::pair<std::u32string, uint64_t>> counts = {{u32("příliš"), 6},
                                                               {u32("žlutý"), 4}};
    SubwordVocabulary vocab = SubwordVocabulary::learn(counts, 60);

    std::ostringstream out;
    vocab.save(out);
    std::string text = out.str();
    CHECK(text.substr(0, 18) == "#diacrit-vocab v1\n");
    CHECK(text.find("##") != std::string::npos);  // continuation pieces carry the prefix

    std::istringstream in(text);
    SubwordVocabulary loaded = SubwordVocabulary::load(in);
    CHECK(loaded == vocab);

    std::ostringstream again;
    loaded.save(again);
    CHECK(again.str() == text);

    SUBCASE("load rejects damaged files") {
        auto load_text = [](const std::string& s) {
            std::istringstream stream(s);
            return SubwordVocabulary::load(stream);
        };
        CHECK_THROWS_AS(load_text(""), ModelFormatError);
        CHECK_THROWS_AS(load_text("#something-else v1\n"), ModelFormatError);
        CHECK_THROWS_AS(load_text("#diacrit-vocab v1\n##\n"), ModelFormatError);
    }
}
