#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "diacrit/corpus.hpp"
#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace diacrit;
using fixtures::u32;

TEST_CASE("read_lines normalizes input text") {
    std::istringstream in("prvni\r\n\nd\xCC\x8Cite\n   \nposledni");
    std::vector<std::u32string> lines = read_lines(in);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == u32("prvni"));
    CHECK(lines[1] == u32("ďite"));  // d + combining caron composed
    CHECK(lines[2] == u32("   "));   // whitespace-only is kept here, skipped by builders
    CHECK(lines[3] == u32("posledni"));

    SUBCASE("composition can be turned off") {
        std::istringstream raw("d\xCC\x8Cite\n");
        CHECK(read_lines(raw, false)[0] == U"ďite");
    }
}

TEST_CASE("build_parallel strips its own gold side") {
    std::istringstream gold("dítě má\n\nkůň\n");
    MaskedParallelCorpus corpus = build_parallel(gold, "unit");
    REQUIRE(corpus.size() == 2);  // blank line dropped
    CHECK(corpus.entries()[0].stripped == u32("dite ma"));
    CHECK(corpus.entries()[0].gold == u32("dítě má"));
    CHECK(corpus.entries()[0].mask == std::vector<bool>{true, true});
    CHECK(corpus.entries()[1].mask == std::vector<bool>{true});

    SUBCASE("romanian cedilla repair is opt-in") {
        std::istringstream text("paşte\n");
        ParallelBuildOptions options;
        options.romanian_cedillas = true;
        MaskedParallelCorpus fixed = build_parallel(text, "unit", options);
        CHECK(fixed.entries()[0].gold == u32("paște"));
    }
    SUBCASE("combining marks compose before stripping") {
        std::istringstream text("vu\xCC\x9Bz\n");  // u + combining horn
        MaskedParallelCorpus c = build_parallel(text, "unit");
        CHECK(c.entries()[0].gold == u32("vưz"));
        CHECK(c.entries()[0].stripped == u32("vuz"));
    }
}

TEST_CASE("corpus construction validates alignment") {
    CorpusEntry good{u32("dite ma"), u32("dítě má"), {true, true}};
    CHECK_NOTHROW(MaskedParallelCorpus({good}, "unit"));

    SUBCASE("mask length must match the word count") {
        CorpusEntry bad{u32("dite ma"), u32("dítě má"), {true}};
        CHECK_THROWS_AS(MaskedParallelCorpus({bad}, "unit"), AlignmentError);
    }
    SUBCASE("sides must have the same word count") {
        CorpusEntry bad{u32("dite"), u32("dítě má"), {true, true}};
        CHECK_THROWS_AS(MaskedParallelCorpus({bad}, "unit"), AlignmentError);
    }
    SUBCASE("a mask-true word must strip back to the source") {
        CorpusEntry bad{u32("dite ma"), u32("dítě jí"), {true, true}};
        CHECK_THROWS_AS(MaskedParallelCorpus({bad}, "unit"), AlignmentError);
    }
    SUBCASE("mask-false words may differ arbitrarily") {
        CorpusEntry ok{u32("dite ma"), u32("dítě jí"), {true, false}};
        CHECK_NOTHROW(MaskedParallelCorpus({ok}, "unit"));
    }
    SUBCASE("case differences pass the mask-true check") {
        CorpusEntry ok{u32("PRAHA dite"), u32("praha dítě"), {true, true}};
        CHECK_NOTHROW(MaskedParallelCorpus({ok}, "unit"));
    }
    SUBCASE("errors name the entry and provenance") {
        CorpusEntry bad{u32("a"), u32("b c"), {true, true}};
        try {
            MaskedParallelCorpus({good, bad}, "m2");
            FAIL("expected AlignmentError");
        } catch (const AlignmentError& e) {
            std::string message = e.what();
            CHECK(message.find("1") != std::string::npos);
            CHECK(message.find("m2") != std::string::npos);
        }
    }
}

TEST_CASE("three-file roundtrip") {
    fixtures::TempDir dir;
    std::istringstream gold_text("dítě má hlad\nkůň úpěl 42\n");
    MaskedParallelCorpus corpus = build_parallel(gold_text, "unit");
    std::string prefix = dir.path("sample");
    corpus.save(prefix);

    CHECK(fixtures::read_file(prefix + ".strip.txt") == "dite ma hlad\nkun upel 42\n");
    CHECK(fixtures::read_file(prefix + ".gold.txt") == "dítě má hlad\nkůň úpěl 42\n");
    CHECK(fixtures::read_file(prefix + ".mask.txt") == "1 1 1\n1 1 1\n");

    MaskedParallelCorpus loaded = MaskedParallelCorpus::from_files(
        prefix + ".gold.txt", prefix + ".strip.txt", prefix + ".mask.txt");
    CHECK(loaded.entries() == corpus.entries());

    SUBCASE("missing strip and mask files are derived") {
        MaskedParallelCorpus derived = MaskedParallelCorpus::from_files(prefix + ".gold.txt");
        CHECK(derived.entries() == corpus.entries());
    }
    SUBCASE("mask files accept only 0 and 1") {
        fixtures::write_file(dir.path("bad.mask.txt"), "1 2 1\n1 1 1\n");
        CHECK_THROWS_AS(MaskedParallelCorpus::from_files(
                            prefix + ".gold.txt", prefix + ".strip.txt", dir.path("bad.mask.txt")),
                        ParseError);
    }
    SUBCASE("mask row count must match") {
        fixtures::write_file(dir.path("short.mask.txt"), "1 1 1\n");
        CHECK_THROWS_AS(MaskedParallelCorpus::from_files(prefix + ".gold.txt",
                                                         prefix + ".strip.txt",
                                                         dir.path("short.mask.txt")),
                        AlignmentError);
    }
    SUBCASE("strip row count must match") {
        fixtures::write_file(dir.path("short.strip.txt"), "dite ma hlad\n");
        CHECK_THROWS_AS(
            MaskedParallelCorpus::from_files(prefix + ".gold.txt", dir.path("short.strip.txt")),
            AlignmentError);
    }
    SUBCASE("missing gold file is an io error") {
        CHECK_THROWS_AS(MaskedParallelCorpus::from_files(dir.path("nope.txt")), IoError);
    }
}

TEST_CASE("corpus statistics count words and mask-true words") {
    std::vector<CorpusEntry> entries = {
        {u32("dite ma"), u32("dítě má"), {true, false}},
        {u32("kun 42"), u32("kůň 42"), {true, true}},
    };
    CorpusStats stats = corpus_stats(MaskedParallelCorpus(entries, "unit"));
    CHECK(stats.sentences == 2);
    CHECK(stats.words == 4);
    CHECK(stats.evaluated == 3);
}

TEST_CASE("generated corpora build and roundtrip for every language") {
    for (const fixtures::LanguagePack& pack : fixtures::language_packs()) {
        CAPTURE(pack.code);
        std::vector<std::u32string> lines = fixtures::generate_corpus(pack, 25, 11);
        std::string joined;
        for (const std::u32string& line : lines) joined += fixtures::u8(line) + "\n";
        std::istringstream in(joined);
        MaskedParallelCorpus corpus = build_parallel(in, pack.code);
        CHECK(corpus.size() == lines.size());

        fixtures::TempDir dir;
        corpus.save(dir.path(pack.code));
        MaskedParallelCorpus loaded =
            MaskedParallelCorpus::from_files(dir.path(pack.code) + ".gold.txt",
                                             dir.path(pack.code) + ".strip.txt",
                                             dir.path(pack.code) + ".mask.txt");
        CHECK(loaded.entries() == corpus.entries());
    }
}
