#ifndef TESTS_SUPPORT_FIXTURES_HPP
#define TESTS_SUPPORT_FIXTURES_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fixtures {

std::u32string u32(std::string_view utf8_text);
std::string u8(std::u32string_view text);

/// One reading of an ambiguous stripped form: the cue word that selects it
/// and the diacritized variant it selects. The generator always emits the
/// cue immediately before the variant, so context fully determines the word.
struct AmbiguousReading {
    std::u32string cue;
    std::u32string variant;
};

struct LanguagePack {
    std::string code;
    std::vector<std::u32string> marked;  // unambiguous diacritized words
    std::vector<std::u32string> plain;   // words without any marks
    std::vector<std::vector<AmbiguousReading>> ambiguous;  // readings per form
};

/// Hand-picked word material for twelve languages. Everything is lowercase;
/// generated corpora therefore never mix cases of the same form.
const std::vector<LanguagePack>& language_packs();

/// Seeded sentence sampler over one pack: 5-12 slots per sentence, a mix of
/// marked words, plain words, digits, trailing punctuation, and cue+variant
/// pairs for the ambiguous forms. Same (pack, sentences, seed) in, same
/// lines out, byte for byte.
std::vector<std::u32string> generate_corpus(const LanguagePack& pack, size_t sentences,
                                            uint64_t seed);

size_t word_count(std::span<const std::u32string> lines);

// --- helpers for driving the command-line binary -------------------------

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string shell_quote(const std::string& arg);

/// Runs `binary args...` with stdin_data on stdin, capturing both streams.
CommandResult run_command(const std::string& binary, const std::vector<std::string>& args,
                          const std::string& stdin_data = "");

/// mkdtemp on construction, recursive delete on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    /// Absolute path of `name` inside the directory; the root when empty.
    std::string path(const std::string& name = "") const;

private:
    std::string root_;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fixtures

#endif  // TESTS_SUPPORT_FIXTURES_HPP
