#ifndef DIACRIT_MARKS_HPP
#define DIACRIT_MARKS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace diacrit {

/// A named diacritical mark, e.g. "CARON" or "CIRCUMFLEX AND ACUTE". The name
/// is the full character-name suffix after "WITH ", kept as one compound mark.
struct DiacriticalMark {
    std::string name;

    bool operator==(const DiacriticalMark&) const = default;
    auto operator<=>(const DiacriticalMark&) const = default;
};

struct Decomposition {
    char32_t base;
    DiacriticalMark mark;
};

/// Raw rows of the embedded character-name table, exposed for inspection and
/// for independent cross-checks in tests.
struct LetterData {
    char32_t codepoint;
    const char* name;
    char32_t lower;
    char32_t decomp_first;   // canonical decomposition pair, 0 when absent
    char32_t decomp_second;
};

struct CombiningName {
    char32_t codepoint;
    const char* name;
};

std::span<const LetterData> letter_data();
std::span<const CombiningName> combining_names();

/// Decomposition and composition tables for precomposed Latin letters, built
/// from character names of the form "LATIN (SMALL|CAPITAL) LETTER X WITH Y".
/// Immutable after construction; safe for concurrent reads.
class MarkRegistry {
public:
    static MarkRegistry build();

    /// Process-wide registry built once on first use.
    static const MarkRegistry& instance();

    /// (base, mark) for a precomposed letter; nullopt for anything unmarked.
    std::optional<Decomposition> decompose(char32_t c) const;

    /// Precomposed letter for (base, mark), or nullopt when Unicode defines
    /// none. Case of the base carries through to the result.
    std::optional<char32_t> compose(char32_t base, const DiacriticalMark& mark) const;

    /// Base letter of c, or c itself when unmarked.
    char32_t strip_char(char32_t c) const;

    /// Simple lowercase mapping; identity outside the covered blocks.
    char32_t fold_char(char32_t c) const;

    bool is_letter(char32_t c) const;
    bool is_uppercase_letter(char32_t c) const;

    /// Letters of the covered blocks plus coarse Greek/Cyrillic/IPA ranges.
    bool is_alphabetic(char32_t c) const;

    struct Entry {
        char32_t precomposed;
        char32_t base;
        DiacriticalMark mark;
    };

    /// All decompositions, sorted by code point.
    std::vector<Entry> entries() const;

    /// Composes adjacent (starter, combining mark) pairs into precomposed
    /// letters, iterating so stacked marks chain. Everything else passes
    /// through. Corpus ingestion runs every line through this.
    std::u32string compose_canonical(std::u32string_view text) const;

private:
    MarkRegistry() = default;

    struct CharInfo {
        char32_t lower = 0;
        bool uppercase = false;
    };

    std::unordered_map<char32_t, Decomposition> decompositions_;
    std::unordered_map<char32_t, std::unordered_map<std::string, char32_t>> compositions_;
    std::unordered_map<char32_t, CharInfo> chars_;
    std::unordered_map<uint64_t, char32_t> canonical_pairs_;
};

bool is_space(char32_t c);
bool is_ascii_digit(char32_t c);
inline bool is_combining_mark(char32_t c) { return c >= 0x0300 && c <= 0x036F; }

std::u32string strip_diacritics(std::u32string_view text);
std::string strip_diacritics(const std::string& utf8_text);

std::u32string fold_case(std::u32string_view text);

/// Replaces S/T-with-cedilla by S/T-with-comma-below, both cases.
std::u32string normalize_romanian(std::u32string_view text);
std::string normalize_romanian(const std::string& utf8_text);

std::u32string compose_canonical(std::u32string_view text);

}  // namespace diacrit

#endif  // DIACRIT_MARKS_HPP
