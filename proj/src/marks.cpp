#include "diacrit/marks.hpp"

#include <algorithm>

#include "diacrit/utf8.hpp"

namespace diacrit {

namespace {

#include "unicode_data.inc"

uint64_t pair_key(char32_t first, char32_t second) {
    return (static_cast<uint64_t>(first) << 32) | second;
}

}  // namespace

std::span<const LetterData> letter_data() {
    return {kLetterData, sizeof(kLetterData) / sizeof(kLetterData[0])};
}

std::span<const CombiningName> combining_names() {
    return {kCombiningNames, sizeof(kCombiningNames) / sizeof(kCombiningNames[0])};
}

MarkRegistry MarkRegistry::build() {
    MarkRegistry reg;

    std::unordered_map<std::string, char32_t> by_name;
    for (const LetterData& row : letter_data()) {
        by_name.emplace(row.name, row.codepoint);
        CharInfo info;
        info.lower = row.lower;
        info.uppercase = std::string_view(row.name).find(" CAPITAL ") != std::string_view::npos;
        reg.chars_.emplace(row.codepoint, info);
    }

    for (const LetterData& row : letter_data()) {
        std::string_view name(row.name);
        size_t with = name.find(" WITH ");
        if (with == std::string_view::npos) continue;
        auto base_it = by_name.find(std::string(name.substr(0, with)));
        if (base_it == by_name.end()) continue;  // e.g. "...LETTER L WITH MIDDLE TILDE" off a non-covered base
        char32_t base = base_it->second;
        std::string mark(name.substr(with + 6));
        // "D WITH SMALL LETTER Z" names a digraph half, not a mark (ǅ ǈ ǋ ǲ).
        if (mark.find("LETTER") != std::string::npos) continue;
        reg.decompositions_.emplace(row.codepoint, Decomposition{base, {mark}});
        reg.compositions_[base].emplace(std::move(mark), row.codepoint);

        if (row.decomp_first != 0 && row.decomp_second != 0)
            reg.canonical_pairs_.emplace(pair_key(row.decomp_first, row.decomp_second),
                                         row.codepoint);
    }
    return reg;
}

const MarkRegistry& MarkRegistry::instance() {
    static const MarkRegistry reg = build();
    return reg;
}

std::optional<Decomposition> MarkRegistry::decompose(char32_t c) const {
    auto it = decompositions_.find(c);
    if (it == decompositions_.end()) return std::nullopt;
    return it->second;
}

std::optional<char32_t> MarkRegistry::compose(char32_t base, const DiacriticalMark& mark) const {
    auto it = compositions_.find(base);
    if (it == compositions_.end()) return std::nullopt;
    auto mit = it->second.find(mark.name);
    if (mit == it->second.end()) return std::nullopt;
    return mit->second;
}

char32_t MarkRegistry::strip_char(char32_t c) const {
    auto it = decompositions_.find(c);
    return it == decompositions_.end() ? c : it->second.base;
}

char32_t MarkRegistry::fold_char(char32_t c) const {
    auto it = chars_.find(c);
    if (it == chars_.end() || it->second.lower == 0) return c;
    return it->second.lower;
}

bool MarkRegistry::is_letter(char32_t c) const { return chars_.contains(c); }

bool MarkRegistry::is_uppercase_letter(char32_t c) const {
    auto it = chars_.find(c);
    return it != chars_.end() && it->second.uppercase;
}

bool MarkRegistry::is_alphabetic(char32_t c) const {
    if (is_letter(c)) return true;
    // Coarse coverage outside the Latin tables; enough to tell words from
    // punctuation in mixed-script text.
    if (c >= 0x0250 && c <= 0x02AF) return true;                    // IPA extensions
    if (c >= 0x0386 && c <= 0x03FF && c != 0x0387) return true;     // Greek
    if (c >= 0x0400 && c <= 0x052F) return true;                    // Cyrillic
    return false;
}

std::vector<MarkRegistry::Entry> MarkRegistry::entries() const {
    std::vector<Entry> out;
    out.reserve(decompositions_.size());
    for (const auto& [cp, decomp] : decompositions_)
        out.push_back({cp, decomp.base, decomp.mark});
    std::sort(out.begin(), out.end(),
              [](const Entry& a, const Entry& b) { return a.precomposed < b.precomposed; });
    return out;
}

std::u32string MarkRegistry::compose_canonical(std::u32string_view text) const {
    std::u32string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (is_combining_mark(c) && !out.empty()) {
            auto it = canonical_pairs_.find(pair_key(out.back(), c));
            if (it != canonical_pairs_.end()) {
                out.back() = it->second;
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

std::u32string strip_diacritics(std::u32string_view text) {
    const MarkRegistry& reg = MarkRegistry::instance();
    std::u32string out(text);
    for (char32_t& c : out) c = reg.strip_char(c);
    return out;
}

std::string strip_diacritics(const std::string& utf8_text) {
    return utf8::encode(strip_diacritics(utf8::decode(utf8_text)));
}

std::u32string fold_case(std::u32string_view text) {
    const MarkRegistry& reg = MarkRegistry::instance();
    std::u32string out(text);
    for (char32_t& c : out) c = reg.fold_char(c);
    return out;
}

std::u32string normalize_romanian(std::u32string_view text) {
    std::u32string out(text);
    for (char32_t& c : out) {
        switch (c) {
            case U'ş': c = U'ș'; break;  // s-cedilla -> s-comma-below
            case U'Ş': c = U'Ș'; break;
            case U'ţ': c = U'ț'; break;  // t-cedilla -> t-comma-below
            case U'Ţ': c = U'Ț'; break;
            default: break;
        }
    }
    return out;
}

std::string normalize_romanian(const std::string& utf8_text) {
    return utf8::encode(normalize_romanian(utf8::decode(utf8_text)));
}

std::u32string compose_canonical(std::u32string_view text) {
    return MarkRegistry::instance().compose_canonical(text);
}

}  // namespace diacrit
