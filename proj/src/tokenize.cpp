#include "diacrit/tokenize.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/utf8.hpp"

namespace diacrit {

TokenizedSentence word_tokenize(std::u32string_view sentence) {
    const MarkRegistry& reg = MarkRegistry::instance();
    TokenizedSentence tokens;
    size_t i = 0;
    while (i < sentence.size()) {
        char32_t c = sentence[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        size_t begin = i;
        if (reg.is_alphabetic(c)) {
            while (i < sentence.size() && reg.is_alphabetic(sentence[i])) ++i;
        } else if (is_ascii_digit(c)) {
            while (i < sentence.size() && is_ascii_digit(sentence[i])) ++i;
        } else {
            ++i;
        }
        tokens.push_back({std::u32string(sentence.substr(begin, i - begin)), false, begin, i});
    }
    return tokens;
}

std::vector<std::u32string> split_words(std::u32string_view sentence) {
    std::vector<std::u32string> words;
    size_t i = 0;
    while (i < sentence.size()) {
        if (is_space(sentence[i])) {
            ++i;
            continue;
        }
        size_t begin = i;
        while (i < sentence.size() && !is_space(sentence[i])) ++i;
        words.emplace_back(sentence.substr(begin, i - begin));
    }
    return words;
}

SubwordVocabulary SubwordVocabulary::learn(
    const std::vector<std::pair<std::u32string, uint64_t>>& word_counts, size_t max_size,
    size_t max_ngram) {
    // Entry identity is (continuation?, text); counts are occurrence-weighted.
    std::map<std::pair<bool, std::u32string>, uint64_t> ngram_counts;
    for (const auto& [word, count] : word_counts) {
        for (size_t pos = 0; pos < word.size(); ++pos) {
            size_t limit = std::min(max_ngram, word.size() - pos);
            for (size_t len = 1; len <= limit; ++len)
                ngram_counts[{pos > 0, word.substr(pos, len)}] += count;
        }
    }

    SubwordVocabulary vocab;
    struct Candidate {
        uint64_t count;
        bool continuation;
        std::u32string text;
    };
    std::vector<Candidate> longer;
    for (auto& [key, count] : ngram_counts) {
        const auto& [continuation, text] = key;
        if (text.size() == 1) {
            // Single characters are the segmentation floor; never evicted.
            (continuation ? vocab.continuation_ : vocab.initial_).insert(text);
        } else {
            longer.push_back({count, continuation, text});
        }
    }
    std::sort(longer.begin(), longer.end(), [](const Candidate& a, const Candidate& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.text != b.text) return a.text < b.text;
        return a.continuation < b.continuation;
    });
    for (const Candidate& c : longer) {
        if (vocab.size() >= max_size) break;
        (c.continuation ? vocab.continuation_ : vocab.initial_).insert(c.text);
        vocab.max_entry_length_ = std::max(vocab.max_entry_length_, c.text.size());
    }
    return vocab;
}

bool SubwordVocabulary::contains(std::u32string_view piece, bool continuation) const {
    const auto& set = continuation ? continuation_ : initial_;
    return set.contains(std::u32string(piece));
}

void SubwordVocabulary::save(std::ostream& out) const {
    out << "#diacrit-vocab v1\n";
    std::vector<std::string> lines;
    lines.reserve(size());
    for (const std::u32string& e : initial_) lines.push_back(utf8::encode(e));
    for (const std::u32string& e : continuation_) lines.push_back("##" + utf8::encode(e));
    std::sort(lines.begin(), lines.end());
    for (const std::string& line : lines) out << line << "\n";
}

SubwordVocabulary SubwordVocabulary::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "#diacrit-vocab v1")
        throw ModelFormatError("bad vocabulary header");
    SubwordVocabulary vocab;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        bool continuation = line.starts_with("##");
        std::u32string text = utf8::decode(continuation ? line.substr(2) : line);
        if (text.empty()) throw ModelFormatError("empty vocabulary entry");
        (continuation ? vocab.continuation_ : vocab.initial_).insert(text);
        vocab.max_entry_length_ = std::max(vocab.max_entry_length_, text.size());
    }
    return vocab;
}

bool SubwordVocabulary::operator==(const SubwordVocabulary& other) const {
    return initial_ == other.initial_ && continuation_ == other.continuation_;
}

std::vector<Token> subword_tokenize(const Token& word, const SubwordVocabulary& vocab) {
    std::u32string folded = fold_case(word.surface);
    std::vector<Token> pieces;
    size_t pos = 0;
    while (pos < folded.size()) {
        size_t best = 1;  // single-character fallback keeps segmentation total
        size_t limit = std::min(vocab.max_entry_length(), folded.size() - pos);
        for (size_t len = limit; len >= 2; --len) {
            if (vocab.contains(std::u32string_view(folded).substr(pos, len), pos > 0)) {
                best = len;
                break;
            }
        }
        pieces.push_back({word.surface.substr(pos, best), pos > 0, word.begin + pos,
                          word.begin + pos + best});
        pos += best;
    }
    return pieces;
}

TokenizedSentence tokenize_line(std::u32string_view sentence, const SubwordVocabulary* vocab) {
    TokenizedSentence words = word_tokenize(sentence);
    if (!vocab) return words;
    TokenizedSentence out;
    for (const Token& word : words) {
        std::vector<Token> pieces = subword_tokenize(word, *vocab);
        out.insert(out.end(), pieces.begin(), pieces.end());
    }
    return out;
}

std::u32string detokenize(std::u32string_view original, const TokenizedSentence& tokens) {
    std::vector<const Token*> ordered;
    ordered.reserve(tokens.size());
    for (const Token& t : tokens) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](const Token* a, const Token* b) { return a->begin < b->begin; });

    std::u32string out;
    size_t pos = 0;
    for (const Token* t : ordered) {
        if (t->begin < pos)
            throw SpanOverlapError("token spans overlap at offset " + std::to_string(t->begin));
        if (t->end > original.size() || t->begin > t->end)
            throw SpanOverlapError("token span out of range at offset " + std::to_string(t->begin));
        out += original.substr(pos, t->begin - pos);
        out += t->surface;
        pos = t->end;
    }
    out += original.substr(pos);
    return out;
}

}  // namespace diacrit
