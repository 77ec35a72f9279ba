#ifndef DIACRIT_TOKENIZE_HPP
#define DIACRIT_TOKENIZE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace diacrit {

/// One token of a sentence. `surface` holds exactly the characters that
/// instruction indices address — the "##" continuation marker is a
/// serialization convention and never appears here.
struct Token {
    std::u32string surface;
    bool is_continuation = false;
    size_t begin = 0;  // [begin, end) character offsets into the source sentence
    size_t end = 0;

    bool operator==(const Token&) const = default;
};

using TokenizedSentence = std::vector<Token>;

/// Maximal runs of alphabetic characters, maximal runs of ASCII digits, and
/// single other non-space characters. Whitespace survives only in the spans.
TokenizedSentence word_tokenize(std::u32string_view sentence);

/// Whitespace-delimited words; the unit of masks and evaluation.
std::vector<std::u32string> split_words(std::u32string_view sentence);

/// Greedy longest-match subword inventory: the most frequent character
/// n-grams of a corpus, word-initial and continuation entries kept apart.
/// Single characters are always retained so segmentation is total.
class SubwordVocabulary {
public:
    SubwordVocabulary() = default;

    /// word_counts: case-folded stripped word → occurrence count.
    static SubwordVocabulary learn(const std::vector<std::pair<std::u32string, uint64_t>>& word_counts,
                                   size_t max_size = 8000, size_t max_ngram = 8);

    bool contains(std::u32string_view piece, bool continuation) const;
    size_t size() const { return initial_.size() + continuation_.size(); }
    size_t max_entry_length() const { return max_entry_length_; }

    /// One entry per line, continuation entries prefixed "##", lines sorted.
    void save(std::ostream& out) const;
    static SubwordVocabulary load(std::istream& in);

    bool operator==(const SubwordVocabulary& other) const;

private:
    std::unordered_set<std::u32string> initial_;
    std::unordered_set<std::u32string> continuation_;
    size_t max_entry_length_ = 1;
};

/// Splits one word token by greedy longest match over its case-folded
/// surface; pieces keep the original-cased characters and absolute spans.
std::vector<Token> subword_tokenize(const Token& word, const SubwordVocabulary& vocab);

/// word_tokenize, then subword-split each word when a vocabulary is given.
TokenizedSentence tokenize_line(std::u32string_view sentence, const SubwordVocabulary* vocab);

/// Splices restored surfaces back over their spans; text between spans is
/// preserved verbatim. Spans must not overlap.
std::u32string detokenize(std::u32string_view original, const TokenizedSentence& tokens);

}  // namespace diacrit

#endif  // DIACRIT_TOKENIZE_HPP
