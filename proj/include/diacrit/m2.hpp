#ifndef DIACRIT_M2_HPP
#define DIACRIT_M2_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "diacrit/corpus.hpp"

namespace diacrit {

/// One "A" line: replace source tokens [start, end) by the correction tokens.
/// start = end = -1 is the no-op convention and is carried but never applied.
struct M2Edit {
    int64_t start = 0;
    int64_t end = 0;
    std::string type;
    std::vector<std::u32string> correction;  // empty for deletions (-NONE-)
    int64_t annotator = 0;
};

struct M2Sentence {
    std::vector<std::u32string> tokens;
    std::vector<M2Edit> edits;
    size_t line = 0;  // source line of the S record, for error reporting
};

struct M2Document {
    std::vector<M2Sentence> sentences;
};

/// "S <tokens>" lines with their "A <start> <end>|||<type>|||<correction>|||
/// <required>|||<comment>|||<annotator>" lines, blank-line separated.
M2Document parse_m2(std::istream& in);

enum class EditClass { kDiacriticOrCasing, kOther };

/// An edit only fixes diacritics/casing when it is token-count preserving and
/// every token pair is identical after stripping and case folding. The M2
/// type label plays no part.
EditClass classify_edit(std::span<const std::u32string> source_span,
                        std::span<const std::u32string> correction);

/// Applies the chosen annotator's diacritic/casing edits to build gold
/// targets; words inside any of their other edits are masked out but left in
/// the sentence. Overlapping edits of one annotator are a format error.
MaskedParallelCorpus realize_targets(const M2Document& doc, int64_t annotator);

}  // namespace diacrit

#endif  // DIACRIT_M2_HPP
