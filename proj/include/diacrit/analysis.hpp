#ifndef DIACRIT_ANALYSIS_HPP
#define DIACRIT_ANALYSIS_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "diacrit/corpus.hpp"
#include "diacrit/model.hpp"

namespace diacrit {

/// One wrongly restored word with enough surrounding text for a human judge:
/// two sentences each way plus the current sentence split around the word.
struct Misprediction {
    size_t sentence_index = 0;
    size_t word_index = 0;
    std::u32string source;  // stripped input word
    std::u32string system;  // what the restorer produced
    std::u32string gold;    // reference
    std::u32string before_previous, previous;
    std::u32string current_start, current_end;
    std::u32string next, after_next;
};

std::vector<Misprediction> collect_mispredictions(std::span<const std::u32string> hypothesis,
                                                  const MaskedParallelCorpus& corpus,
                                                  bool case_sensitive = false);

struct ConfusionEntry {
    std::u32string system;
    std::u32string gold;
    uint64_t count = 0;
    std::vector<std::u32string> samples;  // up to 3 current sentences
};

/// Grouped by exact (system, gold) pair, most frequent first, ties in
/// lexicographic order.
std::vector<ConfusionEntry> confusion_report(std::span<const Misprediction> mispredictions);

/// Writes the annotation sheet: a header row, then two rows per
/// misprediction (SYSTEM and GOLD variant), twelve tab-separated columns with
/// the three verdict columns left empty. Tabs inside text become spaces.
void export_annotation_items(std::span<const Misprediction> mispredictions, std::ostream& out);

/// One filled row of the annotation sheet on re-import.
struct VerdictRow {
    uint64_t item_id = 0;
    bool is_system = false;  // SYSTEM vs GOLD variant
    std::u32string word;
    bool correct_in_sentence = false;
    bool correct_in_context = false;
    bool has_typo = false;
};

/// Reads back an annotation sheet whose verdict columns have been filled with
/// true/false values.
std::vector<VerdictRow> load_verdicts(std::istream& in);

/// Four-way outcome over typo-free items, judged by correct_in_context.
struct VerdictSummary {
    uint64_t items = 0;          // paired items seen
    uint64_t typo_excluded = 0;  // items dropped because either variant has a typo
    uint64_t analyzed = 0;       // items - typo_excluded
    // Order: system✓gold✓, system✓gold✗, system✗gold✗, system✗gold✓.
    std::array<uint64_t, 4> counts{};
    std::array<long, 4> percentages{};  // of analyzed, rounded half-up
    uint64_t sentence_only = 0;  // correct in sentence but not in context, either variant
};

/// Every item needs exactly one SYSTEM and one GOLD row; PairingError
/// otherwise.
VerdictSummary categorize_verdicts(std::span<const VerdictRow> rows);

struct AmbiguousForm {
    std::string form;  // case-folded stripped form, UTF-8
    uint64_t occurrences = 0;
    std::vector<std::pair<std::string, uint64_t>> candidates;  // restored surface → count
};

struct AmbiguityStats {
    uint64_t total_forms = 0;
    uint64_t ambiguous_forms = 0;
    uint64_t total_occurrences = 0;
    uint64_t ambiguous_occurrences = 0;
    std::vector<AmbiguousForm> top;  // most ambiguous first

    double form_fraction() const {
        return total_forms ? static_cast<double>(ambiguous_forms) / total_forms : 0.0;
    }
    double occurrence_fraction() const {
        return total_occurrences ? static_cast<double>(ambiguous_occurrences) / total_occurrences
                                 : 0.0;
    }
};

/// How often a stripped form was seen with ≥2 distinct restorations, from the
/// model's unigram table. `top_n` limits the detail list.
AmbiguityStats ambiguity_stats(const FrequencyModel& model, size_t top_n = 20);

/// Word-form list with an optional variant-group column.
class Lexicon {
public:
    static Lexicon load(std::istream& in);

    bool contains(const std::u32string& word) const;
    /// Group of a listed word; -1 when the lexicon has no group for it.
    int64_t group_of(const std::u32string& word) const;
    size_t size() const { return forms_.size(); }

private:
    std::map<std::string, int64_t> forms_;  // case-folded UTF-8 form → group id or -1
};

struct LexiconBuckets {
    std::vector<Misprediction> auto_correct;  // system is a listed variant of gold
    std::vector<Misprediction> dubious;       // gold itself unknown to the lexicon
    std::vector<Misprediction> remaining;     // goes to human annotation
};

LexiconBuckets lexicon_filter(std::span<const Misprediction> mispredictions,
                              const Lexicon& lexicon);

}  // namespace diacrit

#endif  // DIACRIT_ANALYSIS_HPP
