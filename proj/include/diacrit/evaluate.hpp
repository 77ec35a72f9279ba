#ifndef DIACRIT_EVALUATE_HPP
#define DIACRIT_EVALUATE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diacrit/corpus.hpp"

namespace diacrit {

struct EvalResult {
    uint64_t correct = 0;
    uint64_t evaluated = 0;
    double accuracy = 0.0;
    double ci_low = -1.0;   // negative while unset
    double ci_high = -1.0;
    uint64_t resamples = 0;
    uint64_t seed = 0;

    bool has_ci() const { return ci_low >= 0.0; }
};

struct SentenceScore {
    uint64_t correct = 0;
    uint64_t evaluated = 0;
};

/// Per-sentence (correct, evaluated) counts. A word counts iff its mask is
/// true and it has at least one alphabetic character; it is correct iff it
/// equals the gold word, case-folded unless case_sensitive.
std::vector<SentenceScore> score_sentences(std::span<const std::u32string> hypothesis,
                                           const MaskedParallelCorpus& corpus,
                                           bool case_sensitive = false);

/// Pooled accuracy over the corpus; throws EmptyEvaluationError when nothing
/// is evaluated, LengthMismatchError naming the first misaligned sentence.
EvalResult alpha_word_accuracy(std::span<const std::u32string> hypothesis,
                               const MaskedParallelCorpus& corpus, bool case_sensitive = false);

/// Percentile-method bootstrap over sentence resamples. Deterministic for a
/// fixed seed regardless of the thread count: replicate r draws from its own
/// seeded substream.
std::pair<double, double> bootstrap_ci(std::span<const SentenceScore> scores, uint64_t resamples,
                                       double level, uint64_t seed, unsigned jobs = 1);

/// Relative error-rate shrinkage in percent, rounded to nearest. Accepts
/// accuracies on either the [0,1] or the [0,100] scale (both arguments on the
/// same scale).
long error_reduction(double baseline_accuracy, double new_accuracy);

}  // namespace diacrit

#endif  // DIACRIT_EVALUATE_HPP
