#include "diacrit/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/rng.hpp"
#include "diacrit/tokenize.hpp"

namespace diacrit {

namespace {

bool has_alpha(const std::u32string& word) {
    const MarkRegistry& reg = MarkRegistry::instance();
    return std::any_of(word.begin(), word.end(),
                       [&](char32_t c) { return reg.is_alphabetic(c); });
}

}  // namespace

std::vector<SentenceScore> score_sentences(std::span<const std::u32string> hypothesis,
                                           const MaskedParallelCorpus& corpus,
                                           bool case_sensitive) {
    if (hypothesis.size() != corpus.size())
        throw LengthMismatchError("hypothesis has " + std::to_string(hypothesis.size()) +
                                  " sentences, corpus has " + std::to_string(corpus.size()));
    std::vector<SentenceScore> scores(corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) {
        const CorpusEntry& entry = corpus.entries()[i];
        std::vector<std::u32string> hyp_words = split_words(hypothesis[i]);
        std::vector<std::u32string> gold_words = split_words(entry.gold);
        if (hyp_words.size() != gold_words.size())
            throw LengthMismatchError("sentence " + std::to_string(i) + ": hypothesis has " +
                                      std::to_string(hyp_words.size()) + " words, gold has " +
                                      std::to_string(gold_words.size()));
        for (size_t w = 0; w < gold_words.size(); ++w) {
            if (!entry.mask[w] || !has_alpha(gold_words[w])) continue;
            ++scores[i].evaluated;
            bool correct = case_sensitive
                               ? hyp_words[w] == gold_words[w]
                               : fold_case(hyp_words[w]) == fold_case(gold_words[w]);
            if (correct) ++scores[i].correct;
        }
    }
    return scores;
}

EvalResult alpha_word_accuracy(std::span<const std::u32string> hypothesis,
                               const MaskedParallelCorpus& corpus, bool case_sensitive) {
    std::vector<SentenceScore> scores = score_sentences(hypothesis, corpus, case_sensitive);
    EvalResult result;
    for (const SentenceScore& s : scores) {
        result.correct += s.correct;
        result.evaluated += s.evaluated;
    }
    if (result.evaluated == 0)
        throw EmptyEvaluationError("no words left to evaluate (all masked or non-alphabetic)");
    result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.evaluated);
    return result;
}

namespace {

double percentile(const std::vector<double>& sorted, double q) {
    // Linear interpolation between closest ranks.
    double h = q * static_cast<double>(sorted.size() - 1);
    size_t lo = static_cast<size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::pair<double, double> bootstrap_ci(std::span<const SentenceScore> scores, uint64_t resamples,
                                       double level, uint64_t seed, unsigned jobs) {
    // Sentences with nothing to evaluate carry no signal; resampling over
    // them would only let a replicate end up 0/0.
    std::vector<SentenceScore> pool;
    for (const SentenceScore& s : scores)
        if (s.evaluated > 0) pool.push_back(s);
    if (pool.empty()) throw EmptyEvaluationError("no scorable sentences for bootstrap");
    if (resamples == 0) throw EmptyEvaluationError("bootstrap needs at least one resample");

    std::vector<double> replicate_accuracy(resamples);
    auto run_range = [&](uint64_t begin, uint64_t end) {
        for (uint64_t r = begin; r < end; ++r) {
            SplitMix64 rng = SplitMix64::substream(seed, r);
            uint64_t correct = 0;
            uint64_t evaluated = 0;
            for (size_t draw = 0; draw < pool.size(); ++draw) {
                const SentenceScore& s = pool[rng.below(pool.size())];
                correct += s.correct;
                evaluated += s.evaluated;
            }
            replicate_accuracy[r] =
                static_cast<double>(correct) / static_cast<double>(evaluated);
        }
    };

    if (jobs <= 1 || resamples < 2) {
        run_range(0, resamples);
    } else {
        unsigned workers = std::min<uint64_t>(jobs, resamples);
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            uint64_t begin = resamples * w / workers;
            uint64_t end = resamples * (w + 1) / workers;
            threads.emplace_back(run_range, begin, end);
        }
        for (std::thread& t : threads) t.join();
    }

    std::sort(replicate_accuracy.begin(), replicate_accuracy.end());
    double alpha = (1.0 - level) / 2.0;
    return {percentile(replicate_accuracy, alpha), percentile(replicate_accuracy, 1.0 - alpha)};
}

long error_reduction(double baseline_accuracy, double new_accuracy) {
    double one = baseline_accuracy > 1.0 || new_accuracy > 1.0 ? 100.0 : 1.0;
    if (baseline_accuracy >= one)
        throw DiacritError("DomainError", "error reduction undefined for a perfect baseline");
    return std::lround((new_accuracy - baseline_accuracy) / (one - baseline_accuracy) * 100.0);
}

}  // namespace diacrit
