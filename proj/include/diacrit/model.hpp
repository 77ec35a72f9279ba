#ifndef DIACRIT_MODEL_HPP
#define DIACRIT_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diacrit/instruction.hpp"
#include "diacrit/tokenize.hpp"

namespace diacrit {

/// Per-token scorer over instruction IDs. Implementations must return one
/// finite score vector of instruction-set size per token.
class InstructionClassifier {
public:
    virtual ~InstructionClassifier() = default;

    virtual const InstructionSet& instruction_set() const = 0;

    virtual std::vector<std::vector<double>> score(const TokenizedSentence& stripped) const = 0;

    /// Argmax per token; ties break toward the smaller ID (the globally more
    /// frequent instruction). Malformed score vectors degrade to KEEP.
    virtual std::vector<size_t> classify(const TokenizedSentence& stripped) const;
};

enum class Granularity { kWord, kSubword };

/// Count-based baseline: per case-folded stripped form, how often each
/// instruction was the right answer; optionally the same keyed by the
/// (previous, form, next) triple. Classification backs off context → form →
/// KEEP.
class FrequencyModel : public InstructionClassifier {
public:
    struct TrainOptions {
        uint64_t min_count = 2;          // instruction-set frequency floor
        Granularity granularity = Granularity::kWord;
        size_t vocab_size = 8000;        // subword inventory cap
        size_t clip_tokens = 0;          // 0 = no per-sentence token limit
    };

    static FrequencyModel train(std::span<const std::u32string> gold_lines);
    static FrequencyModel train(std::span<const std::u32string> gold_lines,
                                const TrainOptions& options);

    /// Training with a fixed, pre-extracted instruction set.
    static FrequencyModel train_with_set(std::span<const std::u32string> gold_lines,
                                         InstructionSet set, const TrainOptions& options);

    const InstructionSet& instruction_set() const override { return set_; }
    Granularity granularity() const { return granularity_; }
    const SubwordVocabulary* vocabulary() const {
        return granularity_ == Granularity::kSubword ? &vocab_ : nullptr;
    }

    std::vector<std::vector<double>> score(const TokenizedSentence& stripped) const override;
    std::vector<size_t> classify(const TokenizedSentence& stripped) const override;

    /// Unigram-only variant of classify (no context table consulted).
    std::vector<size_t> classify_unigram(const TokenizedSentence& stripped) const;

    void save(std::ostream& out) const;
    static FrequencyModel load(std::istream& in);

    /// form → (instruction ID → count); keys are case-folded UTF-8.
    const std::map<std::string, std::map<size_t, uint64_t>>& unigram_counts() const {
        return unigram_;
    }
    size_t context_entries() const { return trigram_.size(); }

private:
    friend struct FrequencyModelBuilder;
    FrequencyModel() = default;

    std::optional<size_t> argmax(const std::map<size_t, uint64_t>& counts) const;

    InstructionSet set_ = InstructionSet::from_counts({}, 2);
    Granularity granularity_ = Granularity::kWord;
    SubwordVocabulary vocab_;
    std::map<std::string, std::map<size_t, uint64_t>> unigram_;
    std::map<std::string, std::map<size_t, uint64_t>> trigram_;  // key: prev\tform\tnext
};

/// Restores one stripped sentence: tokenize, classify, apply, splice. Any
/// classifier failure degrades to KEEP, so output always comes back.
std::u32string restore_sentence(const InstructionClassifier& classifier,
                                const SubwordVocabulary* vocab, std::u32string_view stripped);

/// Line-protocol bridge to an external scorer process: one stripped tokenized
/// sentence out (space-joined, continuations "##"-prefixed), one
/// whitespace-separated list of instruction IDs back. Anything malformed
/// degrades to KEEP for the affected tokens.
class ExternalScorerClassifier : public InstructionClassifier {
public:
    ExternalScorerClassifier(std::string command, InstructionSet set);
    ~ExternalScorerClassifier() override;

    const InstructionSet& instruction_set() const override { return set_; }
    std::vector<std::vector<double>> score(const TokenizedSentence& stripped) const override;
    std::vector<size_t> classify(const TokenizedSentence& stripped) const override;

private:
    struct Process;
    InstructionSet set_;
    std::unique_ptr<Process> process_;
};

}  // namespace diacrit

#endif  // DIACRIT_MODEL_HPP
