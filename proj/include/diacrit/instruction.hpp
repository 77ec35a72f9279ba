#ifndef DIACRIT_INSTRUCTION_HPP
#define DIACRIT_INSTRUCTION_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "diacrit/marks.hpp"

namespace diacrit {

/// One restoration step: put `mark` on the character at `index`.
struct InstructionTuple {
    uint32_t index;
    DiacriticalMark mark;

    bool operator==(const InstructionTuple&) const = default;
};

/// Per-token diacritization recipe: an index-ordered list of tuples, or the
/// empty list meaning "keep the token as is".
class Instruction {
public:
    Instruction() = default;  // KEEP

    /// Tuples must have strictly increasing indices.
    explicit Instruction(std::vector<InstructionTuple> tuples);

    static Instruction keep() { return {}; }

    bool is_keep() const { return tuples_.empty(); }
    const std::vector<InstructionTuple>& tuples() const { return tuples_; }

    /// "1:ACUTE;3:CARON" style, or "<KEEP>".
    std::string serialize() const;

    /// Inverse of serialize; throws ParseError with the failing offset.
    static Instruction parse(std::string_view text);

    bool operator==(const Instruction&) const = default;

private:
    std::vector<InstructionTuple> tuples_;
};

/// Reads restoration steps off an aligned token pair: a tuple for every
/// position where the diacritized side carries a mark the stripped side lacks.
/// Case differences between the sides are tolerated; any other disagreement
/// throws AlignmentError.
Instruction derive_instruction(std::u32string_view stripped, std::u32string_view diacritized);

/// Applies the recipe. If any tuple is out of range or names a composition
/// Unicode does not define, the whole instruction is a no-op and the token
/// comes back unchanged. Case of the marked characters is preserved.
std::u32string apply_instruction(std::u32string_view token, const Instruction& instr);

/// Instruction-frequency accumulator. Counting is mergeable, so corpus
/// partitions can be counted concurrently and combined.
struct InstructionCounts {
    std::map<std::string, uint64_t> by_serialized;
    uint64_t sentences_seen = 0;
    uint64_t sentences_skipped = 0;

    /// Derives and counts over diacritized tokens; the stripped side is
    /// produced internally, so this path cannot misalign.
    void add_sentence(std::span<const std::u32string> diacritized_tokens);

    /// Counts an externally aligned pair; a sentence that fails alignment is
    /// skipped whole and tallied in sentences_skipped.
    void add_parallel_sentence(std::span<const std::u32string> stripped_tokens,
                               std::span<const std::u32string> diacritized_tokens);

    void merge(const InstructionCounts& other);
};

/// Frequency-filtered instruction inventory with dense IDs. KEEP is always
/// retained at ID 0; the rest are ordered by descending count, ties broken by
/// serialized form. Immutable once built.
class InstructionSet {
public:
    static constexpr size_t kKeepId = 0;

    static InstructionSet from_counts(const std::map<std::string, uint64_t>& counts,
                                      uint64_t min_count);

    size_t size() const { return instructions_.size(); }
    uint64_t min_count() const { return min_count_; }

    const Instruction& instruction_of(size_t id) const { return instructions_.at(id); }
    const std::string& serialized_of(size_t id) const { return serialized_.at(id); }
    uint64_t count_of(size_t id) const { return counts_.at(id); }

    std::optional<size_t> id_of(const Instruction& instr) const;
    std::optional<size_t> id_of_serialized(const std::string& serialized) const;

    void save(std::ostream& out) const;
    static InstructionSet load(std::istream& in);

    bool operator==(const InstructionSet& other) const;

private:
    InstructionSet() = default;

    std::vector<Instruction> instructions_;
    std::vector<std::string> serialized_;
    std::vector<uint64_t> counts_;
    std::unordered_map<std::string, size_t> id_by_serialized_;
    uint64_t min_count_ = 2;
};

}  // namespace diacrit

#endif  // DIACRIT_INSTRUCTION_HPP
