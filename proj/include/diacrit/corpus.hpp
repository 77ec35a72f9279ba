#ifndef DIACRIT_CORPUS_HPP
#define DIACRIT_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace diacrit {

struct CorpusEntry {
    std::u32string stripped;
    std::u32string gold;
    std::vector<bool> mask;  // one flag per whitespace word; true = evaluate

    bool operator==(const CorpusEntry&) const = default;
};

/// Aligned (stripped, gold, mask) sentences. The constructor enforces word
/// alignment and, for every mask-true word, that the stripped side really is
/// the gold word minus marks (up to case).
class MaskedParallelCorpus {
public:
    MaskedParallelCorpus(std::vector<CorpusEntry> entries, std::string provenance);

    const std::vector<CorpusEntry>& entries() const { return entries_; }
    const std::string& provenance() const { return provenance_; }
    size_t size() const { return entries_.size(); }

    /// Writes <prefix>.strip.txt, <prefix>.gold.txt, <prefix>.mask.txt.
    void save(const std::string& prefix) const;

    /// Gold file required; missing strip/mask files are derived (strip by
    /// stripping, mask all-true).
    static MaskedParallelCorpus from_files(const std::string& gold_path,
                                           const std::string& strip_path = "",
                                           const std::string& mask_path = "");

private:
    std::vector<CorpusEntry> entries_;
    std::string provenance_;
};

struct ParallelBuildOptions {
    bool keep_composition = false;  // skip canonical composition of input
    bool romanian_cedillas = false; // fix legacy cedilla encodings first
};

/// One diacritized sentence per line in; stripped side built by stripping;
/// masks all-true. Blank lines are skipped, CRLF tolerated.
MaskedParallelCorpus build_parallel(std::istream& gold_text, const std::string& provenance,
                                    const ParallelBuildOptions& options = {});

struct CorpusStats {
    uint64_t sentences = 0;
    uint64_t words = 0;
    uint64_t evaluated = 0;  // mask-true words

    bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(const MaskedParallelCorpus& corpus);

/// Lines of a UTF-8 text stream: CR stripped, optionally composed; blank
/// lines dropped. Shared by every line-oriented reader.
std::vector<std::u32string> read_lines(std::istream& in, bool compose = true);

}  // namespace diacrit

#endif  // DIACRIT_CORPUS_HPP
