#include "diacrit/corpus.hpp"

#include <fstream>
#include <sstream>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/tokenize.hpp"
#include "diacrit/utf8.hpp"

namespace diacrit {

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

}  // namespace

MaskedParallelCorpus::MaskedParallelCorpus(std::vector<CorpusEntry> entries, std::string provenance)
    : entries_(std::move(entries)), provenance_(std::move(provenance)) {
    for (size_t i = 0; i < entries_.size(); ++i) {
        const CorpusEntry& e = entries_[i];
        std::vector<std::u32string> stripped_words = split_words(e.stripped);
        std::vector<std::u32string> gold_words = split_words(e.gold);
        if (stripped_words.size() != gold_words.size() || gold_words.size() != e.mask.size())
            throw AlignmentError("entry " + std::to_string(i) + " of " + provenance_ +
                                 ": word counts " + std::to_string(stripped_words.size()) + "/" +
                                 std::to_string(gold_words.size()) + " vs mask length " +
                                 std::to_string(e.mask.size()));
        for (size_t w = 0; w < e.mask.size(); ++w) {
            if (!e.mask[w]) continue;
            if (strip_diacritics(fold_case(gold_words[w])) != fold_case(stripped_words[w]))
                throw AlignmentError("entry " + std::to_string(i) + " of " + provenance_ +
                                     ": masked word " + std::to_string(w) + " \"" +
                                     utf8::encode(gold_words[w]) +
                                     "\" does not strip to \"" +
                                     utf8::encode(stripped_words[w]) + "\"");
        }
    }
}

void MaskedParallelCorpus::save(const std::string& prefix) const {
    std::ofstream strip(prefix + ".strip.txt", std::ios::binary);
    std::ofstream gold(prefix + ".gold.txt", std::ios::binary);
    std::ofstream mask(prefix + ".mask.txt", std::ios::binary);
    if (!strip || !gold || !mask) throw IoError("cannot write corpus files at " + prefix);
    for (const CorpusEntry& e : entries_) {
        strip << utf8::encode(e.stripped) << "\n";
        gold << utf8::encode(e.gold) << "\n";
        for (size_t w = 0; w < e.mask.size(); ++w) {
            if (w) mask << ' ';
            mask << (e.mask[w] ? '1' : '0');
        }
        mask << "\n";
    }
    if (!strip.flush() || !gold.flush() || !mask.flush())
        throw IoError("short write saving corpus at " + prefix);
}

MaskedParallelCorpus MaskedParallelCorpus::from_files(const std::string& gold_path,
                                                      const std::string& strip_path,
                                                      const std::string& mask_path) {
    std::ifstream gold_in = open_or_throw(gold_path);
    std::vector<std::u32string> gold_lines = read_lines(gold_in);

    std::vector<std::u32string> strip_lines;
    if (!strip_path.empty()) {
        std::ifstream strip_in = open_or_throw(strip_path);
        strip_lines = read_lines(strip_in);
        if (strip_lines.size() != gold_lines.size())
            throw AlignmentError(strip_path + ": " + std::to_string(strip_lines.size()) +
                                 " sentences vs " + std::to_string(gold_lines.size()) + " in " +
                                 gold_path);
    }

    std::vector<CorpusEntry> entries;
    entries.reserve(gold_lines.size());
    for (size_t i = 0; i < gold_lines.size(); ++i) {
        CorpusEntry e;
        e.gold = std::move(gold_lines[i]);
        e.stripped = strip_path.empty() ? strip_diacritics(e.gold) : std::move(strip_lines[i]);
        e.mask.assign(split_words(e.gold).size(), true);
        entries.push_back(std::move(e));
    }

    if (!mask_path.empty()) {
        std::ifstream mask_in = open_or_throw(mask_path);
        std::string line;
        size_t row = 0;
        size_t line_no = 0;
        while (std::getline(mask_in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (row >= entries.size())
                throw AlignmentError(mask_path + ": more mask rows than sentences");
            std::vector<bool> mask;
            for (size_t i = 0; i < line.size(); ++i) {
                char c = line[i];
                if (c == ' ') continue;
                if (c != '0' && c != '1')
                    throw ParseError(mask_path + " line " + std::to_string(line_no) +
                                         ": mask entries must be 0 or 1",
                                     i);
                mask.push_back(c == '1');
            }
            entries[row++].mask = std::move(mask);
        }
        if (row != entries.size())
            throw AlignmentError(mask_path + ": " + std::to_string(row) + " mask rows vs " +
                                 std::to_string(entries.size()) + " sentences");
    }
    return MaskedParallelCorpus(std::move(entries), gold_path);
}

MaskedParallelCorpus build_parallel(std::istream& gold_text, const std::string& provenance,
                                    const ParallelBuildOptions& options) {
    std::vector<CorpusEntry> entries;
    for (std::u32string& line : read_lines(gold_text, !options.keep_composition)) {
        if (options.romanian_cedillas) line = normalize_romanian(line);
        CorpusEntry e;
        e.gold = std::move(line);
        e.stripped = strip_diacritics(e.gold);
        e.mask.assign(split_words(e.gold).size(), true);
        if (e.mask.empty()) continue;  // whitespace-only line
        entries.push_back(std::move(e));
    }
    return MaskedParallelCorpus(std::move(entries), provenance);
}

CorpusStats corpus_stats(const MaskedParallelCorpus& corpus) {
    CorpusStats stats;
    stats.sentences = corpus.size();
    for (const CorpusEntry& e : corpus.entries()) {
        stats.words += e.mask.size();
        for (bool m : e.mask) stats.evaluated += m;
    }
    return stats;
}

std::vector<std::u32string> read_lines(std::istream& in, bool compose) {
    std::vector<std::u32string> lines;
    std::string raw;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        std::u32string line = utf8::decode(raw);
        lines.push_back(compose ? compose_canonical(line) : std::move(line));
    }
    return lines;
}

}  // namespace diacrit
