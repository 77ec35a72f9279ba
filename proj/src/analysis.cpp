#include "diacrit/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/tokenize.hpp"
#include "diacrit/utf8.hpp"

namespace diacrit {

namespace {

bool has_alpha(const std::u32string& word) {
    const MarkRegistry& reg = MarkRegistry::instance();
    return std::any_of(word.begin(), word.end(),
                       [&](char32_t c) { return reg.is_alphabetic(c); });
}

std::u32string join_words(std::span<const std::u32string> words) {
    std::u32string out;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i) out += U' ';
        out += words[i];
    }
    return out;
}

}  // namespace

std::vector<Misprediction> collect_mispredictions(std::span<const std::u32string> hypothesis,
                                                  const MaskedParallelCorpus& corpus,
                                                  bool case_sensitive) {
    if (hypothesis.size() != corpus.size())
        throw LengthMismatchError("hypothesis has " + std::to_string(hypothesis.size()) +
                                  " sentences, corpus has " + std::to_string(corpus.size()));
    std::vector<Misprediction> out;
    for (size_t i = 0; i < corpus.size(); ++i) {
        const CorpusEntry& entry = corpus.entries()[i];
        std::vector<std::u32string> hyp_words = split_words(hypothesis[i]);
        std::vector<std::u32string> gold_words = split_words(entry.gold);
        std::vector<std::u32string> src_words = split_words(entry.stripped);
        if (hyp_words.size() != gold_words.size())
            throw LengthMismatchError("sentence " + std::to_string(i) + ": hypothesis has " +
                                      std::to_string(hyp_words.size()) + " words, gold has " +
                                      std::to_string(gold_words.size()));
        for (size_t w = 0; w < gold_words.size(); ++w) {
            if (!entry.mask[w] || !has_alpha(gold_words[w])) continue;
            bool correct = case_sensitive
                               ? hyp_words[w] == gold_words[w]
                               : fold_case(hyp_words[w]) == fold_case(gold_words[w]);
            if (correct) continue;
            Misprediction m;
            m.sentence_index = i;
            m.word_index = w;
            m.source = w < src_words.size() ? src_words[w] : std::u32string();
            m.system = hyp_words[w];
            m.gold = gold_words[w];
            if (i >= 2) m.before_previous = corpus.entries()[i - 2].gold;
            if (i >= 1) m.previous = corpus.entries()[i - 1].gold;
            if (i + 1 < corpus.size()) m.next = corpus.entries()[i + 1].gold;
            if (i + 2 < corpus.size()) m.after_next = corpus.entries()[i + 2].gold;
            m.current_start = join_words({gold_words.data(), w});
            m.current_end = join_words({gold_words.data() + w + 1, gold_words.size() - w - 1});
            out.push_back(std::move(m));
        }
    }
    return out;
}

std::vector<ConfusionEntry> confusion_report(std::span<const Misprediction> mispredictions) {
    std::map<std::pair<std::u32string, std::u32string>, ConfusionEntry> grouped;
    for (const Misprediction& m : mispredictions) {
        ConfusionEntry& entry = grouped[{m.system, m.gold}];
        if (entry.count == 0) {
            entry.system = m.system;
            entry.gold = m.gold;
        }
        ++entry.count;
        if (entry.samples.size() < 3) {
            std::u32string sentence = m.current_start;
            if (!sentence.empty()) sentence += U' ';
            sentence += m.gold;
            if (!m.current_end.empty()) {
                sentence += U' ';
                sentence += m.current_end;
            }
            entry.samples.push_back(std::move(sentence));
        }
    }
    std::vector<ConfusionEntry> report;
    report.reserve(grouped.size());
    for (auto& [key, entry] : grouped) report.push_back(std::move(entry));
    std::stable_sort(report.begin(), report.end(),
                     [](const ConfusionEntry& a, const ConfusionEntry& b) {
                         return a.count > b.count;  // map order already breaks ties
                     });
    return report;
}

namespace {

constexpr const char* kAnnotationHeader =
    "item_id\tvariant\tbefore_previous\tprevious\tcurrent_start\tcurrent_word\tcurrent_end"
    "\tnext\tafter_next\tcorrect_in_sentence\tcorrect_in_context\thas_typo";

std::string sanitize(const std::u32string& text) {
    std::string out = utf8::encode(text);
    std::replace(out.begin(), out.end(), '\t', ' ');
    return out;
}

}  // namespace

void export_annotation_items(std::span<const Misprediction> mispredictions, std::ostream& out) {
    out << kAnnotationHeader << "\n";
    uint64_t item_id = 0;
    for (const Misprediction& m : mispredictions) {
        ++item_id;
        for (bool system_variant : {true, false}) {
            out << item_id << '\t' << (system_variant ? "SYSTEM" : "GOLD") << '\t'
                << sanitize(m.before_previous) << '\t' << sanitize(m.previous) << '\t'
                << sanitize(m.current_start) << '\t'
                << sanitize(system_variant ? m.system : m.gold) << '\t'
                << sanitize(m.current_end) << '\t' << sanitize(m.next) << '\t'
                << sanitize(m.after_next) << "\t\t\t\n";
        }
    }
}

namespace {

bool parse_bool(std::string_view text, size_t line_no) {
    if (text == "true" || text == "TRUE" || text == "1") return true;
    if (text == "false" || text == "FALSE" || text == "0") return false;
    throw ParseError("verdict must be true/false, got \"" + std::string(text) + "\"", line_no);
}

}  // namespace

std::vector<VerdictRow> load_verdicts(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty annotation file", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kAnnotationHeader) throw ParseError("unrecognized annotation header", 1);

    std::vector<VerdictRow> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> cols;
        size_t pos = 0;
        while (true) {
            size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) {
                cols.push_back(std::string_view(line).substr(pos));
                break;
            }
            cols.push_back(std::string_view(line).substr(pos, tab - pos));
            pos = tab + 1;
        }
        if (cols.size() != 12)
            throw ParseError("annotation row needs 12 columns, got " +
                                 std::to_string(cols.size()),
                             line_no);
        VerdictRow row;
        auto [ptr, ec] =
            std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), row.item_id);
        if (ec != std::errc() || ptr != cols[0].data() + cols[0].size())
            throw ParseError("bad item id \"" + std::string(cols[0]) + "\"", line_no);
        if (cols[1] == "SYSTEM") {
            row.is_system = true;
        } else if (cols[1] == "GOLD") {
            row.is_system = false;
        } else {
            throw ParseError("variant must be SYSTEM or GOLD, got \"" + std::string(cols[1]) +
                                 "\"",
                             line_no);
        }
        row.word = utf8::decode(std::string(cols[5]));
        row.correct_in_sentence = parse_bool(cols[9], line_no);
        row.correct_in_context = parse_bool(cols[10], line_no);
        row.has_typo = parse_bool(cols[11], line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

VerdictSummary categorize_verdicts(std::span<const VerdictRow> rows) {
    struct ItemPair {
        const VerdictRow* system = nullptr;
        const VerdictRow* gold = nullptr;
    };
    std::map<uint64_t, ItemPair> items;
    for (const VerdictRow& row : rows) {
        ItemPair& pair = items[row.item_id];
        const VerdictRow*& slot = row.is_system ? pair.system : pair.gold;
        if (slot)
            throw PairingError("item " + std::to_string(row.item_id) + " has duplicate " +
                               (row.is_system ? "SYSTEM" : "GOLD") + " verdicts");
        slot = &row;
    }

    VerdictSummary summary;
    summary.items = items.size();
    for (const auto& [id, pair] : items) {
        if (!pair.system || !pair.gold)
            throw PairingError("item " + std::to_string(id) + " lacks its " +
                               (pair.system ? "GOLD" : "SYSTEM") + " verdict");
        if (pair.system->has_typo || pair.gold->has_typo) {
            ++summary.typo_excluded;
            continue;
        }
        ++summary.analyzed;
        bool sys_ok = pair.system->correct_in_context;
        bool gold_ok = pair.gold->correct_in_context;
        size_t category = sys_ok ? (gold_ok ? 0 : 1) : (gold_ok ? 3 : 2);
        ++summary.counts[category];
        for (const VerdictRow* row : {pair.system, pair.gold})
            if (row->correct_in_sentence && !row->correct_in_context) ++summary.sentence_only;
    }
    for (size_t c = 0; c < 4; ++c) {
        summary.percentages[c] =
            summary.analyzed == 0
                ? 0
                : static_cast<long>((200 * summary.counts[c] + summary.analyzed) /
                                    (2 * summary.analyzed));
    }
    return summary;
}

AmbiguityStats ambiguity_stats(const FrequencyModel& model, size_t top_n) {
    AmbiguityStats stats;
    const InstructionSet& set = model.instruction_set();
    std::vector<AmbiguousForm> ambiguous;
    for (const auto& [form, counts] : model.unigram_counts()) {
        uint64_t occurrences = 0;
        for (const auto& [id, count] : counts) occurrences += count;
        ++stats.total_forms;
        stats.total_occurrences += occurrences;
        if (counts.size() < 2) continue;
        ++stats.ambiguous_forms;
        stats.ambiguous_occurrences += occurrences;

        AmbiguousForm af;
        af.form = form;
        af.occurrences = occurrences;
        std::u32string form_chars = utf8::decode(form);
        for (const auto& [id, count] : counts)
            af.candidates.emplace_back(
                utf8::encode(apply_instruction(form_chars, set.instruction_of(id))), count);
        std::sort(af.candidates.begin(), af.candidates.end(),
                  [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                  });
        ambiguous.push_back(std::move(af));
    }
    std::sort(ambiguous.begin(), ambiguous.end(), [](const AmbiguousForm& a, const AmbiguousForm& b) {
        if (a.candidates.size() != b.candidates.size())
            return a.candidates.size() > b.candidates.size();
        if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
        return a.form < b.form;
    });
    if (ambiguous.size() > top_n) ambiguous.resize(top_n);
    stats.top = std::move(ambiguous);
    return stats;
}

Lexicon Lexicon::load(std::istream& in) {
    Lexicon lexicon;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        std::string form = tab == std::string::npos ? line : line.substr(0, tab);
        int64_t group = -1;
        if (tab != std::string::npos) {
            std::string_view rest = std::string_view(line).substr(tab + 1);
            auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), group);
            if (ec != std::errc() || ptr != rest.data() + rest.size())
                throw ParseError("bad variant-group id \"" + std::string(rest) + "\"", line_no);
        }
        lexicon.forms_[utf8::encode(fold_case(utf8::decode(form)))] = group;
    }
    return lexicon;
}

bool Lexicon::contains(const std::u32string& word) const {
    return forms_.contains(utf8::encode(fold_case(word)));
}

int64_t Lexicon::group_of(const std::u32string& word) const {
    auto it = forms_.find(utf8::encode(fold_case(word)));
    return it == forms_.end() ? -1 : it->second;
}

LexiconBuckets lexicon_filter(std::span<const Misprediction> mispredictions,
                              const Lexicon& lexicon) {
    LexiconBuckets buckets;
    for (const Misprediction& m : mispredictions) {
        bool system_listed = lexicon.contains(m.system);
        bool gold_listed = lexicon.contains(m.gold);
        if (system_listed && gold_listed) {
            int64_t sg = lexicon.group_of(m.system);
            int64_t gg = lexicon.group_of(m.gold);
            bool same_group = sg == -1 || gg == -1 || sg == gg;
            (same_group ? buckets.auto_correct : buckets.remaining).push_back(m);
        } else if (system_listed && !gold_listed) {
            buckets.dubious.push_back(m);
        } else {
            buckets.remaining.push_back(m);
        }
    }
    return buckets;
}

}  // namespace diacrit
