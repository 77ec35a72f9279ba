#include "diacrit/m2.hpp"

#include <algorithm>
#include <charconv>
#include <istream>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/tokenize.hpp"
#include "diacrit/utf8.hpp"

namespace diacrit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
        size_t sep = line.find("|||", pos);
        if (sep == std::string::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, sep - pos));
        pos = sep + 3;
    }
}

int64_t parse_int(const std::string& text, const char* what, size_t line_no) {
    int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw M2FormatError(std::string("bad ") + what + " \"" + text + "\"", line_no);
    return value;
}

}  // namespace

M2Document parse_m2(std::istream& in) {
    M2Document doc;
    std::string line;
    size_t line_no = 0;
    bool have_sentence = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            have_sentence = false;
            continue;
        }
        if (line.starts_with("S ") || line == "S") {
            M2Sentence sentence;
            std::u32string text = compose_canonical(utf8::decode(line.substr(std::min<size_t>(2, line.size()))));
            sentence.tokens = split_words(text);
            sentence.line = line_no;
            doc.sentences.push_back(std::move(sentence));
            have_sentence = true;
            continue;
        }
        if (line.starts_with("A ")) {
            if (!have_sentence) throw M2FormatError("edit before any sentence", line_no);
            std::vector<std::string> fields = split_fields(line.substr(2));
            if (fields.size() != 6)
                throw M2FormatError("edit needs 6 |||-separated fields, got " +
                                        std::to_string(fields.size()),
                                    line_no);
            size_t space = fields[0].find(' ');
            if (space == std::string::npos)
                throw M2FormatError("edit span needs two indices", line_no);
            M2Edit edit;
            edit.start = parse_int(fields[0].substr(0, space), "start index", line_no);
            edit.end = parse_int(fields[0].substr(space + 1), "end index", line_no);
            edit.type = fields[1];
            if (fields[2] != "-NONE-" && !fields[2].empty())
                edit.correction = split_words(compose_canonical(utf8::decode(fields[2])));
            edit.annotator = parse_int(fields[5], "annotator id", line_no);

            M2Sentence& sentence = doc.sentences.back();
            bool noop = edit.start == -1 && edit.end == -1;
            if (!noop &&
                (edit.start < 0 || edit.end < edit.start ||
                 edit.end > static_cast<int64_t>(sentence.tokens.size())))
                throw M2FormatError("edit span " + std::to_string(edit.start) + " " +
                                        std::to_string(edit.end) + " outside sentence of " +
                                        std::to_string(sentence.tokens.size()) + " tokens",
                                    line_no);
            sentence.edits.push_back(std::move(edit));
            continue;
        }
        throw M2FormatError("expected S or A line, got \"" + line + "\"", line_no);
    }
    return doc;
}

EditClass classify_edit(std::span<const std::u32string> source_span,
                        std::span<const std::u32string> correction) {
    if (source_span.size() != correction.size()) return EditClass::kOther;
    for (size_t i = 0; i < source_span.size(); ++i) {
        if (strip_diacritics(fold_case(source_span[i])) !=
            strip_diacritics(fold_case(correction[i])))
            return EditClass::kOther;
    }
    return EditClass::kDiacriticOrCasing;
}

MaskedParallelCorpus realize_targets(const M2Document& doc, int64_t annotator) {
    std::vector<CorpusEntry> entries;
    entries.reserve(doc.sentences.size());
    for (const M2Sentence& sentence : doc.sentences) {
        std::vector<const M2Edit*> edits;
        for (const M2Edit& e : sentence.edits) {
            if (e.annotator != annotator) continue;
            if (e.start == -1 && e.end == -1) continue;
            edits.push_back(&e);
        }
        std::sort(edits.begin(), edits.end(), [](const M2Edit* a, const M2Edit* b) {
            if (a->start != b->start) return a->start < b->start;
            return a->end < b->end;
        });
        for (size_t i = 1; i < edits.size(); ++i) {
            bool both_insertions_here = edits[i - 1]->start == edits[i]->start &&
                                        edits[i - 1]->end == edits[i]->end &&
                                        edits[i]->start == edits[i]->end;
            if (edits[i]->start < edits[i - 1]->end || both_insertions_here)
                throw M2FormatError("overlapping edits of annotator " + std::to_string(annotator),
                                    sentence.line);
        }

        std::vector<std::u32string> gold_tokens = sentence.tokens;
        std::vector<bool> mask(sentence.tokens.size(), true);
        for (const M2Edit* e : edits) {
            size_t start = static_cast<size_t>(e->start);
            size_t end = static_cast<size_t>(e->end);
            std::span<const std::u32string> span(sentence.tokens.data() + start, end - start);
            if (classify_edit(span, e->correction) == EditClass::kDiacriticOrCasing) {
                std::copy(e->correction.begin(), e->correction.end(), gold_tokens.begin() + start);
            } else if (start == end) {
                // Insertion: no word "contains" the error, so the two
                // neighbours absorb the doubt.
                if (start > 0) mask[start - 1] = false;
                if (start < mask.size()) mask[start] = false;
            } else {
                for (size_t w = start; w < end; ++w) mask[w] = false;
            }
        }

        CorpusEntry entry;
        for (size_t i = 0; i < gold_tokens.size(); ++i) {
            if (i) entry.gold += U' ';
            entry.gold += gold_tokens[i];
        }
        entry.stripped = strip_diacritics(entry.gold);
        entry.mask = std::move(mask);
        entries.push_back(std::move(entry));
    }
    return MaskedParallelCorpus(std::move(entries), "m2");
}

}  // namespace diacrit
