#include "diacrit/instruction.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <istream>
#include <ostream>

#include "diacrit/errors.hpp"
#include "diacrit/utf8.hpp"

namespace diacrit {

Instruction::Instruction(std::vector<InstructionTuple> tuples) : tuples_(std::move(tuples)) {
    for (size_t i = 1; i < tuples_.size(); ++i)
        assert(tuples_[i - 1].index < tuples_[i].index && "tuple indices must ascend");
}

std::string Instruction::serialize() const {
    if (is_keep()) return "<KEEP>";
    std::string out;
    for (size_t i = 0; i < tuples_.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(tuples_[i].index);
        out += ':';
        out += tuples_[i].mark.name;
    }
    return out;
}

namespace {

bool valid_mark_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == ' ' || c == '-';
}

}  // namespace

Instruction Instruction::parse(std::string_view text) {
    if (text == "<KEEP>") return keep();
    if (text.empty()) throw ParseError("empty instruction", 0);

    std::vector<InstructionTuple> tuples;
    size_t pos = 0;
    while (true) {
        size_t group_start = pos;
        size_t digits_end = pos;
        while (digits_end < text.size() && text[digits_end] >= '0' && text[digits_end] <= '9')
            ++digits_end;
        if (digits_end == pos) throw ParseError("expected index digits", pos);

        uint32_t index = 0;
        auto [ptr, ec] =
            std::from_chars(text.data() + pos, text.data() + digits_end, index);
        if (ec != std::errc() || ptr != text.data() + digits_end)
            throw ParseError("index out of range", pos);

        if (digits_end >= text.size() || text[digits_end] != ':')
            throw ParseError("expected ':' after index", digits_end);
        pos = digits_end + 1;

        size_t mark_end = pos;
        while (mark_end < text.size() && text[mark_end] != ';') ++mark_end;
        std::string_view mark = text.substr(pos, mark_end - pos);
        if (mark.empty()) throw ParseError("missing mark name", pos);
        if (mark.front() == ' ' || mark.back() == ' ')
            throw ParseError("mark name has leading/trailing space", pos);
        for (size_t i = 0; i < mark.size(); ++i)
            if (!valid_mark_char(mark[i])) throw ParseError("invalid character in mark name", pos + i);

        if (!tuples.empty() && tuples.back().index >= index)
            throw ParseError("indices not strictly ascending", group_start);
        tuples.push_back({index, {std::string(mark)}});

        if (mark_end == text.size()) break;
        pos = mark_end + 1;  // past ';'
        if (pos == text.size()) throw ParseError("trailing ';'", mark_end);
    }
    return Instruction(std::move(tuples));
}

Instruction derive_instruction(std::u32string_view stripped, std::u32string_view diacritized) {
    if (stripped.size() != diacritized.size())
        throw AlignmentError("token length mismatch: \"" + utf8::encode(std::u32string(stripped)) +
                             "\" vs \"" + utf8::encode(std::u32string(diacritized)) + "\"");

    const MarkRegistry& reg = MarkRegistry::instance();
    std::vector<InstructionTuple> tuples;
    for (size_t i = 0; i < stripped.size(); ++i) {
        char32_t s = stripped[i];
        char32_t d = diacritized[i];
        if (s == d) continue;
        if (auto dec = reg.decompose(d);
            dec && (dec->base == s || reg.fold_char(dec->base) == reg.fold_char(s))) {
            tuples.push_back({static_cast<uint32_t>(i), dec->mark});
            continue;
        }
        if (reg.fold_char(d) == reg.fold_char(s)) continue;  // case-only difference
        throw AlignmentError("base characters disagree at position " + std::to_string(i) +
                             ": \"" + utf8::encode(std::u32string(stripped)) + "\" vs \"" +
                             utf8::encode(std::u32string(diacritized)) + "\"");
    }
    return Instruction(std::move(tuples));
}

std::u32string apply_instruction(std::u32string_view token, const Instruction& instr) {
    std::u32string out(token);
    if (instr.is_keep()) return out;

    const MarkRegistry& reg = MarkRegistry::instance();
    // First pass validates every tuple: one failure vetoes the whole
    // instruction and the token passes through untouched.
    for (const InstructionTuple& t : instr.tuples()) {
        if (t.index >= token.size()) return out;
        if (!reg.compose(token[t.index], t.mark)) return out;
    }
    for (const InstructionTuple& t : instr.tuples())
        out[t.index] = *reg.compose(token[t.index], t.mark);
    return out;
}

void InstructionCounts::add_sentence(std::span<const std::u32string> diacritized_tokens) {
    ++sentences_seen;
    for (const std::u32string& token : diacritized_tokens) {
        Instruction instr = derive_instruction(strip_diacritics(token), token);
        ++by_serialized[instr.serialize()];
    }
}

void InstructionCounts::add_parallel_sentence(std::span<const std::u32string> stripped_tokens,
                                              std::span<const std::u32string> diacritized_tokens) {
    ++sentences_seen;
    if (stripped_tokens.size() != diacritized_tokens.size()) {
        ++sentences_skipped;
        return;
    }
    std::vector<std::string> derived;
    derived.reserve(diacritized_tokens.size());
    try {
        for (size_t i = 0; i < diacritized_tokens.size(); ++i)
            derived.push_back(
                derive_instruction(stripped_tokens[i], diacritized_tokens[i]).serialize());
    } catch (const AlignmentError&) {
        ++sentences_skipped;
        return;
    }
    for (std::string& s : derived) ++by_serialized[std::move(s)];
}

void InstructionCounts::merge(const InstructionCounts& other) {
    sentences_seen += other.sentences_seen;
    sentences_skipped += other.sentences_skipped;
    for (const auto& [serialized, count] : other.by_serialized) by_serialized[serialized] += count;
}

InstructionSet InstructionSet::from_counts(const std::map<std::string, uint64_t>& counts,
                                           uint64_t min_count) {
    struct Row {
        std::string serialized;
        uint64_t count;
    };
    std::vector<Row> rows;
    uint64_t keep_count = 0;
    for (const auto& [serialized, count] : counts) {
        if (serialized == "<KEEP>") {
            keep_count = count;
            continue;
        }
        if (count >= min_count) rows.push_back({serialized, count});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.serialized < b.serialized;
    });

    InstructionSet set;
    set.min_count_ = min_count;
    set.instructions_.push_back(Instruction::keep());
    set.serialized_.push_back("<KEEP>");
    set.counts_.push_back(keep_count);
    for (Row& row : rows) {
        set.instructions_.push_back(Instruction::parse(row.serialized));
        set.counts_.push_back(row.count);
        set.serialized_.push_back(std::move(row.serialized));
    }
    for (size_t id = 0; id < set.serialized_.size(); ++id)
        set.id_by_serialized_.emplace(set.serialized_[id], id);
    return set;
}

std::optional<size_t> InstructionSet::id_of(const Instruction& instr) const {
    return id_of_serialized(instr.serialize());
}

std::optional<size_t> InstructionSet::id_of_serialized(const std::string& serialized) const {
    auto it = id_by_serialized_.find(serialized);
    if (it == id_by_serialized_.end()) return std::nullopt;
    return it->second;
}

void InstructionSet::save(std::ostream& out) const {
    out << "#diacrit-instrset v1 min_count=" << min_count_ << "\n";
    for (size_t id = 0; id < size(); ++id)
        out << id << '\t' << serialized_[id] << '\t' << counts_[id] << "\n";
}

InstructionSet InstructionSet::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ModelFormatError("empty instruction-set file");
    const std::string prefix = "#diacrit-instrset v1 min_count=";
    if (!line.starts_with(prefix))
        throw ModelFormatError("bad instruction-set header: \"" + line + "\"");
    uint64_t min_count = 0;
    std::string_view rest = std::string_view(line).substr(prefix.size());
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), min_count);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
        throw ModelFormatError("bad min_count in instruction-set header");

    InstructionSet set;
    set.min_count_ = min_count;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() && in.eof()) break;
        size_t tab1 = line.find('\t');
        size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw ModelFormatError("instruction-set row needs 3 columns (line " +
                                   std::to_string(line_no) + ")");
        std::string_view id_col(line.data(), tab1);
        std::string serialized = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string_view count_col = std::string_view(line).substr(tab2 + 1);

        size_t id = 0;
        auto [iptr, iec] = std::from_chars(id_col.data(), id_col.data() + id_col.size(), id);
        uint64_t count = 0;
        auto [cptr, cec] =
            std::from_chars(count_col.data(), count_col.data() + count_col.size(), count);
        if (iec != std::errc() || iptr != id_col.data() + id_col.size() || cec != std::errc() ||
            cptr != count_col.data() + count_col.size())
            throw ModelFormatError("bad numeric column (line " + std::to_string(line_no) + ")");
        if (id != set.instructions_.size())
            throw ModelFormatError("IDs must be dense and in order (line " +
                                   std::to_string(line_no) + ")");
        Instruction instr;
        try {
            instr = Instruction::parse(serialized);
        } catch (const ParseError& e) {
            throw ModelFormatError(std::string(e.what()) + " (line " + std::to_string(line_no) +
                                   ")");
        }
        if (id == kKeepId) {
            if (serialized != "<KEEP>")
                throw ModelFormatError("ID 0 must be <KEEP> (line " + std::to_string(line_no) +
                                       ")");
        } else if (instr.is_keep()) {
            throw ModelFormatError("duplicate <KEEP> row (line " + std::to_string(line_no) + ")");
        }
        set.instructions_.push_back(std::move(instr));
        set.serialized_.push_back(serialized);
        set.counts_.push_back(count);
        if (!set.id_by_serialized_.emplace(std::move(serialized), id).second)
            throw ModelFormatError("duplicate instruction (line " + std::to_string(line_no) + ")");
    }
    if (set.instructions_.empty()) throw ModelFormatError("instruction set has no rows");
    return set;
}

bool InstructionSet::operator==(const InstructionSet& other) const {
    return serialized_ == other.serialized_ && counts_ == other.counts_ &&
           min_count_ == other.min_count_;
}

}  // namespace diacrit
