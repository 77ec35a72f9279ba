#include "diacrit/model.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "diacrit/errors.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/utf8.hpp"

namespace diacrit {

namespace {

constexpr const char* kBosForm = "<s>";
constexpr const char* kEosForm = "</s>";

std::string form_key(const std::u32string& surface) {
    return utf8::encode(fold_case(strip_diacritics(surface)));
}

std::string trigram_key(const std::string& prev, const std::string& form,
                        const std::string& next) {
    // Tokens can never contain a tab, so '\t' is a safe joiner (and doubles
    // as the on-disk column separator).
    return prev + '\t' + form + '\t' + next;
}

}  // namespace

std::vector<size_t> InstructionClassifier::classify(const TokenizedSentence& stripped) const {
    const size_t set_size = instruction_set().size();
    std::vector<std::vector<double>> scores = score(stripped);
    std::vector<size_t> ids(stripped.size(), InstructionSet::kKeepId);
    if (scores.size() != stripped.size()) return ids;
    for (size_t t = 0; t < scores.size(); ++t) {
        const std::vector<double>& row = scores[t];
        if (row.size() != set_size) continue;
        size_t best = InstructionSet::kKeepId;
        double best_score = -std::numeric_limits<double>::infinity();
        bool ok = true;
        for (size_t id = 0; id < row.size(); ++id) {
            if (!std::isfinite(row[id])) {
                ok = false;
                break;
            }
            if (row[id] > best_score) {
                best_score = row[id];
                best = id;
            }
        }
        if (ok) ids[t] = best;
    }
    return ids;
}

struct FrequencyModelBuilder {
    static FrequencyModel run(std::span<const std::u32string> gold_lines,
                              std::optional<InstructionSet> fixed_set,
                              const FrequencyModel::TrainOptions& options) {
        FrequencyModel model;
        model.granularity_ = options.granularity;

        if (options.granularity == Granularity::kSubword) {
            std::map<std::u32string, uint64_t> word_counts;
            for (const std::u32string& line : gold_lines)
                for (const Token& word : word_tokenize(strip_diacritics(line)))
                    ++word_counts[fold_case(word.surface)];
            model.vocab_ = SubwordVocabulary::learn(
                {word_counts.begin(), word_counts.end()}, options.vocab_size);
        }
        const SubwordVocabulary* vocab = model.vocabulary();

        struct Prepared {
            TokenizedSentence tokens;
            std::vector<std::string> serialized;
        };
        std::vector<Prepared> prepared;
        prepared.reserve(gold_lines.size());
        std::map<std::string, uint64_t> instruction_counts;
        for (const std::u32string& line : gold_lines) {
            Prepared p;
            p.tokens = tokenize_line(strip_diacritics(line), vocab);
            if (options.clip_tokens > 0 && p.tokens.size() > options.clip_tokens)
                p.tokens.resize(options.clip_tokens);
            p.serialized.reserve(p.tokens.size());
            for (const Token& token : p.tokens) {
                std::u32string gold_piece = line.substr(token.begin, token.end - token.begin);
                std::string serialized =
                    derive_instruction(token.surface, gold_piece).serialize();
                ++instruction_counts[serialized];
                p.serialized.push_back(std::move(serialized));
            }
            prepared.push_back(std::move(p));
        }

        model.set_ = fixed_set ? std::move(*fixed_set)
                               : InstructionSet::from_counts(instruction_counts, options.min_count);

        for (const Prepared& p : prepared) {
            std::vector<std::string> forms;
            forms.reserve(p.tokens.size());
            for (const Token& token : p.tokens) forms.push_back(form_key(token.surface));
            for (size_t t = 0; t < p.tokens.size(); ++t) {
                size_t id = model.set_.id_of_serialized(p.serialized[t])
                                .value_or(InstructionSet::kKeepId);
                ++model.unigram_[forms[t]][id];
                const std::string& prev = t == 0 ? kBosForm : forms[t - 1];
                const std::string& next = t + 1 == p.tokens.size() ? kEosForm : forms[t + 1];
                ++model.trigram_[trigram_key(prev, forms[t], next)][id];
            }
        }
        return model;
    }
};

FrequencyModel FrequencyModel::train(std::span<const std::u32string> gold_lines) {
    return FrequencyModelBuilder::run(gold_lines, std::nullopt, TrainOptions{});
}

FrequencyModel FrequencyModel::train(std::span<const std::u32string> gold_lines,
                                     const TrainOptions& options) {
    return FrequencyModelBuilder::run(gold_lines, std::nullopt, options);
}

FrequencyModel FrequencyModel::train_with_set(std::span<const std::u32string> gold_lines,
                                              InstructionSet set, const TrainOptions& options) {
    return FrequencyModelBuilder::run(gold_lines, std::move(set), options);
}

std::optional<size_t> FrequencyModel::argmax(const std::map<size_t, uint64_t>& counts) const {
    std::optional<size_t> best;
    uint64_t best_count = 0;
    // Ascending iteration means the smallest ID wins ties.
    for (const auto& [id, count] : counts) {
        if (count > best_count) {
            best_count = count;
            best = id;
        }
    }
    return best;
}

std::vector<std::vector<double>> FrequencyModel::score(const TokenizedSentence& stripped) const {
    std::vector<std::string> forms;
    forms.reserve(stripped.size());
    for (const Token& token : stripped) forms.push_back(form_key(token.surface));

    std::vector<std::vector<double>> scores(stripped.size(),
                                            std::vector<double>(set_.size(), 0.0));
    for (size_t t = 0; t < stripped.size(); ++t) {
        const std::string& prev = t == 0 ? kBosForm : forms[t - 1];
        const std::string& next = t + 1 == stripped.size() ? kEosForm : forms[t + 1];
        const std::map<size_t, uint64_t>* table = nullptr;
        if (auto it = trigram_.find(trigram_key(prev, forms[t], next)); it != trigram_.end())
            table = &it->second;
        else if (auto uit = unigram_.find(forms[t]); uit != unigram_.end())
            table = &uit->second;
        if (!table) continue;  // all-zero row: argmax lands on KEEP
        for (const auto& [id, count] : *table)
            if (id < scores[t].size()) scores[t][id] = static_cast<double>(count);
    }
    return scores;
}

std::vector<size_t> FrequencyModel::classify(const TokenizedSentence& stripped) const {
    std::vector<std::string> forms;
    forms.reserve(stripped.size());
    for (const Token& token : stripped) forms.push_back(form_key(token.surface));

    std::vector<size_t> ids(stripped.size(), InstructionSet::kKeepId);
    for (size_t t = 0; t < stripped.size(); ++t) {
        const std::string& prev = t == 0 ? kBosForm : forms[t - 1];
        const std::string& next = t + 1 == stripped.size() ? kEosForm : forms[t + 1];
        if (auto it = trigram_.find(trigram_key(prev, forms[t], next)); it != trigram_.end()) {
            ids[t] = argmax(it->second).value_or(InstructionSet::kKeepId);
        } else if (auto uit = unigram_.find(forms[t]); uit != unigram_.end()) {
            ids[t] = argmax(uit->second).value_or(InstructionSet::kKeepId);
        }
    }
    return ids;
}

std::vector<size_t> FrequencyModel::classify_unigram(const TokenizedSentence& stripped) const {
    std::vector<size_t> ids(stripped.size(), InstructionSet::kKeepId);
    for (size_t t = 0; t < stripped.size(); ++t) {
        if (auto it = unigram_.find(form_key(stripped[t].surface)); it != unigram_.end())
            ids[t] = argmax(it->second).value_or(InstructionSet::kKeepId);
    }
    return ids;
}

void FrequencyModel::save(std::ostream& out) const {
    out << "#diacrit-model v1\n";
    out << "#granularity " << (granularity_ == Granularity::kWord ? "word" : "subword") << "\n";
    if (granularity_ == Granularity::kSubword) {
        out << "#vocab " << vocab_.size() << "\n";
        vocab_.save(out);
    }
    std::ostringstream instrset;
    set_.save(instrset);
    out << "#instrset " << set_.size() << "\n" << instrset.str();

    auto total_rows = [](const std::map<std::string, std::map<size_t, uint64_t>>& table) {
        uint64_t rows = 0;
        for (const auto& [key, counts] : table) rows += counts.size();
        return rows;
    };
    out << "#unigram " << total_rows(unigram_) << "\n";
    for (const auto& [form, counts] : unigram_)
        for (const auto& [id, count] : counts)
            out << form << '\t' << id << '\t' << count << "\n";
    out << "#trigram " << total_rows(trigram_) << "\n";
    for (const auto& [key, counts] : trigram_)
        for (const auto& [id, count] : counts)
            out << key << '\t' << id << '\t' << count << "\n";
    out << "#end\n";
}

namespace {

std::string expect_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw ModelFormatError(std::string("truncated model file: missing ") + what);
    return line;
}

uint64_t parse_count_header(const std::string& line, const std::string& prefix) {
    if (!line.starts_with(prefix))
        throw ModelFormatError("expected \"" + prefix + "<n>\", got \"" + line + "\"");
    uint64_t n = 0;
    std::string_view rest = std::string_view(line).substr(prefix.size());
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
        throw ModelFormatError("bad count in \"" + line + "\"");
    return n;
}

std::vector<std::string_view> split_tabs(const std::string& line) {
    std::vector<std::string_view> cols;
    size_t pos = 0;
    while (true) {
        size_t tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            cols.push_back(std::string_view(line).substr(pos));
            return cols;
        }
        cols.push_back(std::string_view(line).substr(pos, tab - pos));
        pos = tab + 1;
    }
}

uint64_t parse_u64(std::string_view text, const char* what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ModelFormatError(std::string("bad ") + what + " \"" + std::string(text) + "\"");
    return value;
}

void load_count_table(std::istream& in, uint64_t rows, size_t key_cols,
                      std::map<std::string, std::map<size_t, uint64_t>>& table,
                      const char* what) {
    for (uint64_t row = 0; row < rows; ++row) {
        std::string line = expect_line(in, what);
        std::vector<std::string_view> cols = split_tabs(line);
        if (cols.size() != key_cols + 2)
            throw ModelFormatError(std::string(what) + " row needs " +
                                   std::to_string(key_cols + 2) + " columns");
        std::string key(line.data(),
                        line.size() - cols[key_cols].size() - cols[key_cols + 1].size() - 2);
        size_t id = parse_u64(cols[key_cols], "instruction id");
        uint64_t count = parse_u64(cols[key_cols + 1], "count");
        if (count == 0) throw ModelFormatError(std::string(what) + " stores zero count");
        if (!table[key].emplace(id, count).second)
            throw ModelFormatError(std::string("duplicate ") + what + " row");
    }
}

}  // namespace

FrequencyModel FrequencyModel::load(std::istream& in) {
    if (expect_line(in, "header") != "#diacrit-model v1")
        throw ModelFormatError("bad model header (expected #diacrit-model v1)");
    std::string granularity_line = expect_line(in, "granularity");
    FrequencyModel model;
    if (granularity_line == "#granularity word") {
        model.granularity_ = Granularity::kWord;
    } else if (granularity_line == "#granularity subword") {
        model.granularity_ = Granularity::kSubword;
    } else {
        throw ModelFormatError("bad granularity line \"" + granularity_line + "\"");
    }

    if (model.granularity_ == Granularity::kSubword) {
        uint64_t n = parse_count_header(expect_line(in, "vocab section"), "#vocab ");
        std::ostringstream buffer;
        buffer << expect_line(in, "vocab header") << "\n";
        for (uint64_t i = 0; i < n; ++i) buffer << expect_line(in, "vocab entry") << "\n";
        std::istringstream vocab_in(buffer.str());
        model.vocab_ = SubwordVocabulary::load(vocab_in);
        if (model.vocab_.size() != n) throw ModelFormatError("vocab entry count mismatch");
    }

    uint64_t rows = parse_count_header(expect_line(in, "instrset section"), "#instrset ");
    {
        std::ostringstream buffer;
        buffer << expect_line(in, "instrset header") << "\n";
        for (uint64_t i = 0; i < rows; ++i) buffer << expect_line(in, "instrset row") << "\n";
        std::istringstream set_in(buffer.str());
        model.set_ = InstructionSet::load(set_in);
    }

    uint64_t unigrams = parse_count_header(expect_line(in, "unigram section"), "#unigram ");
    load_count_table(in, unigrams, 1, model.unigram_, "unigram");
    uint64_t trigrams = parse_count_header(expect_line(in, "trigram section"), "#trigram ");
    load_count_table(in, trigrams, 3, model.trigram_, "trigram");
    if (expect_line(in, "#end") != "#end") throw ModelFormatError("missing #end terminator");

    for (const auto& [key, counts] : model.unigram_)
        for (const auto& [id, count] : counts)
            if (id >= model.set_.size())
                throw ModelFormatError("unigram row references unknown instruction id");
    for (const auto& [key, counts] : model.trigram_)
        for (const auto& [id, count] : counts)
            if (id >= model.set_.size())
                throw ModelFormatError("trigram row references unknown instruction id");
    return model;
}

std::u32string restore_sentence(const InstructionClassifier& classifier,
                                const SubwordVocabulary* vocab, std::u32string_view stripped) {
    TokenizedSentence tokens = tokenize_line(stripped, vocab);
    std::vector<size_t> ids;
    try {
        ids = classifier.classify(tokens);
    } catch (...) {
        ids.assign(tokens.size(), InstructionSet::kKeepId);
    }
    if (ids.size() != tokens.size()) ids.assign(tokens.size(), InstructionSet::kKeepId);

    const InstructionSet& set = classifier.instruction_set();
    for (size_t t = 0; t < tokens.size(); ++t) {
        if (ids[t] >= set.size()) continue;  // unknown ID behaves as KEEP
        tokens[t].surface = apply_instruction(tokens[t].surface, set.instruction_of(ids[t]));
    }
    return detokenize(stripped, tokens);
}

// ---------------------------------------------------------------------------
// External scorer subprocess

struct ExternalScorerClassifier::Process {
    pid_t pid = -1;
    FILE* to_child = nullptr;
    FILE* from_child = nullptr;
    bool broken = false;

    ~Process() {
        if (to_child) fclose(to_child);
        if (from_child) fclose(from_child);
        if (pid > 0) {
            int status = 0;
            if (waitpid(pid, &status, WNOHANG) == 0) {
                kill(pid, SIGTERM);
                waitpid(pid, &status, 0);
            }
        }
    }
};

ExternalScorerClassifier::ExternalScorerClassifier(std::string command, InstructionSet set)
    : set_(std::move(set)), process_(std::make_unique<Process>()) {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw IoError("cannot create scorer pipes");
    pid_t pid = fork();
    if (pid < 0) throw IoError("cannot fork scorer process");
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    process_->pid = pid;
    process_->to_child = fdopen(to_child[1], "w");
    process_->from_child = fdopen(from_child[0], "r");
    if (!process_->to_child || !process_->from_child) throw IoError("cannot open scorer streams");
    // A dead scorer must not kill us with SIGPIPE; writes fail instead.
    signal(SIGPIPE, SIG_IGN);
}

ExternalScorerClassifier::~ExternalScorerClassifier() = default;

std::vector<size_t> ExternalScorerClassifier::classify(const TokenizedSentence& stripped) const {
    std::vector<size_t> ids(stripped.size(), InstructionSet::kKeepId);
    if (process_->broken) return ids;

    std::string request;
    for (size_t t = 0; t < stripped.size(); ++t) {
        if (t) request += ' ';
        if (stripped[t].is_continuation) request += "##";
        request += utf8::encode(stripped[t].surface);
    }
    request += '\n';
    if (fputs(request.c_str(), process_->to_child) == EOF ||
        fflush(process_->to_child) != 0) {
        process_->broken = true;
        return ids;
    }

    std::string response;
    int c;
    while ((c = fgetc(process_->from_child)) != EOF && c != '\n') response += static_cast<char>(c);
    if (c == EOF && response.empty()) {
        process_->broken = true;
        return ids;
    }

    size_t t = 0;
    size_t pos = 0;
    while (t < ids.size() && pos < response.size()) {
        while (pos < response.size() && response[pos] == ' ') ++pos;
        size_t start = pos;
        while (pos < response.size() && response[pos] != ' ') ++pos;
        if (pos == start) break;
        size_t id = 0;
        auto [ptr, ec] = std::from_chars(response.data() + start, response.data() + pos, id);
        if (ec == std::errc() && ptr == response.data() + pos && id < set_.size()) ids[t] = id;
        ++t;
    }
    return ids;
}

std::vector<std::vector<double>> ExternalScorerClassifier::score(
    const TokenizedSentence& stripped) const {
    std::vector<size_t> ids = classify(stripped);
    std::vector<std::vector<double>> scores(stripped.size(),
                                            std::vector<double>(set_.size(), 0.0));
    for (size_t t = 0; t < ids.size(); ++t)
        if (ids[t] < set_.size()) scores[t][ids[t]] = 1.0;
    return scores;
}

}  // namespace diacrit
