#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "diacrit/analysis.hpp"
#include "diacrit/corpus.hpp"
#include "diacrit/errors.hpp"
#include "diacrit/evaluate.hpp"
#include "diacrit/instruction.hpp"
#include "diacrit/m2.hpp"
#include "diacrit/marks.hpp"
#include "diacrit/model.hpp"
#include "diacrit/tokenize.hpp"
#include "diacrit/utf8.hpp"

namespace {

using namespace diacrit;

std::vector<std::u32string> load_lines(const std::string& path, bool compose = true) {
    if (path.empty() || path == "-") return read_lines(std::cin, compose);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return read_lines(in, compose);
}

/// Stdout when the path is empty or "-", a file otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") {
            out_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw IoError("cannot write " + path);
        out_ = &file_;
        path_ = path;
    }

    std::ostream& stream() { return *out_; }

    void finish() {
        out_->flush();
        if (!*out_) throw IoError("short write" + (path_.empty() ? "" : " to " + path_));
    }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
    std::string path_;
};

std::ifstream open_input_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

FrequencyModel load_model_file(const std::string& path) {
    std::ifstream in = open_input_file(path);
    return FrequencyModel::load(in);
}

std::string format_percent(double fraction, int decimals = 2) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, fraction * 100.0);
    return buffer;
}

std::string format_fraction(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

Granularity parse_granularity(const std::string& name) {
    return name == "subword" ? Granularity::kSubword : Granularity::kWord;
}

// ---------------------------------------------------------------------------

struct StripConfig {
    std::string input, output;
    bool keep_composition = false;
    bool romanian = false;  // run the cedilla fix instead of stripping
};

void run_strip(const StripConfig& cfg) {
    std::vector<std::u32string> lines = load_lines(cfg.input, !cfg.keep_composition);
    Output out(cfg.output);
    for (const std::u32string& line : lines) {
        out.stream() << utf8::encode(cfg.romanian ? normalize_romanian(line)
                                                  : strip_diacritics(line))
                     << "\n";
    }
    out.finish();
}

struct ExtractConfig {
    std::string input, output;
    uint64_t min_count = 2;
    std::string granularity = "word";
    size_t vocab_size = 8000;
    unsigned jobs = 1;
    bool tsv = false;
};

InstructionCounts count_over_lines(std::span<const std::u32string> lines,
                                   const SubwordVocabulary* vocab, unsigned jobs) {
    auto count_range = [&](size_t begin, size_t end) {
        InstructionCounts counts;
        std::vector<std::u32string> stripped_tokens;
        std::vector<std::u32string> gold_slices;
        for (size_t i = begin; i < end; ++i) {
            const std::u32string& line = lines[i];
            stripped_tokens.clear();
            gold_slices.clear();
            for (const Token& t : tokenize_line(strip_diacritics(line), vocab)) {
                stripped_tokens.push_back(t.surface);
                gold_slices.push_back(line.substr(t.begin, t.end - t.begin));
            }
            counts.add_parallel_sentence(stripped_tokens, gold_slices);
        }
        return counts;
    };

    if (jobs <= 1 || lines.size() < 2 * jobs) return count_range(0, lines.size());

    std::vector<InstructionCounts> partials(jobs);
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) {
        size_t begin = lines.size() * w / jobs;
        size_t end = lines.size() * (w + 1) / jobs;
        threads.emplace_back([&, w, begin, end] { partials[w] = count_range(begin, end); });
    }
    for (std::thread& t : threads) t.join();
    InstructionCounts merged;
    for (const InstructionCounts& p : partials) merged.merge(p);
    return merged;
}

void run_extract(const ExtractConfig& cfg) {
    std::vector<std::u32string> lines = load_lines(cfg.input);
    SubwordVocabulary vocab;
    bool subword = parse_granularity(cfg.granularity) == Granularity::kSubword;
    if (subword) {
        std::map<std::u32string, uint64_t> word_counts;
        for (const std::u32string& line : lines)
            for (const Token& word : word_tokenize(strip_diacritics(line)))
                ++word_counts[fold_case(word.surface)];
        vocab = SubwordVocabulary::learn({word_counts.begin(), word_counts.end()},
                                         cfg.vocab_size);
    }
    InstructionCounts counts =
        count_over_lines(lines, subword ? &vocab : nullptr, cfg.jobs);
    InstructionSet set = InstructionSet::from_counts(counts.by_serialized, cfg.min_count);

    Output out(cfg.output);
    set.save(out.stream());
    out.finish();
    if (cfg.tsv) {
        std::cerr << set.size() << '\t' << counts.sentences_seen << '\t'
                  << counts.sentences_skipped << "\n";
    } else {
        std::cerr << "instructions: " << set.size() << " (min_count=" << cfg.min_count
                  << "), sentences: " << counts.sentences_seen
                  << ", skipped: " << counts.sentences_skipped << "\n";
    }
}

struct TrainConfig {
    std::string input, model;
    uint64_t min_count = 2;
    std::string granularity = "word";
    size_t vocab_size = 8000;
    size_t clip_tokens = 0;
};

void run_train(const TrainConfig& cfg) {
    std::vector<std::u32string> lines = load_lines(cfg.input);
    FrequencyModel::TrainOptions options;
    options.min_count = cfg.min_count;
    options.granularity = parse_granularity(cfg.granularity);
    options.vocab_size = cfg.vocab_size;
    options.clip_tokens = cfg.clip_tokens;
    FrequencyModel model = FrequencyModel::train(lines, options);

    Output out(cfg.model);
    model.save(out.stream());
    out.finish();
    std::cerr << "instructions: " << model.instruction_set().size()
              << ", forms: " << model.unigram_counts().size()
              << ", contexts: " << model.context_entries() << "\n";
}

struct RestoreConfig {
    std::string input, output, model, scorer;
    unsigned jobs = 1;
};

void run_restore(const RestoreConfig& cfg) {
    FrequencyModel model = load_model_file(cfg.model);
    std::vector<std::u32string> lines = load_lines(cfg.input);
    const SubwordVocabulary* vocab = model.vocabulary();

    std::vector<std::string> restored(lines.size());
    if (!cfg.scorer.empty()) {
        // The scorer is one stateful subprocess; feed it sequentially.
        ExternalScorerClassifier classifier(cfg.scorer, model.instruction_set());
        for (size_t i = 0; i < lines.size(); ++i)
            restored[i] = utf8::encode(restore_sentence(classifier, vocab, lines[i]));
    } else {
        auto restore_range = [&](size_t begin, size_t end) {
            for (size_t i = begin; i < end; ++i)
                restored[i] = utf8::encode(restore_sentence(model, vocab, lines[i]));
        };
        if (cfg.jobs <= 1 || lines.size() < 2 * cfg.jobs) {
            restore_range(0, lines.size());
        } else {
            std::vector<std::thread> threads;
            for (unsigned w = 0; w < cfg.jobs; ++w) {
                size_t begin = lines.size() * w / cfg.jobs;
                size_t end = lines.size() * (w + 1) / cfg.jobs;
                threads.emplace_back(restore_range, begin, end);
            }
            for (std::thread& t : threads) t.join();
        }
    }

    Output out(cfg.output);
    for (const std::string& line : restored) out.stream() << line << "\n";
    out.finish();
}

struct EvalConfig {
    std::string gold, strip, mask, hyp;
    uint64_t resamples = 1000;
    uint64_t seed = 42;
    bool case_sensitive = false;
    unsigned jobs = 1;
    bool tsv = false;
};

void run_eval(const EvalConfig& cfg) {
    MaskedParallelCorpus corpus = MaskedParallelCorpus::from_files(cfg.gold, cfg.strip, cfg.mask);
    std::vector<std::u32string> hyp = load_lines(cfg.hyp);

    EvalResult result = alpha_word_accuracy(hyp, corpus, cfg.case_sensitive);
    if (cfg.resamples > 0) {
        std::vector<SentenceScore> scores = score_sentences(hyp, corpus, cfg.case_sensitive);
        auto [low, high] = bootstrap_ci(scores, cfg.resamples, 0.95, cfg.seed, cfg.jobs);
        result.ci_low = low;
        result.ci_high = high;
        result.resamples = cfg.resamples;
        result.seed = cfg.seed;
    }

    if (cfg.tsv) {
        std::cout << result.correct << '\t' << result.evaluated << '\t'
                  << format_fraction(result.accuracy) << '\t'
                  << (result.has_ci() ? format_fraction(result.ci_low) : "-") << '\t'
                  << (result.has_ci() ? format_fraction(result.ci_high) : "-") << '\t'
                  << result.resamples << '\t' << result.seed << "\n";
        return;
    }
    std::cout << "accuracy " << format_percent(result.accuracy) << " % (" << result.correct
              << "/" << result.evaluated << " alpha words)\n";
    if (result.has_ci()) {
        double halfwidth = (result.ci_high - result.ci_low) / 2.0;
        std::cout << "95% CI [" << format_percent(result.ci_low) << ", "
                  << format_percent(result.ci_high) << "] %, ±"
                  << format_percent(halfwidth, 3) << ", " << result.resamples
                  << " resamples, seed " << result.seed << "\n";
    }
}

struct M2Config {
    std::string input, prefix;
    int64_t annotator = 0;
};

void run_m2(const M2Config& cfg) {
    M2Document doc;
    if (cfg.input.empty() || cfg.input == "-") {
        doc = parse_m2(std::cin);
    } else {
        std::ifstream in = open_input_file(cfg.input);
        doc = parse_m2(in);
    }
    MaskedParallelCorpus corpus = realize_targets(doc, cfg.annotator);
    corpus.save(cfg.prefix);
    CorpusStats stats = corpus_stats(corpus);
    std::cerr << "sentences: " << stats.sentences << ", words: " << stats.words
              << ", evaluated: " << stats.evaluated << "\n";
}

struct ReportConfig {
    std::string gold, strip, mask, hyp;
    size_t top = 20;
    bool case_sensitive = false;
    bool tsv = false;
};

void run_report(const ReportConfig& cfg) {
    MaskedParallelCorpus corpus = MaskedParallelCorpus::from_files(cfg.gold, cfg.strip, cfg.mask);
    std::vector<std::u32string> hyp = load_lines(cfg.hyp);
    std::vector<Misprediction> errors = collect_mispredictions(hyp, corpus, cfg.case_sensitive);
    std::vector<ConfusionEntry> report = confusion_report(errors);
    if (cfg.top > 0 && report.size() > cfg.top) report.resize(cfg.top);

    if (cfg.tsv) {
        for (const ConfusionEntry& e : report)
            std::cout << e.count << '\t' << utf8::encode(e.system) << '\t'
                      << utf8::encode(e.gold) << "\n";
        return;
    }
    std::cout << errors.size() << " mispredictions, " << report.size() << " confusion pairs\n";
    for (const ConfusionEntry& e : report) {
        std::cout << e.count << "x  " << utf8::encode(e.system) << " -> "
                  << utf8::encode(e.gold) << "\n";
        if (!e.samples.empty()) std::cout << "      " << utf8::encode(e.samples.front()) << "\n";
    }
}

struct ExportConfig {
    std::string gold, strip, mask, hyp, output, lexicon;
    bool case_sensitive = false;
};

void run_export(const ExportConfig& cfg) {
    MaskedParallelCorpus corpus = MaskedParallelCorpus::from_files(cfg.gold, cfg.strip, cfg.mask);
    std::vector<std::u32string> hyp = load_lines(cfg.hyp);
    std::vector<Misprediction> errors = collect_mispredictions(hyp, corpus, cfg.case_sensitive);

    if (!cfg.lexicon.empty()) {
        std::ifstream lex_in = open_input_file(cfg.lexicon);
        Lexicon lexicon = Lexicon::load(lex_in);
        LexiconBuckets buckets = lexicon_filter(errors, lexicon);
        std::cerr << "auto-correct: " << buckets.auto_correct.size()
                  << ", dubious: " << buckets.dubious.size()
                  << ", to annotate: " << buckets.remaining.size() << "\n";
        errors = std::move(buckets.remaining);
    }
    Output out(cfg.output);
    export_annotation_items(errors, out.stream());
    out.finish();
}

struct VerdictConfig {
    std::string input;
    bool tsv = false;
};

void run_verdicts(const VerdictConfig& cfg) {
    std::vector<VerdictRow> rows;
    if (cfg.input.empty() || cfg.input == "-") {
        rows = load_verdicts(std::cin);
    } else {
        std::ifstream in = open_input_file(cfg.input);
        rows = load_verdicts(in);
    }
    VerdictSummary summary = categorize_verdicts(rows);

    if (cfg.tsv) {
        std::cout << summary.items << '\t' << summary.typo_excluded << '\t' << summary.analyzed;
        for (size_t c = 0; c < 4; ++c)
            std::cout << '\t' << summary.counts[c] << '\t' << summary.percentages[c];
        std::cout << '\t' << summary.sentence_only << "\n";
        return;
    }
    static const char* kLabels[4] = {
        "system correct, gold correct",
        "system correct, gold incorrect",
        "system incorrect, gold incorrect",
        "system incorrect, gold correct",
    };
    std::cout << "items: " << summary.items << ", typo-excluded: " << summary.typo_excluded
              << ", analyzed: " << summary.analyzed << "\n";
    for (size_t c = 0; c < 4; ++c)
        std::cout << kLabels[c] << ": " << summary.counts[c] << " (" << summary.percentages[c]
                  << " %)\n";
    std::cout << "sentence-correct but context-wrong judgments: " << summary.sentence_only
              << "\n";
}

struct AmbiguityConfig {
    std::string model;
    size_t top = 20;
    bool tsv = false;
};

void run_ambiguity(const AmbiguityConfig& cfg) {
    FrequencyModel model = load_model_file(cfg.model);
    AmbiguityStats stats = ambiguity_stats(model, cfg.top);

    if (cfg.tsv) {
        std::cout << stats.total_forms << '\t' << stats.ambiguous_forms << '\t'
                  << format_fraction(stats.form_fraction()) << '\t' << stats.total_occurrences
                  << '\t' << stats.ambiguous_occurrences << '\t'
                  << format_fraction(stats.occurrence_fraction()) << "\n";
        for (const AmbiguousForm& f : stats.top) {
            std::cout << f.form << '\t' << f.occurrences;
            for (const auto& [candidate, count] : f.candidates)
                std::cout << '\t' << candidate << '\t' << count;
            std::cout << "\n";
        }
        return;
    }
    std::cout << "forms: " << stats.total_forms << ", ambiguous: " << stats.ambiguous_forms
              << " (" << format_percent(stats.form_fraction()) << " %)\n";
    std::cout << "occurrences: " << stats.total_occurrences << ", in ambiguous forms: "
              << stats.ambiguous_occurrences << " ("
              << format_percent(stats.occurrence_fraction()) << " %)\n";
    for (const AmbiguousForm& f : stats.top) {
        std::cout << f.form << " (" << f.occurrences << "):";
        for (const auto& [candidate, count] : f.candidates)
            std::cout << ' ' << candidate << "x" << count;
        std::cout << "\n";
    }
}

void dump_registry() {
    for (const MarkRegistry::Entry& e : MarkRegistry::instance().entries()) {
        char cp[16];
        std::snprintf(cp, sizeof(cp), "U+%04X", static_cast<unsigned>(e.precomposed));
        std::cout << cp << '\t' << utf8::encode(e.precomposed) << '\t'
                  << utf8::encode(e.base) << '\t' << e.mark.name << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    uint64_t default_seed = 42;
    if (const char* env = std::getenv("DIACRIT_SEED")) {
        char* end = nullptr;
        unsigned long long parsed = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0') {
            std::cerr << "DIACRIT_SEED must be an integer, got \"" << env << "\"\n";
            return 2;
        }
        default_seed = parsed;
    }

    CLI::App app{"diacritics restoration toolkit"};
    app.require_subcommand(0, 1);
    bool want_registry = false;
    app.add_flag("--dump-registry", want_registry,
                 "print the mark decomposition table and exit");

    StripConfig strip_cfg;
    CLI::App* strip = app.add_subcommand("strip", "remove diacritics from text");
    strip->add_option("input", strip_cfg.input, "input file (default stdin)");
    strip->add_option("-o,--output", strip_cfg.output, "output file (default stdout)");
    strip->add_flag("--keep-composition", strip_cfg.keep_composition,
                    "do not compose combining marks first");
    strip->callback([&] { run_strip(strip_cfg); });

    StripConfig ro_cfg;
    ro_cfg.romanian = true;
    CLI::App* ro = app.add_subcommand("normalize-ro",
                                      "rewrite legacy cedilla letters to comma-below");
    ro->add_option("input", ro_cfg.input, "input file (default stdin)");
    ro->add_option("-o,--output", ro_cfg.output, "output file (default stdout)");
    ro->add_flag("--keep-composition", ro_cfg.keep_composition,
                 "do not compose combining marks first");
    ro->callback([&] { run_strip(ro_cfg); });

    ExtractConfig extract_cfg;
    CLI::App* extract =
        app.add_subcommand("extract-instructions", "build an instruction set from gold text");
    extract->add_option("input", extract_cfg.input, "diacritized text (default stdin)");
    extract->add_option("-o,--output", extract_cfg.output, "instruction-set file (default stdout)");
    extract->add_option("--min-count", extract_cfg.min_count, "frequency floor (default 2)");
    extract->add_option("--granularity", extract_cfg.granularity, "word|subword")
        ->check(CLI::IsMember({"word", "subword"}));
    extract->add_option("--vocab-size", extract_cfg.vocab_size, "subword inventory cap");
    extract->add_option("--jobs", extract_cfg.jobs, "worker threads");
    extract->add_flag("--tsv", extract_cfg.tsv, "machine-readable summary on stderr");
    extract->callback([&] { run_extract(extract_cfg); });

    TrainConfig train_cfg;
    CLI::App* train = app.add_subcommand("train", "train a frequency model on gold text");
    train->add_option("input", train_cfg.input, "diacritized text (default stdin)");
    train->add_option("--model", train_cfg.model, "model file to write")->required();
    train->add_option("--min-count", train_cfg.min_count, "frequency floor (default 2)");
    train->add_option("--granularity", train_cfg.granularity, "word|subword")
        ->check(CLI::IsMember({"word", "subword"}));
    train->add_option("--vocab-size", train_cfg.vocab_size, "subword inventory cap");
    train->add_option("--clip-tokens", train_cfg.clip_tokens,
                      "use only the first N tokens of each sentence (0 = all)");
    train->callback([&] { run_train(train_cfg); });

    RestoreConfig restore_cfg;
    CLI::App* restore = app.add_subcommand("restore", "restore diacritics in stripped text");
    restore->add_option("input", restore_cfg.input, "stripped text (default stdin)");
    restore->add_option("-o,--output", restore_cfg.output, "restored text (default stdout)");
    restore->add_option("--model", restore_cfg.model, "model file")->required();
    restore->add_option("--scorer", restore_cfg.scorer,
                        "external scorer command (line protocol)");
    restore->add_option("--jobs", restore_cfg.jobs, "worker threads");
    restore->callback([&] { run_restore(restore_cfg); });

    EvalConfig eval_cfg;
    eval_cfg.seed = default_seed;
    CLI::App* eval = app.add_subcommand("eval", "alpha-word accuracy with bootstrap CI");
    eval->add_option("--gold", eval_cfg.gold, "gold sentences")->required();
    eval->add_option("--hyp", eval_cfg.hyp, "hypothesis sentences")->required();
    eval->add_option("--strip", eval_cfg.strip, "stripped sentences (default: derived)");
    eval->add_option("--mask", eval_cfg.mask, "evaluation mask file");
    eval->add_option("--resamples", eval_cfg.resamples, "bootstrap resamples (0 = no CI)");
    eval->add_option("--seed", eval_cfg.seed, "resampling seed");
    eval->add_flag("--case-sensitive", eval_cfg.case_sensitive, "strict case comparison");
    eval->add_option("--jobs", eval_cfg.jobs, "worker threads");
    eval->add_flag("--tsv", eval_cfg.tsv, "one-line machine-readable result");
    eval->callback([&] { run_eval(eval_cfg); });

    M2Config m2_cfg;
    CLI::App* m2 = app.add_subcommand("m2-realize",
                                      "build gold targets and masks from an M2 file");
    m2->add_option("input", m2_cfg.input, "M2 file (default stdin)");
    m2->add_option("prefix", m2_cfg.prefix, "output prefix for .strip/.gold/.mask files")
        ->required();
    m2->add_option("--annotator", m2_cfg.annotator, "annotator id (default 0)");
    m2->callback([&] { run_m2(m2_cfg); });

    ReportConfig report_cfg;
    CLI::App* report = app.add_subcommand("report-errors", "most frequent confusion pairs");
    report->add_option("--gold", report_cfg.gold, "gold sentences")->required();
    report->add_option("--hyp", report_cfg.hyp, "hypothesis sentences")->required();
    report->add_option("--strip", report_cfg.strip, "stripped sentences (default: derived)");
    report->add_option("--mask", report_cfg.mask, "evaluation mask file");
    report->add_option("--top", report_cfg.top, "pairs to show (0 = all)");
    report->add_flag("--case-sensitive", report_cfg.case_sensitive, "strict case comparison");
    report->add_flag("--tsv", report_cfg.tsv, "machine-readable rows");
    report->callback([&] { run_report(report_cfg); });

    ExportConfig export_cfg;
    CLI::App* export_cmd =
        app.add_subcommand("export-annotations", "write the annotation sheet for mispredictions");
    export_cmd->add_option("--gold", export_cfg.gold, "gold sentences")->required();
    export_cmd->add_option("--hyp", export_cfg.hyp, "hypothesis sentences")->required();
    export_cmd->add_option("--strip", export_cfg.strip, "stripped sentences (default: derived)");
    export_cmd->add_option("--mask", export_cfg.mask, "evaluation mask file");
    export_cmd->add_option("-o,--output", export_cfg.output, "annotation TSV (default stdout)");
    export_cmd->add_option("--lexicon", export_cfg.lexicon,
                           "word-form list used to pre-filter items");
    export_cmd->add_flag("--case-sensitive", export_cfg.case_sensitive,
                         "strict case comparison");
    export_cmd->callback([&] { run_export(export_cfg); });

    VerdictConfig verdict_cfg;
    CLI::App* verdicts =
        app.add_subcommand("categorize-verdicts", "summarize a filled annotation sheet");
    verdicts->add_option("input", verdict_cfg.input, "annotation TSV (default stdin)");
    verdicts->add_flag("--tsv", verdict_cfg.tsv, "one-line machine-readable result");
    verdicts->callback([&] { run_verdicts(verdict_cfg); });

    AmbiguityConfig ambiguity_cfg;
    CLI::App* ambiguity = app.add_subcommand("ambiguity", "per-form ambiguity statistics");
    ambiguity->add_option("--model", ambiguity_cfg.model, "model file")->required();
    ambiguity->add_option("--top", ambiguity_cfg.top, "forms to list");
    ambiguity->add_flag("--tsv", ambiguity_cfg.tsv, "machine-readable rows");
    ambiguity->callback([&] { run_ambiguity(ambiguity_cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const DiacritError& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (app.get_subcommands().empty()) {
        if (want_registry) {
            dump_registry();
            return 0;
        }
        std::cerr << app.help();
        return 2;
    }
    return 0;
}
