#include "support/fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "diacrit/marks.hpp"
#include "diacrit/rng.hpp"
#include "diacrit/tokenize.hpp"
#include "diacrit/utf8.hpp"

namespace fixtures {

std::u32string u32(std::string_view utf8_text) { return diacrit::utf8::decode(utf8_text); }

std::string u8(std::u32string_view text) { return diacrit::utf8::encode(text); }

namespace {

std::vector<std::u32string> words(std::initializer_list<const char*> list) {
    std::vector<std::u32string> out;
    out.reserve(list.size());
    for (const char* w : list) out.push_back(u32(w));
    return out;
}

std::vector<AmbiguousReading> readings(
    std::initializer_list<std::pair<const char*, const char*>> list) {
    std::vector<AmbiguousReading> out;
    out.reserve(list.size());
    for (const auto& [cue, variant] : list) out.push_back({u32(cue), u32(variant)});
    return out;
}

std::vector<LanguagePack> build_packs() {
    std::vector<LanguagePack> packs;

    packs.push_back({
        "cs",
        words({"město", "řeka", "přítel", "žlutý", "čas", "dům", "kůň", "péče", "svět",
               "dítě", "válka", "zítra", "škola", "číslo", "růže", "plášť"}),
        words({"pes", "okno", "den", "ruka", "les", "pole", "most", "sen", "hrad", "klid"}),
        {readings({{"pak", "dal"}, {"šel", "dál"}}),
         readings({{"nový", "byt"}, {"chce", "být"}}),
         readings({{"tam", "žila"}, {"krevní", "žíla"}}),
         readings({{"velká", "krize"}, {"dřevěné", "kříže"}})},
    });

    packs.push_back({
        "vi",
        words({"tiếng", "người", "nước", "trường", "động", "phố", "đường", "mới", "số",
               "thời", "quốc", "hữu", "yêu", "đẹp", "lớn", "nhỏ"}),
        words({"anh", "em", "ta", "cho", "con", "hoa", "vui", "xe", "xin", "to"}),
        {readings({{"cái", "bàn"}, {"người", "bạn"}}),
         readings({{"phía", "nam"}, {"một", "năm"}})},
    });

    packs.push_back({
        "lv",
        words({"ūdens", "zaļš", "brīvs", "dzīve", "vēsture", "māksla", "valstī", "upē",
               "skolā", "grāmata", "ābols", "čūska", "ģimene", "ķirsis", "ļoti", "šodien"}),
        words({"un", "es", "tu", "par", "no", "uz", "tas", "kas", "viens", "otrs"}),
        {readings({{"maza", "sala"}, {"ziemas", "salā"}}),
         readings({{"baltas", "kazas"}, {"lielas", "kāzas"}})},
    });

    packs.push_back({
        "pl",
        words({"żółty", "łóżko", "ćma", "źrebak", "świat", "dąb", "gęś", "koń", "słońce",
               "miłość", "książka", "jabłko", "pięć", "dziewięć", "łąka", "środa"}),
        words({"dom", "kot", "pies", "okno", "las", "rok", "woda", "chleb", "most", "syn"}),
        {readings({{"dwie", "paczki"}, {"słodkie", "pączki"}}),
         readings({{"dobry", "los"}, {"leśny", "łoś"}}),
         readings({{"stary", "sad"}, {"miejski", "sąd"}})},
    });

    packs.push_back({
        "sk",
        words({"mäso", "kôň", "vŕba", "ľudia", "šťastie", "žltý", "čaj", "dážď", "môj",
               "päť", "áno", "dieťa", "mlieko", "nôž", "hĺbka", "úsmev"}),
        words({"dom", "pes", "rok", "voda", "les", "okno", "brat", "syn", "med", "sen"}),
        {readings({{"drevený", "sud"}, {"krajský", "súd"}}),
         readings({{"jeho", "vina"}, {"dobré", "vína"}})},
    });

    packs.push_back({
        "fr",
        words({"été", "école", "élève", "père", "mère", "forêt", "hôtel", "français",
               "garçon", "naïf", "noël", "crêpe", "château", "déjà", "voilà", "café"}),
        words({"le", "la", "un", "une", "et", "dans", "pour", "avec", "sur", "mais"}),
        {readings({{"il", "a"}, {"va", "à"}}),
         readings({{"thé", "ou"}, {"ici", "où"}}),
         readings({{"la", "pêche"}, {"il", "pèche"}})},
    });

    packs.push_back({
        "ga",
        words({"áit", "béal", "cúig", "déag", "éan", "fíor", "móin", "oíche", "príomh",
               "sráid", "teanga", "úll", "síol", "bád", "mór", "lámh"}),
        words({"an", "na", "agus", "ar", "le", "go", "bean", "teach", "cat", "mac"}),
        {readings({{"an", "fear"}, {"glas", "féar"}}),
         readings({{"geal", "solas"}, {"mór", "sólás"}})},
    });

    packs.push_back({
        "es",
        words({"año", "señor", "niño", "café", "montaña", "corazón", "música", "rápido",
               "inglés", "jardín", "avión", "sábado", "lápiz", "azúcar", "médico", "días"}),
        words({"el", "la", "un", "una", "y", "en", "por", "con", "casa", "perro"}),
        {readings({{"dijo", "sí"}, {"pero", "si"}}),
         readings({{"querido", "papá"}, {"una", "papa"}}),
         readings({{"aquí", "está"}, {"mesa", "esta"}})},
    });

    packs.push_back({
        "hr",
        words({"čovjek", "đak", "šuma", "žaba", "riječ", "cvijeće", "učitelj", "već",
               "žut", "čaša", "večer", "ključ", "međutim", "snažan", "čist", "mliječ"}),
        words({"dan", "pas", "dom", "grad", "more", "selo", "brat", "sin", "rad", "mir"}),
        {readings({{"stara", "kuća"}, {"pas", "kuca"}}),
         readings({{"duga", "kosa"}, {"puna", "koša"}})},
    });

    packs.push_back({
        "hu",
        words({"álom", "élet", "író", "ősz", "úr", "ünnep", "szív", "öröm", "év", "híd",
               "vár", "tűz", "fő", "gyönyörű", "könyv", "zöld"}),
        words({"nap", "ember", "fa", "kutya", "tej", "bor", "hat", "vas", "mag", "rend"}),
        {readings({{"egy", "kerek"}, {"új", "kerék"}, {"most", "kérek"}}),
         readings({{"friss", "hal"}, {"ott", "hál"}}),
         readings({{"a", "torok"}, {"régi", "török"}})},
    });

    // No dotless/dotted i anywhere: its case pair is irregular and the
    // mechanical strip cannot touch it, so it stays out of the material.
    packs.push_back({
        "tr",
        words({"çocuk", "güzel", "yeşil", "dört", "ağaç", "şehir", "ünlü", "öğrenci",
               "çiçek", "düşünce", "göl", "ördek", "üzüm", "köy", "gök", "çay"}),
        words({"ev", "su", "at", "el", "kedi", "okul", "bu", "ben", "yol", "top"}),
        {readings({{"beyaz", "kuş"}, {"sen", "kus"}}),
         readings({{"ne", "oldu"}, {"dün", "öldü"}}),
         readings({{"eski", "sur"}, {"hadi", "sür"}})},
    });

    packs.push_back({
        "ro",
        words({"mână", "pâine", "înger", "țară", "școală", "mâine", "câine", "băiat",
               "șapte", "țărm", "întreg", "vânt", "lână", "brânză", "fără", "târziu"}),
        words({"om", "an", "car", "tren", "drum", "lac", "nor", "foc", "dor", "mare"}),
        {readings({{"vine", "fata"}, {"spre", "față"}}),
         readings({{"sare", "peste"}, {"prins", "pește"}}),
         readings({{"acolo", "casa"}, {"mea", "casă"}})},
    });

    return packs;
}

// Marked readings carry four times the weight of mark-free ones, so every
// ambiguity group keeps a stable majority under any split of the corpus.
const AmbiguousReading& pick_reading(const std::vector<AmbiguousReading>& group,
                                     diacrit::SplitMix64& rng) {
    auto weight = [](const AmbiguousReading& r) -> uint64_t {
        return diacrit::strip_diacritics(r.variant) == r.variant ? 1 : 4;
    };
    uint64_t total = 0;
    for (const AmbiguousReading& r : group) total += weight(r);
    uint64_t roll = rng.below(total);
    for (const AmbiguousReading& r : group) {
        uint64_t w = weight(r);
        if (roll < w) return r;
        roll -= w;
    }
    return group.back();
}

}  // namespace

const std::vector<LanguagePack>& language_packs() {
    static const std::vector<LanguagePack> packs = build_packs();
    return packs;
}

std::vector<std::u32string> generate_corpus(const LanguagePack& pack, size_t sentences,
                                            uint64_t seed) {
    diacrit::SplitMix64 rng(seed);
    static const char32_t kPunct[] = {U',', U'.', U'!', U'?'};

    std::vector<std::u32string> lines;
    lines.reserve(sentences);
    std::vector<std::u32string> slot_words;
    for (size_t s = 0; s < sentences; ++s) {
        size_t slots = 5 + rng.below(8);
        slot_words.clear();
        while (slot_words.size() < slots) {
            uint64_t roll = rng.below(100);
            if (roll < 15 && !pack.ambiguous.empty()) {
                const auto& group = pack.ambiguous[rng.below(pack.ambiguous.size())];
                const AmbiguousReading& r = pick_reading(group, rng);
                slot_words.push_back(r.cue);
                slot_words.push_back(r.variant);
            } else if (roll < 60) {
                slot_words.push_back(pack.marked[rng.below(pack.marked.size())]);
            } else if (roll < 85) {
                slot_words.push_back(pack.plain[rng.below(pack.plain.size())]);
            } else if (roll < 92) {
                slot_words.push_back(u32(std::to_string(1 + rng.below(9999))));
            } else {
                std::u32string w = pack.plain[rng.below(pack.plain.size())];
                w += kPunct[rng.below(4)];
                slot_words.push_back(w);
            }
        }
        std::u32string line;
        for (size_t i = 0; i < slot_words.size(); ++i) {
            if (i) line += U' ';
            line += slot_words[i];
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

size_t word_count(std::span<const std::u32string> lines) {
    size_t total = 0;
    for (const std::u32string& line : lines) total += diacrit::split_words(line).size();
    return total;
}

std::string shell_quote(const std::string& arg) {
    std::string quoted = "'";
    for (char c : arg) {
        if (c == '\'')
            quoted += "'\\''";
        else
            quoted += c;
    }
    quoted += "'";
    return quoted;
}

CommandResult run_command(const std::string& binary, const std::vector<std::string>& args,
                          const std::string& stdin_data) {
    TempDir scratch;
    write_file(scratch.path("stdin"), stdin_data);

    std::string cmd = shell_quote(binary);
    for (const std::string& a : args) cmd += " " + shell_quote(a);
    cmd += " < " + shell_quote(scratch.path("stdin"));
    cmd += " > " + shell_quote(scratch.path("stdout"));
    cmd += " 2> " + shell_quote(scratch.path("stderr"));

    int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(scratch.path("stdout"));
    result.err = read_file(scratch.path("stderr"));
    return result;
}

TempDir::TempDir() {
    std::string tmpl = "/tmp/diacrit-test-XXXXXX";
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    root_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(root_, ec);  // best effort
}

std::string TempDir::path(const std::string& name) const {
    return name.empty() ? root_ : root_ + "/" + name;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace fixtures
