#include "textclust/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "textclust/parallel.hpp"

namespace textclust {
namespace detail {
extern const char* const kDefaultStopwords;
extern const char* const kDefaultStemRules;
}  // namespace detail

std::string filter_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (const char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        char keep = 0;
        if (c >= 'a' && c <= 'z') keep = static_cast<char>(c);
        else if (c >= 'A' && c <= 'Z') keep = static_cast<char>(c - 'A' + 'a');
        else if (c >= '0' && c <= '9') keep = static_cast<char>(c);
        if (keep) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(keep);
        } else {
            // separators are replaced, never deleted, so "end.Start" splits
            pending_space = true;
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view filtered) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < filtered.size()) {
        while (i < filtered.size() && std::isspace(static_cast<unsigned char>(filtered[i]))) ++i;
        std::size_t j = i;
        while (j < filtered.size() && !std::isspace(static_cast<unsigned char>(filtered[j]))) ++j;
        if (j > i) tokens.emplace_back(filtered.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stops) {
    std::erase_if(tokens, [&](const std::string& t) { return stops.words.contains(t); });
    return tokens;
}

std::string stem_token(const std::string& token, const StemRuleSet& rules) {
    for (const StemRule& r : rules.rules) {
        if (token.size() < r.suffix.size()) continue;
        const std::size_t stem_len = token.size() - r.suffix.size();
        if (stem_len < r.min_stem_len) continue;
        if (token.compare(stem_len, r.suffix.size(), r.suffix) != 0) continue;
        return token.substr(0, stem_len) + r.replacement;
    }
    return token;
}

std::vector<std::string> stem(std::vector<std::string> tokens, const StemRuleSet& rules) {
    for (auto& t : tokens) t = stem_token(t, rules);
    return tokens;
}

TokenStream preprocess_document(const Document& doc, const StopwordList& stops,
                                const StemRuleSet& rules) {
    return {doc.id, stem(remove_stopwords(tokenize(filter_text(doc.text)), stops), rules)};
}

std::vector<TokenStream> preprocess_corpus(const Corpus& corpus, const StopwordList& stops,
                                           const StemRuleSet& rules, unsigned threads) {
    std::vector<TokenStream> streams(corpus.documents.size());
    parallel_for(corpus.documents.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            streams[i] = preprocess_document(corpus.documents[i], stops, rules);
    });
    return streams;
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string line(text.substr(pos, nl - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
        if (nl == text.size()) break;
    }
    return lines;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_lower_alnum(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    });
}

}  // namespace

StopwordList parse_stopwords(std::string_view text, std::string source) {
    StopwordList list;
    list.source = std::move(source);
    std::size_t lineno = 0;
    for (const std::string& raw : split_lines(text)) {
        ++lineno;
        std::string word = trim(raw);
        if (word.empty() || word[0] == '#') continue;
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!is_lower_alnum(word)) {
            std::ostringstream os;
            os << list.source << ":" << lineno << ": invalid stopword entry '" << word << "'";
            throw std::runtime_error(os.str());
        }
        list.words.insert(std::move(word));
    }
    return list;
}

StemRuleSet parse_stem_rules(std::string_view text, std::string source) {
    StemRuleSet set;
    set.source = std::move(source);
    std::size_t lineno = 0;
    std::unordered_set<std::string> seen;
    for (const std::string& raw : split_lines(text)) {
        ++lineno;
        if (trim(raw).empty() || trim(raw)[0] == '#') continue;
        const std::size_t t1 = raw.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : raw.find('\t', t1 + 1);
        auto bad = [&](const char* why) {
            std::ostringstream os;
            os << set.source << ":" << lineno << ": " << why;
            return std::runtime_error(os.str());
        };
        if (t2 == std::string::npos) throw bad("expected suffix<TAB>replacement<TAB>min_stem_len");
        StemRule rule;
        rule.suffix = raw.substr(0, t1);
        rule.replacement = raw.substr(t1 + 1, t2 - t1 - 1);
        const std::string min_str = trim(raw.substr(t2 + 1));
        if (!is_lower_alnum(rule.suffix)) throw bad("suffix must be nonempty lowercase");
        if (!rule.replacement.empty() && !is_lower_alnum(rule.replacement))
            throw bad("replacement must be lowercase");
        auto [p, errc] = std::from_chars(min_str.data(), min_str.data() + min_str.size(),
                                         rule.min_stem_len);
        if (errc != std::errc{} || p != min_str.data() + min_str.size())
            throw bad("min_stem_len must be a nonnegative integer");
        if (!seen.insert(rule.suffix).second) throw bad("duplicate suffix");
        set.rules.push_back(std::move(rule));
    }
    // longest suffix first; equal lengths keep file order (they are disjoint anyway)
    std::stable_sort(set.rules.begin(), set.rules.end(),
                     [](const StemRule& a, const StemRule& b) {
                         return a.suffix.size() > b.suffix.size();
                     });
    return set;
}

namespace {
std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
}  // namespace

StopwordList load_stopwords(const std::filesystem::path& path) {
    return parse_stopwords(read_file(path), path.string());
}

StemRuleSet load_stem_rules(const std::filesystem::path& path) {
    return parse_stem_rules(read_file(path), path.string());
}

const StopwordList& builtin_stopwords() {
    static const StopwordList list = parse_stopwords(detail::kDefaultStopwords, "builtin");
    return list;
}

const StemRuleSet& builtin_stem_rules() {
    static const StemRuleSet set = parse_stem_rules(detail::kDefaultStemRules, "builtin");
    return set;
}

}  // namespace textclust
