// Text normalization pipeline: filter -> tokenize -> stopword removal -> stem.
// The stage order matters: stopwords are removed before stemming so that a
// stemmed fragment of a stopword can never survive into the token stream.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "textclust/corpus.hpp"

namespace textclust {

struct StopwordList {
    std::unordered_set<std::string> words;
    std::string source{"builtin"};
};

/// Suffix rewrite rule: if a token ends with `suffix` and the remaining stem
/// has at least `min_stem_len` characters, the suffix is replaced.
struct StemRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem_len = 1;
};

/// Rules held longest-suffix-first; exactly one rule rewrites a token.
/// The shipped set is closed under reapplication: stemming its own output
/// changes nothing.
struct StemRuleSet {
    std::vector<StemRule> rules;
    std::string source{"builtin"};
};

struct TokenStream {
    std::string doc_id;
    std::vector<std::string> tokens;
};

/// Lowercases and replaces every character that is not a letter or digit
/// with a space, then collapses space runs. Idempotent.
std::string filter_text(std::string_view text);

/// Splits filtered text on whitespace runs, preserving order and duplicates.
std::vector<std::string> tokenize(std::string_view filtered);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordList& stops);

std::string stem_token(const std::string& token, const StemRuleSet& rules);
std::vector<std::string> stem(std::vector<std::string> tokens, const StemRuleSet& rules);

/// The full pipeline: stem(remove_stopwords(tokenize(filter_text(text)))).
TokenStream preprocess_document(const Document& doc, const StopwordList& stops,
                                const StemRuleSet& rules);

/// Per-document preprocessing over a whole corpus; documents are independent
/// and run in parallel, output order always matches corpus order.
std::vector<TokenStream> preprocess_corpus(const Corpus& corpus, const StopwordList& stops,
                                           const StemRuleSet& rules, unsigned threads = 0);

// Parsers accept '#' comment lines and blank lines. Stem rule lines are
// `suffix<TAB>replacement<TAB>min_stem_len`; rules are stable-sorted
// longest-suffix-first on load.
StopwordList parse_stopwords(std::string_view text, std::string source);
StemRuleSet parse_stem_rules(std::string_view text, std::string source);
StopwordList load_stopwords(const std::filesystem::path& path);
StemRuleSet load_stem_rules(const std::filesystem::path& path);

/// Shipped defaults: 119 stopwords, 67 stem rules.
const StopwordList& builtin_stopwords();
const StemRuleSet& builtin_stem_rules();

}  // namespace textclust
