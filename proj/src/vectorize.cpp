#include "textclust/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "textclust/parallel.hpp"

namespace textclust {

Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, int min_df) {
    if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
    std::unordered_map<std::string, int> df;
    std::unordered_set<std::string> in_doc;
    for (const TokenStream& s : streams) {
        in_doc.clear();
        for (const std::string& t : s.tokens) in_doc.insert(t);
        for (const std::string& t : in_doc) ++df[t];
    }
    Vocabulary vocab;
    vocab.n_docs = static_cast<int>(streams.size());
    for (const auto& [term, count] : df)
        if (count >= min_df) vocab.terms.push_back(term);
    if (vocab.terms.empty())
        throw std::runtime_error("vocabulary empty; lower min_df");
    std::sort(vocab.terms.begin(), vocab.terms.end());
    vocab.doc_freq.resize(vocab.terms.size());
    vocab.index_of.reserve(vocab.terms.size());
    for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
        vocab.index_of.emplace(vocab.terms[i], static_cast<int>(i));
        vocab.doc_freq[i] = df.at(vocab.terms[i]);
    }
    return vocab;
}

double tf_idf_weight(std::int64_t tf, int n_docs, int doc_freq, TfMode mode) {
    if (n_docs < 1) throw std::invalid_argument("tf_idf_weight: n_docs must be >= 1");
    if (doc_freq < 1 || doc_freq > n_docs)
        throw std::invalid_argument("tf_idf_weight: doc_freq outside [1, n_docs]");
    if (tf < 0) throw std::invalid_argument("tf_idf_weight: negative tf");
    if (tf == 0) return 0.0;
    const double idf = std::log10(static_cast<double>(n_docs) / static_cast<double>(doc_freq));
    const double tf_factor = mode == TfMode::Smooth
                                 ? 1.0 + std::log10(static_cast<double>(tf))
                                 : std::log10(static_cast<double>(tf));
    return tf_factor * idf;
}

WeightedVector& unit_normalize(WeightedVector& v) {
    double sq = 0.0;
    for (Eigen::SparseVector<double>::InnerIterator it(v.weights); it; ++it)
        sq += it.value() * it.value();
    if (sq == 0.0) throw std::runtime_error("cannot normalize zero vector");
    const double norm = std::sqrt(sq);
    for (Eigen::SparseVector<double>::InnerIterator it(v.weights); it; ++it)
        it.valueRef() /= norm;
    v.norm_applied = true;
    return v;
}

TermDocMatrix vectorize_corpus(const std::vector<TokenStream>& streams,
                               const Vocabulary& vocab, TfMode mode, unsigned threads) {
    const std::size_t n = streams.size();
    const int n_terms = static_cast<int>(vocab.terms.size());

    // per-document rows are independent; compute into fixed slots
    std::vector<std::vector<std::pair<int, double>>> doc_entries(n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        std::unordered_map<int, std::int64_t> tf;
        for (std::size_t d = begin; d < end; ++d) {
            tf.clear();
            for (const std::string& tok : streams[d].tokens) {
                auto it = vocab.index_of.find(tok);
                if (it != vocab.index_of.end()) ++tf[it->second];
            }
            auto& entries = doc_entries[d];
            entries.reserve(tf.size());
            for (const auto& [idx, count] : tf) {
                const double w = tf_idf_weight(count, vocab.n_docs, vocab.doc_freq[idx], mode);
                if (w > 0.0) entries.emplace_back(idx, w);
            }
            std::sort(entries.begin(), entries.end());
            if (entries.empty()) continue;
            double sq = 0.0;
            for (const auto& [idx, w] : entries) sq += w * w;
            const double norm = std::sqrt(sq);
            for (auto& [idx, w] : entries) w /= norm;
        }
    });

    TermDocMatrix matrix;
    matrix.vocab = vocab;
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t d = 0; d < n; ++d) {
        if (doc_entries[d].empty()) {
            matrix.empty_docs.push_back(streams[d].doc_id);
            continue;
        }
        const int row = static_cast<int>(matrix.doc_ids.size());
        matrix.doc_ids.push_back(streams[d].doc_id);
        for (const auto& [idx, w] : doc_entries[d]) triplets.emplace_back(row, idx, w);
    }
    matrix.rows.resize(static_cast<Eigen::Index>(matrix.doc_ids.size()), n_terms);
    matrix.rows.setFromTriplets(triplets.begin(), triplets.end());
    matrix.rows.makeCompressed();
    return matrix;
}

void write_matrix_dump(const TermDocMatrix& matrix, std::ostream& out) {
    char buf[64];
    for (Eigen::Index r = 0; r < matrix.rows.rows(); ++r) {
        out << matrix.doc_ids[static_cast<std::size_t>(r)] << '\t';
        bool first = true;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(matrix.rows, r);
             it; ++it) {
            std::snprintf(buf, sizeof buf, "%d:%.9g", static_cast<int>(it.col()), it.value());
            if (!first) out << ',';
            out << buf;
            first = false;
        }
        out << '\n';
    }
}

}  // namespace textclust
