// Vector space model: pruned vocabulary, log-tf x log-idf weights, unit rows.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "textclust/preprocess.hpp"

namespace textclust {

struct Vocabulary {
    std::vector<std::string> terms;               ///< sorted lexicographically
    std::unordered_map<std::string, int> index_of;
    std::vector<int> doc_freq;                    ///< documents containing terms[i]
    int n_docs = 0;                               ///< total documents in the collection
};

enum class TfMode {
    Smooth,        ///< (1 + log10 tf) * log10(N/N_i); keeps tf=1 terms
    PaperLiteral,  ///< log10(tf) * log10(N/N_i); tf=1 terms get weight 0
};

/// Sparse nonnegative document vector. Once norm_applied is set the L2 norm
/// is 1 and every stored component lies in (0, 1], which is what lets the
/// fuzzy measure read components as set membership degrees.
struct WeightedVector {
    std::string doc_id;
    Eigen::SparseVector<double> weights;
    bool norm_applied = false;
};

struct TermDocMatrix {
    Vocabulary vocab;
    /// One unit-normalized row per kept document, in corpus order.
    Eigen::SparseMatrix<double, Eigen::RowMajor> rows;
    std::vector<std::string> doc_ids;     ///< row index -> document id
    std::vector<std::string> empty_docs;  ///< documents whose vector came out empty
};

/// Counts document frequencies and keeps terms with df >= min_df.
/// Throws std::runtime_error if pruning empties the vocabulary.
Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, int min_df);

/// The weighting formula. tf=0 yields 0; doc_freq outside [1, n_docs] is a
/// contract violation (std::invalid_argument).
double tf_idf_weight(std::int64_t tf, int n_docs, int doc_freq, TfMode mode);

/// Scales v to unit L2 norm. Throws std::runtime_error on an empty or
/// all-zero vector; callers route such documents to empty_docs.
WeightedVector& unit_normalize(WeightedVector& v);

TermDocMatrix vectorize_corpus(const std::vector<TokenStream>& streams,
                               const Vocabulary& vocab, TfMode mode,
                               unsigned threads = 0);

/// Dump format: `doc_id<TAB>index:weight,index:weight,...` with weights at
/// nine significant digits, one row per line.
void write_matrix_dump(const TermDocMatrix& matrix, std::ostream& out);

}  // namespace textclust
