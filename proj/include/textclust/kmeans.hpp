// Similarity-maximizing K-means: assign each document to its most similar
// centroid, recompute centroids as normalized means, repeat until no
// assignment changes.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "textclust/similarity.hpp"
#include "textclust/vectorize.hpp"

namespace textclust {

enum class InitMethod {
    FirstK,    ///< copies of the first K rows in corpus order
    PlusPlus,  ///< seeded k-means++ with weights proportional to (1 - max similarity)
};

struct KMeansConfig {
    int k = 2;
    MeasureKind measure = MeasureKind::Cosine;
    std::uint64_t seed = 0;
    int max_iterations = 100;
    InitMethod init = InitMethod::PlusPlus;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

struct IterationStat {
    int pass = 0;          ///< 1-based assign pass
    int changed = 0;       ///< documents that switched cluster in this pass
    double objective = 0;  ///< total similarity after this pass
    /// Previous assignment evaluated under this pass's centroids; the assign
    /// step may only improve on it. NaN for the first pass.
    double pre_objective = 0;
};

struct ClusterModel {
    int k = 0;
    MeasureKind measure = MeasureKind::Cosine;
    std::vector<Eigen::VectorXd> centroids;  ///< unit-normalized, nonnegative
    std::vector<int> assignment;             ///< per matrix row
    int iterations_run = 0;                  ///< passes that changed an assignment
    bool converged = false;
    std::vector<IterationStat> objective_trace;
};

struct AssignResult {
    std::vector<int> assignment;
    std::vector<double> best_similarity;
};

/// Throws std::invalid_argument if k is out of range or the matrix holds
/// fewer than k distinct rows (the message names the duplicate count).
std::vector<Eigen::VectorXd> init_centroids(const TermDocMatrix& matrix,
                                            const KMeansConfig& config);

/// Argmax of similarity over centroids per document; ties break to the
/// lowest cluster id. Data-parallel over documents.
AssignResult assign(const TermDocMatrix& matrix,
                    const std::vector<Eigen::VectorXd>& centroids, MeasureKind measure,
                    unsigned threads = 0);

/// Componentwise mean of each cluster's members (fixed document order), then
/// unit normalization. An empty cluster is reseeded with the document least
/// similar to its own centroid, lowest document index on ties.
std::vector<Eigen::VectorXd> update_centroids(const TermDocMatrix& matrix,
                                              const std::vector<int>& assignment, int k,
                                              MeasureKind measure);

/// Total similarity of documents to their assigned centroids, accumulated in
/// document index order.
double objective_value(const TermDocMatrix& matrix, const std::vector<int>& assignment,
                       const std::vector<Eigen::VectorXd>& centroids, MeasureKind measure);

ClusterModel run_kmeans(const TermDocMatrix& matrix, const KMeansConfig& config);

/// One line per pass: `iter<TAB>changed_docs<TAB>objective` (9 significant digits).
void write_iteration_log(const ClusterModel& model, std::ostream& out);

}  // namespace textclust
