#include "textclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "textclust/parallel.hpp"

namespace textclust {
namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// 53-bit uniform in [0, 1); independent of library distribution internals so
// seeded runs reproduce across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::VectorXd dense_row(const SpMat& m, Eigen::Index r) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m.cols());
    for (SpMat::InnerIterator it(m, r); it; ++it) v[it.col()] = it.value();
    return v;
}

// exact distinct-row count via serialized row signatures
int distinct_rows(const SpMat& m) {
    std::unordered_set<std::string> seen;
    std::string key;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        key.clear();
        for (SpMat::InnerIterator it(m, r); it; ++it) {
            const auto col = static_cast<std::int64_t>(it.col());
            const double val = it.value();
            key.append(reinterpret_cast<const char*>(&col), sizeof col);
            key.append(reinterpret_cast<const char*>(&val), sizeof val);
        }
        seen.insert(key);
    }
    return static_cast<int>(seen.size());
}

struct CentroidStats {
    std::vector<double> norm;
    std::vector<double> sum;
};

CentroidStats centroid_stats(const std::vector<Eigen::VectorXd>& centroids) {
    CentroidStats stats;
    stats.norm.reserve(centroids.size());
    stats.sum.reserve(centroids.size());
    for (const auto& c : centroids) {
        stats.norm.push_back(c.norm());
        stats.sum.push_back(c.sum());
    }
    return stats;
}

}  // namespace

std::vector<Eigen::VectorXd> init_centroids(const TermDocMatrix& matrix,
                                            const KMeansConfig& config) {
    const auto n = static_cast<int>(matrix.rows.rows());
    if (config.k < 1) throw std::invalid_argument("k must be >= 1");
    if (config.k > n) {
        throw std::invalid_argument("k=" + std::to_string(config.k) +
                                    " exceeds the " + std::to_string(n) +
                                    " clusterable documents");
    }
    const int distinct = distinct_rows(matrix.rows);
    if (distinct < config.k) {
        throw std::invalid_argument(
            "only " + std::to_string(distinct) + " distinct document vectors for k=" +
            std::to_string(config.k) + " (" + std::to_string(n - distinct) + " duplicates)");
    }

    std::vector<Eigen::VectorXd> centroids;
    centroids.reserve(static_cast<std::size_t>(config.k));

    if (config.init == InitMethod::FirstK) {
        for (int i = 0; i < config.k; ++i) centroids.push_back(dense_row(matrix.rows, i));
        return centroids;
    }

    // k-means++ adapted to similarities: the next seed is drawn with weight
    // proportional to (1 - max similarity to the chosen seeds), clamped at 0.
    std::mt19937_64 rng(config.seed);
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(config.k));
    const int first = static_cast<int>(uniform01(rng) * n);
    chosen.push_back(std::min(first, n - 1));

    std::vector<double> max_sim(static_cast<std::size_t>(n),
                                -std::numeric_limits<double>::infinity());
    while (static_cast<int>(chosen.size()) < config.k) {
        const int last = chosen.back();
        parallel_for(static_cast<std::size_t>(n), config.threads,
                     [&](std::size_t begin, std::size_t end) {
                         for (std::size_t i = begin; i < end; ++i) {
                             const double s =
                                 similarity(config.measure,
                                            matrix.rows.row(static_cast<Eigen::Index>(i)),
                                            matrix.rows.row(last));
                             max_sim[i] = std::fmax(max_sim[i], s);
                         }
                     });
        std::vector<double> weight(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            weight[static_cast<std::size_t>(i)] =
                std::fmax(0.0, 1.0 - max_sim[static_cast<std::size_t>(i)]);
        for (int c : chosen) weight[static_cast<std::size_t>(c)] = 0.0;
        double total = 0.0;
        for (double w : weight) total += w;
        if (total <= 0.0)
            throw std::runtime_error("k-means++ ran out of candidate seeds");
        const double u = uniform01(rng) * total;
        double cum = 0.0;
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            const double w = weight[static_cast<std::size_t>(i)];
            if (w <= 0.0) continue;
            cum += w;
            if (u < cum) {
                pick = i;
                break;
            }
            pick = i;  // carries the last positive-weight row past rounding
        }
        chosen.push_back(pick);
    }
    for (int c : chosen) centroids.push_back(dense_row(matrix.rows, c));
    return centroids;
}

AssignResult assign(const TermDocMatrix& matrix, const std::vector<Eigen::VectorXd>& centroids,
                    MeasureKind measure, unsigned threads) {
    if (centroids.empty()) throw std::invalid_argument("assign: no centroids");
    const auto n = static_cast<std::size_t>(matrix.rows.rows());
    const CentroidStats stats = centroid_stats(centroids);
    AssignResult result;
    result.assignment.assign(n, 0);
    result.best_similarity.assign(n, 0.0);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto row = matrix.rows.row(static_cast<Eigen::Index>(i));
            int best = 0;
            double best_sim = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centroids.size(); ++c) {
                const double s =
                    similarity_to_dense(measure, row, centroids[c], stats.norm[c], stats.sum[c]);
                if (s > best_sim) {  // ties keep the lowest cluster id
                    best_sim = s;
                    best = static_cast<int>(c);
                }
            }
            result.assignment[i] = best;
            result.best_similarity[i] = best_sim;
        }
    });
    return result;
}

std::vector<Eigen::VectorXd> update_centroids(const TermDocMatrix& matrix,
                                              const std::vector<int>& assignment, int k,
                                              MeasureKind measure) {
    const auto n = static_cast<std::size_t>(matrix.rows.rows());
    if (assignment.size() != n)
        throw std::invalid_argument("update_centroids: assignment size mismatch");
    std::vector<Eigen::VectorXd> centroids(
        static_cast<std::size_t>(k), Eigen::VectorXd::Zero(matrix.rows.cols()));
    std::vector<int> count(static_cast<std::size_t>(k), 0);

    // fixed document order keeps sums bitwise reproducible
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(assignment[i]);
        ++count[c];
        for (SpMat::InnerIterator it(matrix.rows, static_cast<Eigen::Index>(i)); it; ++it)
            centroids[c][it.col()] += it.value();
    }
    std::vector<int> empty;
    for (int c = 0; c < k; ++c) {
        if (count[static_cast<std::size_t>(c)] == 0) {
            empty.push_back(c);
            continue;
        }
        auto& v = centroids[static_cast<std::size_t>(c)];
        v /= static_cast<double>(count[static_cast<std::size_t>(c)]);
        v /= v.norm();
    }
    if (empty.empty()) return centroids;

    // farthest-point repair: reseed each empty centroid with the document
    // least similar to its own cluster's centroid (lowest index on ties)
    const CentroidStats stats = centroid_stats(centroids);
    std::vector<char> taken(n, 0);
    for (int c : empty) {
        int pick = -1;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            const auto own = static_cast<std::size_t>(assignment[i]);
            const double s = similarity_to_dense(measure,
                                                 matrix.rows.row(static_cast<Eigen::Index>(i)),
                                                 centroids[own], stats.norm[own], stats.sum[own]);
            if (s < worst) {
                worst = s;
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0) throw std::runtime_error("cannot repair empty cluster");
        taken[static_cast<std::size_t>(pick)] = 1;
        centroids[static_cast<std::size_t>(c)] = dense_row(matrix.rows, pick);
    }
    return centroids;
}

double objective_value(const TermDocMatrix& matrix, const std::vector<int>& assignment,
                       const std::vector<Eigen::VectorXd>& centroids, MeasureKind measure) {
    const CentroidStats stats = centroid_stats(centroids);
    double total = 0.0;
    for (Eigen::Index i = 0; i < matrix.rows.rows(); ++i) {
        const auto c = static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)]);
        total += similarity_to_dense(measure, matrix.rows.row(i), centroids[c], stats.norm[c],
                                     stats.sum[c]);
    }
    return total;
}

ClusterModel run_kmeans(const TermDocMatrix& matrix, const KMeansConfig& config) {
    if (config.max_iterations < 1)
        throw std::invalid_argument("max_iterations must be >= 1");
    ClusterModel model;
    model.k = config.k;
    model.measure = config.measure;
    model.centroids = init_centroids(matrix, config);

    const auto n = static_cast<std::size_t>(matrix.rows.rows());
    std::vector<int> assignment;  // empty until the first pass
    double pre_objective = std::numeric_limits<double>::quiet_NaN();

    for (int pass = 1; pass <= config.max_iterations; ++pass) {
        AssignResult res = assign(matrix, model.centroids, config.measure, config.threads);
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) objective += res.best_similarity[i];
        int changed = 0;
        if (assignment.empty()) {
            changed = static_cast<int>(n);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                if (assignment[i] != res.assignment[i]) ++changed;
        }
        model.objective_trace.push_back({pass, changed, objective, pre_objective});
        assignment = std::move(res.assignment);
        if (changed == 0) {
            model.converged = true;
            break;
        }
        model.iterations_run += 1;
        if (pass == config.max_iterations) break;
        model.centroids = update_centroids(matrix, assignment, config.k, config.measure);
        pre_objective = objective_value(matrix, assignment, model.centroids, config.measure);
    }
    model.assignment = std::move(assignment);
    return model;
}

void write_iteration_log(const ClusterModel& model, std::ostream& out) {
    char buf[96];
    for (const IterationStat& s : model.objective_trace) {
        std::snprintf(buf, sizeof buf, "%d\t%d\t%.9g\n", s.pass, s.changed, s.objective);
        out << buf;
    }
}

}  // namespace textclust
