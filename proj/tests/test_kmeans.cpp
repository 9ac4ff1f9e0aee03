#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "textclust/kmeans.hpp"

using namespace textclust;

namespace {

// Build a TermDocMatrix directly from dense rows (normalized on the way in).
TermDocMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows,
                               bool normalize = true) {
    TermDocMatrix m;
    const int dim = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    m.vocab.n_docs = static_cast<int>(rows.size());
    for (int t = 0; t < dim; ++t) {
        m.vocab.terms.push_back("t" + std::to_string(t));
        m.vocab.doc_freq.push_back(1);
        m.vocab.index_of.emplace(m.vocab.terms.back(), t);
    }
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        m.doc_ids.push_back("doc" + std::to_string(r));
        double sq = 0.0;
        for (double x : rows[r]) sq += x * x;
        const double norm = normalize && sq > 0.0 ? std::sqrt(sq) : 1.0;
        for (int t = 0; t < dim; ++t)
            if (rows[r][static_cast<std::size_t>(t)] != 0.0)
                triplets.emplace_back(static_cast<int>(r), t,
                                      rows[r][static_cast<std::size_t>(t)] / norm);
    }
    m.rows.resize(static_cast<Eigen::Index>(rows.size()), dim);
    m.rows.setFromTriplets(triplets.begin(), triplets.end());
    m.rows.makeCompressed();
    return m;
}

TermDocMatrix random_matrix(std::mt19937_64& rng, int n_docs, int dim) {
    std::vector<std::vector<double>> rows;
    for (int d = 0; d < n_docs; ++d) {
        std::vector<double> row(static_cast<std::size_t>(dim), 0.0);
        const int nnz = 1 + static_cast<int>(rng() % 6u);
        for (int i = 0; i < nnz; ++i)
            row[rng() % static_cast<unsigned>(dim)] =
                0.05 + static_cast<double>(rng() % 1000u) / 1000.0;
        rows.push_back(std::move(row));
    }
    return matrix_from_rows(rows);
}

KMeansConfig config(int k, MeasureKind measure, std::uint64_t seed,
                    InitMethod init = InitMethod::PlusPlus) {
    KMeansConfig c;
    c.k = k;
    c.measure = measure;
    c.seed = seed;
    c.init = init;
    return c;
}

bool same_model(const ClusterModel& a, const ClusterModel& b) {
    if (a.assignment != b.assignment || a.iterations_run != b.iterations_run ||
        a.converged != b.converged || a.centroids.size() != b.centroids.size())
        return false;
    for (std::size_t c = 0; c < a.centroids.size(); ++c)
        if (a.centroids[c] != b.centroids[c]) return false;
    for (std::size_t i = 0; i < a.objective_trace.size(); ++i)
        if (a.objective_trace[i].objective != b.objective_trace[i].objective) return false;
    return true;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("FirstK initialization copies the leading rows") {
    const auto m = matrix_from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const auto cents = init_centroids(m, config(2, MeasureKind::Cosine, 0, InitMethod::FirstK));
    REQUIRE(cents.size() == 2);
    CHECK(cents[0][0] == 1.0);
    CHECK(cents[1][1] == 1.0);
}

TEST_CASE("PlusPlus is seed-deterministic") {
    std::mt19937_64 rng(5);
    const auto m = random_matrix(rng, 12, 8);
    const auto a = init_centroids(m, config(3, MeasureKind::Cosine, 42));
    const auto b = init_centroids(m, config(3, MeasureKind::Cosine, 42));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("PlusPlus covers well-separated rows for any seed") {
    const auto m = matrix_from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (const auto kind : {MeasureKind::Cosine, MeasureKind::Fuzzy}) {
            const auto cents = init_centroids(m, config(3, kind, seed));
            std::set<int> covered;
            for (const auto& c : cents)
                for (int t = 0; t < 3; ++t)
                    if (c[t] == 1.0) covered.insert(t);
            CHECK(covered.size() == 3);
        }
    }
}

TEST_CASE("init rejects k out of range and too few distinct rows") {
    const auto m = matrix_from_rows({{1, 0}, {1, 0}, {0, 1}});
    CHECK_THROWS_AS(init_centroids(m, config(4, MeasureKind::Cosine, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(init_centroids(m, config(0, MeasureKind::Cosine, 0)),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(init_centroids(m, config(3, MeasureKind::Cosine, 0)),
                         doctest::Contains("2 distinct"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        init_centroids(m, config(3, MeasureKind::Cosine, 0, InitMethod::FirstK)),
        doctest::Contains("duplicates"), std::invalid_argument);
}

TEST_CASE("assign picks the most similar centroid, lowest id on ties") {
    const auto m = matrix_from_rows({{1, 0, 0}, {0, 0, 1}});
    std::vector<Eigen::VectorXd> cents(3, Eigen::VectorXd::Zero(3));
    const double r = 1.0 / std::sqrt(2.0);
    cents[0] << r, r, 0;   // equally similar to doc0 as cents[1]
    cents[1] << r, 0, r;
    cents[2] << 0, 0, 1;   // exactly doc1
    const AssignResult res = assign(m, cents, MeasureKind::Cosine);
    CHECK(res.assignment[0] == 0);  // tie between 0 and 1 breaks low
    CHECK(res.assignment[1] == 2);  // self-similarity wins
    CHECK(res.best_similarity[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("assign matches a per-document brute-force argmax") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = random_matrix(rng, 6, 10);
        const auto cents =
            init_centroids(m, config(2, MeasureKind::Fuzzy, trial));
        for (const auto kind : {MeasureKind::Cosine, MeasureKind::Fuzzy}) {
            const AssignResult res = assign(m, cents, kind);
            for (int d = 0; d < 6; ++d) {
                // dense recomputation straight from the definition
                std::vector<double> doc(10, 0.0), sims;
                for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m.rows, d);
                     it; ++it)
                    doc[static_cast<std::size_t>(it.col())] = it.value();
                for (const auto& c : cents) {
                    std::vector<double> cd(c.data(), c.data() + c.size());
                    sims.push_back(kind == MeasureKind::Cosine ? oracle::cosine(doc, cd)
                                                               : oracle::fuzzy(doc, cd));
                }
                int best = 0;
                for (std::size_t j = 1; j < sims.size(); ++j)
                    if (sims[j] > sims[best]) best = static_cast<int>(j);
                CHECK(res.assignment[static_cast<std::size_t>(d)] == best);
                CHECK(res.best_similarity[static_cast<std::size_t>(d)] ==
                      doctest::Approx(sims[static_cast<std::size_t>(best)]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("update_centroids takes normalized means") {
    SUBCASE("singleton cluster keeps its member") {
        const auto m = matrix_from_rows({{1, 0}, {0, 1}});
        const auto cents = update_centroids(m, {0, 1}, 2, MeasureKind::Cosine);
        CHECK(cents[0][0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cents[1][1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("two orthogonal unit members average to the diagonal") {
        const auto m = matrix_from_rows({{1, 0}, {0, 1}});
        const auto cents = update_centroids(m, {0, 0}, 1, MeasureKind::Cosine);
        CHECK(cents[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(cents[0][1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("four-document fixture matches the dense hand computation") {
        const auto m = matrix_from_rows({{1, 0, 0}, {0, 1, 0}, {0.6, 0.8, 0}, {0, 0, 1}});
        const auto cents = update_centroids(m, {0, 0, 1, 1}, 2, MeasureKind::Cosine);
        CHECK(cents[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
        CHECK(cents[0][1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
        // mean of {0.6,0.8,0} and {0,0,1} is {0.3,0.4,0.5}; norm sqrt(0.5)
        CHECK(cents[1][0] == doctest::Approx(0.3 * std::sqrt(2.0)).epsilon(1e-9));
        CHECK(cents[1][1] == doctest::Approx(0.4 * std::sqrt(2.0)).epsilon(1e-9));
        CHECK(cents[1][2] == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-9));
    }
    SUBCASE("empty clusters are reseeded with the least similar document") {
        const auto m = matrix_from_rows({{1, 0, 0}, {1, 0.2, 0}, {0.2, 1, 0}});
        // cluster 1 gets nobody; doc2 is least similar to the cluster-0 mean
        const auto cents = update_centroids(m, {0, 0, 0}, 2, MeasureKind::Cosine);
        REQUIRE(cents.size() == 2);
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(3);
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m.rows, 2); it; ++it)
            expected[it.col()] = it.value();
        CHECK(cents[1].isApprox(expected, 1e-12));
        for (const auto& c : cents) {
            CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(c.minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("k=1 converges in one effective iteration") {
    std::mt19937_64 rng(41);
    const auto m = random_matrix(rng, 8, 6);
    const ClusterModel model = run_kmeans(m, config(1, MeasureKind::Cosine, 0));
    CHECK(model.converged);
    CHECK(model.iterations_run == 1);
    for (int a : model.assignment) CHECK(a == 0);
}

TEST_CASE("k equal to the number of distinct docs isolates every document") {
    const auto m = matrix_from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    for (const auto kind : {MeasureKind::Cosine, MeasureKind::Fuzzy}) {
        const ClusterModel model = run_kmeans(m, config(4, kind, 3));
        CHECK(model.converged);
        std::set<int> clusters(model.assignment.begin(), model.assignment.end());
        CHECK(clusters.size() == 4);
        CHECK(model.objective_trace.back().objective == doctest::Approx(4.0).epsilon(1e-9));
    }
}

TEST_CASE("disjoint-vocabulary topics separate perfectly under both measures") {
    // two topics with disjoint supports; cross-topic similarity is exactly 0
    const auto m = matrix_from_rows({{1, 2, 0, 0},
                                     {2, 1, 0, 0},
                                     {1, 1, 0, 0},
                                     {0, 0, 1, 2},
                                     {0, 0, 2, 1},
                                     {0, 0, 1, 1}});
    for (const auto kind : {MeasureKind::Cosine, MeasureKind::Fuzzy}) {
        const ClusterModel model = run_kmeans(m, config(2, kind, 1));
        CHECK(model.converged);
        CHECK(model.assignment[0] == model.assignment[1]);
        CHECK(model.assignment[1] == model.assignment[2]);
        CHECK(model.assignment[3] == model.assignment[4]);
        CHECK(model.assignment[4] == model.assignment[5]);
        CHECK(model.assignment[0] != model.assignment[3]);
    }
}

TEST_CASE("termination, fixed point, monotone boundaries and centroid invariants") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 20u);
        const auto m = random_matrix(rng, n, 12);
        const int distinct_cap = 4;
        KMeansConfig cfg = config(1 + static_cast<int>(rng() % distinct_cap),
                                  (trial & 1) ? MeasureKind::Fuzzy : MeasureKind::Cosine,
                                  trial);
        ClusterModel model;
        try {
            model = run_kmeans(m, cfg);
        } catch (const std::invalid_argument&) {
            continue;  // k exceeded the distinct-row count for this draw
        }
        CHECK(static_cast<int>(model.objective_trace.size()) <= cfg.max_iterations);
        // every centroid on the unit sphere, nonnegative
        for (const auto& c : model.centroids) {
            CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(c.minCoeff() >= 0.0);
        }
        // assignment covers exactly the clusterable documents
        REQUIRE(model.assignment.size() == static_cast<std::size_t>(n));
        for (int a : model.assignment) {
            CHECK(a >= 0);
            CHECK(a < cfg.k);
        }
        // reassignment under the final centroids is a fixed point
        if (model.converged) {
            const AssignResult again = assign(m, model.centroids, cfg.measure);
            CHECK(again.assignment == model.assignment);
        }
        // the assign step never worsens the objective across a boundary
        for (const auto& stat : model.objective_trace) {
            if (!std::isnan(stat.pre_objective)) CHECK(stat.objective >= stat.pre_objective);
        }
    }
}

TEST_CASE("identical inputs give bitwise identical models for any thread count") {
    std::mt19937_64 rng(61);
    const auto m = random_matrix(rng, 24, 16);
    for (const auto kind : {MeasureKind::Cosine, MeasureKind::Fuzzy}) {
        KMeansConfig c1 = config(4, kind, 9);
        c1.threads = 1;
        KMeansConfig c4 = config(4, kind, 9);
        c4.threads = 4;
        const ClusterModel m1 = run_kmeans(m, c1);
        const ClusterModel m4 = run_kmeans(m, c4);
        CHECK(same_model(m1, m4));
    }
}

TEST_CASE("hitting the iteration cap reports non-convergence") {
    std::mt19937_64 rng(67);
    const auto m = random_matrix(rng, 20, 10);
    KMeansConfig cfg = config(3, MeasureKind::Cosine, 2);
    cfg.max_iterations = 1;
    const ClusterModel model = run_kmeans(m, cfg);
    CHECK(!model.converged);
    CHECK(model.objective_trace.size() == 1);
    CHECK(model.iterations_run == 1);
    REQUIRE(model.assignment.size() == 20);  // still a total assignment
    CHECK_THROWS_AS(
        [&] {
            KMeansConfig bad = cfg;
            bad.max_iterations = 0;
            return run_kmeans(m, bad);
        }(),
        std::invalid_argument);
}

TEST_CASE("iteration log prints pass, changed and objective") {
    const auto m = matrix_from_rows({{1, 0}, {0, 1}});
    const ClusterModel model = run_kmeans(m, config(2, MeasureKind::Cosine, 0));
    std::ostringstream os;
    write_iteration_log(model, os);
    CHECK(os.str().find("1\t2\t") == 0);
}

}  // TEST_SUITE
