// textclust: generate synthetic corpora, cluster documents, and compare the
// cosine and fuzzy similarity measures side by side.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "textclust/corpus.hpp"
#include "textclust/kmeans.hpp"
#include "textclust/preprocess.hpp"
#include "textclust/report.hpp"
#include "textclust/similarity.hpp"
#include "textclust/synth.hpp"
#include "textclust/vectorize.hpp"

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

struct PipelineOpts {
    std::string input;
    std::string out;
    int k = 2;
    std::uint64_t seed = 0;
    int min_df = 2;
    std::string tf_mode = "smooth";
    std::string init = "plusplus";
    int max_iters = 100;
    std::string stopwords_path;
    std::string stem_rules_path;
    std::string manifest_mode = "file";
    bool force = false;
    bool link = false;
    unsigned threads = 0;
    std::vector<std::string> extensions{".txt"};
    bool lossy_decode = false;
    double max_file_mb = 16.0;
    std::string dump_matrix;
    std::string iter_log;
    std::string labels_path;
    bool paper_timing = false;
    std::string measure = "cosine";  // cluster subcommand only
};

void add_pipeline_options(CLI::App* cmd, PipelineOpts& o) {
    cmd->add_option("--input", o.input, "corpus directory")->required();
    cmd->add_option("--out", o.out, "output directory for manifests and report.json")
        ->required();
    cmd->add_option("--k", o.k, "number of clusters")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for centroid initialization");
    cmd->add_option("--min-df", o.min_df, "prune terms in fewer documents than this")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tf-mode", o.tf_mode, "term-frequency mode")
        ->check(CLI::IsMember({"smooth", "paper-literal"}));
    cmd->add_option("--init", o.init, "centroid initialization")
        ->check(CLI::IsMember({"firstk", "plusplus"}));
    cmd->add_option("--max-iters", o.max_iters, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--stopwords", o.stopwords_path, "stopword list file (default builtin)");
    cmd->add_option("--stem-rules", o.stem_rules_path, "stem rule file (default builtin)");
    cmd->add_option("--manifest-mode", o.manifest_mode, "manifest style")
        ->check(CLI::IsMember({"file", "folders"}));
    cmd->add_flag("--force", o.force, "overwrite existing ClusterN directories");
    cmd->add_flag("--link", o.link, "symlink documents into ClusterN instead of copying");
    cmd->add_option("--threads", o.threads, "worker cap (0 = hardware)");
    cmd->add_option("--extensions", o.extensions, "file suffixes to ingest");
    cmd->add_flag("--lossy-decode", o.lossy_decode,
                  "replace undecodable bytes instead of skipping files");
    cmd->add_option("--max-file-mb", o.max_file_mb, "per-file size cap in MiB");
    cmd->add_option("--dump-matrix", o.dump_matrix, "write the weighted matrix as TSV");
    cmd->add_option("--iter-log", o.iter_log, "write per-iteration log");
    cmd->add_option("--labels", o.labels_path, "ground-truth labels for purity");
    cmd->add_flag("--paper-timing", o.paper_timing,
                  "time whole runs including preprocessing, one per measure");
}

textclust::TfMode tf_mode_of(const PipelineOpts& o) {
    return o.tf_mode == "paper-literal" ? textclust::TfMode::PaperLiteral
                                        : textclust::TfMode::Smooth;
}

textclust::KMeansConfig kmeans_config(const PipelineOpts& o, textclust::MeasureKind measure) {
    textclust::KMeansConfig cfg;
    cfg.k = o.k;
    cfg.measure = measure;
    cfg.seed = o.seed;
    cfg.max_iterations = o.max_iters;
    cfg.init = o.init == "firstk" ? textclust::InitMethod::FirstK
                                  : textclust::InitMethod::PlusPlus;
    cfg.threads = o.threads;
    return cfg;
}

struct PipelineResult {
    textclust::Corpus corpus;
    textclust::TermDocMatrix matrix;
    textclust::PhaseTiming phases;
};

PipelineResult run_pipeline(const PipelineOpts& o) {
    PipelineResult r;
    textclust::LoadOptions load_opts;
    load_opts.extensions = {o.extensions.begin(), o.extensions.end()};
    load_opts.lossy_decode = o.lossy_decode;
    load_opts.max_file_bytes = static_cast<std::uint64_t>(o.max_file_mb * 1024.0 * 1024.0);

    auto t0 = Clock::now();
    r.corpus = textclust::load_corpus(o.input, load_opts);
    r.phases.load_ms = ms_since(t0);
    for (const auto& w : r.corpus.load_warnings)
        std::cerr << "textclust: warning: " << w.path << ": " << w.reason << "\n";

    const textclust::StopwordList stops = o.stopwords_path.empty()
                                              ? textclust::builtin_stopwords()
                                              : textclust::load_stopwords(o.stopwords_path);
    const textclust::StemRuleSet rules = o.stem_rules_path.empty()
                                             ? textclust::builtin_stem_rules()
                                             : textclust::load_stem_rules(o.stem_rules_path);
    t0 = Clock::now();
    const auto streams = textclust::preprocess_corpus(r.corpus, stops, rules, o.threads);
    r.phases.preprocess_ms = ms_since(t0);

    t0 = Clock::now();
    const auto vocab = textclust::build_vocabulary(streams, o.min_df);
    r.matrix = textclust::vectorize_corpus(streams, vocab, tf_mode_of(o), o.threads);
    r.phases.vectorize_ms = ms_since(t0);
    return r;
}

textclust::TimedRun timed_kmeans(const textclust::TermDocMatrix& matrix,
                                 const textclust::KMeansConfig& cfg) {
    textclust::TimedRun run;
    run.measure = cfg.measure;
    run.start_wall = textclust::wall_now();
    const auto t0 = Clock::now();
    run.model = textclust::run_kmeans(matrix, cfg);
    run.elapsed_ms = ms_since(t0);
    run.end_wall = textclust::wall_now();
    return run;
}

void maybe_dump_matrix(const PipelineOpts& o, const textclust::TermDocMatrix& matrix) {
    if (o.dump_matrix.empty()) return;
    std::ofstream out(o.dump_matrix, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + o.dump_matrix);
    textclust::write_matrix_dump(matrix, out);
}

void maybe_write_iter_log(const std::string& path, const textclust::ClusterModel& model) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    textclust::write_iteration_log(model, out);
}

textclust::ManifestOptions manifest_options(const PipelineOpts& o) {
    textclust::ManifestOptions m;
    m.mode = o.manifest_mode == "folders" ? textclust::ManifestMode::Folders
                                          : textclust::ManifestMode::File;
    m.force = o.force;
    m.link = o.link;
    return m;
}

textclust::RunReport base_report(const PipelineOpts& o, const PipelineResult& p) {
    textclust::RunReport report;
    report.corpus_root = o.input;
    report.n_docs = static_cast<int>(p.corpus.documents.size());
    report.n_clustered = static_cast<int>(p.matrix.doc_ids.size());
    report.k = o.k;
    report.seed = o.seed;
    report.min_df = o.min_df;
    report.tf_mode = o.tf_mode;
    report.init = o.init;
    report.doc_ids = p.matrix.doc_ids;
    report.empty_docs = p.matrix.empty_docs;
    report.phases = p.phases;
    report.paper_timing = o.paper_timing;
    return report;
}

int cmd_cluster(const PipelineOpts& o) {
    const textclust::MeasureKind measure = o.measure == "fuzzy"
                                               ? textclust::MeasureKind::Fuzzy
                                               : textclust::MeasureKind::Cosine;
    textclust::TimedRun run;
    PipelineResult p;
    if (o.paper_timing) {
        run.measure = measure;
        run.start_wall = textclust::wall_now();
        const auto t0 = Clock::now();
        p = run_pipeline(o);
        run.model = textclust::run_kmeans(p.matrix, kmeans_config(o, measure));
        run.elapsed_ms = ms_since(t0);
        run.end_wall = textclust::wall_now();
    } else {
        p = run_pipeline(o);
        run = timed_kmeans(p.matrix, kmeans_config(o, measure));
    }
    maybe_dump_matrix(o, p.matrix);
    maybe_write_iter_log(o.iter_log, run.model);
    if (!o.labels_path.empty()) {
        const auto labels = textclust::load_labels(o.labels_path);
        run.purity = textclust::purity(run.model, p.matrix.doc_ids, labels);
    }
    textclust::write_manifests(run.model, p.matrix.doc_ids, p.corpus.root, o.out,
                               manifest_options(o));
    textclust::RunReport report = base_report(o, p);
    report.runs.push_back(std::move(run));
    textclust::write_report_json(report, std::filesystem::path(o.out) / "report.json");
    std::cout << textclust::render_comparison(report);
    return 0;
}

int cmd_compare(const PipelineOpts& o) {
    const textclust::MeasureKind measures[2] = {textclust::MeasureKind::Cosine,
                                                textclust::MeasureKind::Fuzzy};
    textclust::RunReport report;
    PipelineResult p;
    std::vector<textclust::TimedRun> runs;

    if (o.paper_timing) {
        // the paper's protocol: each measure re-runs the whole program
        for (int i = 0; i < 2; ++i) {
            textclust::TimedRun run;
            run.measure = measures[i];
            run.start_wall = textclust::wall_now();
            const auto t0 = Clock::now();
            PipelineResult pi = run_pipeline(o);
            run.model = textclust::run_kmeans(pi.matrix, kmeans_config(o, measures[i]));
            run.elapsed_ms = ms_since(t0);
            run.end_wall = textclust::wall_now();
            runs.push_back(std::move(run));
            if (i == 0) p = std::move(pi);
        }
    } else {
        // shared preprocessing: both measures cluster the identical matrix
        p = run_pipeline(o);
        for (const auto measure : measures)
            runs.push_back(timed_kmeans(p.matrix, kmeans_config(o, measure)));
    }

    maybe_dump_matrix(o, p.matrix);
    std::optional<std::unordered_map<std::string, int>> labels;
    if (!o.labels_path.empty()) labels = textclust::load_labels(o.labels_path);

    report = base_report(o, p);
    for (auto& run : runs) {
        if (labels) run.purity = textclust::purity(run.model, p.matrix.doc_ids, *labels);
        const auto subdir =
            std::filesystem::path(o.out) / std::string(textclust::measure_name(run.measure));
        textclust::write_manifests(run.model, p.matrix.doc_ids, p.corpus.root, subdir,
                                   manifest_options(o));
        if (!o.iter_log.empty())
            maybe_write_iter_log(
                o.iter_log + "." + std::string(textclust::measure_name(run.measure)),
                run.model);
        report.runs.push_back(std::move(run));
    }
    textclust::write_report_json(report, std::filesystem::path(o.out) / "report.json");
    std::cout << textclust::render_comparison(report);
    return 0;
}

struct GenerateOpts {
    textclust::SynthSpec spec;
    std::string out;
};

int cmd_generate(const GenerateOpts& g) {
    const auto result = textclust::generate(g.spec, g.out);
    std::cout << "generated " << result.n_files << " documents in "
              << result.corpus_dir.string() << " (labels: " << result.labels_file.string()
              << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"document clustering with cosine and fuzzy similarity measures"};
    app.require_subcommand(1);

    GenerateOpts gen;
    CLI::App* generate = app.add_subcommand("generate", "write a synthetic labelled corpus");
    generate->add_option("--out", gen.out, "output directory")->required();
    generate->add_option("--topics", gen.spec.n_topics)->check(CLI::PositiveNumber);
    generate->add_option("--docs-per-topic", gen.spec.docs_per_topic)
        ->check(CLI::PositiveNumber);
    generate->add_option("--vocab-per-topic", gen.spec.vocab_per_topic)
        ->check(CLI::PositiveNumber);
    generate->add_option("--shared-vocab", gen.spec.shared_vocab)
        ->check(CLI::NonNegativeNumber);
    generate->add_option("--doc-length", gen.spec.doc_length)->check(CLI::PositiveNumber);
    generate->add_option("--overlap", gen.spec.overlap)->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen.spec.seed);
    generate->add_flag("--uniform", gen.spec.uniform, "uniform term sampling instead of Zipf");

    PipelineOpts cluster_opts;
    CLI::App* cluster = app.add_subcommand("cluster", "cluster a corpus under one measure");
    add_pipeline_options(cluster, cluster_opts);
    cluster->add_option("--measure", cluster_opts.measure, "similarity measure")
        ->check(CLI::IsMember({"cosine", "fuzzy"}));

    PipelineOpts compare_opts;
    CLI::App* compare =
        app.add_subcommand("compare", "run both measures and print the comparison table");
    add_pipeline_options(compare, compare_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (cluster->parsed()) return cmd_cluster(cluster_opts);
        return cmd_compare(compare_opts);
    } catch (const std::exception& e) {
        std::cerr << "textclust: " << e.what() << "\n";
        return 1;
    }
}
