#include "textclust/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace textclust {

WallTime wall_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    localtime_r(&now, &tm);
    return {tm.tm_hour, tm.tm_min, tm.tm_sec};
}

namespace {
std::int64_t seconds_of_day(WallTime t) {
    if (t.hour < 0 || t.hour > 23 || t.minute < 0 || t.minute > 59 || t.second < 0 ||
        t.second > 59)
        throw std::invalid_argument("invalid wall-clock time");
    return t.hour * 3600ll + t.minute * 60ll + t.second;
}
}  // namespace

std::int64_t elapsed_between(WallTime start, WallTime end) {
    const std::int64_t s = seconds_of_day(start);
    const std::int64_t e = seconds_of_day(end);
    if (e < s)
        throw std::invalid_argument("elapsed_between: end precedes start (no midnight wrap)");
    return e - s;
}

std::string format_wall_time(WallTime t) {
    seconds_of_day(t);  // validate
    const char* half = t.hour < 12 ? "AM" : "PM";
    int h12 = t.hour % 12;
    if (h12 == 0) h12 = 12;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d:%02d:%02d %s", h12, t.minute, t.second, half);
    return buf;
}

ManifestSummary write_manifests(const ClusterModel& model,
                                const std::vector<std::string>& doc_ids,
                                const std::filesystem::path& corpus_root,
                                const std::filesystem::path& out_dir,
                                const ManifestOptions& opts) {
    namespace fs = std::filesystem;
    if (model.assignment.size() != doc_ids.size())
        throw std::invalid_argument("write_manifests: assignment/doc_ids size mismatch");

    std::vector<std::vector<std::string>> members(static_cast<std::size_t>(model.k));
    for (std::size_t i = 0; i < doc_ids.size(); ++i)
        members[static_cast<std::size_t>(model.assignment[i])].push_back(doc_ids[i]);
    for (auto& m : members) std::sort(m.begin(), m.end());

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        throw std::runtime_error("cannot create output directory " + out_dir.string());

    ManifestSummary summary;
    summary.location = out_dir;
    for (const auto& m : members) summary.cluster_sizes.push_back(static_cast<int>(m.size()));

    if (opts.mode == ManifestMode::File) {
        const fs::path manifest = out_dir / "manifest.tsv";
        std::ofstream out(manifest, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + manifest.string());
        for (int c = 0; c < model.k; ++c) {
            const auto& m = members[static_cast<std::size_t>(c)];
            out << "# Cluster" << c << " count=" << m.size() << '\n';
            for (const std::string& id : m) out << c << '\t' << id << '\n';
        }
        summary.files_written = 1;
        return summary;
    }

    for (int c = 0; c < model.k; ++c) {
        const fs::path dir = out_dir / ("Cluster" + std::to_string(c));
        if (fs::exists(dir) && !opts.force)
            throw std::runtime_error("refusing to overwrite " + dir.string() +
                                     " (use --force)");
        fs::create_directories(dir);
        for (const std::string& id : members[static_cast<std::size_t>(c)]) {
            const fs::path src = corpus_root / id;
            const fs::path dst = dir / id;
            fs::create_directories(dst.parent_path());
            if (opts.link) {
                fs::remove(dst, ec);
                fs::create_symlink(fs::absolute(src), dst);
            } else {
                fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
            }
            ++summary.files_written;
        }
    }
    return summary;
}

namespace {
std::string fmt_double(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}
}  // namespace

std::string render_comparison(const RunReport& report) {
    if (report.runs.empty()) throw std::invalid_argument("render_comparison: no runs");

    std::vector<std::string> labels = {"Measure",    "Start Time", "End Time",
                                       "Total Time (s)", "Iterations", "Converged",
                                       "Objective"};
    std::vector<std::vector<std::string>> cols;
    for (const TimedRun& run : report.runs) {
        const double objective = run.model.objective_trace.empty()
                                     ? 0.0
                                     : run.model.objective_trace.back().objective;
        cols.push_back({std::string(measure_name(run.measure)),
                        format_wall_time(run.start_wall), format_wall_time(run.end_wall),
                        std::to_string(run.elapsed_seconds()),
                        std::to_string(run.model.iterations_run),
                        run.model.converged ? "yes" : "no", fmt_double(objective)});
    }

    std::size_t label_w = 0;
    for (const auto& l : labels) label_w = std::max(label_w, l.size());
    std::vector<std::size_t> widths(cols.size(), 0);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& cell : cols[c]) widths[c] = std::max(widths[c], cell.size());

    std::ostringstream os;
    os << "Comparison Table\n";
    for (std::size_t row = 0; row < labels.size(); ++row) {
        os << labels[row] << std::string(label_w - labels[row].size(), ' ');
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const std::string& cell = cols[c][row];
            os << "  " << std::string(widths[c] - cell.size(), ' ') << cell;
        }
        os << '\n';
    }

    for (const TimedRun& run : report.runs) {
        if (run.purity)
            os << "Purity (" << measure_name(run.measure) << "): " << fmt_double(*run.purity)
               << '\n';
    }

    if (report.runs.size() == 2) {
        const std::int64_t t0 = report.runs[0].elapsed_seconds();
        const std::int64_t t1 = report.runs[1].elapsed_seconds();
        const std::int64_t margin = t0 > t1 ? t0 - t1 : t1 - t0;
        if (margin <= 1) {
            os << "Verdict: tie (within 1 s)\n";
        } else {
            const MeasureKind faster =
                t0 < t1 ? report.runs[0].measure : report.runs[1].measure;
            os << "Verdict: " << measure_name(faster) << " faster by " << margin << " s\n";
        }
    }
    return os.str();
}

std::string report_to_json(const RunReport& report) {
    using nlohmann::json;
    json j;
    j["corpus_root"] = report.corpus_root;
    j["n_docs"] = report.n_docs;
    j["n_clustered"] = report.n_clustered;
    j["k"] = report.k;
    j["seed"] = report.seed;
    j["min_df"] = report.min_df;
    j["tf_mode"] = report.tf_mode;
    j["init"] = report.init;
    j["paper_timing"] = report.paper_timing;
    j["doc_ids"] = report.doc_ids;
    j["empty_docs"] = report.empty_docs;
    j["phase_timing"] = {{"load_ms", report.phases.load_ms},
                         {"preprocess_ms", report.phases.preprocess_ms},
                         {"vectorize_ms", report.phases.vectorize_ms}};
    j["runs"] = json::array();
    for (const TimedRun& run : report.runs) {
        json r;
        r["measure"] = measure_name(run.measure);
        r["iterations"] = run.model.iterations_run;
        r["passes"] = static_cast<int>(run.model.objective_trace.size());
        r["converged"] = run.model.converged;
        r["objective"] = run.model.objective_trace.empty()
                             ? 0.0
                             : run.model.objective_trace.back().objective;
        if (run.purity) r["purity"] = *run.purity;
        r["cluster_sizes"] = json::array();
        std::vector<int> sizes(static_cast<std::size_t>(run.model.k), 0);
        for (int a : run.model.assignment) ++sizes[static_cast<std::size_t>(a)];
        for (int s : sizes) r["cluster_sizes"].push_back(s);
        r["assignment"] = run.model.assignment;
        r["timing"] = {{"start", format_wall_time(run.start_wall)},
                       {"end", format_wall_time(run.end_wall)},
                       {"elapsed_s", run.elapsed_seconds()},
                       {"elapsed_ms", run.elapsed_ms}};
        j["runs"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

void write_report_json(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << report_to_json(report);
}

}  // namespace textclust
