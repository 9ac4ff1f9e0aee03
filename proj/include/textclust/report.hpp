// Timing harness, cluster manifests and the side-by-side comparison table.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "textclust/corpus.hpp"
#include "textclust/kmeans.hpp"

namespace textclust {

/// Wall-clock time of day at second granularity; display only. Elapsed
/// times are always measured with the monotonic clock.
struct WallTime {
    int hour = 0;    // 0..23
    int minute = 0;  // 0..59
    int second = 0;  // 0..59
};

WallTime wall_now();

/// Seconds from start to end within one 24 h day.
/// Throws std::invalid_argument if end precedes start.
std::int64_t elapsed_between(WallTime start, WallTime end);

/// "9:07:09 PM" style, mirroring the comparison table.
std::string format_wall_time(WallTime t);

struct TimedRun {
    MeasureKind measure = MeasureKind::Cosine;
    WallTime start_wall;
    WallTime end_wall;
    std::int64_t elapsed_ms = 0;  ///< monotonic clock, total milliseconds
    ClusterModel model;
    std::optional<double> purity;

    std::int64_t elapsed_seconds() const { return elapsed_ms / 1000; }
};

struct PhaseTiming {
    std::int64_t load_ms = 0;
    std::int64_t preprocess_ms = 0;
    std::int64_t vectorize_ms = 0;
};

struct RunReport {
    std::string corpus_root;
    int n_docs = 0;       ///< loaded documents
    int n_clustered = 0;  ///< documents with a nonempty vector
    int k = 0;
    std::uint64_t seed = 0;
    int min_df = 2;
    std::string tf_mode;
    std::string init;
    std::vector<TimedRun> runs;  ///< one per requested measure
    std::vector<std::string> doc_ids;  ///< clustered documents, row order
    std::vector<std::string> empty_docs;
    PhaseTiming phases;        ///< shared preprocessing cost
    bool paper_timing = false; ///< each run timed end to end, preprocessing included
};

enum class ManifestMode { File, Folders };

struct ManifestOptions {
    ManifestMode mode = ManifestMode::File;
    bool force = false;  ///< overwrite existing ClusterN directories
    bool link = false;   ///< symlink member documents instead of copying
};

struct ManifestSummary {
    std::vector<int> cluster_sizes;
    int files_written = 0;
    std::filesystem::path location;
};

/// Folders mode writes Cluster0..Cluster{K-1} directories holding copies (or
/// links) of member documents; file mode writes `manifest.tsv` with
/// `cluster_id<TAB>doc_id` lines sorted by (cluster_id, doc_id). Empty
/// clusters still appear (empty folder / zero-count section header).
ManifestSummary write_manifests(const ClusterModel& model,
                                const std::vector<std::string>& doc_ids,
                                const std::filesystem::path& corpus_root,
                                const std::filesystem::path& out_dir,
                                const ManifestOptions& opts = {});

/// Fixed-width table with one column per measure and rows Start Time,
/// End Time, Total Time (s), Iterations, Converged, Objective; followed by a
/// verdict line naming the faster measure ("tie" within one second) when two
/// runs are present, and purity lines when ground-truth labels were given.
std::string render_comparison(const RunReport& report);

/// JSON sidecar with every report field. All wall-clock data lives under
/// "timing" keys ("phase_timing" at the top level, "timing" per run), so
/// consumers can strip those to compare reruns bitwise.
std::string report_to_json(const RunReport& report);
void write_report_json(const RunReport& report, const std::filesystem::path& path);

}  // namespace textclust
