// Corpus loading: walk a directory tree and decode plain-text documents.
#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace textclust {

/// One loaded text file. `id` is the path relative to the corpus root with
/// '/' separators; it is the stable key used by manifests and reports.
struct Document {
    std::string id;
    std::string text;
    std::uint64_t byte_len = 0;
};

struct LoadWarning {
    std::string path;
    std::string reason;
};

struct Corpus {
    std::filesystem::path root;
    std::vector<Document> documents;      ///< sorted by id
    std::vector<LoadWarning> load_warnings;  ///< sorted by path
};

struct LoadOptions {
    /// File suffixes to ingest, matched case-insensitively.
    std::set<std::string> extensions{".txt"};
    /// Replace undecodable bytes with U+FFFD instead of skipping the file.
    bool lossy_decode = false;
    /// Files above this size are skipped with a warning.
    std::uint64_t max_file_bytes = 16ull << 20;
};

/// Loads every matching regular file under `root`. Files that fail strict
/// UTF-8 decoding (or contain non-whitespace control bytes) are skipped and
/// recorded in load_warnings unless lossy_decode is set. The document list
/// is sorted by id, so the result does not depend on filesystem enumeration
/// order. Throws std::runtime_error if root is unusable or nothing loads.
Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& opts = {});

}  // namespace textclust
