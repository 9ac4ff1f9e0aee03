// Deterministic synthetic corpus generator plus the purity quality metric.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "textclust/kmeans.hpp"

namespace textclust {

struct SynthSpec {
    int n_topics = 5;
    int docs_per_topic = 200;
    int vocab_per_topic = 150;
    int shared_vocab = 300;
    int doc_length = 100;      ///< tokens per document
    double overlap = 0.0;      ///< fraction of tokens drawn from the shared vocabulary
    std::uint64_t seed = 0;
    bool uniform = false;      ///< uniform term sampling instead of Zipf-like
};

struct GeneratedCorpus {
    std::filesystem::path corpus_dir;  ///< <out>/corpus
    std::filesystem::path labels_file; ///< <out>/labels.tsv, outside the corpus dir
    int n_files = 0;
};

/// Writes n_topics * docs_per_topic .txt files plus labels.tsv. Every token
/// survives preprocessing unchanged (lowercase alphanumerics ending in a
/// digit), so overlap 0 guarantees disjoint topic vocabularies after
/// vectorization. Byte-identical output for identical specs.
GeneratedCorpus generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

/// labels.tsv parser: `doc_id<TAB>topic_index` per line.
std::unordered_map<std::string, int> load_labels(const std::filesystem::path& path);

/// Sum over clusters of the majority topic count, divided by the number of
/// clustered documents. Throws std::runtime_error naming the first document
/// that has no label.
double purity(const ClusterModel& model, const std::vector<std::string>& doc_ids,
              const std::unordered_map<std::string, int>& labels);

}  // namespace textclust
