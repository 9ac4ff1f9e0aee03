#include "textclust/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace textclust {
namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// rank-inverse (Zipf-like) sampler over ranks 0..size-1
struct RankSampler {
    int size = 1;
    bool uniform = false;
    std::vector<double> cum;  // cumulative 1/(r+1) weights, unused in uniform mode

    RankSampler(int n, bool uniform_mode) : size(n), uniform(uniform_mode) {
        if (uniform) return;
        cum.reserve(static_cast<std::size_t>(size));
        double total = 0.0;
        for (int r = 0; r < size; ++r) {
            total += 1.0 / static_cast<double>(r + 1);
            cum.push_back(total);
        }
    }

    int draw(std::mt19937_64& rng) const {
        const double u = uniform01(rng);
        if (uniform) return std::min(size - 1, static_cast<int>(u * size));
        const double target = u * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), target);
        return std::min(size - 1, static_cast<int>(it - cum.begin()));
    }
};

int digits(int max_value) {
    int d = 1;
    while (max_value >= 10) {
        max_value /= 10;
        ++d;
    }
    return d;
}

std::string padded(int value, int width) {
    std::string s = std::to_string(value);
    return std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, s.size()),
                       '0') +
           s;
}

}  // namespace

GeneratedCorpus generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    if (spec.n_topics < 1 || spec.docs_per_topic < 1 || spec.vocab_per_topic < 1 ||
        spec.doc_length < 1 || spec.shared_vocab < 0)
        throw std::invalid_argument("generate: counts must be positive");
    if (spec.overlap < 0.0 || spec.overlap > 1.0)
        throw std::invalid_argument("generate: overlap must lie in [0, 1]");
    if (spec.overlap > 0.0 && spec.shared_vocab == 0)
        throw std::invalid_argument("generate: overlap > 0 needs a shared vocabulary");

    GeneratedCorpus result;
    result.corpus_dir = out_dir / "corpus";
    result.labels_file = out_dir / "labels.tsv";
    std::error_code ec;
    fs::create_directories(result.corpus_dir, ec);
    if (ec || !fs::is_directory(result.corpus_dir))
        throw std::runtime_error("cannot create " + result.corpus_dir.string());

    std::ofstream labels(result.labels_file, std::ios::binary);
    if (!labels) throw std::runtime_error("cannot write " + result.labels_file.string());

    // Vocabulary tokens end in a digit, so no stem rule or stopword touches
    // them and topic vocabularies stay disjoint after preprocessing.
    std::mt19937_64 rng(spec.seed);
    const RankSampler topic_sampler(spec.vocab_per_topic, spec.uniform);
    const RankSampler shared_sampler(std::max(spec.shared_vocab, 1), spec.uniform);
    const int tw = digits(spec.n_topics - 1);
    const int dw = digits(spec.docs_per_topic - 1);

    for (int t = 0; t < spec.n_topics; ++t) {
        for (int d = 0; d < spec.docs_per_topic; ++d) {
            const std::string name = "t" + padded(t, tw) + "_d" + padded(d, dw) + ".txt";
            std::ofstream out(result.corpus_dir / name, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write corpus file " + name);
            for (int j = 0; j < spec.doc_length; ++j) {
                const bool from_shared = uniform01(rng) < spec.overlap;
                std::string tok;
                if (from_shared) {
                    tok = "sw" + std::to_string(shared_sampler.draw(rng));
                } else {
                    tok = "t" + std::to_string(t) + "w" + std::to_string(topic_sampler.draw(rng));
                }
                out << tok << ((j + 1) % 12 == 0 || j + 1 == spec.doc_length ? '\n' : ' ');
            }
            labels << name << '\t' << t << '\n';
            ++result.n_files;
        }
    }
    return result;
}

std::unordered_map<std::string, int> load_labels(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open labels file " + path.string());
    std::unordered_map<std::string, int> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            std::ostringstream os;
            os << path.string() << ":" << lineno << ": expected doc_id<TAB>topic_index";
            throw std::runtime_error(os.str());
        }
        labels[line.substr(0, tab)] = std::stoi(line.substr(tab + 1));
    }
    return labels;
}

double purity(const ClusterModel& model, const std::vector<std::string>& doc_ids,
              const std::unordered_map<std::string, int>& labels) {
    if (model.assignment.size() != doc_ids.size())
        throw std::invalid_argument("purity: assignment/doc_ids size mismatch");
    if (doc_ids.empty()) throw std::invalid_argument("purity: nothing clustered");

    std::vector<std::unordered_map<int, int>> counts(static_cast<std::size_t>(model.k));
    for (std::size_t i = 0; i < doc_ids.size(); ++i) {
        const auto it = labels.find(doc_ids[i]);
        if (it == labels.end())
            throw std::runtime_error("no ground-truth label for document: " + doc_ids[i]);
        ++counts[static_cast<std::size_t>(model.assignment[i])][it->second];
    }
    std::int64_t majority_total = 0;
    for (const auto& cluster : counts) {
        int best = 0;
        for (const auto& [topic, count] : cluster) best = std::max(best, count);
        majority_total += best;
    }
    return static_cast<double>(majority_total) / static_cast<double>(doc_ids.size());
}

}  // namespace textclust
