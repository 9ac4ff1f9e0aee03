#include "textclust/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace textclust {
namespace {

bool is_allowed_control(unsigned char c) {
    return c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// UTF-8 scan per RFC 3629. Strict mode fails on malformed sequences and on
// non-whitespace control bytes; lossy mode substitutes U+FFFD / space.
bool decode_text(const std::string& bytes, bool lossy, std::string& out, std::string& reason) {
    out.clear();
    out.reserve(bytes.size());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t n = bytes.size();
    std::size_t i = 0;
    auto fail = [&](const char* why, std::size_t at) {
        if (!lossy) {
            std::ostringstream os;
            os << why << " at byte " << at;
            reason = os.str();
            return true;
        }
        return false;
    };
    while (i < n) {
        const unsigned char c = p[i];
        if (c < 0x80) {
            if (c < 0x20 || c == 0x7f) {
                if (!is_allowed_control(c)) {
                    if (fail("control byte", i)) return false;
                    out.push_back(' ');
                    ++i;
                    continue;
                }
            }
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        int len = 0;
        unsigned char lo = 0x80, hi = 0xbf;
        if (c >= 0xc2 && c <= 0xdf) {
            len = 2;
        } else if (c >= 0xe0 && c <= 0xef) {
            len = 3;
            if (c == 0xe0) lo = 0xa0;       // no overlong
            if (c == 0xed) hi = 0x9f;       // no surrogates
        } else if (c >= 0xf0 && c <= 0xf4) {
            len = 4;
            if (c == 0xf0) lo = 0x90;
            if (c == 0xf4) hi = 0x8f;
        } else {
            if (fail("invalid utf-8 lead byte", i)) return false;
            out.append("\xef\xbf\xbd");
            ++i;
            continue;
        }
        bool ok = i + static_cast<std::size_t>(len) <= n;
        for (int j = 1; ok && j < len; ++j) {
            const unsigned char cc = p[i + static_cast<std::size_t>(j)];
            const unsigned char jlo = (j == 1) ? lo : 0x80;
            const unsigned char jhi = (j == 1) ? hi : 0xbf;
            if (cc < jlo || cc > jhi) ok = false;
        }
        if (!ok) {
            if (fail("invalid utf-8 sequence", i)) return false;
            out.append("\xef\xbf\xbd");
            ++i;
            continue;
        }
        out.append(bytes, i, static_cast<std::size_t>(len));
        i += static_cast<std::size_t>(len);
    }
    return true;
}

std::string lower_ext(const std::filesystem::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& opts) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::exists(root, ec) || !fs::is_directory(root, ec))
        throw std::runtime_error("corpus root missing or not a directory: " + root.string());

    std::set<std::string> wanted;
    for (const auto& e : opts.extensions) {
        std::string low = e;
        std::transform(low.begin(), low.end(), low.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        wanted.insert(low);
    }

    Corpus corpus;
    corpus.root = root;
    for (auto it = fs::recursive_directory_iterator(root, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw std::runtime_error("cannot walk corpus root: " + ec.message());
        if (!it->is_regular_file(ec)) continue;
        const fs::path& path = it->path();
        if (!wanted.contains(lower_ext(path))) continue;
        const std::string rel = path.lexically_relative(root).generic_string();

        const std::uint64_t size = it->file_size(ec);
        if (ec) {
            corpus.load_warnings.push_back({rel, "cannot stat: " + ec.message()});
            ec.clear();
            continue;
        }
        if (size > opts.max_file_bytes) {
            corpus.load_warnings.push_back({rel, "file exceeds size cap, skipped"});
            continue;
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            corpus.load_warnings.push_back({rel, "cannot open"});
            continue;
        }
        std::string bytes(static_cast<std::size_t>(size), '\0');
        in.read(bytes.data(), static_cast<std::streamsize>(size));
        if (!in && size > 0) {
            corpus.load_warnings.push_back({rel, "short read"});
            continue;
        }
        std::string text, reason;
        if (!decode_text(bytes, opts.lossy_decode, text, reason)) {
            corpus.load_warnings.push_back({rel, reason});
            continue;
        }
        corpus.documents.push_back({rel, std::move(text), size});
    }

    std::sort(corpus.documents.begin(), corpus.documents.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    std::sort(corpus.load_warnings.begin(), corpus.load_warnings.end(),
              [](const LoadWarning& a, const LoadWarning& b) { return a.path < b.path; });

    if (corpus.documents.empty())
        throw std::runtime_error("empty corpus: no loadable documents under " + root.string());
    return corpus;
}

}  // namespace textclust
