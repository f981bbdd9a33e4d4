#include "proofkit/scan.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <queue>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace proofkit {

PatternAutomaton::PatternAutomaton(const std::vector<std::string>& patterns) {
    patternCount_ = patterns.size();
    if (patterns.empty()) throw std::invalid_argument("no patterns given");
    for (const auto& p : patterns) {
        if (p.size() < 3) throw std::invalid_argument("pattern shorter than 3 bytes: " + p);
        maxLen_ = std::max(maxLen_, p.size());
    }

    next_.emplace_back();
    next_[0].fill(-1);
    outputs_.emplace_back();
    std::vector<int> fail{0};

    // trie
    for (std::size_t pid = 0; pid < patterns.size(); ++pid) {
        int node = 0;
        for (unsigned char c : patterns[pid]) {
            if (next_[static_cast<std::size_t>(node)][c] < 0) {
                next_[static_cast<std::size_t>(node)][c] = static_cast<int>(next_.size());
                next_.emplace_back();
                next_.back().fill(-1);
                outputs_.emplace_back();
                fail.push_back(0);
            }
            node = next_[static_cast<std::size_t>(node)][c];
        }
        outputs_[static_cast<std::size_t>(node)].push_back(static_cast<int>(pid));
    }

    // breadth-first failure links, converting the trie into a DFA
    std::queue<int> bfs;
    for (int c = 0; c < 256; ++c) {
        int v = next_[0][static_cast<std::size_t>(c)];
        if (v < 0) {
            next_[0][static_cast<std::size_t>(c)] = 0;
        } else {
            fail[static_cast<std::size_t>(v)] = 0;
            bfs.push(v);
        }
    }
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        const auto& fo = outputs_[static_cast<std::size_t>(fail[static_cast<std::size_t>(u)])];
        auto& uo = outputs_[static_cast<std::size_t>(u)];
        uo.insert(uo.end(), fo.begin(), fo.end());
        for (int c = 0; c < 256; ++c) {
            int v = next_[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)];
            int f = next_[static_cast<std::size_t>(fail[static_cast<std::size_t>(u)])]
                         [static_cast<std::size_t>(c)];
            if (v < 0) {
                next_[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)] = f;
            } else {
                fail[static_cast<std::size_t>(v)] = f;
                bfs.push(v);
            }
        }
    }
}

void PatternAutomaton::run(std::string_view data, int& state, std::vector<std::uint64_t>& counts,
                           std::size_t countFrom) const {
    int s = state;
    for (std::size_t i = 0; i < data.size(); ++i) {
        s = next_[static_cast<std::size_t>(s)][static_cast<unsigned char>(data[i])];
        const auto& out = outputs_[static_cast<std::size_t>(s)];
        if (!out.empty() && i >= countFrom) {
            for (int pid : out) counts[static_cast<std::size_t>(pid)] += 1;
        }
    }
    state = s;
}

std::vector<std::uint64_t> count_matches_naive(std::string_view data,
                                               const std::vector<std::string>& patterns) {
    std::vector<std::uint64_t> counts(patterns.size(), 0);
    for (std::size_t pid = 0; pid < patterns.size(); ++pid) {
        const std::string& p = patterns[pid];
        if (p.empty() || p.size() > data.size()) continue;
        for (std::size_t at = data.find(p, 0); at != std::string_view::npos;
             at = data.find(p, at + 1))
            counts[pid] += 1; // overlapping occurrences count
    }
    return counts;
}

std::vector<std::uint64_t> count_matches(std::string_view data,
                                         const std::vector<std::string>& patterns,
                                         std::size_t chunkSize, int workers) {
    PatternAutomaton automaton(patterns);
    if (chunkSize < automaton.max_pattern_length())
        throw std::invalid_argument("chunk size below the longest pattern");
    std::vector<std::uint64_t> counts(patterns.size(), 0);
    std::size_t overlap = automaton.max_pattern_length() - 1;
    long chunks = static_cast<long>((data.size() + chunkSize - 1) / chunkSize);
    if (chunks == 0) return counts;

#pragma omp parallel num_threads(workers > 0 ? workers : 1)
    {
        std::vector<std::uint64_t> local(patterns.size(), 0);
#pragma omp for schedule(static) nowait
        for (long ci = 0; ci < chunks; ++ci) {
            std::size_t begin = static_cast<std::size_t>(ci) * chunkSize;
            std::size_t end = std::min(begin + chunkSize, data.size());
            std::size_t lead = std::min(begin, overlap); // bytes re-read before the chunk
            int state = 0;
            // matches are attributed to the chunk their END falls into
            automaton.run(data.substr(begin - lead, end - (begin - lead)), state, local, lead);
        }
#pragma omp critical
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += local[i];
    }
    return counts;
}

std::vector<std::string> load_patterns(std::istream& in) {
    std::vector<std::string> patterns;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        patterns.push_back(line);
    }
    return patterns;
}

std::string normalize_whitespace(std::string_view data) {
    std::string out;
    out.reserve(data.size());
    bool inRun = false;
    for (char c : data) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!inRun) out += ' ';
            inRun = true;
        } else {
            out += c;
            inRun = false;
        }
    }
    return out;
}

std::string ScanReport::to_json() const {
    json j;
    j["schema_version"] = 1;
    json pats = json::array();
    for (const auto& [pattern, stats] : perPattern) {
        pats.push_back({{"pattern", pattern},
                        {"count", stats.count},
                        {"files_with_hits", stats.filesWithHits}});
    }
    j["patterns"] = std::move(pats);
    j["bytes_scanned"] = bytesScanned;
    j["files_scanned"] = filesScanned;
    j["io_errors"] = ioErrors;
    return j.dump();
}

namespace {

std::vector<fs::path> collect_files(const std::vector<std::string>& corpusPaths,
                                    std::uint64_t& ioErrors) {
    std::vector<fs::path> files;
    for (const auto& p : corpusPaths) {
        std::error_code ec;
        fs::file_status st = fs::status(p, ec);
        if (ec) {
            std::cerr << "scan: cannot stat " << p << ": " << ec.message() << "\n";
            ++ioErrors;
            continue;
        }
        if (fs::is_directory(st)) {
            for (auto it = fs::recursive_directory_iterator(
                     p, fs::directory_options::skip_permission_denied, ec);
                 it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (ec) break;
                if (it->is_regular_file(ec)) files.push_back(it->path());
            }
        } else if (fs::is_regular_file(st)) {
            files.emplace_back(p);
        } else {
            std::cerr << "scan: not a regular file: " << p << "\n";
            ++ioErrors;
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct FileCounts {
    std::vector<std::uint64_t> counts;
    std::uint64_t bytes = 0;
    bool failed = false;
};

// Continuous streaming scan; the automaton state carries across reads so no
// overlap bookkeeping is needed. Used for the whitespace-normalizing mode.
FileCounts scan_file_streaming(const fs::path& path, const PatternAutomaton& automaton,
                               std::size_t chunkSize, bool normalizeWs) {
    FileCounts fc;
    fc.counts.assign(automaton.pattern_count(), 0);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fc.failed = true;
        return fc;
    }
    std::string buf(chunkSize, '\0');
    int state = 0;
    bool pendingSpace = false;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::size_t got = static_cast<std::size_t>(in.gcount());
        if (got == 0) break;
        fc.bytes += got;
        if (!normalizeWs) {
            automaton.run(std::string_view(buf.data(), got), state, fc.counts);
            continue;
        }
        // whitespace runs may span reads; carry the run flag in pendingSpace
        std::string norm;
        norm.reserve(got);
        for (std::size_t i = 0; i < got; ++i) {
            char c = buf[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!pendingSpace) norm += ' ';
                pendingSpace = true;
            } else {
                norm += c;
                pendingSpace = false;
            }
        }
        automaton.run(norm, state, fc.counts);
    }
    if (in.bad()) fc.failed = true;
    return fc;
}

// Chunk-parallel scan of one file: each worker re-reads maxPatternLen-1 bytes
// of lead-in and counts only matches ending inside its own chunk.
FileCounts scan_file_chunked(const fs::path& path, const PatternAutomaton& automaton,
                             std::size_t chunkSize, int workers) {
    FileCounts fc;
    fc.counts.assign(automaton.pattern_count(), 0);
    std::error_code ec;
    std::uint64_t size = fs::file_size(path, ec);
    if (ec) {
        fc.failed = true;
        return fc;
    }
    if (size == 0) return fc;
    std::size_t overlap = automaton.max_pattern_length() - 1;
    long chunks = static_cast<long>((size + chunkSize - 1) / chunkSize);
    std::atomic<bool> failed{false};

#pragma omp parallel num_threads(workers > 0 ? workers : 1)
    {
        std::vector<std::uint64_t> local(automaton.pattern_count(), 0);
        std::ifstream in(path, std::ios::binary);
        std::string buf;
#pragma omp for schedule(dynamic) nowait
        for (long ci = 0; ci < chunks; ++ci) {
            if (failed.load(std::memory_order_relaxed)) continue;
            if (!in) {
                failed = true;
                continue;
            }
            std::uint64_t begin = static_cast<std::uint64_t>(ci) * chunkSize;
            std::uint64_t end = std::min<std::uint64_t>(begin + chunkSize, size);
            std::uint64_t lead = std::min<std::uint64_t>(begin, overlap);
            std::uint64_t readFrom = begin - lead;
            buf.resize(static_cast<std::size_t>(end - readFrom));
            in.seekg(static_cast<std::streamoff>(readFrom));
            in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
            if (static_cast<std::uint64_t>(in.gcount()) != buf.size()) {
                failed = true;
                continue;
            }
            int state = 0;
            automaton.run(buf, state, local, static_cast<std::size_t>(lead));
        }
#pragma omp critical
        {
            for (std::size_t i = 0; i < fc.counts.size(); ++i) fc.counts[i] += local[i];
        }
    }
    if (failed) {
        fc.failed = true;
        return fc;
    }
    fc.bytes = size;
    return fc;
}

} // namespace

ScanReport scan(const std::vector<std::string>& corpusPaths,
                const std::vector<std::string>& patterns, const ScanOptions& opts) {
    PatternAutomaton automaton(patterns);
    std::size_t chunkSize = std::max(opts.chunkSize, automaton.max_pattern_length());

    ScanReport report;
    for (const auto& p : patterns) report.perPattern.emplace_back(p, PatternStats{});
    std::vector<fs::path> files = collect_files(corpusPaths, report.ioErrors);

    for (const auto& file : files) {
        FileCounts fc = opts.normalizeWs
                            ? scan_file_streaming(file, automaton, chunkSize, true)
                            : scan_file_chunked(file, automaton, chunkSize, opts.workers);
        if (fc.failed) {
            std::cerr << "scan: skipping unreadable file " << file << "\n";
            ++report.ioErrors;
            continue;
        }
        ++report.filesScanned;
        report.bytesScanned += fc.bytes;
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            report.perPattern[i].second.count += fc.counts[i];
            if (fc.counts[i] > 0) report.perPattern[i].second.filesWithHits += 1;
        }
    }
    return report;
}

} // namespace proofkit
