#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace proofkit {

// Multi-pattern exact byte-substring automaton (Aho-Corasick). Overlapping
// occurrences count; duplicate patterns each keep their own counter.
class PatternAutomaton {
public:
    explicit PatternAutomaton(const std::vector<std::string>& patterns);

    std::size_t pattern_count() const { return patternCount_; }
    std::size_t max_pattern_length() const { return maxLen_; }

    // Feeds bytes, updating per-pattern counts for matches that END at or
    // after byte index countFrom within this buffer. state carries across
    // calls for continuous streaming (start at 0).
    void run(std::string_view data, int& state, std::vector<std::uint64_t>& counts,
             std::size_t countFrom = 0) const;

private:
    std::vector<std::array<int, 256>> next_;
    std::vector<std::vector<int>> outputs_; // pattern ids ending at each node
    std::size_t patternCount_ = 0;
    std::size_t maxLen_ = 0;
};

struct ScanOptions {
    std::size_t chunkSize = 1 << 20; // must be >= max pattern length
    int workers = 1;                 // OpenMP workers over chunks and files
    bool normalizeWs = false;        // collapse whitespace runs to one space
};

struct PatternStats {
    std::uint64_t count = 0;
    std::uint64_t filesWithHits = 0;
};

struct ScanReport {
    std::vector<std::pair<std::string, PatternStats>> perPattern; // input order
    std::uint64_t bytesScanned = 0;
    std::uint64_t filesScanned = 0;
    std::uint64_t ioErrors = 0;
    std::string to_json() const;
};

// Streams every file (directories recurse to regular files, sorted) through
// the automaton: chunked reads with an overlap of maxPatternLen-1 bytes so no
// boundary match is missed, chunks scanned in parallel. Unreadable files are
// skipped and counted. Patterns must be non-empty and at least 3 bytes each.
ScanReport scan(const std::vector<std::string>& corpusPaths,
                const std::vector<std::string>& patterns, const ScanOptions& opts = {});

// In-memory counting paths. The chunked variant mirrors the file scanner;
// the naive variant is the quadratic reference oracle kept for tests and the
// benchmark baseline.
std::vector<std::uint64_t> count_matches(std::string_view data,
                                         const std::vector<std::string>& patterns,
                                         std::size_t chunkSize = 1 << 20, int workers = 1);
std::vector<std::uint64_t> count_matches_naive(std::string_view data,
                                               const std::vector<std::string>& patterns);

// One raw pattern per line; the trailing newline is not part of the pattern
// but any other whitespace (including trailing spaces) is preserved.
std::vector<std::string> load_patterns(std::istream& in);

std::string normalize_whitespace(std::string_view data);

} // namespace proofkit
