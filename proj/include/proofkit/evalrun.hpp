#pragma once

#include "proofkit/search.hpp"

#include <atomic>
#include <iosfwd>
#include <map>

namespace proofkit {

struct EvalConfig {
    SearchConfig search;
    std::size_t runs = 3;
    int workers = 1;
    // When set, every search uses this cutoff (chronological holdout);
    // otherwise each theorem is searched at its own orderIndex.
    std::optional<std::size_t> fixedCutoff;
    // Cooperative interruption: in-flight searches drain, the rest are
    // skipped and the report covers only completed work.
    const std::atomic<bool>* stopFlag = nullptr;
};

struct TheoremOutcome {
    std::string name;
    std::string modulePath;
    std::vector<SearchStatus> statusPerRun;
    std::vector<std::string> proof; // from the first proving run
};

struct EvalReport {
    std::vector<TheoremOutcome> theorems;
    std::vector<std::pair<std::size_t, std::size_t>> perRun; // (proved, attempted)
    double passRate = 0.0;                                   // mean of per-run rates
    // keyed by the first modulePath component; counts summed over runs
    std::map<std::string, std::pair<std::size_t, std::size_t>> perModule;
    // #semicolons per chained tactic in successful proofs -> occurrences
    std::map<std::size_t, std::size_t> semicolonHistogram;
    double meanChainLength = 0.0;

    bool proved_every_run(const std::string& name) const;
    std::string to_json() const;
};

// Searches every theorem `runs` times with the oracle (reseeded per run) and
// aggregates pass rates, per-module counts and semicolon-chain statistics.
// Theorems are distributed over `workers` OpenMP workers.
EvalReport run_eval(const std::vector<const Declaration*>& theorems, Oracle& oracle,
                    const EvalConfig& cfg, const Environment& env);

// Declarations with orderIndex >= cutoff, the temporally held-out slice.
std::vector<const Declaration*> chronological_holdout(const Environment& env, std::size_t cutoff);

// All theorem declarations (those carrying proof terms).
std::vector<const Declaration*> theorems_of(const Environment& env);

// ---- theorem-naming evaluation ---------------------------------------------

struct NamingRow {
    std::string truth;
    std::vector<std::pair<std::string, double>> candidates; // (name, cumLogProb), best first
};

// accuracy@K = fraction of rows whose truth appears among the first K
// candidate names (candidates re-sorted by decreasing score defensively).
std::map<int, double> topk_accuracy(std::vector<NamingRow> rows, const std::vector<int>& ks);

// JSONL rows: {"truth": string, "candidates": [["name", logprob], ...]}
std::vector<NamingRow> load_naming_rows(std::istream& in);
std::string naming_report_json(const std::map<int, double>& acc, std::size_t rows);

} // namespace proofkit
