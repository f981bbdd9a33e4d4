#pragma once

#include "proofkit/tactic.hpp"

#include <map>
#include <memory>

namespace proofkit {

// Scored tactic candidates for a serialized tactic state, best first.
using Candidates = std::vector<std::pair<std::string, double>>;

class Oracle {
public:
    virtual ~Oracle() = default;
    virtual Candidates query(const std::string& stateString) = 0;
    // Harness hook for oracles with sampling noise; deterministic backends
    // ignore it.
    virtual void reseed(std::uint64_t) {}
};

struct SearchConfig {
    std::optional<std::size_t> wMax = 16;  // nullopt = unbounded width
    std::optional<std::size_t> dMax = 128; // nullopt = unbounded depth
    std::size_t maxIterations = 512;
    std::optional<std::chrono::milliseconds> tacticTimeout{std::chrono::milliseconds(5000)};
    std::optional<std::chrono::milliseconds> globalTimeout{std::chrono::milliseconds(600000)};
    std::size_t candidatesPerQuery = 16;
    bool recordTrace = false;
};

enum class SearchStatus { Proved, Exhausted, BudgetExceeded, TimedOut };

const char* search_status_name(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::vector<std::string> proof; // nonempty iff status == Proved (root may prove trivially)
    bool proved() const { return status == SearchStatus::Proved; }
    std::size_t iterations = 0;    // outer-loop pops
    std::size_t nodesExpanded = 0; // children inserted into the queue
    std::chrono::milliseconds wallTime{0};
    // instrumentation for budget audits
    std::size_t maxQueueLenAtInsert = 0;
    std::size_t maxExpandedDepth = 0;
    std::vector<std::string> expandedTrace; // serialized states, pop order (recordTrace)
};

// Priority-queue best-first search: pop the best node (score descending,
// insertion order breaking ties), query the oracle, try each candidate with
// apply_tactic, insert children guarded by dMax/wMax and a visited set of
// serialized states. Ends on proof, empty queue, iteration budget, or global
// timeout.
SearchResult best_first_search(const TacticState& root, Oracle& oracle, const SearchConfig& cfg,
                               const Environment& env);

// Replays a tactic list from a root state; nullopt when some step fails.
std::optional<TacticState> replay_proof(const TacticState& root,
                                        const std::vector<std::string>& proof,
                                        const Environment& env);

// The constant waterfall oracle (13 strings, scores 0.0, fixed order).
std::unique_ptr<Oracle> tidy_oracle();
const std::vector<std::string>& tidy_default_tactics();

// [("refl", 0.0)]
std::unique_ptr<Oracle> refl_oracle();

using ScriptTable = std::map<std::string, Candidates>;
std::unique_ptr<Oracle> scripted_oracle(ScriptTable table);
// JSON file: {"<state string>": [["tactic", score], ...], ...}
std::unique_ptr<Oracle> scripted_oracle_from_file(const std::string& path);

} // namespace proofkit
