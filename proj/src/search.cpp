#include "proofkit/search.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <queue>
#include <unordered_set>

namespace proofkit {

const char* search_status_name(SearchStatus s) {
    switch (s) {
    case SearchStatus::Proved: return "proved";
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::BudgetExceeded: return "budgetExceeded";
    case SearchStatus::TimedOut: return "timedOut";
    }
    return "?";
}

namespace {

struct Node {
    TacticState state;
    std::size_t depth = 0;
    double score = 0.0;
    std::size_t parent = SIZE_MAX;
    std::string tacticFromParent;
    std::size_t seq = 0;
};

struct NodeOrder {
    const std::deque<Node>* arena;
    bool operator()(std::size_t a, std::size_t b) const {
        const Node& na = (*arena)[a];
        const Node& nb = (*arena)[b];
        if (na.score != nb.score) return na.score < nb.score; // max-heap on score
        return na.seq > nb.seq;                               // FIFO among equal scores
    }
};

std::vector<std::string> path_tactics(const std::deque<Node>& arena, std::size_t leaf) {
    std::vector<std::string> out;
    for (std::size_t i = leaf; i != SIZE_MAX; i = arena[i].parent) {
        if (!arena[i].tacticFromParent.empty()) out.push_back(arena[i].tacticFromParent);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace

SearchResult best_first_search(const TacticState& root, Oracle& oracle, const SearchConfig& cfg,
                               const Environment& env) {
    auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
    };
    SearchResult res;

    if (root.solved()) {
        res.status = SearchStatus::Proved;
        res.wallTime = elapsed();
        return res;
    }

    std::deque<Node> arena;
    NodeOrder order{&arena};
    std::priority_queue<std::size_t, std::vector<std::size_t>, NodeOrder> queue(order);
    std::unordered_set<std::string> visited;

    arena.push_back({root, 0, 0.0, SIZE_MAX, "", 0});
    queue.push(0);
    visited.insert(render_state(root, env));
    std::size_t seqCounter = 1;

    for (;;) {
        if (queue.empty()) {
            res.status = SearchStatus::Exhausted;
            break;
        }
        if (res.iterations >= cfg.maxIterations) {
            res.status = SearchStatus::BudgetExceeded;
            break;
        }
        if (cfg.globalTimeout && elapsed() > *cfg.globalTimeout) {
            res.status = SearchStatus::TimedOut;
            break;
        }

        std::size_t current = queue.top();
        queue.pop();
        ++res.iterations;
        res.maxExpandedDepth = std::max(res.maxExpandedDepth, arena[current].depth);
        std::string serialized = render_state(arena[current].state, env);
        if (cfg.recordTrace) res.expandedTrace.push_back(serialized);

        Candidates cands = oracle.query(serialized);
        std::stable_sort(cands.begin(), cands.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        if (cands.size() > cfg.candidatesPerQuery) cands.resize(cfg.candidatesPerQuery);

        for (const auto& [command, score] : cands) {
            Deadline deadline;
            if (cfg.tacticTimeout)
                deadline = std::chrono::steady_clock::now() + *cfg.tacticTimeout;
            TacticResult r = apply_tactic(arena[current].state, command, env, deadline);
            if (!r.ok()) continue;

            std::size_t childDepth = arena[current].depth + 1;
            double childScore = arena[current].score + score;
            if (r.state.solved()) {
                arena.push_back({std::move(r.state), childDepth, childScore, current, command,
                                 seqCounter++});
                res.proof = path_tactics(arena, arena.size() - 1);
                res.status = SearchStatus::Proved;
                res.wallTime = elapsed();
                return res;
            }
            std::string key = render_state(r.state, env);
            if (visited.count(key)) continue;
            if (cfg.dMax && childDepth > *cfg.dMax) continue;
            if (cfg.wMax && queue.size() > *cfg.wMax) continue;
            res.maxQueueLenAtInsert = std::max(res.maxQueueLenAtInsert, queue.size());
            visited.insert(std::move(key));
            arena.push_back({std::move(r.state), childDepth, childScore, current, command,
                             seqCounter++});
            queue.push(arena.size() - 1);
            ++res.nodesExpanded;
        }
    }
    res.wallTime = elapsed();
    return res;
}

std::optional<TacticState> replay_proof(const TacticState& root,
                                        const std::vector<std::string>& proof,
                                        const Environment& env) {
    TacticState cur = root;
    for (const auto& cmd : proof) {
        TacticResult r = apply_tactic(cur, cmd, env);
        if (!r.ok()) return std::nullopt;
        cur = std::move(r.state);
    }
    return cur;
}

namespace {

class ConstantOracle : public Oracle {
public:
    explicit ConstantOracle(Candidates cands) : cands_(std::move(cands)) {}
    Candidates query(const std::string&) override { return cands_; }

private:
    Candidates cands_;
};

class ScriptedOracle : public Oracle {
public:
    explicit ScriptedOracle(ScriptTable table) : table_(std::move(table)) {}
    Candidates query(const std::string& state) override {
        auto it = table_.find(state);
        return it == table_.end() ? Candidates{} : it->second;
    }

private:
    ScriptTable table_;
};

} // namespace

const std::vector<std::string>& tidy_default_tactics() {
    static const std::vector<std::string> tactics = {
        "refl",
        "exact dec_trivial",
        "assumption",
        "tactic.intros1",
        "tactic.auto_cases",
        "apply_auto_param",
        "dsimp at *",
        "simp at *",
        "ext1",
        "fsplit",
        "injections_and_clear",
        "solve_by_elim",
        "norm_cast",
    };
    return tactics;
}

std::unique_ptr<Oracle> tidy_oracle() {
    Candidates cands;
    for (const auto& t : tidy_default_tactics()) cands.emplace_back(t, 0.0);
    return std::make_unique<ConstantOracle>(std::move(cands));
}

std::unique_ptr<Oracle> refl_oracle() {
    return std::make_unique<ConstantOracle>(Candidates{{"refl", 0.0}});
}

std::unique_ptr<Oracle> scripted_oracle(ScriptTable table) {
    return std::make_unique<ScriptedOracle>(std::move(table));
}

std::unique_ptr<Oracle> scripted_oracle_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    ScriptTable table;
    for (const auto& [state, arr] : j.items()) {
        Candidates cands;
        for (const auto& entry : arr)
            cands.emplace_back(entry.at(0).get<std::string>(), entry.at(1).get<double>());
        table.emplace(state, std::move(cands));
    }
    return std::make_unique<ScriptedOracle>(std::move(table));
}

} // namespace proofkit
