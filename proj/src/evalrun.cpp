#include "proofkit/evalrun.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>

using json = nlohmann::ordered_json;

namespace proofkit {

bool EvalReport::proved_every_run(const std::string& name) const {
    for (const auto& t : theorems) {
        if (t.name != name) continue;
        return !t.statusPerRun.empty() &&
               std::all_of(t.statusPerRun.begin(), t.statusPerRun.end(),
                           [](SearchStatus s) { return s == SearchStatus::Proved; });
    }
    return false;
}

std::string EvalReport::to_json() const {
    json j;
    j["schema_version"] = 1;
    json runs = json::array();
    for (const auto& [proved, attempted] : perRun)
        runs.push_back({{"proved", proved}, {"attempted", attempted}});
    j["per_run"] = std::move(runs);
    j["pass_rate"] = passRate;
    json mods = json::object();
    for (const auto& [mod, pa] : perModule)
        mods[mod] = {{"proved", pa.first}, {"attempted", pa.second}};
    j["per_module"] = std::move(mods);
    json hist = json::object();
    for (const auto& [len, cnt] : semicolonHistogram) hist[std::to_string(len)] = cnt;
    j["semicolon_histogram"] = std::move(hist);
    j["mean_chain_length"] = meanChainLength;
    json thms = json::array();
    for (const auto& t : theorems) {
        json tj;
        tj["name"] = t.name;
        tj["module"] = t.modulePath;
        json st = json::array();
        for (SearchStatus s : t.statusPerRun) st.push_back(search_status_name(s));
        tj["status_per_run"] = std::move(st);
        tj["proof"] = t.proof;
        thms.push_back(std::move(tj));
    }
    j["theorems"] = std::move(thms);
    return j.dump();
}

namespace {

std::string module_key(const std::string& modulePath) {
    if (modulePath.empty()) return "(root)";
    auto slash = modulePath.find('/');
    return slash == std::string::npos ? modulePath : modulePath.substr(0, slash);
}

std::size_t semicolons_in(const std::string& tactic) {
    return static_cast<std::size_t>(std::count(tactic.begin(), tactic.end(), ';'));
}

} // namespace

EvalReport run_eval(const std::vector<const Declaration*>& theorems, Oracle& oracle,
                    const EvalConfig& cfg, const Environment& env) {
    EvalReport report;
    report.theorems.resize(theorems.size());
    for (std::size_t i = 0; i < theorems.size(); ++i) {
        report.theorems[i].name = theorems[i]->name;
        report.theorems[i].modulePath = theorems[i]->modulePath;
    }

    for (std::size_t run = 0; run < cfg.runs; ++run) {
        if (cfg.stopFlag && cfg.stopFlag->load()) break;
        oracle.reseed(run);
        std::vector<std::optional<SearchResult>> results(theorems.size());
        int workers = cfg.workers > 0 ? cfg.workers : 1;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (long i = 0; i < static_cast<long>(theorems.size()); ++i) {
            if (cfg.stopFlag && cfg.stopFlag->load()) continue;
            const Declaration& thm = *theorems[static_cast<std::size_t>(i)];
            std::size_t cutoff = cfg.fixedCutoff.value_or(thm.orderIndex);
            TacticState root = initial_state(thm.type, env, cutoff);
            results[static_cast<std::size_t>(i)] =
                best_first_search(root, oracle, cfg.search, env);
        }

        std::size_t proved = 0, attempted = 0;
        for (std::size_t i = 0; i < theorems.size(); ++i) {
            if (!results[i]) continue;
            const SearchResult& res = *results[i];
            ++attempted;
            TheoremOutcome& out = report.theorems[i];
            out.statusPerRun.push_back(res.status);
            if (res.proved()) {
                ++proved;
                if (out.proof.empty()) out.proof = res.proof;
                for (const auto& tac : res.proof) {
                    std::size_t n = semicolons_in(tac);
                    if (n > 0) report.semicolonHistogram[n] += 1;
                }
            }
            auto& mod = report.perModule[module_key(theorems[i]->modulePath)];
            mod.first += res.proved() ? 1 : 0;
            mod.second += 1;
        }
        report.perRun.emplace_back(proved, attempted);
    }

    double sum = 0.0;
    for (const auto& [proved, attempted] : report.perRun)
        sum += attempted ? static_cast<double>(proved) / static_cast<double>(attempted) : 0.0;
    report.passRate = report.perRun.empty() ? 0.0 : sum / static_cast<double>(report.perRun.size());

    std::size_t chains = 0, weighted = 0;
    for (const auto& [len, cnt] : report.semicolonHistogram) {
        chains += cnt;
        weighted += len * cnt;
    }
    report.meanChainLength =
        chains ? static_cast<double>(weighted) / static_cast<double>(chains) : 0.0;
    return report;
}

std::vector<const Declaration*> chronological_holdout(const Environment& env,
                                                      std::size_t cutoff) {
    std::vector<const Declaration*> out;
    for (const auto& d : env.decls())
        if (d.orderIndex >= cutoff) out.push_back(&d);
    return out;
}

std::vector<const Declaration*> theorems_of(const Environment& env) {
    std::vector<const Declaration*> out;
    for (const auto& d : env.decls())
        if (d.value) out.push_back(&d);
    return out;
}

std::map<int, double> topk_accuracy(std::vector<NamingRow> rows, const std::vector<int>& ks) {
    for (auto& row : rows)
        std::stable_sort(row.candidates.begin(), row.candidates.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
    std::map<int, double> acc;
    for (int k : ks) {
        std::size_t hits = 0;
        for (const auto& row : rows) {
            std::size_t limit = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                      row.candidates.size());
            for (std::size_t i = 0; i < limit; ++i) {
                if (row.candidates[i].first == row.truth) {
                    ++hits;
                    break;
                }
            }
        }
        acc[k] = rows.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rows.size());
    }
    return acc;
}

std::vector<NamingRow> load_naming_rows(std::istream& in) {
    std::vector<NamingRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line);
        NamingRow row;
        row.truth = j.at("truth").get<std::string>();
        for (const auto& c : j.at("candidates"))
            row.candidates.emplace_back(c.at(0).get<std::string>(), c.at(1).get<double>());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string naming_report_json(const std::map<int, double>& acc, std::size_t rows) {
    json j;
    j["schema_version"] = 1;
    j["rows"] = rows;
    json a = json::object();
    for (const auto& [k, v] : acc) a[std::to_string(k)] = v;
    j["top_k_accuracy"] = std::move(a);
    return j.dump();
}

} // namespace proofkit
