#include "proofkit/cli.hpp"

#include "proofkit/datapoint.hpp"
#include "proofkit/evalrun.hpp"
#include "proofkit/parse.hpp"
#include "proofkit/print.hpp"
#include "proofkit/remote.hpp"
#include "proofkit/scan.hpp"
#include "proofkit/split.hpp"
#include "proofkit/taskgen.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;

namespace proofkit::cli {

namespace {

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

// "5s", "1500ms", "2m", plain seconds; "0" disables the timeout.
std::optional<std::chrono::milliseconds> parse_duration(const std::string& s) {
    if (s == "0" || s == "none" || s == "off") return std::nullopt;
    std::size_t pos = 0;
    long value = std::stol(s, &pos);
    std::string unit = s.substr(pos);
    if (unit == "ms") return std::chrono::milliseconds(value);
    if (unit == "m") return std::chrono::milliseconds(value * 60000);
    if (unit.empty() || unit == "s") return std::chrono::milliseconds(value * 1000);
    throw CLI::ValidationError("duration", "unknown duration unit: " + unit);
}

struct SearchFlags {
    long wMax = 16;
    long dMax = 128;
    std::size_t maxIterations = 512;
    std::string tacticTimeout = "5s";
    std::string globalTimeout = "600s";
    std::size_t candidates = 16;

    void attach(CLI::App* cmd) {
        cmd->add_option("--w-max", wMax, "maximum queue width, -1 for unlimited")
            ->capture_default_str();
        cmd->add_option("--d-max", dMax, "maximum node depth, -1 for unlimited")
            ->capture_default_str();
        cmd->add_option("--max-iterations", maxIterations, "outer loop budget")
            ->capture_default_str();
        cmd->add_option("--tactic-timeout", tacticTimeout, "per-tactic timeout (e.g. 5s, 0=off)")
            ->capture_default_str();
        cmd->add_option("--global-timeout", globalTimeout, "per-theorem timeout (e.g. 600s, 0=off)")
            ->capture_default_str();
        cmd->add_option("--candidates", candidates, "candidates requested per oracle query")
            ->capture_default_str();
    }

    SearchConfig to_config() const {
        SearchConfig cfg;
        cfg.wMax = wMax < 0 ? std::nullopt : std::optional<std::size_t>(wMax);
        cfg.dMax = dMax < 0 ? std::nullopt : std::optional<std::size_t>(dMax);
        cfg.maxIterations = maxIterations;
        cfg.tacticTimeout = parse_duration(tacticTimeout);
        cfg.globalTimeout = parse_duration(globalTimeout);
        cfg.candidatesPerQuery = candidates;
        return cfg;
    }
};

std::unique_ptr<Oracle> make_backend(const std::string& spec, const SearchConfig& cfg) {
    if (spec == "tidy") return tidy_oracle();
    if (spec == "refl") return refl_oracle();
    if (spec.rfind("scripted:", 0) == 0) return scripted_oracle_from_file(spec.substr(9));
    if (spec.rfind("remote:", 0) == 0) {
        auto timeout = cfg.tacticTimeout.value_or(std::chrono::milliseconds(5000));
        return remote_oracle(spec.substr(7), timeout, cfg.candidatesPerQuery);
    }
    throw CLI::ValidationError("--backend",
                               "expected tidy | refl | scripted:<file> | remote:<url>");
}

void emit_report(const std::string& reportPath, const std::string& content) {
    if (reportPath.empty() || reportPath == "-") {
        std::cout << content << "\n";
        return;
    }
    std::ofstream out(reportPath);
    if (!out) throw std::runtime_error("cannot write report to " + reportPath);
    out << content << "\n";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}


// Flat key=value configuration overlay: values become trailing --key=value
// arguments unless the flag was given explicitly, so explicit flags win and
// unknown keys are rejected by the regular argument parser.
std::vector<std::string> apply_config_overlay(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::string configPath;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::runtime_error("--config expects a file path");
            configPath = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            configPath = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (configPath.empty()) return out;
    std::ifstream in(configPath);
    if (!in) throw std::runtime_error("cannot open config file: " + configPath);
    auto has_flag = [&out](const std::string& flag) {
        for (const auto& a : out)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        std::string item = line.substr(b, e - b + 1);
        if (item[0] == '#') continue;
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error("config line " + std::to_string(lineNo) +
                                     " is not key=value: " + item);
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        if (!has_flag("--" + key)) out.push_back("--" + key + "=" + value);
    }
    return out;
}

// ---- subcommand bodies -----------------------------------------------------

int run_extract(const std::string& envPath, const std::string& outPath,
                const std::vector<std::string>& decls, ExtractionConfig cfg, int workers,
                const std::string& reportPath) {
    Environment env = load_env_file(envPath);
    std::vector<RawDatapoint> dps;
    if (decls.empty()) {
        dps = extract_environment(env, cfg, workers);
    } else {
        for (const auto& name : decls) {
            auto part = extract_decl_datapoints(env.get(name), env, cfg);
            dps.insert(dps.end(), part.begin(), part.end());
        }
    }
    std::ofstream out = open_out(outPath);
    write_raw_jsonl(out, dps);
    json j;
    j["schema_version"] = 1;
    j["declarations"] = decls.empty() ? theorems_of(env).size() : decls.size();
    j["datapoints"] = dps.size();
    j["out"] = outPath;
    emit_report(reportPath, j.dump());
    std::cerr << "extracted " << dps.size() << " datapoints\n";
    return 0;
}

int run_tasks(const std::string& inPath, const std::string& stepsPath,
              const std::string& outPath, bool concat, const TaskCodecConfig& cfg,
              const std::string& reportPath) {
    auto dps = ingest_raw_json_file(inPath);
    std::vector<TaskExample> tasks = derive_all(dps, cfg);
    if (!stepsPath.empty()) {
        std::ifstream in(stepsPath);
        if (!in) throw std::runtime_error("cannot open steps file: " + stepsPath);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            json j = json::parse(line);
            TacticStep step;
            for (const auto& g : j.at("goals")) {
                GoalStrings gs;
                for (const auto& h : g.at("hyps"))
                    gs.hyps.emplace_back(h.at(0).get<std::string>(), h.at(1).get<std::string>());
                gs.target = g.at("target").get<std::string>();
                step.goals.push_back(std::move(gs));
            }
            step.command = j.at("command").get<std::string>();
            tasks.push_back(encode_proofstep(step, j.value("decl_nm", "")));
        }
    }
    std::ofstream out = open_out(outPath);
    for (const auto& t : tasks) out << task_to_json(t, concat) << "\n";
    json j;
    j["schema_version"] = 1;
    j["datapoints"] = dps.size();
    j["examples"] = tasks.size();
    j["out"] = outPath;
    emit_report(reportPath, j.dump());
    std::cerr << "wrote " << tasks.size() << " task examples\n";
    return 0;
}

int run_split(const std::string& inPath, const std::string& outPrefix,
              const std::string& reportPath) {
    std::ifstream in(inPath);
    if (!in) throw std::runtime_error("cannot open input file: " + inPath);
    std::ofstream train = open_out(outPrefix + ".train.jsonl");
    std::ofstream valid = open_out(outPrefix + ".valid.jsonl");
    std::ofstream test = open_out(outPrefix + ".test.jsonl");
    SplitManifest m = split_jsonl(in, train, valid, test);
    emit_report(reportPath, m.to_json());
    std::cerr << "split " << (m.counts.at("train") + m.counts.at("valid") + m.counts.at("test"))
              << " records\n";
    return 0;
}

json search_result_json(const std::string& theorem, const SearchResult& res) {
    json j;
    j["schema_version"] = 1;
    j["theorem"] = theorem;
    j["status"] = search_status_name(res.status);
    j["proof"] = res.proof;
    j["iterations"] = res.iterations;
    j["nodes_expanded"] = res.nodesExpanded;
    j["wall_time_ms"] = res.wallTime.count();
    return j;
}

int run_prove(const std::string& envPath, const std::string& theorem,
              const std::string& backend, const SearchFlags& flags,
              const std::string& recordSteps, const std::string& reportPath) {
    Environment env = load_env_file(envPath);
    const Declaration& decl = env.get(theorem);
    SearchConfig cfg = flags.to_config();
    auto oracle = make_backend(backend, cfg);
    TacticState root = initial_state(decl, env);
    SearchResult res = best_first_search(root, *oracle, cfg, env);
    emit_report(reportPath, search_result_json(theorem, res).dump());
    if (res.proved() && !recordSteps.empty()) {
        std::ofstream out = open_out(recordSteps);
        TacticState cur = root;
        for (const auto& cmd : res.proof) {
            json rec;
            json goals = json::array();
            for (const auto& g : cur.goals) {
                json gj;
                json hyps = json::array();
                for (const auto& h : g.hyps)
                    hyps.push_back({h->name, pretty_str(h->type, env)});
                gj["hyps"] = std::move(hyps);
                gj["target"] = pretty_str(g.target, env);
                goals.push_back(std::move(gj));
            }
            rec["goals"] = std::move(goals);
            rec["command"] = cmd;
            rec["decl_nm"] = theorem;
            out << rec.dump() << "\n";
            TacticResult r = apply_tactic(cur, cmd, env);
            if (!r.ok()) throw std::runtime_error("recorded proof failed to replay");
            cur = std::move(r.state);
        }
    }
    std::cerr << theorem << ": " << search_status_name(res.status) << " in " << res.iterations
              << " iterations\n";
    return res.proved() ? 0 : 1;
}

int run_eval_cmd(const std::string& envPath, const std::string& backend,
                 const SearchFlags& flags, std::size_t runs, int workers, long cutoff,
                 const std::string& reportPath) {
    Environment env = load_env_file(envPath);
    SearchConfig scfg = flags.to_config();
    auto oracle = make_backend(backend, scfg);
    EvalConfig cfg;
    cfg.search = scfg;
    cfg.runs = runs;
    cfg.workers = workers;
    std::vector<const Declaration*> targets;
    if (cutoff >= 0) {
        cfg.fixedCutoff = static_cast<std::size_t>(cutoff);
        targets = chronological_holdout(env, static_cast<std::size_t>(cutoff));
    } else {
        targets = theorems_of(env);
    }
    cfg.stopFlag = &g_interrupted;
    EvalReport rep = run_eval(targets, *oracle, cfg, env);
    std::string body = rep.to_json();
    if (g_interrupted.load()) {
        json j = json::parse(body);
        j["interrupted"] = true;
        body = j.dump();
    }
    emit_report(reportPath, body);
    std::cerr << "pass rate " << rep.passRate << " over " << targets.size() << " theorems, "
              << runs << " runs\n";
    return 0;
}

int run_name_eval(const std::string& candidatesPath, const std::string& ks,
                  const std::string& reportPath) {
    std::ifstream in(candidatesPath);
    if (!in) throw std::runtime_error("cannot open candidates file: " + candidatesPath);
    auto rows = load_naming_rows(in);
    std::vector<int> kList;
    std::stringstream ss(ks);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) kList.push_back(std::stoi(item));
    auto acc = topk_accuracy(rows, kList);
    emit_report(reportPath, naming_report_json(acc, rows.size()));
    return 0;
}

int run_scan(const std::string& patternsPath, const std::vector<std::string>& corpus,
             const ScanOptions& opts, const std::string& reportPath) {
    std::ifstream in(patternsPath, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open patterns file: " + patternsPath);
    auto patterns = load_patterns(in);
    ScanReport rep = scan(corpus, patterns, opts);
    emit_report(reportPath, rep.to_json());
    std::cerr << "scanned " << rep.filesScanned << " files, " << rep.bytesScanned << " bytes\n";
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"proof-artifact data engineering and proof-search toolkit"};
    app.require_subcommand(1);
    std::string configSink;
    auto add_config = [&configSink](CLI::App* cmd) {
        cmd->add_option("--config", configSink,
                        "flat key=value configuration file; explicit flags take precedence");
    };

    // extract
    auto* extract = app.add_subcommand("extract", "walk proof terms and emit raw datapoints");
    add_config(extract);
    std::string exEnv, exOut = "datapoints.jsonl", exReport;
    std::vector<std::string> exDecls;
    ExtractionConfig exCfg;
    bool keepSorts = false, noVerbose = false;
    int exWorkers = 1;
    extract->add_option("--env", exEnv, "environment file")->required();
    extract->add_option("--out", exOut, "output JSONL path")->capture_default_str();
    extract->add_option("--decl", exDecls, "declaration names (default: all theorems)");
    extract->add_option("--min-subterm-size", exCfg.minSubtermSize, "node-count threshold")
        ->capture_default_str();
    extract->add_flag("--keep-sorts", keepSorts, "emit datapoints for Sort subterms");
    extract->add_flag("--no-verbose", noVerbose, "omit the verbose field variants");
    extract->add_flag("--dedup-premises", exCfg.dedupPremises, "collapse duplicate premises");
    extract->add_option("--workers", exWorkers, "parallel workers")->capture_default_str();
    extract->add_option("--report", exReport, "summary JSON path (default stdout)");

    // tasks
    auto* tasks = app.add_subcommand("tasks", "derive prompt/completion task examples");
    add_config(tasks);
    std::string tIn, tSteps, tOut = "tasks.jsonl", tReport;
    bool tConcat = false;
    TaskCodecConfig tCfg;
    tasks->add_option("--in", tIn, "raw datapoint JSONL")->required();
    tasks->add_option("--steps", tSteps, "recorded tactic steps JSONL (proofstep examples)");
    tasks->add_option("--out", tOut, "output JSONL path")->capture_default_str();
    tasks->add_flag("--concat", tConcat, "emit a single text field per example");
    tasks->add_flag("--cls-upper", tCfg.premiseClsUppercase,
                    "render classification tokens as <TRUE>/<FALSE>");
    tasks->add_flag("--premise-name-only", tCfg.premiseNameOnly,
                    "omit premise types from CLASSIFYPREMISE prompts");
    tasks->add_option("--neg-ratio", tCfg.negRatio,
                      "keep this fraction of negative premise examples (0 = all)")
        ->capture_default_str();
    tasks->add_option("--neg-seed", tCfg.negSeed, "downsampling seed")->capture_default_str();
    tasks->add_option("--report", tReport, "summary JSON path (default stdout)");

    // split
    auto* split = app.add_subcommand("split", "deterministic 80-5-15 split by theorem name");
    add_config(split);
    std::string sIn, sPrefix, sReport;
    split->add_option("--in", sIn, "input JSONL")->required();
    split->add_option("--out-prefix", sPrefix, "output prefix")->required();
    split->add_option("--report", sReport, "manifest JSON path (default stdout)");

    // prove
    auto* prove = app.add_subcommand("prove", "best-first proof search for one theorem");
    add_config(prove);
    std::string pEnv, pTheorem, pBackend = "tidy", pReport, pSteps;
    SearchFlags pFlags;
    prove->add_option("--env", pEnv, "environment file")->required();
    prove->add_option("--theorem", pTheorem, "theorem name")->required();
    prove->add_option("--backend", pBackend, "tidy | refl | scripted:<file> | remote:<url>")
        ->capture_default_str();
    pFlags.attach(prove);
    prove->add_option("--record-steps", pSteps, "write the proved script's tactic steps JSONL");
    prove->add_option("--report", pReport, "result JSON path (default stdout)");

    // eval
    auto* eval = app.add_subcommand("eval", "batch evaluation with averaged pass rates");
    add_config(eval);
    std::string eEnv, eBackend = "tidy", eReport;
    SearchFlags eFlags;
    std::size_t eRuns = 3;
    int eWorkers = 1;
    long eCutoff = -1;
    eval->add_option("--env", eEnv, "environment file")->required();
    eval->add_option("--backend", eBackend, "tidy | refl | scripted:<file> | remote:<url>")
        ->capture_default_str();
    eFlags.attach(eval);
    eval->add_option("--runs", eRuns, "evaluation runs to average")->capture_default_str();
    eval->add_option("--workers", eWorkers, "parallel workers")->capture_default_str();
    eval->add_option("--cutoff", eCutoff,
                     "chronological holdout: evaluate declarations at or after this orderIndex");
    eval->add_option("--report", eReport, "report JSON path (default stdout)");

    // name-eval
    auto* nameEval = app.add_subcommand("name-eval", "top-K theorem naming accuracy");
    add_config(nameEval);
    std::string nCandidates, nKs = "1,3,10,16", nReport;
    nameEval->add_option("--candidates", nCandidates, "naming rows JSONL")->required();
    nameEval->add_option("--k", nKs, "comma-separated K values")->capture_default_str();
    nameEval->add_option("--report", nReport, "report JSON path (default stdout)");

    // scan
    auto* scanCmd = app.add_subcommand("scan", "multi-pattern contamination scan");
    add_config(scanCmd);
    std::string scPatterns, scReport;
    std::vector<std::string> scCorpus;
    ScanOptions scOpts;
    bool scSerial = false;
    scanCmd->add_option("--patterns", scPatterns, "pattern file, one raw pattern per line")
        ->required();
    scanCmd->add_option("--corpus", scCorpus, "files or directories to scan")->required();
    scanCmd->add_option("--chunk-size", scOpts.chunkSize, "streaming chunk size in bytes")
        ->capture_default_str();
    scanCmd->add_option("--workers", scOpts.workers, "parallel workers")->capture_default_str();
    scanCmd->add_flag("--serial", scSerial, "single-worker scan");
    scanCmd->add_flag("--normalize-ws", scOpts.normalizeWs,
                      "collapse whitespace runs before matching");
    scanCmd->add_option("--report", scReport, "report JSON path (default stdout)");

    std::vector<std::string> expanded;
    try {
        expanded = apply_config_overlay(args);
    } catch (const std::exception& ex) {
        std::cerr << ex.what() << "\n";
        return 2;
    }
    std::vector<const char*> argv;
    argv.push_back("proofkit");
    for (const auto& a : expanded) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        if (args.empty() || e.get_name() == "RequiredError" || e.get_name() == "ExtrasError")
            std::cerr << app.help();
        return 2;
    }

    std::signal(SIGINT, handle_sigint);
    g_interrupted.store(false);

    try {
        if (extract->parsed()) {
            exCfg.skipSorts = !keepSorts;
            exCfg.emitVerbose = !noVerbose;
            return run_extract(exEnv, exOut, exDecls, exCfg, exWorkers, exReport);
        }
        if (tasks->parsed()) return run_tasks(tIn, tSteps, tOut, tConcat, tCfg, tReport);
        if (split->parsed()) return run_split(sIn, sPrefix, sReport);
        if (prove->parsed()) return run_prove(pEnv, pTheorem, pBackend, pFlags, pSteps, pReport);
        if (eval->parsed())
            return run_eval_cmd(eEnv, eBackend, eFlags, eRuns, eWorkers, eCutoff, eReport);
        if (nameEval->parsed()) return run_name_eval(nCandidates, nKs, nReport);
        if (scanCmd->parsed()) {
            if (scSerial) scOpts.workers = 1;
            return run_scan(scPatterns, scCorpus, scOpts, scReport);
        }
    } catch (const CLI::ParseError& ex) {
        std::cerr << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

} // namespace proofkit::cli
