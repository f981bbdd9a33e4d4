#include "doctest.h"

#include "proofkit/cli.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace proofkit;
namespace fs = std::filesystem;

namespace {

const std::string kData = std::string(PROOFKIT_DATA_DIR);

fs::path workdir() {
    fs::path dir = fs::temp_directory_path() / "proofkit_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

} // namespace

TEST_CASE("no arguments is a usage error") {
    CHECK(cli::dispatch(std::vector<std::string>{}) == 2);
    CHECK(cli::dispatch({"no-such-command"}) == 2);
}

TEST_CASE("extract then tasks then split pipeline") {
    fs::path dir = workdir();
    fs::path raw = dir / "peirce_dp.jsonl";
    fs::path rep = dir / "extract_report.json";
    int rc = cli::dispatch({"extract", "--env", kData + "/fixtures/prop.env", "--decl",
                            "peirce_identity", "--out", raw.string(), "--report", rep.string()});
    REQUIRE(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["datapoints"].get<int>() == 110);
    CHECK(line_count(raw) == 110);

    // tasks over the bundled 4-datapoint fixture: count law 4*7 + 4*9 + 1
    fs::path tasks = dir / "tasks.jsonl";
    fs::path trep = dir / "tasks_report.json";
    rc = cli::dispatch({"tasks", "--in", kData + "/fixtures/peirce_raw.jsonl", "--out",
                        tasks.string(), "--report", trep.string()});
    REQUIRE(rc == 0);
    CHECK(line_count(tasks) == 4 * 7 + 4 * 9 + 1);

    fs::path prefix = dir / "splitout";
    fs::path srep = dir / "split_manifest.json";
    rc = cli::dispatch({"split", "--in", tasks.string(), "--out-prefix", prefix.string(),
                        "--report", srep.string()});
    REQUIRE(rc == 0);
    nlohmann::json manifest = nlohmann::json::parse(slurp(srep));
    // peirce_identity hashes into train, so every record lands there
    CHECK(manifest["counts"]["train"].get<int>() == 65);
    CHECK(manifest["counts"]["valid"].get<int>() == 0);
    CHECK(manifest["counts"]["test"].get<int>() == 0);
    CHECK(line_count(fs::path(prefix.string() + ".train.jsonl")) == 65);
}

TEST_CASE("prove with the scripted backend finds the four-step proof") {
    fs::path dir = workdir();
    fs::path rep = dir / "prove.json";
    fs::path steps = dir / "steps.jsonl";
    int rc = cli::dispatch({"prove", "--env", kData + "/fixtures/prop.env", "--theorem",
                            "peirce_identity", "--backend",
                            "scripted:" + kData + "/fixtures/peirce.script", "--report",
                            rep.string(), "--record-steps", steps.string()});
    CHECK(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["status"] == "proved");
    CHECK(j["proof"].size() == 4);
    CHECK(line_count(steps) == 4);

    // recorded steps feed back into the tasks pipeline as proofstep examples
    fs::path tasks = dir / "steps_tasks.jsonl";
    rc = cli::dispatch({"tasks", "--in", kData + "/fixtures/peirce_raw.jsonl", "--steps",
                        steps.string(), "--out", tasks.string(), "--report",
                        (dir / "steps_tasks_report.json").string()});
    REQUIRE(rc == 0);
    CHECK(line_count(tasks) == 65 + 4);
    std::ifstream in(tasks);
    std::string line;
    bool sawProofstep = false;
    while (std::getline(in, line))
        if (line.find("\"task\":\"proofstep\"") != std::string::npos) sawProofstep = true;
    CHECK(sawProofstep);
}

TEST_CASE("prove returns 1 when the backend cannot prove") {
    fs::path dir = workdir();
    fs::path rep = dir / "prove_refl.json";
    int rc = cli::dispatch({"prove", "--env", kData + "/fixtures/prop.env", "--theorem",
                            "peirce_identity", "--backend", "refl", "--report", rep.string()});
    CHECK(rc == 1);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["status"] == "exhausted");
}

TEST_CASE("eval over the fixture corpus with the tidy backend") {
    fs::path dir = workdir();
    fs::path rep = dir / "eval.json";
    int rc = cli::dispatch({"eval", "--env", kData + "/fixtures/prop.env", "--backend", "tidy",
                            "--runs", "2", "--workers", "4", "--tactic-timeout", "0",
                            "--global-timeout", "0", "--report", rep.string()});
    REQUIRE(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["per_run"].size() == 2);
    CHECK(j["per_run"][0]["attempted"].get<int>() == 14);
    // deterministic backend: both runs prove the same number
    CHECK(j["per_run"][0]["proved"] == j["per_run"][1]["proved"]);
    CHECK(j["per_module"].contains("logic"));
}

TEST_CASE("name-eval reproduces the appendix scores") {
    fs::path dir = workdir();
    fs::path rep = dir / "name_eval.json";
    int rc = cli::dispatch({"name-eval", "--candidates",
                            kData + "/fixtures/naming_appendix.jsonl", "--k", "1,3,10,16",
                            "--report", rep.string()});
    REQUIRE(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["rows"].get<int>() == 9);
    CHECK(j["top_k_accuracy"]["1"].get<double>() == doctest::Approx(5.0 / 9.0));
}

TEST_CASE("scan subcommand with the bundled patterns") {
    fs::path dir = workdir();
    fs::path corpus = dir / "corpus.txt";
    {
        std::ofstream f(corpus, std::ios::binary);
        f << "lemma foo := by { rintro ⟨a, b⟩, { rcases h } }";
    }
    fs::path rep = dir / "scan.json";
    int rc = cli::dispatch({"scan", "--patterns", kData + "/patterns/default_patterns.txt",
                            "--corpus", corpus.string(), "--report", rep.string()});
    REQUIRE(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["patterns"][0]["count"].get<int>() == 1);
    CHECK(j["patterns"][1]["count"].get<int>() == 1);
    CHECK(j["files_scanned"].get<int>() == 1);
}

TEST_CASE("config file overlay with flag precedence") {
    fs::path dir = workdir();
    fs::path cfg = dir / "proofkit.cfg";
    {
        std::ofstream f(cfg);
        f << "backend=refl\nruns=1\nworkers=2\n";
        f << "env=" << kData << "/fixtures/prop.env\n";
        f << "tactic-timeout=0\nglobal-timeout=0\n";
    }
    fs::path rep = dir / "eval_cfg.json";
    // config supplies everything; the flag overrides the backend
    int rc = cli::dispatch({"eval", "--config", cfg.string(), "--backend", "tidy", "--report",
                            rep.string()});
    REQUIRE(rc == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j["per_run"].size() == 1);
    // tidy proves some fixture theorems where refl proves none
    CHECK(j["per_run"][0]["proved"].get<int>() > 0);

    // unknown config keys are rejected
    fs::path bad = dir / "bad.cfg";
    {
        std::ofstream f(bad);
        f << "definitely-not-a-flag=1\n";
    }
    CHECK(cli::dispatch({"eval", "--config", bad.string(), "--env",
                         kData + "/fixtures/prop.env"}) == 2);
}

TEST_CASE("operational failures exit with 1") {
    CHECK(cli::dispatch({"extract", "--env", "/nonexistent/path.env", "--out", "/tmp/x.jsonl"}) ==
          1);
    CHECK(cli::dispatch({"prove", "--env", kData + "/fixtures/prop.env", "--theorem",
                         "no_such_theorem", "--backend", "tidy"}) == 1);
    CHECK(cli::dispatch({"prove", "--env", kData + "/fixtures/prop.env", "--theorem",
                         "peirce_identity", "--backend", "bogus"}) == 2);
}

TEST_CASE("reports are byte-identical across repeat invocations") {
    fs::path dir = workdir();
    fs::path rep1 = dir / "eval_a.json";
    fs::path rep2 = dir / "eval_b.json";
    for (const fs::path& rep : {rep1, rep2}) {
        REQUIRE(cli::dispatch({"eval", "--env", kData + "/fixtures/prop.env", "--backend",
                               "tidy", "--runs", "2", "--workers", "3", "--tactic-timeout", "0",
                               "--global-timeout", "0", "--report", rep.string()}) == 0);
    }
    // wall-clock timeouts disabled, so the two reports agree byte for byte
    CHECK(slurp(rep1) == slurp(rep2));
}
