#include "doctest.h"

#include "proofkit/datapoint.hpp"
#include "proofkit/parse.hpp"
#include "proofkit/print.hpp"
#include "proofkit/typecheck.hpp"

#include <fstream>
#include <sstream>

using namespace proofkit;

namespace {

const Environment& fixture_env() {
    static Environment env = load_env_file(std::string(PROOFKIT_DATA_DIR) + "/fixtures/prop.env");
    return env;
}

const std::vector<RawDatapoint>& peirce_datapoints() {
    static std::vector<RawDatapoint> dps =
        extract_decl_datapoints(fixture_env().get("peirce_identity"), fixture_env());
    return dps;
}

const std::vector<std::pair<std::string, std::string>> kPeirceHyps = {
    {"P", "Prop"},
    {"Q", "Prop"},
    {"ᾰ", "¬P"},
    {"ᾰ_1", "(P → Q) → P"},
    {"ᾰ_1", "¬(P → Q)"},
};

// Finds the unique datapoint with the given goal/proof_term among those whose
// hypothesis list is the full five-entry Peirce context.
const RawDatapoint* find_dp(const std::string& goal, const std::string& proofTerm,
                            const std::vector<bool>& hypsMask) {
    for (const auto& dp : peirce_datapoints()) {
        if (dp.goal == goal && dp.proof_term == proofTerm && dp.hyps_mask == hypsMask &&
            dp.hyps == kPeirceHyps)
            return &dp;
    }
    return nullptr;
}

// Builds free variables for a datapoint's hypothesis list so that its open
// terms can be re-parsed.
std::vector<ExprPtr> hyp_locals(const RawDatapoint& dp, const Environment& env) {
    std::vector<ExprPtr> locals;
    for (const auto& [name, tyStr] : dp.hyps)
        locals.push_back(Expr::fvar(name, parse_expr(tyStr, env, locals)));
    return locals;
}

} // namespace

TEST_CASE("Peirce premises match the appendix list and order") {
    const Environment& env = fixture_env();
    auto ps = premises_of(env.get("peirce_identity"), env);
    REQUIRE(ps.size() == 9);
    std::vector<std::string> names;
    for (const auto& p : ps) names.push_back(p.first);
    CHECK(names == std::vector<std::string>{"absurd", "absurd", "decidable.not_imp", "iff.mp",
                                            "and.dcases_on", "decidable.not_or_of_imp",
                                            "or.dcases_on", "em", "or.elim"});
    CHECK(ps[0].second == "∀ {a b : Prop}, a → ¬a → b");
    CHECK(ps[1].second == ps[0].second);
    CHECK(ps[2].second == "∀ {a b : Prop} [_inst_1 : decidable a], ¬(a → b) ↔ a ∧ ¬b");
    CHECK(ps[3].second == "∀ {a b : Prop}, (a ↔ b) → a → b");
    CHECK(ps[5].second == "∀ {a b : Prop} [_inst_1 : decidable a], (a → b) → ¬a ∨ b");
    CHECK(ps[7].second == "∀ (p : Prop), p ∨ ¬p");
    CHECK(ps[8].second == "∀ {a b c : Prop}, a ∨ b → (a → c) → (b → c) → c");

    // dedup flag collapses the duplicated `absurd`
    auto deduped = premises_of(env.get("peirce_identity"), env, true);
    CHECK(deduped.size() == 8);
    CHECK(deduped[0].first == "absurd");

    // every returned name resolves in env
    for (const auto& p : ps) CHECK(env.find(p.first) != nullptr);
}

TEST_CASE("premises of a variable-only proof are empty") {
    const Environment& env = fixture_env();
    CHECK(premises_of(env.get("id_prop"), env).empty());
}

TEST_CASE("native extraction reproduces appendix datapoint 1") {
    const RawDatapoint* dp =
        find_dp("∀ {b : Prop} [_inst_1 : decidable P], ¬(P → b) ↔ P ∧ ¬b", "decidable.not_imp",
                {true, false, false, false, false});
    REQUIRE(dp != nullptr);
    CHECK(dp->decl_nm == "peirce_identity");
    CHECK(dp->decl_tp == "∀ {P Q : Prop}, ((P → Q) → P) → P");
    CHECK(dp->decl_premises_mask ==
          std::vector<bool>{false, false, true, false, false, false, false, false, false});
    CHECK(dp->goal_is_prop);
    CHECK(dp->next_lemma.first == "decidable.not_imp");
    CHECK(dp->next_lemma.second == "∀ {a b : Prop} [_inst_1 : decidable a], ¬(a → b) ↔ a ∧ ¬b");
    CHECK(dp->verbose_proof_term == "@decidable.not_imp P");
    CHECK(dp->result.find("PREDICT Q (classical.prop_decidable P)") != std::string::npos);
}

TEST_CASE("native extraction reproduces appendix datapoint 2") {
    const RawDatapoint* dp = find_dp("Prop", "Q", {false, true, false, false, false});
    REQUIRE(dp != nullptr);
    CHECK_FALSE(dp->goal_is_prop);
    CHECK(dp->next_lemma.first == "Q");
    CHECK(dp->next_lemma.second == "Prop");
    CHECK(dp->decl_premises_mask == std::vector<bool>(9, false));
    CHECK(dp->verbose_proof_term == "Q");
}

TEST_CASE("native extraction reproduces appendix datapoint 3") {
    const RawDatapoint* dp = find_dp("∀ [_inst_1 : decidable P], ¬(P → Q) ↔ P ∧ ¬Q",
                                     "decidable.not_imp", {true, true, false, false, false});
    REQUIRE(dp != nullptr);
    CHECK(dp->decl_premises_mask ==
          std::vector<bool>{false, false, true, false, false, false, false, false, false});
    CHECK(dp->goal_is_prop);
    CHECK(dp->verbose_proof_term == "@decidable.not_imp P Q");
}

TEST_CASE("native extraction reproduces appendix datapoint 4") {
    const RawDatapoint* dp = find_dp("Π (a : Prop), decidable a", "classical.prop_decidable",
                                     {false, false, false, false, false});
    REQUIRE(dp != nullptr);
    CHECK_FALSE(dp->goal_is_prop);
    CHECK(dp->decl_premises_mask == std::vector<bool>(9, false));
    CHECK(dp->next_lemma.first == "classical.prop_decidable");
    CHECK(dp->next_lemma.second == "Π (a : Prop), decidable a");
    CHECK(dp->verbose_proof_term == "classical.prop_decidable");
}

TEST_CASE("single-binder identity extraction") {
    std::istringstream src("constant P : Prop\n"
                           "theorem t : P → P := λ (h : P), h\n");
    Environment env = parse_env_file(src);
    auto dps = extract_decl_datapoints(env.get("t"), env);
    bool found = false;
    for (const auto& dp : dps) {
        if (dp.proof_term == "h") {
            found = true;
            CHECK(dp.hyps == std::vector<std::pair<std::string, std::string>>{{"h", "P"}});
            CHECK(dp.hyps_mask == std::vector<bool>{true});
            CHECK(dp.goal == "P");
        }
    }
    CHECK(found);
}

TEST_CASE("hyps_mask coincides with name-based occurs on the verbose proof term") {
    const Environment& env = fixture_env();
    for (const auto& dp : peirce_datapoints()) {
        ExprPtr term = parse_expr(dp.verbose_proof_term, env, hyp_locals(dp, env));
        for (std::size_t i = 0; i < dp.hyps.size(); ++i) {
            bool nameOccurs = occurs(dp.hyps[i].first, term);
            // With duplicated display names the name-based check can only be
            // coarser than the de Bruijn mask, never finer.
            if (dp.hyps_mask[i]) CHECK(nameOccurs);
        }
        for (std::size_t j = 0; j < dp.decl_premises.size(); ++j)
            CHECK(dp.decl_premises_mask[j] == occurs(dp.decl_premises[j].first, term));
    }
}

TEST_CASE("mask round-trip over every datapoint of the fixture corpus") {
    const Environment& env = fixture_env();
    std::size_t total = 0;
    for (const Declaration& d : env.decls()) {
        if (!d.value) continue;
        for (const auto& dp : extract_decl_datapoints(d, env)) {
            ++total;
            ExprPtr masked = parse_expr(dp.verbose_result, env);
            ExprPtr filler = parse_expr(dp.verbose_proof_term, env, hyp_locals(dp, env));
            ExprPtr restored = substitute_hole(masked, filler);
            CHECK(expr_eq(restored, d.value));
        }
    }
    CHECK(total > 100);
}

TEST_CASE("extract_environment is parallel-stable") {
    const Environment& env = fixture_env();
    auto serial = extract_environment(env, {}, 1);
    auto parallel = extract_environment(env, {}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].decl_nm == parallel[i].decl_nm);
        CHECK(serial[i].result == parallel[i].result);
    }
}

TEST_CASE("ingest of the bundled Peirce fixture") {
    auto dps = ingest_raw_json_file(std::string(PROOFKIT_DATA_DIR) + "/fixtures/peirce_raw.jsonl");
    REQUIRE(dps.size() == 4);
    for (const auto& dp : dps) CHECK(dp.decl_nm == "peirce_identity");
    CHECK(dps[0].hyps.size() == 5);
}

TEST_CASE("ingest edge cases") {
    std::istringstream empty("");
    CHECK(ingest_raw_json(empty).empty());

    // a record with two PREDICT tokens violates the hole invariant
    auto dps = ingest_raw_json_file(std::string(PROOFKIT_DATA_DIR) + "/fixtures/peirce_raw.jsonl");
    RawDatapoint bad = dps[0];
    bad.result = "PREDICT PREDICT";
    std::istringstream twoHoles(datapoint_to_json(bad));
    CHECK_THROWS_AS(ingest_raw_json(twoHoles), InvariantError);

    RawDatapoint lenMismatch = dps[0];
    lenMismatch.hyps_mask.push_back(true);
    std::istringstream mismatch(datapoint_to_json(lenMismatch));
    CHECK_THROWS_AS(ingest_raw_json(mismatch), InvariantError);

    std::istringstream missing("{\"decl_nm\":\"x\"}");
    CHECK_THROWS_AS(ingest_raw_json(missing), SchemaError);

    std::istringstream garbled("not json at all");
    CHECK_THROWS_AS(ingest_raw_json(garbled), SchemaError);
}

TEST_CASE("ingest-serialize identity keeps string fields byte-identical") {
    std::string path = std::string(PROOFKIT_DATA_DIR) + "/fixtures/peirce_raw.jsonl";
    auto dps = ingest_raw_json_file(path);
    std::ostringstream out;
    write_raw_jsonl(out, dps);
    std::istringstream back(out.str());
    auto dps2 = ingest_raw_json(back);
    REQUIRE(dps2.size() == dps.size());
    for (std::size_t i = 0; i < dps.size(); ++i) {
        CHECK(dps[i].result == dps2[i].result);
        CHECK(dps[i].verbose_result == dps2[i].verbose_result);
        CHECK(dps[i].goal == dps2[i].goal);
        CHECK(dps[i].proof_term == dps2[i].proof_term);
        CHECK(dps[i].hyps == dps2[i].hyps);
    }
}

TEST_CASE("extraction config flags: minSubtermSize and skipSorts") {
    const Environment& env = fixture_env();
    const Declaration& peirce = env.get("peirce_identity");

    ExtractionConfig big;
    big.minSubtermSize = 5;
    for (const auto& dp : extract_decl_datapoints(peirce, env, big))
        CHECK(count_nodes(parse_expr(dp.verbose_proof_term, env, hyp_locals(dp, env))) >= 5);

    // Sorts are skipped by default; binder-type subtrees are never eligible,
    // so Sort datapoints only appear via implicit argument subtrees
    std::istringstream src("constant P : Prop\n"
                           "constant box : Π {α : Type}, Prop → P → P\n"
                           "theorem t : Prop → P → P := @box Prop\n");
    Environment env2 = parse_env_file(src);
    auto defaults = extract_decl_datapoints(env2.get("t"), env2);
    for (const auto& dp : defaults) CHECK(dp.proof_term != "Prop");
    ExtractionConfig keep;
    keep.skipSorts = false;
    bool sawSort = false;
    for (const auto& dp : extract_decl_datapoints(env2.get("t"), env2, keep))
        if (dp.proof_term == "Prop") sawSort = true;
    CHECK(sawSort);
}
