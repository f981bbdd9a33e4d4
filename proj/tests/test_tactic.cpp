#include "doctest.h"

#include "proofkit/parse.hpp"
#include "proofkit/tactic.hpp"
#include "proofkit/print.hpp"
#include "proofkit/taskgen.hpp"

#include <sstream>

using namespace proofkit;

namespace {

const Environment& fixture_env() {
    static Environment env = load_env_file(std::string(PROOFKIT_DATA_DIR) + "/fixtures/prop.env");
    return env;
}

TacticState peirce_start() {
    return initial_state(fixture_env().get("peirce_identity"), fixture_env());
}

} // namespace

TEST_CASE("initial_state introduces the statement binders") {
    TacticState st = peirce_start();
    CHECK(render_state(st, fixture_env()) == "P Q : Prop ⊢ ((P → Q) → P) → P");
}

TEST_CASE("apply or.elim (em P) opens the two appendix goals") {
    const Environment& env = fixture_env();
    TacticResult r = apply_tactic(peirce_start(), "apply or.elim (em P)", env);
    REQUIRE(r.ok());
    CHECK(render_state(r.state, env) ==
          "P Q : Prop ⊢ P → ((P → Q) → P) → P\nP Q : Prop ⊢ ¬P → ((P → Q) → P) → P");
}

TEST_CASE("the full Peirce script replays and records the appendix states") {
    const Environment& env = fixture_env();
    const std::vector<std::string> script = {"apply or.elim (em P)", "intros h _", "exact h",
                                             "tauto!"};
    const std::vector<std::string> wantStates = {
        "P Q : Prop ⊢ ((P → Q) → P) → P",
        "P Q : Prop ⊢ P → ((P → Q) → P) → P\nP Q : Prop ⊢ ¬P → ((P → Q) → P) → P",
        "P Q : Prop, h : P, ᾰ : (P → Q) → P ⊢ P\nP Q : Prop ⊢ ¬P → ((P → Q) → P) → P",
        "P Q : Prop ⊢ ¬P → ((P → Q) → P) → P",
    };
    TacticState cur = peirce_start();
    std::vector<TaskExample> steps;
    for (std::size_t i = 0; i < script.size(); ++i) {
        CHECK(render_state(cur, env) == wantStates[i]);
        TacticStep step;
        for (const auto& g : cur.goals) {
            GoalStrings gs;
            for (const auto& h : g.hyps) gs.hyps.emplace_back(h->name, pretty_str(h->type, env));
            gs.target = pretty_str(g.target, env);
            step.goals.push_back(std::move(gs));
        }
        step.command = script[i];
        steps.push_back(encode_proofstep(step, "peirce_identity"));
        TacticResult r = apply_tactic(cur, script[i], env);
        REQUIRE(r.ok());
        cur = std::move(r.state);
    }
    CHECK(cur.solved());
    REQUIRE(steps.size() == 4);
    CHECK(steps[0].prompt == "GOAL P Q : Prop ⊢ ((P → Q) → P) → P PROOFSTEP");
    CHECK(steps[0].completion == " apply or.elim (em P)");
    CHECK(steps[3].completion == " tauto!");
}

TEST_CASE("exact closes a goal by hypothesis") {
    const Environment& env = fixture_env();
    TacticState st = peirce_start();
    st = apply_tactic(st, "apply or.elim (em P)", env).state;
    st = apply_tactic(st, "intros h _", env).state;
    TacticResult r = apply_tactic(st, "exact h", env);
    REQUIRE(r.ok());
    CHECK(r.state.goals.size() == 1);

    // ill-typed exact fails without mutating anything
    TacticResult bad = apply_tactic(st, "exact em", env);
    CHECK(bad.status == TacticStatus::Failed);
    // unparseable exact is a parse error
    TacticResult unparse = apply_tactic(st, "exact (", env);
    CHECK(unparse.status == TacticStatus::ParseError);
}

TEST_CASE("tauto! closes the final Peirce goal") {
    const Environment& env = fixture_env();
    TacticState st = peirce_start();
    st = apply_tactic(st, "apply or.elim (em P)", env).state;
    // second goal: ¬P → ((P → Q) → P) → P
    std::swap(st.goals[0], st.goals[1]);
    TacticResult r = apply_tactic(st, "tauto!", env);
    REQUIRE(r.ok());
    CHECK(r.state.goals.size() == 1);
}

TEST_CASE("assumption matches syntactically") {
    std::istringstream src("constant P : Prop\n");
    Environment env = parse_env_file(src);
    TacticState st = initial_state(parse_expr("P → P", env), env);
    CHECK(apply_tactic(st, "assumption", env).status == TacticStatus::Failed);
    TacticResult r = apply_tactic(st, "tactic.intros1", env);
    REQUIRE(r.ok());
    TacticResult done = apply_tactic(r.state, "assumption", env);
    REQUIRE(done.ok());
    CHECK(done.state.solved());
}

TEST_CASE("split, left, right, refl") {
    std::istringstream src("constant not : Prop → Prop\n"
                           "constant and : Prop → Prop → Prop\n"
                           "constant or : Prop → Prop → Prop\n"
                           "constant iff : Prop → Prop → Prop\n"
                           "constant eq : Π {α : Type}, α → α → Prop\n"
                           "constant nat : Type\n"
                           "constant zero : nat\n"
                           "constant one : nat\n"
                           "constant A : Prop\n"
                           "constant B : Prop\n");
    Environment env = parse_env_file(src);

    TacticState conj = initial_state(parse_expr("A ∧ B", env), env);
    TacticResult r = apply_tactic(conj, "split", env);
    REQUIRE(r.ok());
    REQUIRE(r.state.goals.size() == 2);
    CHECK(render_state(r.state, env) == "⊢ A\n⊢ B");

    TacticState disj = initial_state(parse_expr("A ∨ B", env), env);
    CHECK(render_state(apply_tactic(disj, "left", env).state, env) == "⊢ A");
    CHECK(render_state(apply_tactic(disj, "right", env).state, env) == "⊢ B");

    TacticState iffGoal = initial_state(parse_expr("A ↔ A", env), env);
    TacticResult splitIff = apply_tactic(iffGoal, "split", env);
    REQUIRE(splitIff.ok());
    CHECK(render_state(splitIff.state, env) == "⊢ A → A\n⊢ A → A");
    CHECK(apply_tactic(iffGoal, "refl", env).ok());

    TacticState eqGoal = initial_state(parse_expr("zero = zero", env), env);
    TacticResult refl = apply_tactic(eqGoal, "refl", env);
    REQUIRE(refl.ok());
    CHECK(refl.state.solved());
    TacticState neGoal = initial_state(parse_expr("zero = one", env), env);
    CHECK(apply_tactic(neGoal, "refl", env).status == TacticStatus::Failed);
    CHECK(apply_tactic(conj, "refl", env).status == TacticStatus::Failed);
}

TEST_CASE("semicolon chaining applies the tail to every produced goal") {
    std::istringstream src("constant and : Prop → Prop → Prop\n"
                           "constant A : Prop\n");
    Environment env = parse_env_file(src);
    TacticState st = initial_state(parse_expr("A → A ∧ A", env), env);
    TacticResult r = apply_tactic(st, "tactic.intros1; split; assumption", env);
    REQUIRE(r.ok());
    CHECK(r.state.solved());
    // failure in any branch fails the whole chain
    TacticState st2 = initial_state(parse_expr("A → A ∧ A", env), env);
    CHECK(apply_tactic(st2, "tactic.intros1; split; refl", env).status != TacticStatus::Ok);
}

TEST_CASE("chronology: declarations at or after the cutoff are unusable") {
    const Environment& env = fixture_env();
    const Declaration& peirce = env.get("peirce_identity");
    // same goal, but with the cutoff placed below em: names at or after the
    // cutoff behave like unknown constants
    TacticState restricted = initial_state(peirce.type, env, env.get("em").orderIndex);
    TacticResult r = apply_tactic(restricted, "apply or.elim (em P)", env);
    CHECK_FALSE(r.ok());
    CHECK(r.message.find("or.elim") != std::string::npos);

    TacticState cutAtElim = initial_state(peirce.type, env, env.get("or.elim").orderIndex);
    TacticResult r2 = apply_tactic(cutAtElim, "apply or.elim (em P)", env);
    CHECK_FALSE(r2.ok());
    CHECK(r2.message.find("or.elim") != std::string::npos);

    TacticState allowed = initial_state(peirce.type, env, peirce.orderIndex);
    CHECK(apply_tactic(allowed, "apply or.elim (em P)", env).ok());
}

TEST_CASE("unsupported tidy strings are parse failures") {
    const Environment& env = fixture_env();
    TacticState st = peirce_start();
    for (const char* cmd : {"dsimp at *", "simp at *", "norm_cast", "injections_and_clear",
                            "tactic.auto_cases", "apply_auto_param", "solve_by_elim", "ext1"}) {
        CHECK(apply_tactic(st, cmd, env).status == TacticStatus::ParseError);
    }
    CHECK(apply_tactic(st, "exact dec_trivial", env).status == TacticStatus::ParseError);
}

TEST_CASE("goal_is_tautology agrees with hand checks") {
    const Environment& env = fixture_env();
    TacticState st = peirce_start();
    auto mkGoal = [&](const std::string& s) {
        Goal g;
        g.target = parse_expr(s, env, st.goals[0].hyps);
        g.hyps = st.goals[0].hyps;
        return g;
    };
    CHECK(goal_is_tautology(mkGoal("¬P → ((P → Q) → P) → P"), env) == true);
    CHECK(goal_is_tautology(mkGoal("P ∨ ¬P"), env) == true);
    CHECK(goal_is_tautology(mkGoal("P ∧ ¬P"), env) == false);
    CHECK(goal_is_tautology(mkGoal("P → Q"), env) == false);
    CHECK(goal_is_tautology(mkGoal("((P → Q) → P) → P"), env) == true);
}
