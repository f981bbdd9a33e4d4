#pragma once

#include "proofkit/expr.hpp"

#include <chrono>
#include <optional>

namespace proofkit {

struct Goal {
    std::vector<ExprPtr> hyps; // FVar expressions, outermost first
    ExprPtr target;            // a Prop over those fvars
};

struct TacticState {
    std::vector<Goal> goals;
    // Only declarations with orderIndex strictly below this bound are usable
    // by apply/exact; prevents circular proofs.
    std::size_t envCutoff = SIZE_MAX;

    bool solved() const { return goals.empty(); }
};

// Opens the leading implicit/instance binders of a theorem statement into
// hypotheses, the way entering tactic mode does for binders before the colon.
TacticState initial_state(const Declaration& decl, const Environment& env);
TacticState initial_state(const ExprPtr& statement, const Environment& env,
                          std::size_t envCutoff = SIZE_MAX);

std::string render_state(const TacticState& state, const Environment& env);

enum class TacticStatus { Ok, ParseError, Failed, Timeout };

struct TacticResult {
    TacticStatus status = TacticStatus::Failed;
    TacticState state; // meaningful when status == Ok
    std::string message;

    bool ok() const { return status == TacticStatus::Ok; }
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

// The toy tactic language: assumption, exact <term>, intro <name>,
// intros <names…>, apply <term>, split, left, right, refl, tauto!,
// tactic.intros1, fsplit, and semicolon chaining `t; s`. Tactics act on the
// first goal; produced goals replace it in order. Failures never mutate the
// input state.
TacticResult apply_tactic(const TacticState& state, const std::string& command,
                          const Environment& env, Deadline deadline = std::nullopt);

// Brute-force classical validity for the propositional fragment; exposed for
// oracle-equivalence testing of tauto!. Hypotheses become conjuncts of the
// antecedent. Returns nullopt when the goal exceeds maxAtoms or the deadline.
std::optional<bool> goal_is_tautology(const Goal& goal, const Environment& env,
                                      std::size_t maxAtoms = 20, Deadline deadline = std::nullopt);

} // namespace proofkit
