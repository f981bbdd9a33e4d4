#include "proofkit/tactic.hpp"

#include "proofkit/parse.hpp"
#include "proofkit/print.hpp"
#include "proofkit/taskgen.hpp"
#include "proofkit/typecheck.hpp"

#include <algorithm>
#include <sstream>

namespace proofkit {

TacticState initial_state(const ExprPtr& statement, const Environment& env,
                          std::size_t envCutoff) {
    Goal g;
    ExprPtr cur = statement;
    while (cur->kind == ExprKind::Pi && cur->info != BinderInfo::Explicit) {
        ExprPtr fv = Expr::fvar(cur->name, cur->type);
        g.hyps.push_back(fv);
        cur = instantiate(cur->body, fv);
    }
    g.target = cur;
    TacticState st;
    st.goals.push_back(std::move(g));
    st.envCutoff = envCutoff;
    (void)env;
    return st;
}

TacticState initial_state(const Declaration& decl, const Environment& env) {
    return initial_state(decl.type, env, decl.orderIndex);
}

std::string render_state(const TacticState& state, const Environment& env) {
    std::vector<GoalStrings> goals;
    for (const auto& g : state.goals) {
        GoalStrings gs;
        for (const auto& h : g.hyps) gs.hyps.emplace_back(h->name, pretty_str(h->type, env));
        gs.target = pretty_str(g.target, env);
        goals.push_back(std::move(gs));
    }
    return render_tactic_state(goals);
}

namespace {

bool expired(const Deadline& deadline) {
    return deadline && std::chrono::steady_clock::now() > *deadline;
}

TacticResult fail(std::string msg) { return {TacticStatus::Failed, {}, std::move(msg)}; }

std::string fresh_auto_name(const Goal& g) {
    auto taken = [&](const std::string& n) {
        for (const auto& h : g.hyps)
            if (h->name == n) return true;
        return false;
    };
    std::string base = "ᾰ"; // ᾰ, the anonymous-binder display name
    if (!taken(base)) return base;
    for (int i = 1;; ++i) {
        std::string n = base + "_" + std::to_string(i);
        if (!taken(n)) return n;
    }
}

// Constants not yet defined at the goal's cutoff make a tactic fail.
bool out_of_cutoff(const ExprPtr& e, const Environment& env, std::size_t cutoff,
                   std::string& offender) {
    switch (e->kind) {
    case ExprKind::Const: {
        const Declaration* d = env.find(e->name);
        if (d && d->orderIndex >= cutoff) {
            offender = e->name;
            return true;
        }
        return false;
    }
    case ExprKind::App:
        return out_of_cutoff(e->fn, env, cutoff, offender) ||
               out_of_cutoff(e->arg, env, cutoff, offender);
    case ExprKind::Lam:
    case ExprKind::Pi:
        return out_of_cutoff(e->type, env, cutoff, offender) ||
               out_of_cutoff(e->body, env, cutoff, offender);
    default:
        return false;
    }
}

// ---- first-order matching with metavariables ------------------------------

struct MetaCtx {
    std::vector<ExprPtr> metas;          // fvar placeholders
    std::vector<ExprPtr> assignments;    // parallel; null while unsolved

    ExprPtr fresh(const std::string& name, const ExprPtr& type) {
        ExprPtr m = Expr::fvar("?" + name, type);
        metas.push_back(m);
        assignments.emplace_back(nullptr);
        return m;
    }

    int index_of(const ExprPtr& e) const {
        if (e->kind != ExprKind::FVar) return -1;
        for (std::size_t i = 0; i < metas.size(); ++i)
            if (metas[i]->fvarId == e->fvarId) return static_cast<int>(i);
        return -1;
    }

    ExprPtr substitute(const ExprPtr& e) const {
        switch (e->kind) {
        case ExprKind::FVar: {
            int i = index_of(e);
            if (i >= 0 && assignments[static_cast<std::size_t>(i)])
                return assignments[static_cast<std::size_t>(i)];
            return e;
        }
        case ExprKind::App:
            return Expr::app(substitute(e->fn), substitute(e->arg));
        case ExprKind::Lam:
            return Expr::lam(e->name, e->info, substitute(e->type), substitute(e->body));
        case ExprKind::Pi:
            return Expr::pi(e->name, e->info, substitute(e->type), substitute(e->body));
        default:
            return e;
        }
    }

    bool has_unsolved(const ExprPtr& e) const {
        switch (e->kind) {
        case ExprKind::FVar: {
            int i = index_of(e);
            return i >= 0 && !assignments[static_cast<std::size_t>(i)];
        }
        case ExprKind::App: return has_unsolved(e->fn) || has_unsolved(e->arg);
        case ExprKind::Lam:
        case ExprKind::Pi: return has_unsolved(e->type) || has_unsolved(e->body);
        default: return false;
        }
    }

    // First-order syntactic match of pattern (may contain metas) against a
    // meta-free subject.
    bool match(const ExprPtr& pattern, const ExprPtr& subject) {
        int i = index_of(pattern);
        if (i >= 0) {
            auto& slot = assignments[static_cast<std::size_t>(i)];
            if (slot) return alpha_eq(slot, subject);
            slot = subject;
            return true;
        }
        if (pattern->kind != subject->kind) return false;
        switch (pattern->kind) {
        case ExprKind::BVar: return pattern->bvarIndex == subject->bvarIndex;
        case ExprKind::FVar: return pattern->fvarId == subject->fvarId;
        case ExprKind::Const: return pattern->name == subject->name;
        case ExprKind::Sort: return pattern->level == subject->level;
        case ExprKind::App:
            return match(pattern->fn, subject->fn) && match(pattern->arg, subject->arg);
        case ExprKind::Lam:
        case ExprKind::Pi:
            return match(pattern->type, subject->type) && match(pattern->body, subject->body);
        }
        return false;
    }
};

// ---- propositional skeleton for tauto! ------------------------------------

struct PropFormula {
    enum class Op { Atom, Not, And, Or, Iff, Imp } op;
    int atom = -1;
    std::unique_ptr<PropFormula> lhs, rhs;
};

struct AtomTable {
    std::vector<ExprPtr> atoms;
    int intern(const ExprPtr& e) {
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (alpha_eq(atoms[i], e)) return static_cast<int>(i);
        atoms.push_back(e);
        return static_cast<int>(atoms.size() - 1);
    }
};

std::unique_ptr<PropFormula> decompose(const ExprPtr& e, AtomTable& table) {
    auto node = std::make_unique<PropFormula>();
    std::vector<ExprPtr> args;
    ExprPtr head = app_spine(e, args);
    if (head->kind == ExprKind::Const && args.size() == 2 &&
        (head->name == "and" || head->name == "or" || head->name == "iff")) {
        node->op = head->name == "and"  ? PropFormula::Op::And
                   : head->name == "or" ? PropFormula::Op::Or
                                        : PropFormula::Op::Iff;
        node->lhs = decompose(args[0], table);
        node->rhs = decompose(args[1], table);
        return node;
    }
    if (head->kind == ExprKind::Const && head->name == "not" && args.size() == 1) {
        node->op = PropFormula::Op::Not;
        node->lhs = decompose(args[0], table);
        return node;
    }
    if (e->kind == ExprKind::Pi && e->info == BinderInfo::Explicit &&
        !has_loose_bvar(e->body, 0)) {
        node->op = PropFormula::Op::Imp;
        node->lhs = decompose(e->type, table);
        ExprPtr fv = Expr::fvar(e->name, e->type);
        node->rhs = decompose(instantiate(e->body, fv), table);
        return node;
    }
    node->op = PropFormula::Op::Atom;
    node->atom = table.intern(e);
    return node;
}

bool eval_formula(const PropFormula& f, std::uint32_t bits) {
    switch (f.op) {
    case PropFormula::Op::Atom: return (bits >> f.atom) & 1u;
    case PropFormula::Op::Not: return !eval_formula(*f.lhs, bits);
    case PropFormula::Op::And: return eval_formula(*f.lhs, bits) && eval_formula(*f.rhs, bits);
    case PropFormula::Op::Or: return eval_formula(*f.lhs, bits) || eval_formula(*f.rhs, bits);
    case PropFormula::Op::Iff: return eval_formula(*f.lhs, bits) == eval_formula(*f.rhs, bits);
    case PropFormula::Op::Imp: return !eval_formula(*f.lhs, bits) || eval_formula(*f.rhs, bits);
    }
    return false;
}

// ---- single-tactic interpreter --------------------------------------------

struct SingleOutcome {
    TacticStatus status = TacticStatus::Failed;
    std::vector<Goal> produced; // replaces the acted-on goal when Ok
    std::string message;
};

SingleOutcome single_ok(std::vector<Goal> produced) {
    return {TacticStatus::Ok, std::move(produced), ""};
}
SingleOutcome single_fail(std::string msg) { return {TacticStatus::Failed, {}, std::move(msg)}; }
SingleOutcome single_parse_fail(std::string msg) {
    return {TacticStatus::ParseError, {}, std::move(msg)};
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

struct Interp {
    const Environment& env;
    std::size_t envCutoff;
    Deadline deadline;

    std::optional<ExprPtr> parse_term(const std::string& src, const Goal& goal,
                                      std::string& err) {
        try {
            ExprPtr t = parse_expr(src, env, goal.hyps);
            std::string offender;
            if (out_of_cutoff(t, env, envCutoff, offender)) {
                err = "declaration '" + offender + "' is not available at this point";
                return std::nullopt;
            }
            return t;
        } catch (const std::exception& ex) {
            err = ex.what();
            return std::nullopt;
        }
    }

    SingleOutcome intro(const Goal& goal, const std::vector<std::string>& names, bool all) {
        Goal g = goal;
        std::vector<std::string> pending = names;
        std::size_t introduced = 0;
        for (;;) {
            bool wantMore = all ? whnf(g.target)->kind == ExprKind::Pi : !pending.empty();
            if (!wantMore) break;
            ExprPtr t = whnf(g.target);
            if (t->kind != ExprKind::Pi)
                return single_fail("intro: target is not a Pi");
            std::string nm;
            if (!pending.empty()) {
                nm = pending.front();
                pending.erase(pending.begin());
            }
            if (nm.empty() || nm == "_") nm = fresh_auto_name(g);
            ExprPtr fv = Expr::fvar(nm, t->type);
            g.hyps.push_back(fv);
            g.target = instantiate(t->body, fv);
            ++introduced;
        }
        if (introduced == 0) return single_fail("intro: nothing to introduce");
        return single_ok({std::move(g)});
    }

    SingleOutcome exact(const Goal& goal, const std::string& termSrc) {
        std::string err;
        auto term = parse_term(termSrc, goal, err);
        if (!term) return single_parse_fail("exact: " + err);
        try {
            ExprPtr ty = infer_type(*term, env);
            if (!is_def_eq(ty, goal.target))
                return single_fail("exact: type mismatch: " + pretty_str(ty, env));
        } catch (const std::exception& ex) {
            return single_fail(std::string("exact: ") + ex.what());
        }
        return single_ok({});
    }

    SingleOutcome assumption(const Goal& goal) {
        for (const auto& h : goal.hyps)
            if (alpha_eq(h->type, goal.target)) return single_ok({});
        return single_fail("assumption: no matching hypothesis");
    }

    SingleOutcome apply(const Goal& goal, const std::string& termSrc) {
        std::string err;
        auto parsed = parse_term(termSrc, goal, err);
        if (!parsed) return single_parse_fail("apply: " + err);

        std::vector<ExprPtr> given;
        ExprPtr head = app_spine(*parsed, given);
        ExprPtr headType;
        try {
            headType = infer_type(head, env);
        } catch (const std::exception& ex) {
            return single_fail(std::string("apply: ") + ex.what());
        }

        // Open the head's telescope with metavariables.
        MetaCtx metas;
        std::vector<std::pair<ExprPtr, BinderInfo>> telescope; // (meta, info)
        ExprPtr cur = whnf(headType);
        while (cur->kind == ExprKind::Pi) {
            ExprPtr m = metas.fresh(cur->name, cur->type);
            telescope.emplace_back(m, cur->info);
            cur = whnf(instantiate(cur->body, m));
        }
        ExprPtr conclusion = cur;

        // Given arguments fill the explicit positions, left to right; each
        // argument's type is matched against the binder type to solve metas.
        std::size_t gi = 0;
        for (auto& [meta, info] : telescope) {
            if (gi >= given.size()) break;
            if (info != BinderInfo::Explicit) continue;
            const ExprPtr& arg = given[gi++];
            ExprPtr argType;
            try {
                argType = infer_type(arg, env);
            } catch (const std::exception& ex) {
                return single_fail(std::string("apply: ill-typed argument: ") + ex.what());
            }
            ExprPtr want = beta_normalize(metas.substitute(meta->type));
            if (!metas.match(want, beta_normalize(argType)))
                return single_fail("apply: argument type mismatch");
            int idx = metas.index_of(meta);
            metas.assignments[static_cast<std::size_t>(idx)] = arg;
        }
        if (gi < given.size()) return single_fail("apply: too many arguments");

        ExprPtr conclPattern = beta_normalize(metas.substitute(conclusion));
        if (!metas.match(conclPattern, beta_normalize(goal.target)))
            return single_fail("apply: conclusion does not unify with the target");

        // Remaining unfilled positions must all be explicit; they become
        // subgoals, and no subgoal type may mention an unsolved metavariable.
        for (auto& [meta, info] : telescope) {
            int idx = metas.index_of(meta);
            if (metas.assignments[static_cast<std::size_t>(idx)]) continue;
            if (info != BinderInfo::Explicit)
                return single_fail("apply: unsolved implicit argument " + meta->name);
        }
        std::vector<Goal> out;
        for (auto& [meta, info] : telescope) {
            int idx = metas.index_of(meta);
            if (metas.assignments[static_cast<std::size_t>(idx)]) continue;
            ExprPtr subgoal = beta_normalize(metas.substitute(meta->type));
            if (metas.has_unsolved(subgoal))
                return single_fail("apply: subgoal depends on an unsolved metavariable");
            Goal g;
            g.hyps = goal.hyps;
            g.target = subgoal;
            out.push_back(std::move(g));
        }
        return single_ok(std::move(out));
    }

    SingleOutcome split(const Goal& goal) {
        std::vector<ExprPtr> args;
        ExprPtr head = app_spine(whnf(goal.target), args);
        if (head->kind == ExprKind::Const && args.size() == 2) {
            if (head->name == "and") {
                Goal a{goal.hyps, args[0]}, b{goal.hyps, args[1]};
                return single_ok({std::move(a), std::move(b)});
            }
            if (head->name == "iff") {
                Goal a{goal.hyps,
                       Expr::pi("ᾰ", BinderInfo::Explicit, args[0], shift(args[1], 1))};
                Goal b{goal.hyps,
                       Expr::pi("ᾰ", BinderInfo::Explicit, args[1], shift(args[0], 1))};
                return single_ok({std::move(a), std::move(b)});
            }
        }
        return single_fail("split: target is neither a conjunction nor an iff");
    }

    SingleOutcome orintro(const Goal& goal, bool leftSide) {
        std::vector<ExprPtr> args;
        ExprPtr head = app_spine(whnf(goal.target), args);
        if (head->kind == ExprKind::Const && head->name == "or" && args.size() == 2)
            return single_ok({Goal{goal.hyps, leftSide ? args[0] : args[1]}});
        return single_fail("left/right: target is not a disjunction");
    }

    SingleOutcome refl(const Goal& goal) {
        std::vector<ExprPtr> args;
        ExprPtr head = app_spine(whnf(goal.target), args);
        if (head->kind == ExprKind::Const) {
            if (head->name == "eq" && args.size() == 3 && alpha_eq(args[1], args[2]))
                return single_ok({});
            if (head->name == "iff" && args.size() == 2 && alpha_eq(args[0], args[1]))
                return single_ok({});
        }
        return single_fail("refl: target is not a syntactic reflexivity");
    }

    SingleOutcome tauto(const Goal& goal) {
        auto verdict = goal_is_tautology(goal, env, 20, deadline);
        if (!verdict) {
            if (expired(deadline)) return {TacticStatus::Timeout, {}, "tauto!: timed out"};
            return single_fail("tauto!: goal exceeds the atom limit");
        }
        if (*verdict) return single_ok({});
        return single_fail("tauto!: not a classical tautology");
    }

    SingleOutcome run_single(const Goal& goal, const std::string& command) {
        if (expired(deadline)) return {TacticStatus::Timeout, {}, "tactic timeout"};
        std::vector<std::string> words = split_words(command);
        if (words.empty()) return single_parse_fail("empty tactic");
        const std::string& head = words[0];
        std::string rest;
        {
            std::size_t p = command.find(head);
            rest = command.substr(p + head.size());
            std::size_t b = rest.find_first_not_of(" \t");
            rest = b == std::string::npos ? "" : rest.substr(b);
        }
        if (head == "assumption" && words.size() == 1) return assumption(goal);
        if (head == "exact" && !rest.empty()) return exact(goal, rest);
        if (head == "apply" && !rest.empty()) return apply(goal, rest);
        if (head == "intro" && words.size() == 2)
            return intro(goal, {words[1]}, false);
        if (head == "intro" && words.size() == 1) return intro(goal, {"_"}, false);
        if (head == "intros" && words.size() == 1) return intro(goal, {}, true);
        if (head == "intros")
            return intro(goal, {words.begin() + 1, words.end()}, false);
        if (head == "tactic.intros1" && words.size() == 1) return intro(goal, {"_"}, false);
        if ((head == "split" || head == "fsplit") && words.size() == 1) return split(goal);
        if (head == "left" && words.size() == 1) return orintro(goal, true);
        if (head == "right" && words.size() == 1) return orintro(goal, false);
        if (head == "refl" && words.size() == 1) return refl(goal);
        if (head == "tauto!" && words.size() == 1) return tauto(goal);
        return single_parse_fail("unsupported tactic: " + head);
    }
};

} // namespace

std::optional<bool> goal_is_tautology(const Goal& goal, const Environment& env,
                                      std::size_t maxAtoms, Deadline deadline) {
    (void)env;
    AtomTable table;
    std::vector<std::unique_ptr<PropFormula>> hyps;
    for (const auto& h : goal.hyps) hyps.push_back(decompose(h->type, table));
    auto target = decompose(goal.target, table);
    if (table.atoms.size() > maxAtoms) return std::nullopt;
    std::uint32_t rows = table.atoms.size() >= 32 ? 0 : (1u << table.atoms.size());
    for (std::uint32_t bits = 0; bits < rows; ++bits) {
        if ((bits & 0xFFu) == 0 && expired(deadline)) return std::nullopt;
        bool antecedent = true;
        for (const auto& h : hyps) antecedent = antecedent && eval_formula(*h, bits);
        if (antecedent && !eval_formula(*target, bits)) return false;
    }
    return true;
}

TacticResult apply_tactic(const TacticState& state, const std::string& command,
                          const Environment& env, Deadline deadline) {
    if (state.solved()) return fail("no goals");
    Interp interp{env, state.envCutoff, deadline};

    // semicolon chaining: `t; s` applies s to every goal produced by t
    std::vector<std::string> segments;
    {
        std::string cur;
        for (char c : command) {
            if (c == ';') {
                segments.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        segments.push_back(cur);
    }

    std::vector<Goal> active{state.goals.front()};
    for (const auto& seg : segments) {
        std::vector<Goal> next;
        for (const auto& g : active) {
            SingleOutcome r = interp.run_single(g, seg);
            if (r.status != TacticStatus::Ok) return {r.status, {}, r.message};
            for (auto& ng : r.produced) next.push_back(std::move(ng));
        }
        active = std::move(next);
    }

    TacticState out;
    out.envCutoff = state.envCutoff;
    out.goals = std::move(active);
    out.goals.insert(out.goals.end(), state.goals.begin() + 1, state.goals.end());
    return {TacticStatus::Ok, std::move(out), ""};
}

} // namespace proofkit
