#include "doctest.h"

#include "proofkit/expr.hpp"
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

} // namespace

TEST_CASE("parse atomic sorts and constants") {
    const Environment& env = fixture_env();
    ExprPtr p = parse_expr("Prop", env);
    CHECK(p->is_sort(SortLevel::Prop));
    PrintOptions opts;
    CHECK(print_expr(p, opts) == "Prop");
    CHECK(parse_expr("Type", env)->is_sort(SortLevel::Type));
    CHECK(parse_expr("em", env)->is_const("em"));
    CHECK_THROWS_AS(parse_expr("no_such_const", env), UnknownConstant);
}

TEST_CASE("parse the Peirce statement shape") {
    const Environment& env = fixture_env();
    ExprPtr t = parse_expr("∀ {P Q : Prop}, ((P → Q) → P) → P", env);
    REQUIRE(t->kind == ExprKind::Pi);
    CHECK(t->info == BinderInfo::Implicit);
    CHECK(t->name == "P");
    CHECK(t->type->is_sort(SortLevel::Prop));
    REQUIRE(t->body->kind == ExprKind::Pi);
    CHECK(t->body->info == BinderInfo::Implicit);
    CHECK(t->body->name == "Q");
    // body: ((P → Q) → P) → P, a non-dependent explicit Pi
    const ExprPtr& arrow = t->body->body;
    REQUIRE(arrow->kind == ExprKind::Pi);
    CHECK(arrow->info == BinderInfo::Explicit);
    CHECK_FALSE(has_loose_bvar(arrow->body, 0));
    CHECK(pretty_str(t, env) == "∀ {P Q : Prop}, ((P → Q) → P) → P");
}

TEST_CASE("parse/print identity on a canonical lambda") {
    const Environment& env = fixture_env();
    ExprPtr propP = Expr::fvar("P", Expr::sort(SortLevel::Prop));
    ExprPtr lam = parse_expr("λ (x : P), x", env, {propP});
    CHECK(pretty_str(lam, env) == "λ (x : P), x");
}

TEST_CASE("pretty elides implicit arguments, verbose shows them") {
    const Environment& env = fixture_env();
    ExprPtr P = Expr::fvar("P", Expr::sort(SortLevel::Prop));
    ExprPtr h = Expr::fvar("h", P);
    ExprPtr n = Expr::fvar("n", Expr::app(Expr::constant("not"), P));
    ExprPtr e = parse_expr("@absurd P P h n", env, {P, h, n});
    CHECK(pretty_str(e, env) == "absurd h n");
    CHECK(verbose_str(e, env) == "@absurd P P h n");
    // occurrence check: the elided names still occur in the verbose form only
    CHECK(verbose_str(e, env).find("P P") != std::string::npos);
    CHECK(pretty_str(e, env).find("P") == std::string::npos);
}

TEST_CASE("infer_type of the Peirce proof term matches its statement") {
    const Environment& env = fixture_env();
    const Declaration& d = env.get("peirce_identity");
    REQUIRE(d.value);
    ExprPtr t = infer_type(d.value, env);
    CHECK(is_def_eq(t, parse_expr("∀ {P Q : Prop}, ((P → Q) → P) → P", env)));
}

TEST_CASE("infer_type of a constant is its declared type") {
    const Environment& env = fixture_env();
    ExprPtr t = infer_type(Expr::constant("classical.prop_decidable"), env);
    CHECK(is_def_eq(t, parse_expr("Π (a : Prop), decidable a", env)));
    CHECK(pretty_str(t, env) == "Π (a : Prop), decidable a");
}

TEST_CASE("infer_type of a bound variable uses the context") {
    const Environment& env = fixture_env();
    SubtermContext ctx;
    ctx.bs.push_back({"x", Expr::sort(SortLevel::Prop), BinderInfo::Explicit});
    ExprPtr t = infer_type(Expr::bvar(0), ctx, env);
    CHECK(t->is_sort(SortLevel::Prop));
}

TEST_CASE("instantiated constant type prints like the appendix goal") {
    const Environment& env = fixture_env();
    ExprPtr P = Expr::fvar("P", Expr::sort(SortLevel::Prop));
    ExprPtr e = Expr::app(Expr::constant("decidable.not_imp"), P);
    ExprPtr t = infer_type(e, env);
    CHECK(pretty_str(t, env) == "∀ {b : Prop} [_inst_1 : decidable P], ¬(P → b) ↔ P ∧ ¬b");
}

TEST_CASE("subterms of the identity lambda") {
    const Environment& env = fixture_env();
    ExprPtr P = Expr::fvar("P", Expr::sort(SortLevel::Prop));
    ExprPtr lam = parse_expr("λ (x : P), x", env, {P});
    auto subs = subterms(lam);
    REQUIRE(subs.size() == 3); // the lambda, its binder type, its body
    CHECK(subs[0].term->kind == ExprKind::Lam);
    CHECK(subs[0].ctx.bs.empty());
    CHECK(subs[1].term.get() == P.get());
    CHECK(subs[1].ctx.bs.empty());
    CHECK(subs[1].inBinderType);
    CHECK(subs[2].term->kind == ExprKind::BVar);
    REQUIRE(subs[2].ctx.bs.size() == 1);
    CHECK(subs[2].ctx.bs[0].name == "x");
}

TEST_CASE("Peirce proof term has more than 30 subterms") {
    const Environment& env = fixture_env();
    const Declaration& d = env.get("peirce_identity");
    CHECK(subterms(d.value).size() > 30);
    CHECK(count_nodes(d.value) == subterms(d.value).size());
}

TEST_CASE("scope safety: every subterm type-checks in its context") {
    const Environment& env = fixture_env();
    for (const Declaration& d : env.decls()) {
        if (!d.value) continue;
        for (const auto& sv : subterms(d.value)) {
            CHECK_NOTHROW(infer_type(sv.term, sv.ctx, env));
        }
    }
}

TEST_CASE("occurs on constants, locals and bound variables") {
    const Environment& env = fixture_env();
    ExprPtr P = Expr::fvar("P", Expr::sort(SortLevel::Prop));
    ExprPtr dp1 = parse_expr("@decidable.not_imp P", env, {P});
    CHECK(occurs("decidable.not_imp", dp1));
    CHECK(occurs("P", dp1));
    CHECK_FALSE(occurs("Q", dp1));

    ExprPtr q = Expr::fvar("Q", Expr::sort(SortLevel::Prop));
    CHECK_FALSE(occurs("P", q));
    CHECK(occurs("Q", q));

    // bound occurrence via display name
    ExprPtr lam = parse_expr("λ (x : P), x", env, {P});
    CHECK(occurs("x", lam->body, {"x"}));
    CHECK(occurs("x", lam));
}

TEST_CASE("substitute_hole identity and errors") {
    const Environment& env = fixture_env();
    ExprPtr e = parse_expr("em", env);
    CHECK(expr_eq(substitute_hole(Expr::constant(kHoleName), e), e));
    CHECK_THROWS_AS(substitute_hole(e, e), NoHole);
    ExprPtr two = Expr::app(Expr::constant(kHoleName), Expr::constant(kHoleName));
    CHECK_THROWS_AS(substitute_hole(two, e), MultipleHoles);
}

TEST_CASE("substitute_hole rebinds filler variables in the hole context") {
    const Environment& env = fixture_env();
    ExprPtr P = Expr::fvar("P", Expr::sort(SortLevel::Prop));
    // λ (x : P), PREDICT  with filler `x` must produce λ (x : P), x
    ExprPtr masked = parse_expr("λ (x : P), PREDICT", env, {P});
    ExprPtr x = Expr::fvar("x", P);
    ExprPtr filled = substitute_hole(masked, x);
    CHECK(expr_eq(filled, parse_expr("λ (x : P), x", env, {P}), false));
}

TEST_CASE("verbose parse/print round-trip over the whole fixture corpus") {
    const Environment& env = fixture_env();
    for (const Declaration& d : env.decls()) {
        ExprPtr t2 = parse_expr(verbose_str(d.type, env), env);
        CHECK(expr_eq(t2, d.type));
        if (d.value) {
            ExprPtr v2 = parse_expr(verbose_str(d.value, env), env);
            CHECK(expr_eq(v2, d.value));
        }
    }
}

TEST_CASE("type soundness on fixtures") {
    const Environment& env = fixture_env();
    for (const Declaration& d : env.decls()) {
        CHECK_NOTHROW(check_declaration(d, env));
        if (d.value) CHECK(is_def_eq(infer_type(d.value, env), d.type));
    }
}

TEST_CASE("depth cutoff replaces deep subtrees with ellipsis") {
    const Environment& env = fixture_env();
    const Declaration& d = env.get("peirce_identity");
    PrintOptions opts;
    opts.env = &env;
    opts.maxDepth = 2;
    std::string shallow = print_expr(d.value, opts);
    CHECK(shallow.find("…") != std::string::npos);
    opts.maxDepth = 1000;
    CHECK(print_expr(d.value, opts) == pretty_str(d.value, env));
    // no cutoff by default
    opts.maxDepth.reset();
    CHECK(print_expr(d.value, opts) == pretty_str(d.value, env));
}

TEST_CASE("canonical pretty print of the Peirce proof term") {
    const Environment& env = fixture_env();
    const Declaration& d = env.get("peirce_identity");
    std::string expected =
        "λ {P Q : Prop}, or.elim (em P) (λ (h : P) (ᾰ : (P → Q) → P), h) "
        "(λ (ᾰ : ¬P) (ᾰ_1 : (P → Q) → P), or.dcases_on (decidable.not_or_of_imp ᾰ_1) "
        "(λ (ᾰ_1 : ¬(P → Q)), and.dcases_on (iff.mp decidable.not_imp ᾰ_1) "
        "(λ (ᾰ_1_left : P) (ᾰ_1_right : ¬Q), absurd ᾰ_1_left ᾰ)) "
        "(λ (ᾰ_1 : P), absurd ᾰ_1 ᾰ))";
    CHECK(pretty_str(d.value, env) == expected);
}

TEST_CASE("environment rejects duplicates and resolves by name") {
    Environment env;
    Declaration d;
    d.name = "p";
    d.type = Expr::sort(SortLevel::Prop);
    env.add(d);
    CHECK_THROWS_AS(env.add(d), DuplicateDeclaration);
    CHECK(env.find("p") != nullptr);
    CHECK(env.find("q") == nullptr);
    CHECK_THROWS_AS(env.get("q"), UnknownConstant);
    CHECK(env.get("p").orderIndex == 0);
}

TEST_CASE("occurs on a variable itself") {
    ExprPtr x = Expr::fvar("x", Expr::sort(SortLevel::Prop));
    CHECK(occurs("x", x));
}

TEST_CASE("parse errors carry byte offsets") {
    const Environment& env = fixture_env();
    try {
        parse_expr("em (", env);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse_expr("λ , x", env), ParseError);
    CHECK_THROWS_AS(parse_expr("em em )", env), ParseError); // trailing input
}

TEST_CASE("environment files reject forward references") {
    std::istringstream src("theorem t : P → P := λ (h : P), h\n"
                           "constant P : Prop\n");
    CHECK_THROWS_AS(parse_env_file(src), UnknownConstant);
}
