#include "proofkit/typecheck.hpp"

#include "proofkit/print.hpp"

namespace proofkit {

ExprPtr whnf(const ExprPtr& e) {
    ExprPtr cur = e;
    for (;;) {
        if (cur->kind != ExprKind::App) return cur;
        ExprPtr f = whnf(cur->fn);
        if (f->kind == ExprKind::Lam) {
            cur = instantiate(f->body, cur->arg);
            continue;
        }
        if (f.get() == cur->fn.get()) return cur;
        return Expr::app(f, cur->arg);
    }
}

ExprPtr beta_normalize(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Const:
    case ExprKind::Sort:
        return e;
    case ExprKind::App: {
        ExprPtr f = beta_normalize(e->fn);
        ExprPtr a = beta_normalize(e->arg);
        if (f->kind == ExprKind::Lam) return beta_normalize(instantiate(f->body, a));
        return Expr::app(f, a);
    }
    case ExprKind::Lam:
        return Expr::lam(e->name, e->info, beta_normalize(e->type), beta_normalize(e->body));
    case ExprKind::Pi:
        return Expr::pi(e->name, e->info, beta_normalize(e->type), beta_normalize(e->body));
    }
    return e;
}

bool is_def_eq(const ExprPtr& a, const ExprPtr& b) {
    if (expr_eq(a, b, false)) return true;
    return expr_eq(beta_normalize(a), beta_normalize(b), false);
}

namespace {

struct Checker {
    const Environment& env;

    std::string show(const ExprPtr& e) const {
        PrintOptions opts;
        opts.mode = PrintMode::Verbose;
        opts.env = &env;
        return print_expr(e, opts);
    }

    ExprPtr infer(const ExprPtr& e, const std::string& path) {
        switch (e->kind) {
        case ExprKind::BVar:
            throw UnboundVariable();
        case ExprKind::FVar:
            return e->type;
        case ExprKind::Const:
            return env.get(e->name).type;
        case ExprKind::Sort:
            return Expr::sort(SortLevel::Type);
        case ExprKind::App: {
            ExprPtr fnType = whnf(infer(e->fn, path + "0"));
            if (fnType->kind != ExprKind::Pi)
                throw TypeError("function (Pi type)", show(fnType), path);
            ExprPtr argType = infer(e->arg, path + "1");
            if (!is_def_eq(argType, fnType->type))
                throw TypeError(show(fnType->type), show(argType), path + "1");
            return instantiate(fnType->body, e->arg);
        }
        case ExprKind::Lam: {
            check_is_sort(e->type, path + "0");
            ExprPtr fv = Expr::fvar(e->name, e->type);
            ExprPtr bodyType = infer(instantiate(e->body, fv), path + "1");
            return Expr::pi(e->name, e->info, e->type, abstract_fvar(bodyType, fv->fvarId));
        }
        case ExprKind::Pi: {
            check_is_sort(e->type, path + "0");
            ExprPtr fv = Expr::fvar(e->name, e->type);
            ExprPtr bodySort = check_is_sort(instantiate(e->body, fv), path + "1");
            // Impredicative Prop: a Pi into Prop is itself a Prop.
            return Expr::sort(bodySort->level == SortLevel::Prop ? SortLevel::Prop
                                                                 : SortLevel::Type);
        }
        }
        throw std::logic_error("infer: unreachable");
    }

    ExprPtr check_is_sort(const ExprPtr& e, const std::string& path) {
        ExprPtr t = whnf(infer(e, path));
        if (t->kind != ExprKind::Sort) throw TypeError("a sort", show(t), path);
        return t;
    }
};

} // namespace

ExprPtr infer_type(const ExprPtr& e, const SubtermContext& ctx, const Environment& env) {
    // Open the loose bound variables described by ctx.bs with free variables.
    // bs[i].type is expressed under bs[0..i-1], innermost binder = bs[i-1],
    // so instantiation proceeds innermost-first.
    std::vector<ExprPtr> fvars;
    for (std::size_t i = 0; i < ctx.bs.size(); ++i) {
        ExprPtr ty = ctx.bs[i].type;
        for (std::size_t j = i; j-- > 0;) ty = instantiate(ty, fvars[j]);
        fvars.push_back(Expr::fvar(ctx.bs[i].name, ty));
    }
    ExprPtr opened = e;
    for (std::size_t j = ctx.bs.size(); j-- > 0;) opened = instantiate(opened, fvars[j]);
    Checker checker{env};
    return checker.infer(opened, "");
}

ExprPtr infer_type(const ExprPtr& e, const Environment& env) {
    Checker checker{env};
    return checker.infer(e, "");
}

void check_declaration(const Declaration& decl, const Environment& env) {
    Checker checker{env};
    checker.check_is_sort(decl.type, "");
    if (decl.value) {
        ExprPtr t = checker.infer(decl.value, "");
        if (!is_def_eq(t, decl.type))
            throw TypeError(checker.show(decl.type), checker.show(t), decl.name);
    }
}

} // namespace proofkit
