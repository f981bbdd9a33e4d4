#include "proofkit/print.hpp"

#include "proofkit/typecheck.hpp"

#include <optional>

namespace proofkit {

namespace {

constexpr int kPrecIff = 20;
constexpr int kPrecArrow = 25;
constexpr int kPrecOr = 30;
constexpr int kPrecAnd = 35;
constexpr int kPrecNot = 40;
constexpr int kPrecEq = 50;
constexpr int kPrecApp = 1000;
constexpr int kPrecAtom = 10000;

const char* kEllipsis = "…";

struct BinderGroup {
    std::vector<std::string> names;
    ExprPtr type; // opened
    BinderInfo info;
};

struct Printer {
    const Environment* env;
    bool verbose;
    std::optional<int> maxDepth;

    std::string print(const ExprPtr& e, int minPrec, int depth) {
        if (maxDepth && depth > *maxDepth) return kEllipsis;
        switch (e->kind) {
        case ExprKind::BVar:
            return "#" + std::to_string(e->bvarIndex); // loose variable; callers print opened terms
        case ExprKind::FVar:
            return e->name;
        case ExprKind::Const:
            return e->name;
        case ExprKind::Sort:
            return e->level == SortLevel::Prop ? "Prop" : "Type";
        case ExprKind::App:
            return print_app(e, minPrec, depth);
        case ExprKind::Lam:
            return print_lam(e, minPrec, depth);
        case ExprKind::Pi:
            return print_pi(e, minPrec, depth);
        }
        return "?";
    }

    static std::string parens_if(bool cond, std::string s) {
        return cond ? "(" + std::move(s) + ")" : std::move(s);
    }

    // Binder infos consumed by each argument of the spine, walking the head's
    // type telescope. Empty result means the telescope is unknown.
    std::vector<BinderInfo> arg_infos(const ExprPtr& head, const std::vector<ExprPtr>& args) {
        ExprPtr ty;
        if (head->kind == ExprKind::Const) {
            if (!env) return {};
            const Declaration* d = env->find(head->name);
            if (!d) return {};
            ty = d->type;
        } else if (head->kind == ExprKind::FVar) {
            ty = head->type;
        } else {
            return {};
        }
        std::vector<BinderInfo> infos;
        for (const auto& a : args) {
            ty = whnf(ty);
            if (ty->kind != ExprKind::Pi) return {};
            infos.push_back(ty->info);
            ty = instantiate(ty->body, a);
        }
        return infos;
    }

    std::string print_infix(const std::string& op, int prec, bool rightAssoc, const ExprPtr& lhs,
                            const ExprPtr& rhs, int minPrec, int depth) {
        std::string s = print(lhs, rightAssoc ? prec + 1 : prec + 1, depth + 1) + " " + op + " " +
                        print(rhs, rightAssoc ? prec : prec + 1, depth + 1);
        return parens_if(prec < minPrec, std::move(s));
    }

    std::string print_app(const ExprPtr& e, int minPrec, int depth) {
        std::vector<ExprPtr> args;
        ExprPtr head = app_spine(e, args);
        std::vector<BinderInfo> infos = arg_infos(head, args);

        bool anyImplicit = false;
        for (BinderInfo bi : infos)
            if (bi != BinderInfo::Explicit) anyImplicit = true;

        bool atForm = false;
        std::vector<ExprPtr> shown;
        if (verbose) {
            shown = args;
            atForm = head->kind == ExprKind::Const && anyImplicit;
        } else if (infos.empty()) {
            shown = args;
        } else {
            bool hiddenHole = false;
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (infos[i] == BinderInfo::Explicit)
                    shown.push_back(args[i]);
                else if (contains_hole(args[i]))
                    hiddenHole = true;
            }
            if (hiddenHole) {
                // The mask would vanish with the elided argument; fall back to
                // the fully explicit form.
                shown = args;
                atForm = head->kind == ExprKind::Const;
            }
        }

        // Notation, applicable when the remaining visible arity matches.
        if (!atForm && head->kind == ExprKind::Const) {
            const std::string& n = head->name;
            if (n == "not" && shown.size() == 1) {
                std::string s = "¬" + print(shown[0], kPrecNot, depth + 1);
                return parens_if(kPrecNot < minPrec, std::move(s));
            }
            if ((n == "and" || n == "or" || n == "iff") && shown.size() == 2) {
                if (n == "and")
                    return print_infix("∧", kPrecAnd, true, shown[0], shown[1], minPrec, depth);
                if (n == "or")
                    return print_infix("∨", kPrecOr, true, shown[0], shown[1], minPrec, depth);
                return print_infix("↔", kPrecIff, false, shown[0], shown[1], minPrec, depth);
            }
            if (n == "eq" && !verbose && shown.size() == 2 && args.size() == 3)
                return print_infix("=", kPrecEq, false, shown[0], shown[1], minPrec, depth);
        }

        std::string s;
        if (head->kind == ExprKind::Const)
            s = (atForm ? "@" : "") + head->name;
        else
            s = print(head, kPrecApp + 1, depth + 1);
        if (shown.empty()) return s; // every argument elided: bare head, no parens needed
        for (const auto& a : shown) s += " " + print(a, kPrecApp + 1, depth + 1);
        return parens_if(kPrecApp < minPrec, std::move(s));
    }

    // Opens the binder with a free variable carrying its display name.
    static ExprPtr open_binder(const ExprPtr& binder, ExprPtr& fv) {
        fv = Expr::fvar(binder->name, binder->type);
        return instantiate(binder->body, fv);
    }

    std::string render_groups(const std::vector<BinderGroup>& groups, int depth) {
        std::string s;
        for (const auto& g : groups) {
            const char* open = g.info == BinderInfo::Explicit ? "("
                               : g.info == BinderInfo::Implicit ? "{"
                                                                : "[";
            const char* close = g.info == BinderInfo::Explicit ? ")"
                                : g.info == BinderInfo::Implicit ? "}"
                                                                 : "]";
            if (!s.empty()) s += " ";
            s += open;
            for (std::size_t i = 0; i < g.names.size(); ++i) {
                if (i) s += " ";
                s += g.names[i];
            }
            s += " : " + print(g.type, 0, depth + 1) + close;
        }
        return s;
    }

    static void push_binder(std::vector<BinderGroup>& groups, const std::string& name,
                            BinderInfo info, const ExprPtr& openedType) {
        if (!groups.empty() && groups.back().info == info &&
            expr_eq(groups.back().type, openedType))
            groups.back().names.push_back(name);
        else
            groups.push_back({{name}, openedType, info});
    }

    std::string print_lam(const ExprPtr& e, int minPrec, int depth) {
        std::vector<BinderGroup> groups;
        ExprPtr cur = e;
        while (cur->kind == ExprKind::Lam) {
            ExprPtr fv;
            ExprPtr openedType = cur->type;
            ExprPtr body = open_binder(cur, fv);
            push_binder(groups, cur->name, cur->info, openedType);
            cur = body;
        }
        std::string s = "λ " + render_groups(groups, depth) + ", " + print(cur, 0, depth + 1);
        return parens_if(0 < minPrec, std::move(s));
    }

    bool body_is_prop(const ExprPtr& opened) {
        if (!env) return true;
        try {
            ExprPtr t = infer_type(opened, *env);
            return t->is_sort(SortLevel::Prop);
        } catch (const std::exception&) {
            return true;
        }
    }

    std::string print_pi(const ExprPtr& e, int minPrec, int depth) {
        if (e->info == BinderInfo::Explicit && !has_loose_bvar(e->body, 0)) {
            ExprPtr fv;
            ExprPtr domain = e->type;
            ExprPtr body = open_binder(e, fv);
            std::string s = print(domain, kPrecArrow + 1, depth + 1) + " → " +
                            print(body, kPrecArrow, depth + 1);
            return parens_if(kPrecArrow < minPrec, std::move(s));
        }
        std::vector<BinderGroup> groups;
        ExprPtr cur = e;
        while (cur->kind == ExprKind::Pi &&
               !(cur->info == BinderInfo::Explicit && !has_loose_bvar(cur->body, 0))) {
            ExprPtr fv;
            ExprPtr openedType = cur->type;
            ExprPtr body = open_binder(cur, fv);
            push_binder(groups, cur->name, cur->info, openedType);
            cur = body;
        }
        const char* headTok = body_is_prop(cur) ? "∀" : "Π";
        std::string s = std::string(headTok) + " " + render_groups(groups, depth) + ", " +
                        print(cur, 0, depth + 1);
        return parens_if(0 < minPrec, std::move(s));
    }
};

} // namespace

std::string print_expr(const ExprPtr& e, const PrintOptions& opts) {
    Printer p{opts.env, opts.mode == PrintMode::Verbose, opts.maxDepth};
    return p.print(e, 0, 0);
}

std::string pretty_str(const ExprPtr& e, const Environment& env) {
    PrintOptions o;
    o.env = &env;
    return print_expr(e, o);
}

std::string verbose_str(const ExprPtr& e, const Environment& env) {
    PrintOptions o;
    o.mode = PrintMode::Verbose;
    o.env = &env;
    return print_expr(e, o);
}

} // namespace proofkit
