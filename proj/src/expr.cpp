#include "proofkit/expr.hpp"

#include <algorithm>

namespace proofkit {

namespace {
std::atomic<std::uint64_t> g_fvar_counter{1};
}

ExprPtr Expr::bvar(int index) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::BVar;
    e->bvarIndex = index;
    return e;
}

ExprPtr Expr::fvar(const std::string& name, ExprPtr type) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::FVar;
    e->fvarId = g_fvar_counter.fetch_add(1, std::memory_order_relaxed);
    e->name = name;
    e->type = std::move(type);
    return e;
}

ExprPtr Expr::constant(const std::string& name) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Const;
    e->name = name;
    return e;
}

ExprPtr Expr::sort(SortLevel level) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Sort;
    e->level = level;
    return e;
}

ExprPtr Expr::app(ExprPtr fn, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::App;
    e->fn = std::move(fn);
    e->arg = std::move(arg);
    return e;
}

ExprPtr Expr::lam(const std::string& name, BinderInfo info, ExprPtr type, ExprPtr body) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Lam;
    e->name = name;
    e->info = info;
    e->type = std::move(type);
    e->body = std::move(body);
    return e;
}

ExprPtr Expr::pi(const std::string& name, BinderInfo info, ExprPtr type, ExprPtr body) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Pi;
    e->name = name;
    e->info = info;
    e->type = std::move(type);
    e->body = std::move(body);
    return e;
}

ExprPtr mk_app(ExprPtr head, const std::vector<ExprPtr>& args) {
    ExprPtr e = std::move(head);
    for (const auto& a : args) e = Expr::app(e, a);
    return e;
}

ExprPtr app_spine(ExprPtr e, std::vector<ExprPtr>& args) {
    args.clear();
    while (e->kind == ExprKind::App) {
        args.push_back(e->arg);
        e = e->fn;
    }
    std::reverse(args.begin(), args.end());
    return e;
}

bool expr_eq(const ExprPtr& a, const ExprPtr& b, bool compareNames) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case ExprKind::BVar: return a->bvarIndex == b->bvarIndex;
    case ExprKind::FVar: return a->fvarId == b->fvarId;
    case ExprKind::Const: return a->name == b->name;
    case ExprKind::Sort: return a->level == b->level;
    case ExprKind::App:
        return expr_eq(a->fn, b->fn, compareNames) && expr_eq(a->arg, b->arg, compareNames);
    case ExprKind::Lam:
    case ExprKind::Pi:
        if (compareNames && (a->name != b->name || a->info != b->info)) return false;
        return expr_eq(a->type, b->type, compareNames) && expr_eq(a->body, b->body, compareNames);
    }
    return false;
}

ExprPtr shift(const ExprPtr& e, int delta, int cutoff) {
    if (delta == 0) return e;
    switch (e->kind) {
    case ExprKind::BVar:
        if (e->bvarIndex < cutoff) return e;
        return Expr::bvar(e->bvarIndex + delta);
    case ExprKind::FVar:
    case ExprKind::Const:
    case ExprKind::Sort:
        return e;
    case ExprKind::App:
        return Expr::app(shift(e->fn, delta, cutoff), shift(e->arg, delta, cutoff));
    case ExprKind::Lam:
        return Expr::lam(e->name, e->info, shift(e->type, delta, cutoff),
                         shift(e->body, delta, cutoff + 1));
    case ExprKind::Pi:
        return Expr::pi(e->name, e->info, shift(e->type, delta, cutoff),
                        shift(e->body, delta, cutoff + 1));
    }
    return e;
}

namespace {

ExprPtr instantiate_at(const ExprPtr& e, const ExprPtr& value, int depth) {
    switch (e->kind) {
    case ExprKind::BVar:
        if (e->bvarIndex == depth) return shift(value, depth);
        if (e->bvarIndex > depth) return Expr::bvar(e->bvarIndex - 1);
        return e;
    case ExprKind::FVar:
    case ExprKind::Const:
    case ExprKind::Sort:
        return e;
    case ExprKind::App:
        return Expr::app(instantiate_at(e->fn, value, depth),
                         instantiate_at(e->arg, value, depth));
    case ExprKind::Lam:
        return Expr::lam(e->name, e->info, instantiate_at(e->type, value, depth),
                         instantiate_at(e->body, value, depth + 1));
    case ExprKind::Pi:
        return Expr::pi(e->name, e->info, instantiate_at(e->type, value, depth),
                        instantiate_at(e->body, value, depth + 1));
    }
    return e;
}

ExprPtr abstract_at(const ExprPtr& e, std::uint64_t fvarId, int depth) {
    switch (e->kind) {
    case ExprKind::BVar:
        if (e->bvarIndex >= depth) return Expr::bvar(e->bvarIndex + 1);
        return e;
    case ExprKind::FVar:
        if (e->fvarId == fvarId) return Expr::bvar(depth);
        return e;
    case ExprKind::Const:
    case ExprKind::Sort:
        return e;
    case ExprKind::App:
        return Expr::app(abstract_at(e->fn, fvarId, depth), abstract_at(e->arg, fvarId, depth));
    case ExprKind::Lam:
        return Expr::lam(e->name, e->info, abstract_at(e->type, fvarId, depth),
                         abstract_at(e->body, fvarId, depth + 1));
    case ExprKind::Pi:
        return Expr::pi(e->name, e->info, abstract_at(e->type, fvarId, depth),
                        abstract_at(e->body, fvarId, depth + 1));
    }
    return e;
}

} // namespace

ExprPtr instantiate(const ExprPtr& body, const ExprPtr& value) {
    return instantiate_at(body, value, 0);
}

ExprPtr abstract_fvar(const ExprPtr& e, std::uint64_t fvarId) {
    if (!contains_fvar(e, fvarId)) return e;
    return abstract_at(e, fvarId, 0);
}

bool has_loose_bvar(const ExprPtr& e, int index) {
    switch (e->kind) {
    case ExprKind::BVar: return e->bvarIndex == index;
    case ExprKind::FVar:
    case ExprKind::Const:
    case ExprKind::Sort: return false;
    case ExprKind::App: return has_loose_bvar(e->fn, index) || has_loose_bvar(e->arg, index);
    case ExprKind::Lam:
    case ExprKind::Pi:
        return has_loose_bvar(e->type, index) || has_loose_bvar(e->body, index + 1);
    }
    return false;
}

bool contains_fvar(const ExprPtr& e, std::uint64_t fvarId) {
    switch (e->kind) {
    case ExprKind::FVar: return e->fvarId == fvarId;
    case ExprKind::BVar:
    case ExprKind::Const:
    case ExprKind::Sort: return false;
    case ExprKind::App: return contains_fvar(e->fn, fvarId) || contains_fvar(e->arg, fvarId);
    case ExprKind::Lam:
    case ExprKind::Pi:
        return contains_fvar(e->type, fvarId) || contains_fvar(e->body, fvarId);
    }
    return false;
}

bool contains_const(const ExprPtr& e, const std::string& name) {
    switch (e->kind) {
    case ExprKind::Const: return e->name == name;
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Sort: return false;
    case ExprKind::App: return contains_const(e->fn, name) || contains_const(e->arg, name);
    case ExprKind::Lam:
    case ExprKind::Pi:
        return contains_const(e->type, name) || contains_const(e->body, name);
    }
    return false;
}

bool contains_hole(const ExprPtr& e) { return contains_const(e, kHoleName); }

std::size_t count_nodes(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Const:
    case ExprKind::Sort: return 1;
    case ExprKind::App: return 1 + count_nodes(e->fn) + count_nodes(e->arg);
    case ExprKind::Lam:
    case ExprKind::Pi: return 1 + count_nodes(e->type) + count_nodes(e->body);
    }
    return 1;
}

namespace {

void subterms_rec(const ExprPtr& e, SubtermContext& ctx, bool inBinderType,
                  std::vector<SubtermVisit>& out) {
    out.push_back({e, ctx, inBinderType});
    switch (e->kind) {
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Const:
    case ExprKind::Sort:
        return;
    case ExprKind::App:
        ctx.path.push_back(0);
        subterms_rec(e->fn, ctx, inBinderType, out);
        ctx.path.back() = 1;
        subterms_rec(e->arg, ctx, inBinderType, out);
        ctx.path.pop_back();
        return;
    case ExprKind::Lam:
    case ExprKind::Pi:
        ctx.path.push_back(0);
        subterms_rec(e->type, ctx, true, out);
        ctx.path.back() = 1;
        ctx.bs.push_back({e->name, e->type, e->info});
        subterms_rec(e->body, ctx, inBinderType, out);
        ctx.bs.pop_back();
        ctx.path.pop_back();
        return;
    }
}

} // namespace

std::vector<SubtermVisit> subterms(const ExprPtr& e) {
    std::vector<SubtermVisit> out;
    SubtermContext ctx;
    subterms_rec(e, ctx, false, out);
    return out;
}

namespace {

bool occurs_rec(const std::string& target, const ExprPtr& e, std::vector<std::string>& names) {
    switch (e->kind) {
    case ExprKind::BVar: {
        int pos = static_cast<int>(names.size()) - 1 - e->bvarIndex;
        return pos >= 0 && names[static_cast<std::size_t>(pos)] == target;
    }
    case ExprKind::FVar: return e->name == target;
    case ExprKind::Const: return e->name == target;
    case ExprKind::Sort: return false;
    case ExprKind::App:
        return occurs_rec(target, e->fn, names) || occurs_rec(target, e->arg, names);
    case ExprKind::Lam:
    case ExprKind::Pi: {
        if (occurs_rec(target, e->type, names)) return true;
        names.push_back(e->name);
        bool r = occurs_rec(target, e->body, names);
        names.pop_back();
        return r;
    }
    }
    return false;
}

} // namespace

bool occurs(const std::string& target, const ExprPtr& e,
            const std::vector<std::string>& outerNames) {
    std::vector<std::string> names = outerNames;
    return occurs_rec(target, e, names);
}

namespace {

std::size_t count_holes(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::Const: return e->name == kHoleName ? 1 : 0;
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Sort: return 0;
    case ExprKind::App: return count_holes(e->fn) + count_holes(e->arg);
    case ExprKind::Lam:
    case ExprKind::Pi: return count_holes(e->type) + count_holes(e->body);
    }
    return 0;
}

// Rebinds free variables of the filler to enclosing binders of the hole with
// the same display name; names is the binder stack at the hole, outermost
// first.
ExprPtr bind_filler(const ExprPtr& e, const std::vector<std::string>& names, int depth) {
    switch (e->kind) {
    case ExprKind::FVar: {
        for (int i = static_cast<int>(names.size()) - 1; i >= 0; --i) {
            if (names[static_cast<std::size_t>(i)] == e->name)
                return Expr::bvar(depth + static_cast<int>(names.size()) - 1 - i);
        }
        return e;
    }
    case ExprKind::BVar:
    case ExprKind::Const:
    case ExprKind::Sort:
        return e;
    case ExprKind::App:
        return Expr::app(bind_filler(e->fn, names, depth), bind_filler(e->arg, names, depth));
    case ExprKind::Lam:
        return Expr::lam(e->name, e->info, bind_filler(e->type, names, depth),
                         bind_filler(e->body, names, depth + 1));
    case ExprKind::Pi:
        return Expr::pi(e->name, e->info, bind_filler(e->type, names, depth),
                        bind_filler(e->body, names, depth + 1));
    }
    return e;
}

ExprPtr substitute_rec(const ExprPtr& e, const ExprPtr& filler, std::vector<std::string>& names) {
    switch (e->kind) {
    case ExprKind::Const:
        if (e->name == kHoleName) return bind_filler(filler, names, 0);
        return e;
    case ExprKind::BVar:
    case ExprKind::FVar:
    case ExprKind::Sort:
        return e;
    case ExprKind::App:
        return Expr::app(substitute_rec(e->fn, filler, names),
                         substitute_rec(e->arg, filler, names));
    case ExprKind::Lam:
    case ExprKind::Pi: {
        ExprPtr t = substitute_rec(e->type, filler, names);
        names.push_back(e->name);
        ExprPtr b = substitute_rec(e->body, filler, names);
        names.pop_back();
        return e->kind == ExprKind::Lam ? Expr::lam(e->name, e->info, t, b)
                                        : Expr::pi(e->name, e->info, t, b);
    }
    }
    return e;
}

} // namespace

ExprPtr substitute_hole(const ExprPtr& masked, const ExprPtr& filler) {
    std::size_t n = count_holes(masked);
    if (n == 0) throw NoHole();
    if (n > 1) throw MultipleHoles();
    std::vector<std::string> names;
    return substitute_rec(masked, filler, names);
}

ExprPtr mask_at_path(const ExprPtr& root, const std::vector<int>& path) {
    if (path.empty()) return Expr::constant(kHoleName);
    std::vector<int> rest(path.begin() + 1, path.end());
    switch (root->kind) {
    case ExprKind::App:
        if (path.front() == 0) return Expr::app(mask_at_path(root->fn, rest), root->arg);
        return Expr::app(root->fn, mask_at_path(root->arg, rest));
    case ExprKind::Lam:
        if (path.front() == 0)
            return Expr::lam(root->name, root->info, mask_at_path(root->type, rest), root->body);
        return Expr::lam(root->name, root->info, root->type, mask_at_path(root->body, rest));
    case ExprKind::Pi:
        if (path.front() == 0)
            return Expr::pi(root->name, root->info, mask_at_path(root->type, rest), root->body);
        return Expr::pi(root->name, root->info, root->type, mask_at_path(root->body, rest));
    default:
        throw std::logic_error("mask_at_path: path descends into a leaf");
    }
}

void Environment::add(Declaration decl) {
    if (index_.count(decl.name)) throw DuplicateDeclaration(decl.name);
    decl.orderIndex = decls_.size();
    index_.emplace(decl.name, decls_.size());
    decls_.push_back(std::move(decl));
}

const Declaration* Environment::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return nullptr;
    return &decls_[it->second];
}

const Declaration& Environment::get(const std::string& name) const {
    const Declaration* d = find(name);
    if (!d) throw UnknownConstant(name);
    return *d;
}

} // namespace proofkit
