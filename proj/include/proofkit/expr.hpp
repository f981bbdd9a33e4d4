#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace proofkit {

// Binder brackets: ( ) / { } / [ ]
enum class BinderInfo { Explicit, Implicit, Instance };

enum class SortLevel { Prop, Type };

enum class ExprKind { BVar, FVar, Const, Sort, App, Lam, Pi };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// The name of the distinguished hole constant used in partial proof terms.
inline constexpr const char* kHoleName = "PREDICT";

// A single immutable expression node. Variables bound by Lam/Pi are
// represented with de Bruijn indices (0 = innermost binder); FVar is a free
// variable with a unique id, used when binders are opened.
class Expr {
public:
    ExprKind kind;

    int bvarIndex = 0;                 // BVar
    std::uint64_t fvarId = 0;          // FVar
    std::string name;                  // FVar/Const; binder display name for Lam/Pi
    SortLevel level = SortLevel::Prop; // Sort
    BinderInfo info = BinderInfo::Explicit; // Lam/Pi
    ExprPtr type;                      // FVar type; Lam/Pi binder type
    ExprPtr fn, arg;                   // App
    ExprPtr body;                      // Lam/Pi

    static ExprPtr bvar(int index);
    static ExprPtr fvar(const std::string& name, ExprPtr type);
    static ExprPtr constant(const std::string& name);
    static ExprPtr sort(SortLevel level);
    static ExprPtr app(ExprPtr fn, ExprPtr arg);
    static ExprPtr lam(const std::string& name, BinderInfo info, ExprPtr type, ExprPtr body);
    static ExprPtr pi(const std::string& name, BinderInfo info, ExprPtr type, ExprPtr body);

    bool is_binder() const { return kind == ExprKind::Lam || kind == ExprKind::Pi; }
    bool is_sort(SortLevel l) const { return kind == ExprKind::Sort && level == l; }
    bool is_const(const std::string& n) const { return kind == ExprKind::Const && name == n; }
};

// Builds App(App(..., a1), a2)... from a head and argument list.
ExprPtr mk_app(ExprPtr head, const std::vector<ExprPtr>& args);

// Unwinds an application spine; returns the head and fills args outermost-first.
ExprPtr app_spine(ExprPtr e, std::vector<ExprPtr>& args);

// Structural equality. Binder display names (and binder info) participate only
// when compareNames is set; de Bruijn indices make them semantically inert.
bool expr_eq(const ExprPtr& a, const ExprPtr& b, bool compareNames = true);
inline bool alpha_eq(const ExprPtr& a, const ExprPtr& b) { return expr_eq(a, b, false); }

// de Bruijn plumbing.
ExprPtr shift(const ExprPtr& e, int delta, int cutoff = 0);
// Replaces BVar(depth) with value (shifted as needed); used for beta and for
// opening binder bodies.
ExprPtr instantiate(const ExprPtr& body, const ExprPtr& value);
// Replaces the free variable with the given id by BVar(depth) -- the inverse
// of opening a binder with that fvar.
ExprPtr abstract_fvar(const ExprPtr& e, std::uint64_t fvarId);

bool has_loose_bvar(const ExprPtr& e, int index);
bool contains_fvar(const ExprPtr& e, std::uint64_t fvarId);
bool contains_const(const ExprPtr& e, const std::string& name);
bool contains_hole(const ExprPtr& e);
std::size_t count_nodes(const ExprPtr& e);

struct Binder {
    std::string name;
    ExprPtr type;
    BinderInfo info = BinderInfo::Explicit;
};

// Bound variables in scope at a subterm, outermost first, plus the child-step
// path from the root (App: 0=fn 1=arg; Lam/Pi: 0=binder type 1=body).
struct SubtermContext {
    std::vector<Binder> bs;
    std::vector<int> path;
};

struct SubtermVisit {
    ExprPtr term;
    SubtermContext ctx;
    bool inBinderType = false; // true when the subterm lies inside some binder-type subtree
};

// Depth-first pre-order enumeration of every subterm. Entering a Lam/Pi body
// appends the binder to bs; binder-type subtrees are visited with the
// unextended bs.
std::vector<SubtermVisit> subterms(const ExprPtr& e);

// True iff the named constant, or an in-scope variable carrying that display
// name, occurs in e. outerNames gives display names for loose bound variables
// (outermost first).
bool occurs(const std::string& target, const ExprPtr& e,
            const std::vector<std::string>& outerNames = {});

struct NoHole : std::runtime_error {
    NoHole() : std::runtime_error("expression contains no PREDICT hole") {}
};
struct MultipleHoles : std::runtime_error {
    MultipleHoles() : std::runtime_error("expression contains more than one PREDICT hole") {}
};

// Replaces the unique PREDICT hole in masked by filler. Free variables of the
// filler are captured by enclosing binders of the hole with the same display
// name (innermost binder wins), i.e. the filler is read in the hole's context.
ExprPtr substitute_hole(const ExprPtr& masked, const ExprPtr& filler);

// Replaces the subterm at the given root path by PREDICT.
ExprPtr mask_at_path(const ExprPtr& root, const std::vector<int>& path);

struct Declaration {
    std::string name;
    ExprPtr type;
    ExprPtr value; // null for constants/axioms
    std::size_t orderIndex = 0;
    std::string modulePath;
};

struct UnknownConstant : std::runtime_error {
    explicit UnknownConstant(const std::string& n)
        : std::runtime_error("unknown constant: " + n), name(n) {}
    std::string name;
};

struct DuplicateDeclaration : std::runtime_error {
    explicit DuplicateDeclaration(const std::string& n)
        : std::runtime_error("duplicate declaration: " + n) {}
};

// An ordered collection of declarations; later declarations may only refer to
// earlier ones, so lookups are acyclic by construction. Immutable once built
// and safe to share across threads.
class Environment {
public:
    void add(Declaration decl); // assigns orderIndex, rejects duplicates
    const Declaration* find(const std::string& name) const;
    const Declaration& get(const std::string& name) const; // throws UnknownConstant
    const std::vector<Declaration>& decls() const { return decls_; }
    std::size_t size() const { return decls_.size(); }

private:
    std::vector<Declaration> decls_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace proofkit
