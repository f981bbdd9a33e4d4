#pragma once

#include "proofkit/expr.hpp"

namespace proofkit {

struct TypeError : std::runtime_error {
    TypeError(std::string expected_, std::string actual_, std::string path_)
        : std::runtime_error("type mismatch at [" + path_ + "]: expected " + expected_ +
                             ", got " + actual_),
          expected(std::move(expected_)), actual(std::move(actual_)), path(std::move(path_)) {}
    std::string expected, actual, path;
};

struct UnboundVariable : std::runtime_error {
    UnboundVariable() : std::runtime_error("unbound de Bruijn variable") {}
};

// Weak-head beta reduction.
ExprPtr whnf(const ExprPtr& e);

// Full beta normalization (terms in this kernel are tiny).
ExprPtr beta_normalize(const ExprPtr& e);

// Definitional equality: syntactic equality after beta reduction, modulo
// binder display names.
bool is_def_eq(const ExprPtr& a, const ExprPtr& b);

// Infers the type of a term whose loose bound variables, if any, are
// described by ctx.bs (outermost first). Pure lambda-Pi rules: Prop and Type
// only, Pi into Prop is impredicative.
ExprPtr infer_type(const ExprPtr& e, const SubtermContext& ctx, const Environment& env);
ExprPtr infer_type(const ExprPtr& e, const Environment& env);

// Checks decl.value (when present) against decl.type; throws on failure.
void check_declaration(const Declaration& decl, const Environment& env);

} // namespace proofkit
