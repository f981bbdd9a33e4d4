#pragma once

#include "proofkit/expr.hpp"

namespace proofkit {

enum class PrintMode { Pretty, Verbose };

struct PrintOptions {
    PrintMode mode = PrintMode::Pretty;
    // Subtrees strictly deeper than maxDepth render as the token "…".
    std::optional<int> maxDepth;
    // Needed to decide implicit-argument elision and the ∀/Π head; without it
    // all application arguments are shown and binder chains print as ∀.
    const Environment* env = nullptr;
};

// Renders e in the surface notation accepted by parse_expr. Pretty mode
// elides arguments in implicit/instance positions (except subtrees containing
// the PREDICT hole, which force the explicit @-form so the hole stays
// visible); verbose mode prints every argument and prefixes heads consuming
// implicit arguments with @.
std::string print_expr(const ExprPtr& e, const PrintOptions& opts);

std::string pretty_str(const ExprPtr& e, const Environment& env);
std::string verbose_str(const ExprPtr& e, const Environment& env);

} // namespace proofkit
