#pragma once

#include "proofkit/expr.hpp"

#include <iosfwd>

namespace proofkit {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t offset_)
        : std::runtime_error(msg + " (at byte " + std::to_string(offset_) + ")"),
          offset(offset_) {}
    std::size_t offset;
};

// Parses the documented Lean-like surface grammar: λ/∀/Π binders with
// ( ) { } [ ] brackets, → ¬ ∧ ∨ ↔ = notations, application by juxtaposition,
// @name for explicit-argument mode. Notations desugar to Const applications
// (¬a ≡ not a, a ∧ b ≡ and a b, a ∨ b ≡ or a b, a ↔ b ≡ iff a b,
// a = b ≡ eq T a b with T inferred from the left operand); → desugars to a
// non-dependent Pi. Free identifiers resolve against locals (as the given
// free variables), then env.
ExprPtr parse_expr(const std::string& src, const Environment& env,
                   const std::vector<ExprPtr>& locals = {});

// Loads a fixture environment: one declaration per line block,
//   theorem <name> : <type> := <term>
//   constant <name> : <type>
// `--` lines are comments; `-- module <path>` sets the module path for the
// declarations that follow; long declarations may continue on indented lines.
Environment parse_env_file(std::istream& in);
Environment load_env_file(const std::string& path);

} // namespace proofkit
