#pragma once

#include <stdexcept>
#include <string>

#include "tempo/algebra.hpp"

namespace tempo {

/// Error in the operator DSL, with 1-based position information.
struct ParseError : std::runtime_error {
  ParseError(std::string msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Parses the operator DSL.
///
/// Atoms:   phi g1..g3 h h11..h33 (h21 etc. canonicalize) d1..d3 p1..p3
///          x1..x3 beta alpha1..alpha3 sigma1..sigma3 m i
/// Grammar: expr   := term (('+'|'-') term)*
///          term   := unary (('*'|'@'|'/') unary)*
///          unary  := '-' unary | power
///          power  := primary ('^' int)?   (negative exponents on scalars/m)
///          primary:= '(' expr ')' | 'D' '(' axis ',' field ')' | atom | int
///
/// `@` is composition, identical to `*`; it exists to make operator
/// composition explicit where juxtaposition reads ambiguously (d1 @ phi).
/// `p^2` abbreviates p1*p1 + p2*p2 + p3*p3. `D(j, F)` is the derivative of
/// the field F (nestable). The p_j parse to their expanded derivative form.
OperatorExpr parse_operator(const std::string& text,
                            const Truncation& tr = default_truncation());

/// Canonical DSL rendering; parse_operator(to_dsl(e)) == e, and printing a
/// parsed canonical form is byte-stable.
std::string to_dsl(const OperatorExpr& e);

}  // namespace tempo
