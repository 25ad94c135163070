#pragma once

#include "tempo/algebra.hpp"

namespace tempo {

/// Pointwise consequences of the linearized vacuum equations and the
/// harmonic coordinate condition, used as a normalizing substitution system:
///
///   laplacian:  d3^2 F        -> -(d1^2 + d2^2) F          (any field F)
///   divergence: d3 g3         -> -(d1 g1 + d2 g2)
///   trace:      d3 h_{i3}     -> -(1/2) d_i h - d1 h_{i1} - d2 h_{i2}
///
/// Each rule is the constraint solved for its lexicographically last symbol,
/// so repeated application reaches a unique fixed point: no field symbol
/// retains two x3-derivatives, and none of g3, h13, h23, h33 retains any.
/// `trace_definition` additionally imposes h = 2 phi - h11 - h22 - h33 (the
/// definition of the trace symbol, not a field equation). It is off by
/// default: the printed operator identities close without it, but adjoint
/// statements about the curved inner products need it.
struct RewriteRuleSet {
  bool laplacian = true;
  bool divergence = true;
  bool trace = true;
  bool trace_definition = false;

  static RewriteRuleSet all() { return {}; }
  static RewriteRuleSet none() { return {false, false, false, false}; }
  static RewriteRuleSet with_trace_definition() {
    return {true, true, true, true};
  }
};

OperatorExpr apply_rewrites(const OperatorExpr& e,
                            const RewriteRuleSet& rules = RewriteRuleSet::all(),
                            const Truncation& tr = default_truncation());

}  // namespace tempo
