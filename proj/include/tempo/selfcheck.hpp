#pragma once

#include "tempo/fw.hpp"

namespace tempo {

/// Property suites of the symbolic layer, packaged for the verify command:
/// canonical-form soundness on random expressions, matrix-table fidelity
/// against dense products, Leibniz completeness, adjoint involution and
/// rewrite idempotence. Deterministic for a fixed seed.
std::vector<IdentityCheck> opcore_selfchecks(unsigned seed = 2027);

}  // namespace tempo
