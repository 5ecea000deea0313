#pragma once

#include "stellar/rng.hpp"
#include "stellar/state.hpp"

namespace stellar {

/// The state whose constellation is the union of both constellations. Computed
/// as the product of the two Majorana polynomials, so no roots are needed.
SymmetricState compose(const SymmetricState& a, const SymmetricState& b);

/// Uniform point on the sphere: z ~ U[-1, 1], phi ~ U[0, 2 pi).
QubitState random_qubit(SeededRng& rng);

/// Composition of n independent uniform single-qubit states.
SymmetricState random_state(int n, SeededRng& rng);

/// Composition of n/2 random antipodal pairs; E_B = 1. Odd n is a DomainError.
SymmetricState random_antipodal_state(int n, SeededRng& rng);

}  // namespace stellar
