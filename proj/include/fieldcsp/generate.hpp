#pragma once

#include <cstdint>

#include "fieldcsp/csp.hpp"

namespace fieldcsp {

// Random instance: m constraints, each on `arity` distinct variables (sorted
// ascending) with uniform nonzero coefficients, uniform offset in [0, p), and
// uniform weight in [wmin, wmax]. Deterministic in the seed. Supports may
// repeat across constraints, so duplicate predicates occur naturally.
CspInstance generate_random(int n, int m, int p, int arity, double wmin,
                            double wmax, std::uint64_t seed);

// Parity special case: modulus 2, all offsets zero, unit coefficients, even
// arity. With cover = true the draw is retried under derived seeds until every
// variable appears in at least one constraint (requires m * arity >= n).
CspInstance generate_even_xor(int n, int m, int arity, double wmin, double wmax,
                              std::uint64_t seed, bool cover);

} // namespace fieldcsp
