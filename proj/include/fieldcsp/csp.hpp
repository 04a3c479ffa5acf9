#pragma once

#include <cstdint>
#include <vector>

#include "fieldcsp/field.hpp"

namespace fieldcsp {

// A potential vector in [0,1]^n. Coordinates are validated by the operations
// that consume them.
using FractionalAssignment = std::vector<double>;

// A Boolean vector; entries are exactly 0 or 1.
using BooleanAssignment = std::vector<std::uint8_t>;

// One weighted constraint 1[sum_i coeffs[i] * x[vars[i]] != offset (mod p)].
// vars are distinct 0-based variable indices; coeffs are stored in [1, p) and
// offset in [0, p); weight is a finite nonnegative real.
struct Constraint {
    std::vector<int> vars;
    std::vector<int> coeffs;
    int offset = 0;
    double weight = 0.0;
};

// A weighted constraint system over n variables and a prime modulus. The
// `augmented` flag records that dummy variables were appended; operations
// that need the closure property test it directly rather than trusting the
// flag. All types in this library are immutable after construction and the
// operations are pure functions, so instances may be shared freely across
// threads.
struct CspInstance {
    int n = 0;
    FieldPrime p;
    std::vector<Constraint> constraints;
    bool augmented = false;
};

// Validating constructors. Coefficients and the offset are reduced mod p;
// a coefficient that reduces to zero is rejected.
Constraint make_constraint(int p, std::vector<int> vars, std::vector<int> coeffs,
                           int offset, double weight);
CspInstance make_instance(int n, int p, std::vector<Constraint> constraints,
                          bool augmented = false);

// Throwing validators used at operation boundaries.
void check_boolean(const BooleanAssignment& x, int n);
void check_fractional(const FractionalAssignment& x, int n);

// 1 iff sum coeffs[i]*x[vars[i]] != offset (mod p). Exact integer arithmetic.
int eval_constraint(const Constraint& c, const BooleanAssignment& x, int p);

// Total weight of constraints satisfied by the Boolean assignment.
double csp_value(const CspInstance& C, const BooleanAssignment& x);

// Threshold rounding: bit i = 1 iff x[i] >= theta.
BooleanAssignment round_assignment(const FractionalAssignment& x, double theta);

// Exact measure of {theta in [0,1] : c satisfied by the rounding of x}.
// Computed by sorting the distinct coordinate values of x on c's variables
// (plus sentinels 0 and 1); on each interval (v_t, v_{t+1}] the rounded vector
// is constant and equal to 1[x_i >= v_{t+1}].
double sat_prob(const Constraint& c, int p, const FractionalAssignment& x);

// Sum over constraints of weight * sat_prob^2.
double energy(const CspInstance& C, const FractionalAssignment& x);

// True iff every constraint evaluates to 0 on both the all-zeros and the
// all-ones assignment (equivalently: offset 0 and coefficient sum 0 mod p).
bool is_zero_closed(const CspInstance& C);

// Throws std::invalid_argument unless is_zero_closed(C).
void require_zero_closed(const CspInstance& C);

// Append global dummy variables so that every constraint evaluates to 0 on the
// all-zeros and all-ones assignments while the original predicate is recovered
// by fixing dummy1 = 1, dummy2 = 0. Each constraint gains coefficient (-offset)
// on dummy1 and (offset - sum coeffs) on dummy2, offset becomes 0; coefficients
// that reduce to 0 mod p are dropped. Parity-only systems (p = 2, all offsets
// zero) need a single dummy, so the result has n+1 variables there and n+2
// otherwise.
CspInstance augment_instance(const CspInstance& C);

// Same, with the dummy layout forced instead of auto-detected; used when two
// related instances must live in the same augmented variable space.
CspInstance augment_instance_layout(const CspInstance& C, bool two_dummies);

// True iff the auto-detected layout for C uses two dummy variables.
bool augment_uses_two_dummies(const CspInstance& C);

} // namespace fieldcsp
