#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fieldcsp/csp.hpp"
#include "fieldcsp/report.hpp"

namespace fieldcsp {

// The module works on even-arity parity systems: p = 2, every offset 0, every
// arity even. Such predicates are complement-invariant and unsatisfied by
// constant assignments, which the rounding arguments below rely on.
bool is_even_xor(const CspInstance& C);
void require_even_xor(const CspInstance& C);

// w(v) = sum of weights of constraints containing v.
std::vector<double> vertex_weights(const CspInstance& C);

// A cut is an ascending list of vertex indices.
using CutSet = std::vector<int>;

// Constraints satisfied by the indicator of S (ascending constraint indices).
std::vector<int> boundary(const CspInstance& C, const CutSet& S);

// w(boundary(S)) / w(S); requires w(S) > 0.
double expansion(const CspInstance& C, const CutSet& S);

// Exhaustive minimum of expansion over all S with 0 < w(S) <= w(V)/2,
// guarded to n <= 20. Returns the minimum and a witness.
std::pair<double, CutSet> csp_expansion(const CspInstance& C);

// Scale-and-translate energy: 0 when f is constant, otherwise
// (max f - min f) * sat_prob(c, (f - min f)/(max f - min f)).
double general_energy(const Constraint& c, int p, const std::vector<double>& f);

// sum_c w_c * general_energy(c, f)^2 / sum_u w_u f_u^2. The denominator uses
// squared entries (the weighted inner product <f,f>_w); zero denominator is a
// domain error.
double discrepancy(const CspInstance& C, const std::vector<double>& f);

struct Gamma2Result {
    double value = 0.0;
    std::vector<double> witness; // w-orthogonal to the all-ones vector
};

// Upper bound on the minimum of discrepancy over f w-orthogonal to all-ones:
// derivative-free coordinate descent with multiplicative step shrinking,
// started from every balanced-cut candidate 1_S - (w(S)/w(V)) * 1 (guarded to
// n <= 12; this seeding pins the estimate below 2 * csp_expansion) plus random
// restarts. All vertex weights must be positive.
Gamma2Result gamma2_estimate(const CspInstance& C, int restarts, int iterations,
                             std::uint64_t seed);

struct SweepResult {
    CutSet set;
    double ratio_bound = 0.0; // sum_c w_c Q_c(f) / sum_u w_u f_u
    double phi = 0.0;         // expansion of the returned set
};

// Threshold rounding of a nonnegative potential: tries S_v = {u : f_u >= v}
// for every distinct positive value v and returns the best cut. Guarantees
// phi <= ratio_bound and set inside the support of f.
SweepResult sweep_round(const CspInstance& C, const std::vector<double>& f);

struct UpperResult {
    CutSet set;
    double certified_bound = 0.0; // D_w(f) + 2*sqrt(ell/2)*sqrt(D_w(f))
    double phi = 0.0;
    double dw = 0.0; // D_w(f)
};

// Constructive rounding of a w-orthogonal potential: shift by a weighted
// median (ties toward the smaller shift) so both sign supports carry at most
// half the volume, keep the side with the smaller discrepancy, sweep its
// coordinatewise square. Returns a cut with w(S) <= w(V)/2 meeting the
// certified bound, where ell is the maximum arity.
UpperResult cheeger_upper(const CspInstance& C, const std::vector<double>& f);

// Margins of the two square-versus-level-set inequalities behind the upper
// bound, for one even constraint and a nonnegative potential h (min^(i) is the
// i-th smallest value of h on the constraint's support, odd 1-based i):
//   margin1 = Q_c(h)^2 + 2 Q_c(h) * sum_{odd i} min^(i) - Q_c(h^2)
//   margin2 = (ell/2) * sum_{v in c} h_v^2 - (sum_{odd i} min^(i))^2
// Both are nonnegative up to rounding.
std::pair<double, double> appendix_inequalities(const Constraint& c, int p,
                                                const std::vector<double>& h);

struct CheegerReport {
    double phi = 0.0;
    CutSet phi_witness;
    double gamma2 = 0.0;
    std::vector<double> gamma2_witness;
    int ell = 0;
    UpperResult constructive;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// End-to-end checks of the two-sided expansion bound:
//  (a) gamma2_est <= 2 * phi (the balanced-cut seeds enforce this),
//  (b) phi <= (2*sqrt(ell/2) + 1) * sqrt(gamma2_est),
//  (c) the constructive rounding of the gamma2 witness returns a balanced cut
//      meeting its certified bound and lying at or above phi.
CheegerReport verify_cheeger(const CspInstance& C, int restarts, int iterations,
                             std::uint64_t seed);

} // namespace fieldcsp
