#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fieldcsp/csp.hpp"

namespace fieldcsp {

// perm[k] is the variable occupying sorted position k, ascending:
// x[perm[0]] <= x[perm[1]] <= ... <= x[perm[n-1]].
//
// Gap g (0-based, g in [0, n-2]) sits between positions g and g+1. A threshold
// falling in gap g rounds exactly the variables at positions > g to one.
using Permutation = std::vector<int>;

void check_permutation(const Permutation& perm, int n);

// All n! permutations of [0, n) in lexicographic order.
std::vector<Permutation> all_permutations(int n);

// J in {-1,0,1}^{(n-1) x n}: J(i,i) = 1, J(i,i+1) = -1.
Eigen::MatrixXi difference_matrix(int n);

// P(i,j) = 1 iff j = perm[i], so (P x)_i = x[perm[i]].
Eigen::MatrixXi permutation_matrix(const Permutation& perm);

// Maximal runs of satisfied gaps, as position pairs (lo, hi): the thresholds in
// (x[perm[lo]], x[perm[hi]]] satisfy the constraint. Intervals are disjoint and
// ordered. Throws std::domain_error if the constraint is satisfied by the
// all-ones or all-zeros rounding (those regimes touch theta = 0 / theta = 1,
// which zero-closed instances rule out).
struct ActiveRegion {
    std::vector<std::pair<int, int>> intervals;
};

ActiveRegion active_region(const Constraint& c, int p, const Permutation& perm);

// Gaps inside the active region (ascending, 0-based). Route one: geometric,
// from active_region.
std::vector<int> crossing_indices(const Constraint& c, int p, const Permutation& perm);

// Route two: gap g is crossing iff the constraint holds on the indicator of the
// first g+1 positions. Agrees with crossing_indices on zero-closed instances;
// kept separate so the two derivations check each other.
std::vector<int> crossing_indices_by_indicator(const Constraint& c, int p,
                                               const Permutation& perm);

// m x n matrix with +1 at the lower border and -1 at the upper border of each
// active-region interval. Rows sum to zero and their support lies inside the
// constraint's variables. Requires a zero-closed instance.
Eigen::MatrixXi incidence_matrix(const CspInstance& C, const Permutation& perm);

// m x (n-1) matrix, entry (c,g) = 1 iff gap g is crossing for constraint c.
Eigen::MatrixXi crossing_matrix(const CspInstance& C, const Permutation& perm);

// Total weight of constraints for which the given gap(s) are crossing.
double crossing_degree(const CspInstance& C, const Permutation& perm, int gap);
double crossing_degree_pair(const CspInstance& C, const Permutation& perm,
                            int gap_i, int gap_j);

// True iff x is sorted ascending along perm (non-strict).
bool is_pi_consistent(const FractionalAssignment& x, const Permutation& perm);

// x^T B^T W B x for B = incidence_matrix; equals energy(C, x) for every
// perm-consistent x over a zero-closed instance. Throws std::invalid_argument
// when x is not perm-consistent.
double quadratic_form_energy(const CspInstance& C, const Permutation& perm,
                             const FractionalAssignment& x);

// Materializes both sides of B_inc = B_cross * J * P and compares entrywise.
bool verify_factorization(const CspInstance& C, const Permutation& perm);

} // namespace fieldcsp
