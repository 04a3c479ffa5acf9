#include "fieldcsp/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fieldcsp {

void check_permutation(const Permutation& perm, int n) {
    if (static_cast<int>(perm.size()) != n)
        throw std::invalid_argument("permutation has wrong length");
    std::vector<char> seen(n, 0);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[v])
            throw std::invalid_argument("permutation is not a bijection");
        seen[v] = 1;
    }
}

std::vector<Permutation> all_permutations(int n) {
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

Eigen::MatrixXi difference_matrix(int n) {
    if (n < 2) throw std::invalid_argument("difference matrix needs n >= 2");
    Eigen::MatrixXi J = Eigen::MatrixXi::Zero(n - 1, n);
    for (int i = 0; i < n - 1; ++i) {
        J(i, i) = 1;
        J(i, i + 1) = -1;
    }
    return J;
}

Eigen::MatrixXi permutation_matrix(const Permutation& perm) {
    int n = static_cast<int>(perm.size());
    check_permutation(perm, n);
    Eigen::MatrixXi P = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i) P(i, perm[i]) = 1;
    return P;
}

namespace {

// Positions of each variable under perm: pos[perm[k]] = k.
std::vector<int> inverse_positions(const Permutation& perm) {
    std::vector<int> pos(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) pos[perm[k]] = static_cast<int>(k);
    return pos;
}

// Value of the constraint on the indicator of {positions > gap} (the rounded
// vector realized by a threshold inside the gap).
int eval_suffix(const Constraint& c, int p, const std::vector<int>& pos, int gap) {
    long long s = 0;
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
        if (pos[c.vars[i]] > gap) s += c.coeffs[i];
    }
    return mod_reduce(s, p) != c.offset ? 1 : 0;
}

// Value on the indicator of {positions <= gap}.
int eval_prefix(const Constraint& c, int p, const std::vector<int>& pos, int gap) {
    long long s = 0;
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
        if (pos[c.vars[i]] <= gap) s += c.coeffs[i];
    }
    return mod_reduce(s, p) != c.offset ? 1 : 0;
}

} // namespace

ActiveRegion active_region(const Constraint& c, int p, const Permutation& perm) {
    int n = static_cast<int>(perm.size());
    check_permutation(perm, n);
    // Sentinel regimes: thresholds at or below the minimum value round to
    // all-ones, thresholds above the maximum round to all-zeros. Either being
    // satisfied means the region spills past the unit interval's ends.
    long long all = 0;
    for (int a : c.coeffs) all += a;
    bool ones_sat = mod_reduce(all, p) != c.offset;
    bool zeros_sat = mod_reduce(0, p) != c.offset;
    if (ones_sat || zeros_sat)
        throw std::domain_error(
            "active region touches theta = 0 or theta = 1; the instance is not "
            "zero-closed");

    std::vector<int> pos = inverse_positions(perm);
    ActiveRegion region;
    int run_start = -1;
    for (int g = 0; g <= n - 2; ++g) {
        bool active = eval_suffix(c, p, pos, g) == 1;
        if (active && run_start < 0) run_start = g;
        if (!active && run_start >= 0) {
            region.intervals.emplace_back(run_start, g);
            run_start = -1;
        }
    }
    if (run_start >= 0) region.intervals.emplace_back(run_start, n - 1);
    return region;
}

std::vector<int> crossing_indices(const Constraint& c, int p, const Permutation& perm) {
    std::vector<int> gaps;
    for (auto [lo, hi] : active_region(c, p, perm).intervals) {
        for (int g = lo; g < hi; ++g) gaps.push_back(g);
    }
    return gaps;
}

std::vector<int> crossing_indices_by_indicator(const Constraint& c, int p,
                                               const Permutation& perm) {
    int n = static_cast<int>(perm.size());
    check_permutation(perm, n);
    std::vector<int> pos = inverse_positions(perm);
    std::vector<int> gaps;
    for (int g = 0; g <= n - 2; ++g) {
        if (eval_prefix(c, p, pos, g) == 1) gaps.push_back(g);
    }
    return gaps;
}

Eigen::MatrixXi incidence_matrix(const CspInstance& C, const Permutation& perm) {
    require_zero_closed(C);
    check_permutation(perm, C.n);
    Eigen::MatrixXi B = Eigen::MatrixXi::Zero(static_cast<int>(C.constraints.size()), C.n);
    for (std::size_t ci = 0; ci < C.constraints.size(); ++ci) {
        for (auto [lo, hi] : active_region(C.constraints[ci], C.p.p, perm).intervals) {
            B(static_cast<int>(ci), perm[lo]) += 1;
            B(static_cast<int>(ci), perm[hi]) -= 1;
        }
    }
    return B;
}

Eigen::MatrixXi crossing_matrix(const CspInstance& C, const Permutation& perm) {
    require_zero_closed(C);
    check_permutation(perm, C.n);
    Eigen::MatrixXi B = Eigen::MatrixXi::Zero(static_cast<int>(C.constraints.size()),
                                              C.n - 1);
    for (std::size_t ci = 0; ci < C.constraints.size(); ++ci) {
        for (int g : crossing_indices(C.constraints[ci], C.p.p, perm)) {
            B(static_cast<int>(ci), g) = 1;
        }
    }
    return B;
}

double crossing_degree(const CspInstance& C, const Permutation& perm, int gap) {
    return crossing_degree_pair(C, perm, gap, gap);
}

double crossing_degree_pair(const CspInstance& C, const Permutation& perm,
                            int gap_i, int gap_j) {
    check_permutation(perm, C.n);
    if (gap_i < 0 || gap_i > C.n - 2 || gap_j < 0 || gap_j > C.n - 2)
        throw std::invalid_argument("gap index out of range");
    double total = 0.0;
    for (const Constraint& c : C.constraints) {
        std::vector<int> gaps = crossing_indices(c, C.p.p, perm);
        bool has_i = std::binary_search(gaps.begin(), gaps.end(), gap_i);
        bool has_j = std::binary_search(gaps.begin(), gaps.end(), gap_j);
        if (has_i && has_j) total += c.weight;
    }
    return total;
}

bool is_pi_consistent(const FractionalAssignment& x, const Permutation& perm) {
    int n = static_cast<int>(perm.size());
    check_permutation(perm, n);
    if (x.size() != perm.size()) return false;
    for (int k = 0; k + 1 < n; ++k) {
        if (x[perm[k]] > x[perm[k + 1]]) return false;
    }
    return true;
}

double quadratic_form_energy(const CspInstance& C, const Permutation& perm,
                             const FractionalAssignment& x) {
    check_fractional(x, C.n);
    if (!is_pi_consistent(x, perm))
        throw std::invalid_argument("assignment is not sorted along the permutation");
    Eigen::MatrixXi B = incidence_matrix(C, perm);
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), C.n);
    Eigen::VectorXd y = B.cast<double>() * xv;
    double total = 0.0;
    for (std::size_t ci = 0; ci < C.constraints.size(); ++ci) {
        double yc = y(static_cast<int>(ci));
        total += C.constraints[ci].weight * yc * yc;
    }
    return total;
}

bool verify_factorization(const CspInstance& C, const Permutation& perm) {
    Eigen::MatrixXi lhs = incidence_matrix(C, perm);
    Eigen::MatrixXi rhs = crossing_matrix(C, perm) * difference_matrix(C.n) *
                          permutation_matrix(perm);
    return lhs == rhs;
}

} // namespace fieldcsp
