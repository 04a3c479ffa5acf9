#pragma once

#include <cstdint>
#include <vector>

#include "fieldcsp/csp.hpp"
#include "fieldcsp/ordering.hpp"

namespace fieldcsp {

// Dense matrix over F_p whose rows carry nonnegative real weights. Entries are
// stored row-major in [0, p).
struct CodeMatrix {
    int p = 2;
    int rows = 0;
    int cols = 0;
    std::vector<int> entries;
    std::vector<double> coord_weights;

    int at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
};

// m x (n+1) matrix: row c carries the constraint coefficients at the variable
// columns and -offset mod p in column n; coord_weights are the constraint
// weights. Messages carry a fixed affine coordinate 1, so row * message equals
// sum a_i z_i - offset uniformly.
CodeMatrix generating_matrix(const CspInstance& C);

// Quadratic expansion of each row of G (whose width is n+1 including the
// affine column) into n^2 + 2n + 1 columns:
//   columns [0, n^2)          pairwise products a_i * a_j, row-major,
//   columns [n^2, n^2+n)      -offset * a_i,
//   columns [n^2+n, n^2+2n)   -offset * a_j,
//   column  n^2+2n            offset^2.
// Row weights are preserved. Row r * lifted_message(perm, gi, gj) equals
// (row r * indicator_message(perm, gi)) * (row r * indicator_message(perm, gj))
// in F_p, which is what ties pair-crossing degrees to codeword weights.
CodeMatrix lift(const CodeMatrix& G);

// {0,1}^{n+1}: ones at the variables occupying positions 0..gap of perm, plus
// the affine coordinate fixed to 1.
std::vector<std::uint8_t> indicator_message(const Permutation& perm, int gap);

// {0,1}^{n^2+2n+1}: tensor block of the two prefix indicators, then both linear
// blocks, then the constant coordinate 1. gap_i = gap_j is allowed and recovers
// the single-gap indicator's nonzero pattern.
std::vector<std::uint8_t> lifted_message(const Permutation& perm, int gap_i, int gap_j);

// (M * msg) mod p, exact.
std::vector<int> matvec_mod(const CodeMatrix& M, const std::vector<std::uint8_t>& msg);

// Sum of coord_weights over rows where (M * msg) is nonzero mod p.
double codeword_weight(const CodeMatrix& M, const std::vector<std::uint8_t>& msg);

// Weighted count of rows whose affine evaluation at the prefix indicator is
// nonzero; equals crossing_degree(C, perm, gap) on zero-closed instances.
double crossing_via_code(const CodeMatrix& G, const Permutation& perm, int gap);

} // namespace fieldcsp
