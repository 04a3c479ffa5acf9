#include "fieldcsp/codes.hpp"

#include <stdexcept>

namespace fieldcsp {

CodeMatrix generating_matrix(const CspInstance& C) {
    CodeMatrix G;
    G.p = C.p.p;
    G.rows = static_cast<int>(C.constraints.size());
    G.cols = C.n + 1;
    G.entries.assign(static_cast<std::size_t>(G.rows) * G.cols, 0);
    G.coord_weights.reserve(C.constraints.size());
    for (int r = 0; r < G.rows; ++r) {
        const Constraint& c = C.constraints[r];
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            G.entries[static_cast<std::size_t>(r) * G.cols + c.vars[i]] = c.coeffs[i];
        }
        G.entries[static_cast<std::size_t>(r) * G.cols + C.n] =
            mod_reduce(-static_cast<long long>(c.offset), G.p);
        G.coord_weights.push_back(c.weight);
    }
    return G;
}

CodeMatrix lift(const CodeMatrix& G) {
    if (G.cols < 1) throw std::invalid_argument("generating matrix needs an affine column");
    int n = G.cols - 1;
    CodeMatrix M;
    M.p = G.p;
    M.rows = G.rows;
    M.cols = n * n + 2 * n + 1;
    M.entries.assign(static_cast<std::size_t>(M.rows) * M.cols, 0);
    M.coord_weights = G.coord_weights;
    for (int r = 0; r < G.rows; ++r) {
        const int* e = G.entries.data() + static_cast<std::size_t>(r) * G.cols;
        int* out = M.entries.data() + static_cast<std::size_t>(r) * M.cols;
        long long affine = e[n]; // already -offset mod p
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out[i * n + j] = mod_reduce(static_cast<long long>(e[i]) * e[j], M.p);
            }
        }
        for (int i = 0; i < n; ++i) out[n * n + i] = mod_reduce(affine * e[i], M.p);
        for (int j = 0; j < n; ++j) out[n * n + n + j] = mod_reduce(affine * e[j], M.p);
        out[n * n + 2 * n] = mod_reduce(affine * affine, M.p);
    }
    return M;
}

std::vector<std::uint8_t> indicator_message(const Permutation& perm, int gap) {
    int n = static_cast<int>(perm.size());
    check_permutation(perm, n);
    if (gap < 0 || gap > n - 2) throw std::invalid_argument("gap index out of range");
    std::vector<std::uint8_t> z(n + 1, 0);
    for (int k = 0; k <= gap; ++k) z[perm[k]] = 1;
    z[n] = 1;
    return z;
}

std::vector<std::uint8_t> lifted_message(const Permutation& perm, int gap_i, int gap_j) {
    int n = static_cast<int>(perm.size());
    check_permutation(perm, n);
    if (gap_i < 0 || gap_i > n - 2 || gap_j < 0 || gap_j > n - 2)
        throw std::invalid_argument("gap index out of range");
    std::vector<std::uint8_t> zi(n, 0), zj(n, 0);
    for (int k = 0; k <= gap_i; ++k) zi[perm[k]] = 1;
    for (int k = 0; k <= gap_j; ++k) zj[perm[k]] = 1;
    std::vector<std::uint8_t> msg(static_cast<std::size_t>(n) * n + 2 * n + 1, 0);
    for (int a = 0; a < n; ++a) {
        if (!zi[a]) continue;
        for (int b = 0; b < n; ++b) msg[static_cast<std::size_t>(a) * n + b] = zj[b];
    }
    for (int a = 0; a < n; ++a) msg[static_cast<std::size_t>(n) * n + a] = zi[a];
    for (int b = 0; b < n; ++b) msg[static_cast<std::size_t>(n) * n + n + b] = zj[b];
    msg[static_cast<std::size_t>(n) * n + 2 * n] = 1;
    return msg;
}

std::vector<int> matvec_mod(const CodeMatrix& M, const std::vector<std::uint8_t>& msg) {
    if (static_cast<int>(msg.size()) != M.cols)
        throw std::invalid_argument("message width does not match matrix");
    std::vector<int> out(M.rows);
    for (int r = 0; r < M.rows; ++r) {
        const int* e = M.entries.data() + static_cast<std::size_t>(r) * M.cols;
        long long s = 0;
        for (int k = 0; k < M.cols; ++k) {
            if (msg[k]) s += e[k];
        }
        out[r] = mod_reduce(s, M.p);
    }
    return out;
}

double codeword_weight(const CodeMatrix& M, const std::vector<std::uint8_t>& msg) {
    std::vector<int> v = matvec_mod(M, msg);
    double total = 0.0;
    for (int r = 0; r < M.rows; ++r) {
        if (v[r] != 0) total += M.coord_weights[r];
    }
    return total;
}

double crossing_via_code(const CodeMatrix& G, const Permutation& perm, int gap) {
    return codeword_weight(G, indicator_message(perm, gap));
}

} // namespace fieldcsp
