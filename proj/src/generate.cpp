#include "fieldcsp/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace fieldcsp {

namespace {

std::vector<int> draw_support(int n, int arity, std::mt19937_64& rng) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < arity; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> vars(pool.begin(), pool.begin() + arity);
    std::sort(vars.begin(), vars.end());
    return vars;
}

void check_common(int n, int m, int arity, double wmin, double wmax) {
    if (n < 1) throw std::invalid_argument("need at least one variable");
    if (m < 1) throw std::invalid_argument("need at least one constraint");
    if (arity < 1 || arity > n) throw std::invalid_argument("arity must be in [1, n]");
    if (!(wmin >= 0.0) || !(wmax >= wmin))
        throw std::invalid_argument("need 0 <= wmin <= wmax");
}

} // namespace

CspInstance generate_random(int n, int m, int p, int arity, double wmin,
                            double wmax, std::uint64_t seed) {
    check_common(n, m, arity, wmin, wmax);
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(1, p - 1);
    std::uniform_int_distribution<int> off(0, p - 1);
    std::uniform_real_distribution<double> weight(wmin, wmax);
    std::vector<Constraint> cs;
    cs.reserve(m);
    for (int j = 0; j < m; ++j) {
        std::vector<int> vars = draw_support(n, arity, rng);
        std::vector<int> coeffs(arity);
        for (int& a : coeffs) a = coeff(rng);
        cs.push_back(make_constraint(p, std::move(vars), std::move(coeffs),
                                     off(rng), weight(rng)));
    }
    return make_instance(n, p, std::move(cs));
}

CspInstance generate_even_xor(int n, int m, int arity, double wmin, double wmax,
                              std::uint64_t seed, bool cover) {
    check_common(n, m, arity, wmin, wmax);
    if (arity % 2 != 0) throw std::invalid_argument("arity must be even");
    if (cover && (long long)m * arity < n)
        throw std::invalid_argument("cannot cover every variable: m * arity < n");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::mt19937_64 rng(seed + 1000003ull * (std::uint64_t)attempt);
        std::uniform_real_distribution<double> weight(wmin, wmax);
        std::vector<Constraint> cs;
        cs.reserve(m);
        std::vector<char> touched(n, 0);
        for (int j = 0; j < m; ++j) {
            std::vector<int> vars = draw_support(n, arity, rng);
            for (int v : vars) touched[v] = 1;
            cs.push_back(make_constraint(2, std::move(vars),
                                         std::vector<int>(arity, 1), 0, weight(rng)));
        }
        if (cover && std::find(touched.begin(), touched.end(), 0) != touched.end())
            continue;
        return make_instance(n, 2, std::move(cs));
    }
    throw std::runtime_error("could not cover every variable within the retry budget");
}

} // namespace fieldcsp
