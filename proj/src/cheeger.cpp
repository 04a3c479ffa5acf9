#include "fieldcsp/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace fieldcsp {

namespace {

constexpr double kTol = 1e-9;
constexpr double kBalanceSlack = 1e-12;

double total(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

double dot_w(const std::vector<double>& w, const std::vector<double>& f,
             const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f[i] * g[i];
    return s;
}

std::vector<int> mask_to_set(std::uint32_t mask) {
    std::vector<int> out;
    for (int v = 0; mask != 0; ++v, mask >>= 1)
        if (mask & 1u) out.push_back(v);
    return out;
}

} // namespace

bool is_even_xor(const CspInstance& C) {
    if (C.p.p != 2) return false;
    for (const Constraint& c : C.constraints)
        if (c.offset != 0 || c.vars.size() % 2 != 0) return false;
    return true;
}

void require_even_xor(const CspInstance& C) {
    if (!is_even_xor(C))
        throw std::invalid_argument(
            "operation requires modulus 2, zero offsets, and even arities");
}

std::vector<double> vertex_weights(const CspInstance& C) {
    std::vector<double> w(C.n, 0.0);
    for (const Constraint& c : C.constraints)
        for (int v : c.vars) w[v] += c.weight;
    return w;
}

std::vector<int> boundary(const CspInstance& C, const CutSet& S) {
    require_even_xor(C);
    BooleanAssignment x(C.n, 0);
    for (int v : S) {
        if (v < 0 || v >= C.n) throw std::invalid_argument("cut vertex out of range");
        x[v] = 1;
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < C.constraints.size(); ++i)
        if (eval_constraint(C.constraints[i], x, C.p.p)) out.push_back((int)i);
    return out;
}

double expansion(const CspInstance& C, const CutSet& S) {
    std::vector<double> w = vertex_weights(C);
    double wS = 0.0;
    for (int v : S) {
        if (v < 0 || v >= C.n) throw std::invalid_argument("cut vertex out of range");
        wS += w[v];
    }
    if (wS <= 0.0) throw std::invalid_argument("cut has zero weight");
    double cut = 0.0;
    for (int ci : boundary(C, S)) cut += C.constraints[ci].weight;
    return cut / wS;
}

std::pair<double, CutSet> csp_expansion(const CspInstance& C) {
    require_even_xor(C);
    if (C.n < 1 || C.n > 20)
        throw std::domain_error("exhaustive expansion needs 1 <= n <= 20");
    std::vector<double> w = vertex_weights(C);
    double wV = total(w);
    // Per-constraint variable masks; a cut satisfies an even parity constraint
    // exactly when it meets its support an odd number of times.
    std::vector<std::uint32_t> cmask;
    cmask.reserve(C.constraints.size());
    for (const Constraint& c : C.constraints) {
        std::uint32_t m = 0;
        for (int v : c.vars) m |= (1u << v);
        cmask.push_back(m);
    }
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    const std::uint32_t top = (1u << C.n);
    for (std::uint32_t mask = 1; mask < top; ++mask) {
        double wS = 0.0;
        for (std::uint32_t m = mask; m != 0; m &= (m - 1)) {
            unsigned v = (unsigned)__builtin_ctz(m);
            wS += w[v];
        }
        if (wS <= 0.0 || wS > wV / 2.0 + kBalanceSlack) continue;
        double cut = 0.0;
        for (std::size_t i = 0; i < cmask.size(); ++i)
            if (__builtin_popcount(mask & cmask[i]) & 1) cut += C.constraints[i].weight;
        double phi = cut / wS;
        if (phi < best) {
            best = phi;
            best_mask = mask;
        }
    }
    if (best_mask == 0 && best == std::numeric_limits<double>::infinity())
        throw std::domain_error("no cut with positive weight at most half the volume");
    return {best, mask_to_set(best_mask)};
}

double general_energy(const Constraint& c, int p, const std::vector<double>& f) {
    if (f.empty()) throw std::invalid_argument("empty potential");
    for (int v : c.vars)
        if (v < 0 || (std::size_t)v >= f.size())
            throw std::invalid_argument("constraint variable outside potential");
    double lo = f[0], hi = f[0];
    for (double x : f) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(hi > lo)) return 0.0;
    FractionalAssignment scaled(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) scaled[i] = (f[i] - lo) / (hi - lo);
    return (hi - lo) * sat_prob(c, p, scaled);
}

namespace {

// discrepancy() with the vertex weights precomputed; scales f to [0,1] once
// and reuses it for every constraint. Performs the same floating point
// operations as one general_energy call per constraint.
double discrepancy_given(const CspInstance& C, const std::vector<double>& w,
                         const std::vector<double>& f) {
    double den = dot_w(w, f, f);
    if (den <= 0.0) throw std::domain_error("potential has zero weighted norm");
    double lo = f[0], hi = f[0];
    for (double x : f) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(hi > lo)) return 0.0;
    FractionalAssignment scaled(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) scaled[i] = (f[i] - lo) / (hi - lo);
    double num = 0.0;
    for (const Constraint& c : C.constraints) {
        double q = (hi - lo) * sat_prob(c, C.p.p, scaled);
        num += c.weight * q * q;
    }
    return num / den;
}

} // namespace

double discrepancy(const CspInstance& C, const std::vector<double>& f) {
    require_even_xor(C);
    if ((int)f.size() != C.n) throw std::invalid_argument("potential has wrong length");
    std::vector<double> w = vertex_weights(C);
    return discrepancy_given(C, w, f);
}

namespace {

// Project out the w-weighted mean, then evaluate discrepancy. Returns +inf on
// a numerically zero projection so callers can reject the step.
double projected_objective(const CspInstance& C, const std::vector<double>& w,
                           double wV, std::vector<double>& f) {
    double lambda = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) lambda += w[i] * f[i];
    lambda /= wV;
    for (double& x : f) x -= lambda;
    double den = dot_w(w, f, f);
    if (den <= 1e-18 * std::max(1.0, wV))
        return std::numeric_limits<double>::infinity();
    return discrepancy_given(C, w, f);
}

} // namespace

Gamma2Result gamma2_estimate(const CspInstance& C, int restarts, int iterations,
                             std::uint64_t seed) {
    require_even_xor(C);
    if (C.n < 2 || C.n > 12)
        throw std::domain_error("spectral estimate needs 2 <= n <= 12");
    if (restarts < 0 || iterations < 1)
        throw std::invalid_argument("restarts must be >= 0 and iterations >= 1");
    std::vector<double> w = vertex_weights(C);
    for (double v : w)
        if (v <= 0.0)
            throw std::domain_error("every variable must appear in a weighted constraint");
    double wV = total(w);

    // Balanced-cut starts f_S = 1_S - (w(S)/w(V)) * 1. These are already
    // w-orthogonal and satisfy discrepancy(f_S) <= 2 * expansion(S), so the
    // final estimate is at most twice the exhaustive expansion.
    std::vector<std::vector<double>> starts;
    const std::uint32_t top = (1u << C.n);
    for (std::uint32_t mask = 1; mask < top; ++mask) {
        double wS = 0.0;
        for (std::uint32_t m = mask; m != 0; m &= (m - 1))
            wS += w[(unsigned)__builtin_ctz(m)];
        if (wS <= 0.0 || wS > wV / 2.0 + kBalanceSlack) continue;
        std::vector<double> f(C.n, -wS / wV);
        for (std::uint32_t m = mask; m != 0; m &= (m - 1))
            f[(unsigned)__builtin_ctz(m)] += 1.0;
        starts.push_back(std::move(f));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> f(C.n);
        for (double& x : f) x = unit(rng);
        starts.push_back(std::move(f));
    }

    Gamma2Result best;
    best.value = std::numeric_limits<double>::infinity();
    for (const std::vector<double>& start : starts) {
        std::vector<double> f = start;
        double val = projected_objective(C, w, wV, f);
        if (!std::isfinite(val)) continue;
        double step = 0.25;
        for (int sweep = 0; sweep < iterations && step >= 1e-7; ++sweep) {
            bool improved = false;
            for (int i = 0; i < C.n; ++i) {
                for (int dir = 0; dir < 2; ++dir) {
                    std::vector<double> g = f;
                    g[i] += (dir == 0 ? step : -step);
                    double v = projected_objective(C, w, wV, g);
                    if (v < val) {
                        val = v;
                        f = std::move(g);
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (val < best.value) {
            best.value = val;
            best.witness = f;
        }
    }
    if (!std::isfinite(best.value))
        throw std::domain_error("no start produced a usable potential");
    return best;
}

SweepResult sweep_round(const CspInstance& C, const std::vector<double>& f) {
    require_even_xor(C);
    if ((int)f.size() != C.n) throw std::invalid_argument("potential has wrong length");
    for (double x : f)
        if (!(x >= 0.0)) throw std::invalid_argument("sweep potential must be nonnegative");
    std::vector<double> w = vertex_weights(C);
    double den = 0.0;
    for (int u = 0; u < C.n; ++u) den += w[u] * f[u];
    if (den <= 0.0) throw std::domain_error("sweep potential has zero weighted mass");
    double num = 0.0;
    for (const Constraint& c : C.constraints)
        num += c.weight * general_energy(c, C.p.p, f);
    SweepResult res;
    res.ratio_bound = num / den;

    std::vector<double> levels;
    for (double x : f)
        if (x > 0.0) levels.push_back(x);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    double best = std::numeric_limits<double>::infinity();
    for (double v : levels) {
        CutSet S;
        double wS = 0.0;
        for (int u = 0; u < C.n; ++u)
            if (f[u] >= v) {
                S.push_back(u);
                wS += w[u];
            }
        if (wS <= 0.0) continue;
        double cut = 0.0;
        for (int ci : boundary(C, S)) cut += C.constraints[ci].weight;
        double phi = cut / wS;
        if (phi < best) {
            best = phi;
            res.set = std::move(S);
            res.phi = phi;
        }
    }
    if (!std::isfinite(best))
        throw std::domain_error("no threshold set has positive weight");
    return res;
}

UpperResult cheeger_upper(const CspInstance& C, const std::vector<double>& f) {
    require_even_xor(C);
    if ((int)f.size() != C.n) throw std::invalid_argument("potential has wrong length");
    std::vector<double> w = vertex_weights(C);
    double wV = total(w);
    double mean = 0.0;
    for (int u = 0; u < C.n; ++u) mean += w[u] * f[u];
    if (std::abs(mean) > kTol)
        throw std::invalid_argument("potential is not orthogonal to the all-ones vector");

    UpperResult res;
    res.dw = discrepancy(C, f);

    // Balancing shift: smallest distinct value splitting the volume so each
    // strict side carries at most half. Shifting changes neither the energy
    // terms nor (thanks to orthogonality) decreases the denominator, so the
    // shifted vector has discrepancy at most res.dw.
    std::vector<double> levels(f);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double shift = levels.back();
    for (double s : levels) {
        double above = 0.0, below = 0.0;
        for (int u = 0; u < C.n; ++u) {
            if (f[u] > s) above += w[u];
            if (f[u] < s) below += w[u];
        }
        if (above <= wV / 2.0 + kBalanceSlack && below <= wV / 2.0 + kBalanceSlack) {
            shift = s;
            break;
        }
    }

    std::vector<double> pos(C.n, 0.0), neg(C.n, 0.0);
    for (int u = 0; u < C.n; ++u) {
        double g = f[u] - shift;
        if (g > 0.0) pos[u] = g;
        if (g < 0.0) neg[u] = -g;
    }
    double den_pos = dot_w(w, pos, pos);
    double den_neg = dot_w(w, neg, neg);
    if (den_pos <= 0.0 && den_neg <= 0.0)
        throw std::domain_error("shifted potential vanishes on every weighted vertex");
    double d_pos = den_pos > 0.0 ? discrepancy(C, pos)
                                 : std::numeric_limits<double>::infinity();
    double d_neg = den_neg > 0.0 ? discrepancy(C, neg)
                                 : std::numeric_limits<double>::infinity();
    const std::vector<double>& h = (d_pos <= d_neg) ? pos : neg;

    std::vector<double> h2(C.n);
    for (int u = 0; u < C.n; ++u) h2[u] = h[u] * h[u];
    SweepResult sw = sweep_round(C, h2);

    int ell = 0;
    for (const Constraint& c : C.constraints) ell = std::max(ell, (int)c.vars.size());
    res.set = sw.set;
    res.phi = sw.phi;
    res.certified_bound = res.dw + 2.0 * std::sqrt(ell / 2.0) * std::sqrt(res.dw);
    return res;
}

std::pair<double, double> appendix_inequalities(const Constraint& c, int p,
                                                const std::vector<double>& h) {
    if (p != 2 || c.offset != 0 || c.vars.size() % 2 != 0)
        throw std::invalid_argument(
            "inequalities hold for even parity constraints over modulus 2");
    for (double x : h)
        if (!(x >= 0.0)) throw std::invalid_argument("potential must be nonnegative");
    for (int v : c.vars)
        if (v < 0 || (std::size_t)v >= h.size())
            throw std::invalid_argument("constraint variable outside potential");

    std::vector<double> s;
    s.reserve(c.vars.size());
    for (int v : c.vars) s.push_back(h[v]);
    std::sort(s.begin(), s.end());
    double odd_sum = 0.0;
    for (std::size_t i = 0; i < s.size(); i += 2) odd_sum += s[i];

    std::vector<double> h2(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) h2[i] = h[i] * h[i];
    double q = general_energy(c, p, h);
    double q2 = general_energy(c, p, h2);

    double sum_sq = 0.0;
    for (int v : c.vars) sum_sq += h[v] * h[v];
    double ell = (double)c.vars.size();

    double margin1 = q * q + 2.0 * q * odd_sum - q2;
    double margin2 = (ell / 2.0) * sum_sq - odd_sum * odd_sum;
    return {margin1, margin2};
}

CheegerReport verify_cheeger(const CspInstance& C, int restarts, int iterations,
                             std::uint64_t seed) {
    require_even_xor(C);
    CheegerReport rep;

    auto [phi, witness] = csp_expansion(C);
    rep.phi = phi;
    rep.phi_witness = witness;

    Gamma2Result g2 = gamma2_estimate(C, restarts, iterations, seed);
    rep.gamma2 = g2.value;
    rep.gamma2_witness = g2.witness;

    int ell = 0;
    for (const Constraint& c : C.constraints) ell = std::max(ell, (int)c.vars.size());
    rep.ell = ell;

    // (a) the balanced-cut seeding makes the estimate at most 2 * phi.
    double m_a = rep.gamma2 - 2.0 * rep.phi;
    rep.checks.push_back({"gamma2_at_most_two_phi", m_a <= kTol, m_a, kTol});

    // (b) two-sided bound: phi <= (2*sqrt(ell/2) + 1) * sqrt(gamma2).
    double coef = 2.0 * std::sqrt(ell / 2.0) + 1.0;
    double m_b = rep.phi - coef * std::sqrt(std::max(rep.gamma2, 0.0));
    rep.checks.push_back({"phi_within_sqrt_gamma2", m_b <= kTol, m_b, kTol});

    // (c) constructive rounding of the estimate's witness.
    rep.constructive = cheeger_upper(C, g2.witness);
    double m_c1 = rep.constructive.phi - rep.constructive.certified_bound;
    rep.checks.push_back({"rounding_meets_certificate", m_c1 <= kTol, m_c1, kTol});
    double m_c2 = rep.phi - rep.constructive.phi;
    rep.checks.push_back({"rounding_at_least_phi", m_c2 <= kTol, m_c2, kTol});
    std::vector<double> w = vertex_weights(C);
    double wV = total(w), wS = 0.0;
    for (int v : rep.constructive.set) wS += w[v];
    double m_c3 = wS - wV / 2.0 - kBalanceSlack;
    rep.checks.push_back({"rounding_balanced", m_c3 <= kTol, m_c3, kTol});

    return rep;
}

} // namespace fieldcsp
