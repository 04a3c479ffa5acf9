#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fieldcsp/cheeger.hpp"
#include "fieldcsp/csp.hpp"
#include "fieldcsp/generate.hpp"

using namespace fieldcsp;

namespace {

Constraint edge(int u, int v, double w = 1.0) {
    return make_constraint(2, {u, v}, {1, 1}, 0, w);
}

CspInstance four_cycle() {
    return make_instance(4, 2, {edge(0, 1), edge(1, 2), edge(2, 3), edge(0, 3)});
}

// Mask-level re-derivation of the exhaustive expansion minimum.
std::pair<double, std::uint32_t> expansion_oracle(const CspInstance& C) {
    std::vector<double> w = vertex_weights(C);
    double wV = 0.0;
    for (double x : w) wV += x;
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask < (1u << C.n); ++mask) {
        double wS = 0.0;
        BooleanAssignment x(C.n, 0);
        for (int v = 0; v < C.n; ++v)
            if ((mask >> v) & 1u) {
                wS += w[v];
                x[v] = 1;
            }
        if (!(wS > 0.0) || wS > wV / 2 + 1e-12) continue;
        double cut = 0.0;
        for (const Constraint& c : C.constraints)
            if (eval_constraint(c, x, 2)) cut += c.weight;
        double phi = cut / wS;
        if (phi < best) {
            best = phi;
            best_mask = mask;
        }
    }
    return {best, best_mask};
}

// Layer-cake route to the level-set energy of a nonnegative potential: sum of
// (s[i+1] - s[i]) over even 0-based i of the ascending support values.
double level_energy_oracle(const Constraint& c, const std::vector<double>& h) {
    std::vector<double> s;
    for (int v : c.vars) s.push_back(h[v]);
    std::sort(s.begin(), s.end());
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); i += 2) q += s[i + 1] - s[i];
    return q;
}

std::vector<double> orthogonalize(const CspInstance& C, std::vector<double> f) {
    std::vector<double> w = vertex_weights(C);
    double wV = 0.0, dot = 0.0;
    for (int v = 0; v < C.n; ++v) {
        wV += w[v];
        dot += w[v] * f[v];
    }
    for (double& x : f) x -= dot / wV;
    return f;
}

} // namespace

TEST_CASE("even parity detection") {
    CHECK(is_even_xor(four_cycle()));
    CHECK_NOTHROW(require_even_xor(four_cycle()));

    CspInstance odd = make_instance(3, 2,
                                    {make_constraint(2, {0, 1, 2}, {1, 1, 1}, 0, 1.0)});
    CHECK(!is_even_xor(odd));
    CspInstance shifted = make_instance(2, 2,
                                        {make_constraint(2, {0, 1}, {1, 1}, 1, 1.0)});
    CHECK(!is_even_xor(shifted));
    CspInstance ternary = make_instance(2, 3,
                                        {make_constraint(3, {0, 1}, {1, 2}, 0, 1.0)});
    CHECK(!is_even_xor(ternary));
    CHECK_THROWS_AS(require_even_xor(odd), std::invalid_argument);
}

TEST_CASE("vertex weights sum incident constraint weights") {
    std::mt19937_64 rng(401);
    CspInstance C = generate_even_xor(7, 12, 4, 0.5, 2.0, rng(), false);
    std::vector<double> w = vertex_weights(C);
    REQUIRE((int)w.size() == 7);
    for (int v = 0; v < 7; ++v) {
        double want = 0.0;
        for (const Constraint& c : C.constraints)
            if (std::binary_search(c.vars.begin(), c.vars.end(), v))
                want += c.weight;
        CHECK(w[v] == want);
    }
}

TEST_CASE("four-cycle expansion") {
    CspInstance C = four_cycle();
    CHECK(boundary(C, {0, 1}) == std::vector<int>{1, 3});
    CHECK(expansion(C, {0, 1}) == 0.5);
    CHECK(expansion(C, {0}) == 1.0);
    CHECK(expansion(C, {0, 2}) == 1.0);

    auto [phi, witness] = csp_expansion(C);
    CHECK(phi == 0.5);
    CHECK(witness == CutSet{0, 1});

    CHECK_THROWS_AS(expansion(C, {}), std::invalid_argument);
    CHECK_THROWS_AS(boundary(C, {7}), std::invalid_argument);
}

TEST_CASE("exhaustive expansion matches the mask oracle") {
    std::mt19937_64 rng(409);
    for (int trial = 0; trial < 8; ++trial) {
        CspInstance C = generate_even_xor(5, 9, 2, 0.5, 2.0, rng(), true);
        auto [phi, witness] = csp_expansion(C);
        auto [want, mask] = expansion_oracle(C);
        CHECK(phi == want);
        CHECK(expansion(C, witness) == phi);
        (void)mask;
    }
}

TEST_CASE("pair energy is the potential gap") {
    std::mt19937_64 rng(419);
    std::uniform_real_distribution<double> span(-2.0, 2.0);
    Constraint c = edge(1, 3);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> f(5);
        for (double& x : f) x = span(rng);
        CHECK(general_energy(c, 2, f) ==
              doctest::Approx(std::abs(f[1] - f[3])).epsilon(1e-12));
    }
    CHECK(general_energy(c, 2, std::vector<double>(5, 0.7)) == 0.0);
}

TEST_CASE("level-set energy: additivity, shift invariance, layer cake") {
    std::mt19937_64 rng(421);
    std::uniform_real_distribution<double> span(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        int arity = (trial % 2) ? 2 : 4;
        CspInstance C = generate_even_xor(6, 5, arity, 0.5, 2.0, rng(), false);
        std::vector<double> g(6);
        for (double& x : g) x = span(rng);
        std::vector<double> gp(6), gn(6);
        for (int v = 0; v < 6; ++v) {
            gp[v] = std::max(g[v], 0.0);
            gn[v] = std::max(-g[v], 0.0);
        }
        for (const Constraint& c : C.constraints) {
            double q = general_energy(c, 2, g);
            CHECK(q == doctest::Approx(general_energy(c, 2, gp) +
                                       general_energy(c, 2, gn))
                           .epsilon(1e-12));

            std::vector<double> shifted = g;
            for (double& x : shifted) x += 0.37;
            CHECK(general_energy(c, 2, shifted) == doctest::Approx(q).epsilon(1e-12));

            CHECK(general_energy(c, 2, gp) ==
                  doctest::Approx(level_energy_oracle(c, gp)).epsilon(1e-12));
        }
    }
}

TEST_CASE("discrepancy of the single balanced edge") {
    CspInstance C = make_instance(2, 2, {edge(0, 1)});
    CHECK(discrepancy(C, {1.0, -1.0}) == 2.0);
    CHECK_THROWS_AS(discrepancy(C, {0.0, 0.0}), std::domain_error);

    Gamma2Result g = gamma2_estimate(C, 8, 60, 1);
    CHECK(std::abs(g.value - 2.0) <= 1e-9);
    CHECK(discrepancy(C, g.witness) == g.value);

    auto [phi, witness] = csp_expansion(C);
    CHECK(phi == 1.0);
}

TEST_CASE("balanced cut seeds dominate the spectral estimate") {
    std::mt19937_64 rng(431);
    for (int trial = 0; trial < 6; ++trial) {
        CspInstance C = generate_even_xor(6, 10, 2, 0.5, 2.0, rng(), true);
        std::vector<double> w = vertex_weights(C);
        double wV = 0.0;
        for (double x : w) wV += x;

        auto [phi, phiset] = csp_expansion(C);

        // Every feasible balanced-cut potential sits at or below twice its own
        // expansion, so the estimator seeded with them lands under 2 phi.
        for (std::uint32_t mask = 1; mask + 1 < (1u << 6); ++mask) {
            double wS = 0.0;
            for (int v = 0; v < 6; ++v)
                if ((mask >> v) & 1u) wS += w[v];
            if (!(wS > 0.0) || wS > wV / 2 + 1e-12) continue;
            std::vector<double> f(6);
            CutSet S;
            for (int v = 0; v < 6; ++v) {
                bool in = (mask >> v) & 1u;
                if (in) S.push_back(v);
                f[v] = (in ? 1.0 : 0.0) - wS / wV;
            }
            CHECK(discrepancy(C, f) <= 2.0 * expansion(C, S) + 1e-9);
        }

        Gamma2Result g = gamma2_estimate(C, 4, 40, rng());
        CHECK(g.value <= 2.0 * phi + 1e-9);
        CHECK(discrepancy(C, g.witness) == g.value);
        double dot = 0.0;
        for (int v = 0; v < 6; ++v) dot += w[v] * g.witness[v];
        CHECK(std::abs(dot) <= 1e-9);

        // More restarts explore a superset of starts under the same seed.
        Gamma2Result more = gamma2_estimate(C, 12, 40, 5);
        Gamma2Result fewer = gamma2_estimate(C, 3, 40, 5);
        CHECK(more.value <= fewer.value + 1e-12);
    }
}

TEST_CASE("sweep rounding meets its ratio bound") {
    std::mt19937_64 rng(433);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        CspInstance C = generate_even_xor(6, 9, 2, 0.5, 2.0, rng(), true);
        std::vector<double> f(6);
        for (double& x : f) x = (trial % 3 == 0 && &x == &f[0]) ? 0.0 : unit(rng);
        SweepResult res = sweep_round(C, f);
        REQUIRE(!res.set.empty());
        for (int v : res.set) CHECK(f[v] > 0.0);
        CHECK(res.phi == expansion(C, res.set));
        CHECK(res.phi <= res.ratio_bound + 1e-9);

        // Recompute the ratio bound from first principles.
        std::vector<double> w = vertex_weights(C);
        double num = 0.0, den = 0.0;
        for (const Constraint& c : C.constraints)
            num += c.weight * general_energy(c, 2, f);
        for (int v = 0; v < 6; ++v) den += w[v] * f[v];
        CHECK(res.ratio_bound == doctest::Approx(num / den).epsilon(1e-12));
    }
    CspInstance C = four_cycle();
    CHECK_THROWS_AS(sweep_round(C, {-0.1, 0.2, 0.3, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_round(C, {0.0, 0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("constructive rounding of orthogonal potentials") {
    std::mt19937_64 rng(439);
    std::uniform_real_distribution<double> span(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        int arity = (trial % 2) ? 2 : 4;
        CspInstance C = generate_even_xor(6, 10, arity, 0.5, 2.0, rng(), true);
        std::vector<double> f(6);
        for (double& x : f) x = span(rng);
        f = orthogonalize(C, f);

        UpperResult res = cheeger_upper(C, f);
        REQUIRE(!res.set.empty());
        CHECK(res.phi == expansion(C, res.set));
        CHECK(res.phi <= res.certified_bound + 1e-9);
        CHECK(res.dw <= discrepancy(C, f) + 1e-9);

        int ell = 0;
        for (const Constraint& c : C.constraints)
            ell = std::max(ell, (int)c.vars.size());
        CHECK(res.certified_bound ==
              doctest::Approx(res.dw + 2.0 * std::sqrt(ell / 2.0) * std::sqrt(res.dw))
                  .epsilon(1e-12));

        std::vector<double> w = vertex_weights(C);
        double wV = 0.0, wS = 0.0;
        for (double x : w) wV += x;
        for (int v : res.set) wS += w[v];
        CHECK(wS <= wV / 2 + 1e-12);
    }
    CspInstance C = four_cycle();
    CHECK_THROWS_AS(cheeger_upper(C, {1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("square-versus-level-set margins") {
    Constraint c4 = make_constraint(2, {0, 1, 2, 3}, {1, 1, 1, 1}, 0, 1.0);
    auto [m1, m2] = appendix_inequalities(c4, 2, {1.0, 1.0, 1.0, 1.0});
    CHECK(m1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(4.0).epsilon(1e-12));

    std::mt19937_64 rng(443);
    std::uniform_real_distribution<double> unit(0.0, 2.0);
    Constraint c2 = edge(0, 1);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> h = {unit(rng), unit(rng)};
        auto [a, b] = appendix_inequalities(c2, 2, h);
        // Pairs make the first inequality an identity.
        CHECK(std::abs(a) <= 1e-12);
        CHECK(b >= -1e-12);
    }
    for (int t = 0; t < 500; ++t) {
        std::vector<double> h(6);
        for (double& x : h) x = unit(rng);
        if (t % 4 == 0) h[1] = h[0];
        Constraint c = make_constraint(2, {0, 2, 3, 5}, {1, 1, 1, 1}, 0, 1.0);
        auto [a, b] = appendix_inequalities(c, 2, h);
        CHECK(a >= -1e-12);
        CHECK(b >= -1e-12);
    }
    CHECK_THROWS_AS(appendix_inequalities(c4, 2, {-1.0, 0.0, 0.0, 0.0}),
                    std::invalid_argument);
    Constraint odd = make_constraint(2, {0, 1, 2}, {1, 1, 1}, 0, 1.0);
    CHECK_THROWS_AS(appendix_inequalities(odd, 2, {0.0, 0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("two-sided bound report") {
    CspInstance single = make_instance(2, 2, {edge(0, 1)});
    CheegerReport rep = verify_cheeger(single, 8, 60, 1);
    CHECK(rep.phi == 1.0);
    CHECK(std::abs(rep.gamma2 - 2.0) <= 1e-9);
    CHECK(rep.ell == 2);
    CHECK(rep.all_pass());

    std::vector<std::string> names;
    for (const CheckResult& c : rep.checks) names.push_back(c.name);
    for (const char* want :
         {"gamma2_at_most_two_phi", "phi_within_sqrt_gamma2",
          "rounding_meets_certificate", "rounding_at_least_phi",
          "rounding_balanced"})
        CHECK(std::find(names.begin(), names.end(), want) != names.end());

    std::mt19937_64 rng(449);
    for (int trial = 0; trial < 4; ++trial) {
        int arity = (trial % 2) ? 2 : 4;
        CspInstance C = generate_even_xor(6, 8, arity, 0.5, 2.0, rng(), true);
        CheegerReport r = verify_cheeger(C, 6, 50, rng());
        CHECK(r.all_pass());
        CHECK(r.phi == csp_expansion(C).first);
        CHECK(r.constructive.phi >= r.phi - 1e-12);
    }
}

TEST_CASE("size and coverage guards") {
    CspInstance wide = make_instance(21, 2, {edge(0, 1)});
    CHECK_THROWS_AS(csp_expansion(wide), std::domain_error);

    CspInstance mid = make_instance(13, 2, {edge(0, 1)});
    CHECK_THROWS_AS(gamma2_estimate(mid, 1, 10, 0), std::domain_error);

    CspInstance uncovered = make_instance(3, 2, {edge(0, 1)});
    CHECK_THROWS_AS(gamma2_estimate(uncovered, 1, 10, 0), std::domain_error);

    CspInstance ok = make_instance(2, 2, {edge(0, 1)});
    CHECK_THROWS_AS(gamma2_estimate(ok, -1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(gamma2_estimate(ok, 1, 0, 0), std::invalid_argument);
}
