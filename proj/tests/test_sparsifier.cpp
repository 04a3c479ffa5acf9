#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fieldcsp/codes.hpp"
#include "fieldcsp/csp.hpp"
#include "fieldcsp/generate.hpp"
#include "fieldcsp/sparsifier.hpp"

using namespace fieldcsp;

namespace {

const CheckResult* find_check(const SparsifierReport& rep, const std::string& name) {
    for (const CheckResult& c : rep.checks)
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace

TEST_CASE("family enumeration") {
    CspInstance C = augment_instance(generate_random(3, 5, 2, 2, 0.5, 2.0, 5));
    REQUIRE(C.n <= 5);
    std::size_t nfact = 1;
    for (int k = 2; k <= C.n; ++k) nfact *= k;
    CodewordFamily fam = build_family(C, FamilyMode::exhaustive, 0, 0);
    CHECK(fam.perms.size() == nfact);
    CHECK(fam.size() == nfact * (C.n - 1) * (C.n - 1));
    REQUIRE(fam.tags.size() == fam.size());
    for (std::size_t k = 0; k < fam.size(); k += 37) {
        const auto& tag = fam.tags[k];
        CHECK(fam.messages[k] ==
              lifted_message(fam.perms[tag.perm_index], tag.gap_i, tag.gap_j));
    }

    CodewordFamily s1 = build_family(C, FamilyMode::sampled, 10, 42);
    CodewordFamily s2 = build_family(C, FamilyMode::sampled, 10, 42);
    CHECK(s1.perms.size() == 10);
    CHECK(s1.size() == 10u * (C.n - 1) * (C.n - 1));
    CHECK(s1.messages == s2.messages);

    CspInstance open = generate_random(3, 5, 3, 2, 0.5, 2.0, 5);
    CHECK_THROWS_AS(build_family(open, FamilyMode::exhaustive, 0, 0),
                    std::invalid_argument);
    CspInstance big = augment_instance(generate_random(7, 4, 2, 3, 0.5, 2.0, 5));
    CHECK(big.n >= 8);
    CHECK_THROWS_AS(build_family(big, FamilyMode::exhaustive, 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_family(C, FamilyMode::sampled, 0, 0),
                    std::invalid_argument);
}

TEST_CASE("reweighted rows preserve every family codeword weight") {
    std::mt19937_64 rng(307);
    const double eps = 0.2;
    for (int p : {2, 3}) {
        CspInstance C =
            augment_instance(generate_random(3, 60, p, 2, 0.5, 2.0, rng()));
        CodeMatrix M = lift(generating_matrix(C));
        CodewordFamily fam = build_family(C, FamilyMode::exhaustive, 0, 0);
        SparsifierResult res = code_sparsify(M, fam, eps, rng());
        REQUIRE(res.success);
        CHECK(res.worst_margin <= 1e-9);
        CHECK(res.family_size == fam.size());

        // Independent re-verification through the code-weight route.
        CodeMatrix kept = M;
        kept.coord_weights.assign(M.rows, 0.0);
        for (auto [idx, w] : res.kept) {
            REQUIRE(idx >= 0);
            REQUIRE(idx < M.rows);
            CHECK(w > 0.0);
            kept.coord_weights[idx] = w;
        }
        for (const auto& msg : fam.messages) {
            double full = codeword_weight(M, msg);
            double thin = codeword_weight(kept, msg);
            CHECK(std::abs(thin - full) <= eps * full + 1e-9);
        }
    }
}

TEST_CASE("identical constraints collapse to one carrier row") {
    std::vector<Constraint> cs(50, make_constraint(2, {0, 2}, {1, 1}, 0, 1.25));
    CspInstance C = make_instance(3, 2, cs);
    SparsifierResult res = spectral_sparsify(C, 0.1, 7);
    REQUIRE(res.success);
    REQUIRE(res.kept.size() == 1);
    double total = 0.0;
    for (auto [idx, w] : res.kept) total += w;
    CHECK(std::abs(total - 50 * 1.25) <= 1e-9);

    CspInstance thin = apply_sparsifier(C, res);
    std::mt19937_64 rng(311);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // The merged row accumulates one product where the original sums fifty,
    // so agreement is at roundoff scale, not bitwise.
    for (int t = 0; t < 200; ++t) {
        FractionalAssignment x(3);
        for (double& v : x) v = unit(rng);
        CHECK(std::abs(energy(thin, x) - energy(C, x)) <= 1e-12);
    }
}

TEST_CASE("full pipeline passes its own verifier") {
    std::mt19937_64 rng(331);
    for (int p : {2, 3}) {
        CspInstance C = generate_random(4, 50, p, 2, 0.5, 2.0, rng());
        SparsifierResult res = spectral_sparsify(C, 0.25, rng());
        REQUIRE(res.success);
        CHECK(res.kept.size() <= C.constraints.size());

        CspInstance thin = apply_sparsifier(C, res);
        CHECK(thin.n == C.n);
        for (std::size_t k = 0; k < res.kept.size(); ++k) {
            const Constraint& orig = C.constraints[res.kept[k].first];
            const Constraint& got = thin.constraints[k];
            CHECK(got.vars == orig.vars);
            CHECK(got.coeffs == orig.coeffs);
            CHECK(got.offset == orig.offset);
            CHECK(got.weight == res.kept[k].second);
        }

        SparsifierReport rep = verify_sparsifier(C, thin, 0.25, 200, rng());
        for (const CheckResult& c : rep.checks) CHECK(c.pass);
        CHECK(find_check(rep, "boolean_values") != nullptr);
        CHECK(find_check(rep, "fractional_energy") != nullptr);
        CHECK(find_check(rep, "family_weights") != nullptr);
        CHECK(rep.all_pass());
    }
}

TEST_CASE("verifier rejects an inflated reweighting") {
    CspInstance C = generate_random(4, 50, 2, 2, 0.5, 2.0, 991);
    SparsifierResult res = spectral_sparsify(C, 0.1, 991);
    REQUIRE(res.success);

    SparsifierResult bloated = res;
    for (auto& [idx, w] : bloated.kept) w *= 2.0;
    CspInstance bad = apply_sparsifier(C, bloated);
    SparsifierReport rep = verify_sparsifier(C, bad, 0.1, 50, 3);
    CHECK(!rep.all_pass());
    const CheckResult* fam = find_check(rep, "family_weights");
    REQUIRE(fam != nullptr);
    CHECK(!fam->pass);
    CHECK(fam->margin > 0.0);

    // Same-instance comparison is clean by construction.
    SparsifierReport self = verify_sparsifier(C, C, 0.1, 50, 3);
    CHECK(self.all_pass());
}

TEST_CASE("parameter validation") {
    CspInstance C = generate_random(3, 5, 2, 2, 0.5, 2.0, 1);
    CHECK_THROWS_AS(spectral_sparsify(C, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(spectral_sparsify(C, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_sparsifier(C, generate_random(4, 5, 2, 2, 0.5, 2.0, 1),
                                      0.1, 10, 0),
                    std::invalid_argument);

    CspInstance A = augment_instance(C);
    CodeMatrix M = lift(generating_matrix(A));
    CodewordFamily fam = build_family(A, FamilyMode::exhaustive, 0, 0);
    CHECK_THROWS_AS(code_sparsify(M, fam, 0.5, 0, 12.0, 0), std::invalid_argument);
    CodewordFamily empty = fam;
    empty.messages.clear();
    CHECK_THROWS_AS(code_sparsify(M, empty, 0.5, 0), std::invalid_argument);
    CodeMatrix narrow = generating_matrix(A);
    CHECK_THROWS_AS(code_sparsify(narrow, fam, 0.5, 0), std::invalid_argument);
}
