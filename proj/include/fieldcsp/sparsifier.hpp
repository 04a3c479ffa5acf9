#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fieldcsp/codes.hpp"
#include "fieldcsp/csp.hpp"
#include "fieldcsp/ordering.hpp"
#include "fieldcsp/report.hpp"

namespace fieldcsp {

enum class FamilyMode { exhaustive, sampled };

// The structured codeword family: one lifted message per (permutation, gap
// pair), diagonal pairs included. Exhaustive mode enumerates all n!
// permutations (guarded to n <= 7); sampled mode draws permutations with the
// given seed and is heuristic (no for-all-permutations certificate).
struct CodewordFamily {
    struct Tag {
        int perm_index;
        int gap_i;
        int gap_j;
    };

    FamilyMode mode = FamilyMode::exhaustive;
    int n = 0;
    std::vector<Permutation> perms;
    std::vector<Tag> tags;
    std::vector<std::vector<std::uint8_t>> messages;

    std::size_t size() const { return messages.size(); }
};

CodewordFamily build_family(const CspInstance& C, FamilyMode mode, int sample_count,
                            std::uint64_t seed);

struct SparsifierResult {
    std::vector<std::pair<int, double>> kept; // (constraint index, new weight)
    double epsilon = 0.0;
    int attempts = 0;
    std::size_t family_size = 0;
    FamilyMode mode = FamilyMode::exhaustive;
    bool success = false;
    // Worst over family messages of |kept weight - full weight| - eps * full
    // weight; pass means <= 1e-9.
    double worst_margin = 0.0;
    std::string failure_detail;
};

// Reweight a subset of rows of M so that every family codeword keeps its
// weighted Hamming weight within (1 +- eps). Rows with identical entries are
// merged first (their weights add; identical rows are indistinguishable
// coordinates of the code). The rest is importance sampling: row r survives
// with probability p_r = min(1, alpha * w_r / min weight of a family codeword
// hitting r), alpha = kappa * ln(family size + 1) / eps^2, reweighted to
// w_r / p_r, verified over the whole family, retried with a fresh deterministic
// seed on violation. Failure after retry_cap attempts is reported in the
// result, not thrown.
SparsifierResult code_sparsify(const CodeMatrix& M, const CodewordFamily& family,
                               double eps, std::uint64_t seed, double kappa = 12.0,
                               int retry_cap = 16);

// Full pipeline: augment, build the generating matrix, lift it, enumerate the
// family, run code_sparsify, and map kept rows back to the original constraint
// indices (row order is preserved by augmentation and lifting).
SparsifierResult spectral_sparsify(const CspInstance& C, double eps, std::uint64_t seed,
                                   FamilyMode mode = FamilyMode::exhaustive,
                                   int sample_count = 0, double kappa = 12.0,
                                   int retry_cap = 16);

// The reweighted sub-instance described by a result (original constraints,
// new weights).
CspInstance apply_sparsifier(const CspInstance& C, const SparsifierResult& result);

struct SparsifierReport {
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, std::string>> notes;

    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Checks, with worst margins per check (violations are entries, not throws):
//  (a) boolean_values: all 2^n Boolean assignments (guarded to n <= 16),
//      |value_hat - value| <= eps * value + 1e-9;
//  (b) fractional_energy: n_random uniform assignments, same sandwich on
//      energies;
//  (c) family_weights: every exhaustive-family codeword weight preserved
//      within (1 +- eps) + 1e-9, with both instances lifted over the original
//      instance's dummy layout (skipped with a note when the augmented size
//      exceeds the exhaustive guard).
SparsifierReport verify_sparsifier(const CspInstance& C, const CspInstance& Chat,
                                   double eps, int n_random, std::uint64_t seed);

} // namespace fieldcsp
