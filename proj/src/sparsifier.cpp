#include "fieldcsp/sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fieldcsp {

namespace {

constexpr double kTol = 1e-9;

// Rows as sparse (column, coefficient) lists for the hot message loops.
struct SparseRow {
    std::vector<std::pair<int, int>> nz;
};

std::vector<SparseRow> sparse_rows(const CodeMatrix& M) {
    std::vector<SparseRow> rows(M.rows);
    for (int r = 0; r < M.rows; ++r) {
        for (int c = 0; c < M.cols; ++c) {
            int e = M.at(r, c);
            if (e != 0) rows[r].nz.emplace_back(c, e);
        }
    }
    return rows;
}

int dot_mod(const SparseRow& row, const std::vector<std::uint8_t>& msg, int p) {
    long long s = 0;
    for (auto [c, e] : row.nz) {
        if (msg[c]) s += e;
    }
    return mod_reduce(s, p);
}

} // namespace

CodewordFamily build_family(const CspInstance& C, FamilyMode mode, int sample_count,
                            std::uint64_t seed) {
    require_zero_closed(C);
    if (C.n < 2) throw std::invalid_argument("family needs at least two variables");
    CodewordFamily fam;
    fam.mode = mode;
    fam.n = C.n;
    if (mode == FamilyMode::exhaustive) {
        if (C.n > 7)
            throw std::invalid_argument(
                "exhaustive family refused for n > 7; use sampled mode");
        fam.perms = all_permutations(C.n);
    } else {
        if (sample_count <= 0)
            throw std::invalid_argument("sampled mode needs a positive sample count");
        std::mt19937_64 rng(seed);
        Permutation base(C.n);
        std::iota(base.begin(), base.end(), 0);
        for (int s = 0; s < sample_count; ++s) {
            Permutation perm = base;
            std::shuffle(perm.begin(), perm.end(), rng);
            fam.perms.push_back(std::move(perm));
        }
    }
    int gaps = C.n - 1;
    fam.tags.reserve(fam.perms.size() * gaps * gaps);
    fam.messages.reserve(fam.perms.size() * gaps * gaps);
    for (std::size_t pi = 0; pi < fam.perms.size(); ++pi) {
        for (int gi = 0; gi < gaps; ++gi) {
            for (int gj = 0; gj < gaps; ++gj) {
                fam.tags.push_back({static_cast<int>(pi), gi, gj});
                fam.messages.push_back(lifted_message(fam.perms[pi], gi, gj));
            }
        }
    }
    return fam;
}

SparsifierResult code_sparsify(const CodeMatrix& M, const CodewordFamily& family,
                               double eps, std::uint64_t seed, double kappa,
                               int retry_cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    if (family.messages.empty()) throw std::invalid_argument("family is empty");
    if (retry_cap < 1) throw std::invalid_argument("retry cap must be positive");
    for (const auto& msg : family.messages) {
        if (static_cast<int>(msg.size()) != M.cols)
            throw std::invalid_argument("family message width does not match matrix");
    }

    // Merge rows with identical entry vectors; identical rows evaluate
    // identically on every message, so their weights simply add.
    struct Merged {
        int rep;
        double weight;
        SparseRow row;
    };
    std::vector<Merged> merged;
    {
        std::map<std::vector<int>, int> seen;
        for (int r = 0; r < M.rows; ++r) {
            std::vector<int> key(M.entries.begin() + static_cast<std::size_t>(r) * M.cols,
                                 M.entries.begin() +
                                     static_cast<std::size_t>(r + 1) * M.cols);
            auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(merged.size()));
            if (inserted) {
                Merged m;
                m.rep = r;
                m.weight = M.coord_weights[r];
                for (int c = 0; c < M.cols; ++c) {
                    int e = M.at(r, c);
                    if (e != 0) m.row.nz.emplace_back(c, e);
                }
                merged.push_back(std::move(m));
            } else {
                merged[it->second].weight += M.coord_weights[r];
            }
        }
    }
    int mrows = static_cast<int>(merged.size());

    // Full codeword weight per family message, and per merged row the smallest
    // codeword weight among messages that hit it.
    std::vector<double> full_wt(family.size(), 0.0);
    std::vector<double> min_hit(mrows, std::numeric_limits<double>::infinity());
    std::vector<int> hits;
    for (std::size_t v = 0; v < family.size(); ++v) {
        const auto& msg = family.messages[v];
        hits.clear();
        double s = 0.0;
        for (int r = 0; r < mrows; ++r) {
            if (dot_mod(merged[r].row, msg, M.p) != 0) {
                s += merged[r].weight;
                hits.push_back(r);
            }
        }
        full_wt[v] = s;
        for (int r : hits) min_hit[r] = std::min(min_hit[r], s);
    }

    double alpha = kappa * std::log(static_cast<double>(family.size()) + 1.0) / (eps * eps);
    std::vector<double> keep_prob(mrows);
    for (int r = 0; r < mrows; ++r) {
        if (merged[r].weight <= 0.0) {
            keep_prob[r] = 0.0; // weightless rows influence nothing
        } else if (!std::isfinite(min_hit[r])) {
            keep_prob[r] = 1.0; // never hit by the family: keep conservatively
        } else {
            keep_prob[r] = std::min(1.0, alpha * merged[r].weight / min_hit[r]);
        }
    }

    SparsifierResult res;
    res.epsilon = eps;
    res.family_size = family.size();
    res.mode = family.mode;

    std::vector<int> kept_rows;
    std::vector<double> kept_weight(mrows, 0.0);
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        kept_rows.clear();
        std::fill(kept_weight.begin(), kept_weight.end(), 0.0);
        for (int r = 0; r < mrows; ++r) {
            double u = unif(rng);
            if (keep_prob[r] > 0.0 && u < keep_prob[r]) {
                kept_rows.push_back(r);
                kept_weight[r] = merged[r].weight / keep_prob[r];
            }
        }

        double worst = -std::numeric_limits<double>::infinity();
        std::size_t worst_msg = 0;
        for (std::size_t v = 0; v < family.size(); ++v) {
            const auto& msg = family.messages[v];
            double s = 0.0;
            for (int r : kept_rows) {
                if (dot_mod(merged[r].row, msg, M.p) != 0) s += kept_weight[r];
            }
            double margin = std::abs(s - full_wt[v]) - eps * full_wt[v];
            if (margin > worst) {
                worst = margin;
                worst_msg = v;
            }
        }

        res.attempts = attempt + 1;
        res.worst_margin = worst;
        if (worst <= kTol) {
            res.success = true;
            res.kept.clear();
            for (int r : kept_rows) res.kept.emplace_back(merged[r].rep, kept_weight[r]);
            std::sort(res.kept.begin(), res.kept.end());
            return res;
        }
        const CodewordFamily::Tag& t = family.tags[worst_msg];
        res.failure_detail = "worst message perm=" + std::to_string(t.perm_index) +
                             " gaps=(" + std::to_string(t.gap_i) + "," +
                             std::to_string(t.gap_j) + ") margin=" +
                             format_double(worst);
    }
    res.success = false;
    return res;
}

SparsifierResult spectral_sparsify(const CspInstance& C, double eps, std::uint64_t seed,
                                   FamilyMode mode, int sample_count, double kappa,
                                   int retry_cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
    CspInstance aug = augment_instance(C);
    CodeMatrix M = lift(generating_matrix(aug));
    CodewordFamily family = build_family(aug, mode, sample_count, seed);
    // Augmentation preserves constraint order, so merged-row representatives
    // index the original constraint list directly.
    return code_sparsify(M, family, eps, seed + 1, kappa, retry_cap);
}

CspInstance apply_sparsifier(const CspInstance& C, const SparsifierResult& result) {
    std::vector<Constraint> kept;
    kept.reserve(result.kept.size());
    for (auto [idx, w] : result.kept) {
        if (idx < 0 || idx >= static_cast<int>(C.constraints.size()))
            throw std::invalid_argument("kept index out of range");
        Constraint c = C.constraints[idx];
        c.weight = w;
        kept.push_back(std::move(c));
    }
    return make_instance(C.n, C.p.p, std::move(kept), false);
}

SparsifierReport verify_sparsifier(const CspInstance& C, const CspInstance& Chat,
                                   double eps, int n_random, std::uint64_t seed) {
    if (C.n != Chat.n) throw std::invalid_argument("variable counts differ");
    if (C.p.p != Chat.p.p) throw std::invalid_argument("moduli differ");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    SparsifierReport rep;

    auto sandwich = [eps](double reference, double got) {
        // Worst-side violation of got in (1 +- eps) * reference.
        return std::max(got - (1.0 + eps) * reference, (1.0 - eps) * reference - got);
    };

    // (a) Boolean values, exhaustively.
    if (C.n <= 16) {
        double worst = -std::numeric_limits<double>::infinity();
        BooleanAssignment x(C.n, 0);
        for (std::uint64_t mask = 0; mask < (1ull << C.n); ++mask) {
            for (int i = 0; i < C.n; ++i) x[i] = (mask >> i) & 1;
            worst = std::max(worst, sandwich(csp_value(C, x), csp_value(Chat, x)));
        }
        rep.checks.push_back({"boolean_values", worst <= kTol, worst, kTol});
    } else {
        rep.notes.emplace_back("boolean_values", "skipped: n exceeds exhaustive guard");
    }

    // (b) Random fractional energies.
    if (n_random > 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double worst = -std::numeric_limits<double>::infinity();
        FractionalAssignment x(C.n);
        for (int t = 0; t < n_random; ++t) {
            for (int i = 0; i < C.n; ++i) x[i] = unif(rng);
            worst = std::max(worst, sandwich(energy(C, x), energy(Chat, x)));
        }
        rep.checks.push_back({"fractional_energy", worst <= kTol, worst, kTol});
    }

    // (c) Exhaustive family codeword weights, both instances lifted over the
    // original instance's dummy layout.
    bool two = augment_uses_two_dummies(C);
    int n_aug = C.n + (two ? 2 : 1);
    if (n_aug <= 7) {
        CspInstance caug = augment_instance_layout(C, two);
        CspInstance haug = augment_instance_layout(Chat, two);
        CodeMatrix Mc = lift(generating_matrix(caug));
        CodeMatrix Mh = lift(generating_matrix(haug));
        CodewordFamily family = build_family(caug, FamilyMode::exhaustive, 0, seed);
        std::vector<SparseRow> rc = sparse_rows(Mc);
        std::vector<SparseRow> rh = sparse_rows(Mh);
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& msg : family.messages) {
            double wc = 0.0, wh = 0.0;
            for (int r = 0; r < Mc.rows; ++r) {
                if (dot_mod(rc[r], msg, Mc.p) != 0) wc += Mc.coord_weights[r];
            }
            for (int r = 0; r < Mh.rows; ++r) {
                if (dot_mod(rh[r], msg, Mh.p) != 0) wh += Mh.coord_weights[r];
            }
            worst = std::max(worst, sandwich(wc, wh));
        }
        rep.checks.push_back({"family_weights", worst <= kTol, worst, kTol});
    } else {
        rep.notes.emplace_back("family_weights",
                               "skipped: augmented size exceeds exhaustive guard");
    }
    return rep;
}

} // namespace fieldcsp
