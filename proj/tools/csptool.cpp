// csptool: generate, inspect, sparsify, and verify field-affine CSP instances.
//
// Every subcommand prints a deterministic report to stdout (text by default,
// one JSON object with --json) and wall time to stderr, and exits 0 when all
// checks pass, 1 when a check fails, 2 on usage or input errors.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fieldcsp/cheeger.hpp"
#include "fieldcsp/codes.hpp"
#include "fieldcsp/csp.hpp"
#include "fieldcsp/generate.hpp"
#include "fieldcsp/io.hpp"
#include "fieldcsp/ordering.hpp"
#include "fieldcsp/report.hpp"
#include "fieldcsp/sparsifier.hpp"

namespace {

using namespace fieldcsp;

constexpr double kTol = 1e-9;

struct StderrTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~StderrTimer() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::fprintf(stderr, "elapsed_ms=%lld\n", (long long)ms);
    }
};

int emit(const RunReport& r, bool json) {
    std::string out = json ? render_json(r) + "\n" : render_text(r);
    std::fputs(out.c_str(), stdout);
    return r.all_pass() ? 0 : 1;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size())
            throw std::runtime_error("bad number '" + tok + "' in list");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<int> parse_csv_ints(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_csv_doubles(s)) {
        if (v != (double)(int)v) throw std::runtime_error("expected integers in list");
        out.push_back((int)v);
    }
    return out;
}

// Exact mean over thresholds of the rounded Boolean value; agrees with the
// weighted satisfaction-probability sum, giving two independent routes.
double mean_rounded_value(const CspInstance& C, const FractionalAssignment& x) {
    std::vector<double> vals{0.0, 1.0};
    vals.insert(vals.end(), x.begin(), x.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < vals.size(); ++t) {
        double hi = vals[t + 1];
        total += (hi - vals[t]) * csp_value(C, round_assignment(x, hi));
    }
    return total;
}

double weighted_sat_sum(const CspInstance& C, const FractionalAssignment& x) {
    double s = 0.0;
    for (const Constraint& c : C.constraints) s += c.weight * sat_prob(c, C.p.p, x);
    return s;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

struct GenArgs {
    std::string out;
    int n = 6, m = 20, p = 2, arity = 2;
    double wmin = 0.5, wmax = 2.0;
    std::uint64_t seed = 0;
    bool even_xor = false, cover = false, json = false;
};

int run_gen(const GenArgs& a) {
    if (a.even_xor && a.p != 2)
        throw std::runtime_error("--even-xor forces --p 2");
    CspInstance C = a.even_xor
                        ? generate_even_xor(a.n, a.m, a.arity, a.wmin, a.wmax, a.seed,
                                            a.cover)
                        : generate_random(a.n, a.m, a.p, a.arity, a.wmin, a.wmax, a.seed);
    save_instance_file(C, a.out);
    RunReport r;
    r.command = "gen";
    r.add_param("n", std::to_string(a.n));
    r.add_param("m", std::to_string(a.m));
    r.add_param("p", std::to_string(a.even_xor ? 2 : a.p));
    r.add_param("arity", std::to_string(a.arity));
    r.add_param("wmin", format_double(a.wmin));
    r.add_param("wmax", format_double(a.wmax));
    r.add_param("even_xor", a.even_xor ? "true" : "false");
    r.add_param("cover", a.cover ? "true" : "false");
    r.has_seed = true;
    r.seed = a.seed;
    r.add_info("out", a.out);
    return emit(r, a.json);
}

struct EnergyArgs {
    std::string file;
    std::string assign = "all-boolean";
    std::uint64_t seed = 0;
    bool json = false;
};

int run_energy(const EnergyArgs& a) {
    CspInstance C = load_instance_file(a.file);
    RunReport r;
    r.command = "energy";
    r.add_param("file", a.file);
    r.add_param("assign", a.assign);
    r.add_info("n", std::to_string(C.n));
    r.add_info("m", std::to_string(C.constraints.size()));
    r.add_info("p", std::to_string(C.p.p));

    if (a.assign == "all-boolean") {
        if (C.n > 16) throw std::runtime_error("all-boolean needs n <= 16");
        double worst = 0.0, vmin = 0.0, vmax = 0.0;
        const std::uint32_t top = 1u << C.n;
        for (std::uint32_t mask = 0; mask < top; ++mask) {
            BooleanAssignment b(C.n);
            FractionalAssignment x(C.n);
            for (int i = 0; i < C.n; ++i) {
                b[i] = (mask >> i) & 1u;
                x[i] = b[i];
            }
            double val = csp_value(C, b);
            double en = energy(C, x);
            worst = std::max(worst, std::abs(en - val));
            if (mask == 0) {
                vmin = vmax = val;
            } else {
                vmin = std::min(vmin, val);
                vmax = std::max(vmax, val);
            }
        }
        r.add_info("assignments", std::to_string(top));
        r.add_info("min_value", format_double(vmin));
        r.add_info("max_value", format_double(vmax));
        r.add_check({"boolean_energy_equals_value", worst <= kTol, worst, kTol});
    } else if (a.assign.rfind("random:", 0) == 0) {
        int k = std::stoi(a.assign.substr(7));
        if (k < 1) throw std::runtime_error("random sample count must be positive");
        r.has_seed = true;
        r.seed = a.seed;
        std::mt19937_64 rng(a.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0, emin = 0.0, emax = 0.0;
        for (int t = 0; t < k; ++t) {
            FractionalAssignment x(C.n);
            for (double& v : x) v = unit(rng);
            double en = energy(C, x);
            double diff = std::abs(mean_rounded_value(C, x) - weighted_sat_sum(C, x));
            worst = std::max(worst, diff);
            if (t == 0) {
                emin = emax = en;
            } else {
                emin = std::min(emin, en);
                emax = std::max(emax, en);
            }
        }
        r.add_info("samples", std::to_string(k));
        r.add_info("min_energy", format_double(emin));
        r.add_info("max_energy", format_double(emax));
        r.add_check({"threshold_mean_matches_sat_sum", worst <= kTol, worst, kTol});
    } else {
        FractionalAssignment x = parse_csv_doubles(a.assign);
        check_fractional(x, C.n);
        double en = energy(C, x);
        r.add_info("energy", format_double(en));
        double diff = std::abs(mean_rounded_value(C, x) - weighted_sat_sum(C, x));
        r.add_check({"threshold_mean_matches_sat_sum", diff <= kTol, diff, kTol});
        bool boolean = true;
        for (double v : x)
            if (v != 0.0 && v != 1.0) boolean = false;
        if (boolean) {
            BooleanAssignment b(x.begin(), x.end());
            double val = csp_value(C, b);
            r.add_info("value", format_double(val));
            double d2 = std::abs(en - val);
            r.add_check({"boolean_energy_equals_value", d2 <= kTol, d2, kTol});
        }
    }
    return emit(r, a.json);
}

struct SparsifyArgs {
    std::string file, mode = "exhaustive", out;
    double eps = 0.1, kappa = 12.0;
    std::uint64_t seed = 0;
    int retry_cap = 16;
    bool json = false;
};

int run_sparsify(const SparsifyArgs& a) {
    CspInstance C = load_instance_file(a.file);
    FamilyMode mode = FamilyMode::exhaustive;
    int sample_count = 0;
    if (a.mode.rfind("sampled:", 0) == 0) {
        mode = FamilyMode::sampled;
        sample_count = std::stoi(a.mode.substr(8));
    } else if (a.mode != "exhaustive") {
        throw std::runtime_error("--mode must be 'exhaustive' or 'sampled:<count>'");
    }
    SparsifierResult res =
        spectral_sparsify(C, a.eps, a.seed, mode, sample_count, a.kappa, a.retry_cap);
    RunReport r;
    r.command = "sparsify";
    r.add_param("file", a.file);
    r.add_param("eps", format_double(a.eps));
    r.add_param("mode", a.mode);
    r.add_param("kappa", format_double(a.kappa));
    r.has_seed = true;
    r.seed = a.seed;
    r.add_info("m_before", std::to_string(C.constraints.size()));
    r.add_info("m_after", std::to_string(res.kept.size()));
    r.add_info("family_size", std::to_string(res.family_size));
    r.add_info("attempts", std::to_string(res.attempts));
    if (mode == FamilyMode::sampled)
        r.add_info("certificate", "sampled permutations only; heuristic");
    if (!res.failure_detail.empty()) r.add_info("failure", res.failure_detail);
    r.add_check({"family_weights_within_eps", res.success, res.worst_margin, kTol});
    if (!a.out.empty() && res.success) {
        save_instance_file(apply_sparsifier(C, res), a.out);
        r.add_info("out", a.out);
    }
    return emit(r, a.json);
}

struct VerifyArgs {
    std::string file, sparsified;
    double eps = 0.1;
    std::uint64_t seed = 0;
    int n_random = 100;
    bool json = false;
};

int run_verify(const VerifyArgs& a) {
    CspInstance C = load_instance_file(a.file);
    RunReport r;
    r.command = "verify";
    r.add_param("file", a.file);
    r.add_param("eps", format_double(a.eps));
    r.add_param("random", std::to_string(a.n_random));
    r.has_seed = true;
    r.seed = a.seed;
    CspInstance Chat = C;
    if (!a.sparsified.empty()) {
        Chat = load_instance_file(a.sparsified);
        r.add_param("sparsified", a.sparsified);
        r.add_info("m_after", std::to_string(Chat.constraints.size()));
    } else {
        SparsifierResult res = spectral_sparsify(C, a.eps, a.seed);
        if (!res.success) {
            r.add_info("failure", res.failure_detail);
            r.add_check({"sparsifier_succeeded", false, res.worst_margin, kTol});
            return emit(r, a.json);
        }
        Chat = apply_sparsifier(C, res);
        r.add_info("m_after", std::to_string(Chat.constraints.size()));
    }
    SparsifierReport rep = verify_sparsifier(C, Chat, a.eps, a.n_random, a.seed);
    for (const auto& [k, v] : rep.notes) r.add_info(k, v);
    for (const CheckResult& c : rep.checks) r.add_check(c);
    return emit(r, a.json);
}

struct MatricesArgs {
    std::string file, perm = "id";
    std::uint64_t seed = 0;
    bool json = false;
};

int run_matrices(const MatricesArgs& a) {
    CspInstance C = load_instance_file(a.file);
    RunReport r;
    r.command = "matrices";
    r.add_param("file", a.file);
    r.add_param("perm", a.perm);
    r.has_seed = true;
    r.seed = a.seed;
    if (!is_zero_closed(C)) {
        C = augment_instance(C);
        r.add_info("augmented", "true");
    }
    r.add_info("n", std::to_string(C.n));
    if (C.n < 2) throw std::runtime_error("matrix checks need n >= 2");

    std::vector<Permutation> perms;
    if (a.perm == "id") {
        Permutation id(C.n);
        for (int i = 0; i < C.n; ++i) id[i] = i;
        perms.push_back(id);
    } else if (a.perm == "all") {
        if (C.n > 7) throw std::runtime_error("--perm all needs n <= 7");
        perms = all_permutations(C.n);
    } else {
        perms.push_back(parse_csv_ints(a.perm));
        check_permutation(perms.back(), C.n);
    }

    if (perms.size() == 1) {
        Eigen::MatrixXi B = incidence_matrix(C, perms[0]);
        Eigen::MatrixXi X = crossing_matrix(C, perms[0]);
        for (int row = 0; row < B.rows(); ++row) {
            std::vector<int> vals(B.cols());
            for (int col = 0; col < B.cols(); ++col) vals[col] = B(row, col);
            r.add_info("b_inc." + std::to_string(row), join_ints(vals));
        }
        for (int row = 0; row < X.rows(); ++row) {
            std::vector<int> vals(X.cols());
            for (int col = 0; col < X.cols(); ++col) vals[col] = X(row, col);
            r.add_info("b_cross." + std::to_string(row), join_ints(vals));
        }
    }

    int factor_fail = 0;
    double gram_worst = 0.0, qf_worst = 0.0;
    std::mt19937_64 rng(a.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const Permutation& perm : perms) {
        if (!verify_factorization(C, perm)) ++factor_fail;

        Eigen::MatrixXi X = crossing_matrix(C, perm);
        for (int gi = 0; gi + 1 < C.n; ++gi)
            for (int gj = 0; gj + 1 < C.n; ++gj) {
                double direct = crossing_degree_pair(C, perm, gi, gj);
                double viamat = 0.0;
                for (std::size_t ci = 0; ci < C.constraints.size(); ++ci)
                    if (X((int)ci, gi) && X((int)ci, gj))
                        viamat += C.constraints[ci].weight;
                gram_worst = std::max(gram_worst, std::abs(direct - viamat));
            }

        for (int t = 0; t < 10; ++t) {
            std::vector<double> sorted(C.n);
            for (double& v : sorted) v = unit(rng);
            std::sort(sorted.begin(), sorted.end());
            FractionalAssignment x(C.n);
            for (int k = 0; k < C.n; ++k) x[perm[k]] = sorted[k];
            double qf = quadratic_form_energy(C, perm, x);
            qf_worst = std::max(qf_worst, std::abs(qf - energy(C, x)));
        }
    }
    r.add_info("perms_checked", std::to_string(perms.size()));
    r.add_check({"factorization_exact", factor_fail == 0, (double)factor_fail, 0.0});
    r.add_check({"pair_degrees_match_crossing_rows", gram_worst <= kTol, gram_worst, kTol});
    r.add_check({"quadratic_form_matches_energy", qf_worst <= kTol, qf_worst, kTol});
    return emit(r, a.json);
}

struct CheegerArgs {
    std::string file;
    int restarts = 64, iterations = 100;
    std::uint64_t seed = 0;
    bool json = false;
};

int run_cheeger(const CheegerArgs& a) {
    CspInstance C = load_instance_file(a.file);
    if (!is_even_xor(C))
        throw std::runtime_error(
            "cheeger needs modulus 2, zero offsets, and even arities");
    CheegerReport rep = verify_cheeger(C, a.restarts, a.iterations, a.seed);
    RunReport r;
    r.command = "cheeger";
    r.add_param("file", a.file);
    r.add_param("restarts", std::to_string(a.restarts));
    r.add_param("iterations", std::to_string(a.iterations));
    r.has_seed = true;
    r.seed = a.seed;
    r.add_info("phi", format_double(rep.phi));
    r.add_info("phi_cut", join_ints(rep.phi_witness));
    r.add_info("gamma2", format_double(rep.gamma2));
    r.add_info("ell", std::to_string(rep.ell));
    r.add_info("certified_bound", format_double(rep.constructive.certified_bound));
    r.add_info("rounded_phi", format_double(rep.constructive.phi));
    r.add_info("rounded_cut", join_ints(rep.constructive.set));
    for (const CheckResult& c : rep.checks) r.add_check(c);
    return emit(r, a.json);
}

} // namespace

int main(int argc, char** argv) {
    StderrTimer timer;
    CLI::App app{"spectral toolkit for field-affine constraint systems"};
    app.require_subcommand(1);

    GenArgs ga;
    CLI::App* gen = app.add_subcommand("gen", "generate a random instance file");
    gen->add_option("--out", ga.out, "output path")->required();
    gen->add_option("--n", ga.n, "variables");
    gen->add_option("--m", ga.m, "constraints");
    gen->add_option("--p", ga.p, "prime modulus");
    gen->add_option("--arity", ga.arity, "variables per constraint");
    gen->add_option("--wmin", ga.wmin, "minimum weight");
    gen->add_option("--wmax", ga.wmax, "maximum weight");
    gen->add_option("--seed", ga.seed, "random seed");
    gen->add_flag("--even-xor", ga.even_xor, "parity instance: p=2, offsets 0, even arity");
    gen->add_flag("--cover", ga.cover, "retry until every variable is used");
    gen->add_flag("--json", ga.json, "JSON report");

    EnergyArgs ea;
    CLI::App* en = app.add_subcommand("energy", "evaluate values and energies");
    en->add_option("file", ea.file, "instance file")->required();
    en->add_option("--assign", ea.assign,
                   "'all-boolean', 'random:<k>', or comma-separated values");
    en->add_option("--seed", ea.seed, "random seed");
    en->add_flag("--json", ea.json, "JSON report");

    SparsifyArgs sa;
    CLI::App* sp = app.add_subcommand("sparsify", "reweight to fewer constraints");
    sp->add_option("file", sa.file, "instance file")->required();
    sp->add_option("--eps", sa.eps, "relative error budget in (0,1)")->required();
    sp->add_option("--seed", sa.seed, "random seed");
    sp->add_option("--mode", sa.mode, "'exhaustive' or 'sampled:<count>'");
    sp->add_option("--kappa", sa.kappa, "oversampling constant");
    sp->add_option("--retry-cap", sa.retry_cap, "max sampling attempts");
    sp->add_option("--out", sa.out, "write the reweighted instance here");
    sp->add_flag("--json", sa.json, "JSON report");

    VerifyArgs va;
    CLI::App* ve = app.add_subcommand("verify", "check a sparsifier against its source");
    ve->add_option("file", va.file, "original instance file")->required();
    ve->add_option("sparsified", va.sparsified,
                   "reweighted instance file (omit to sparsify in-process)");
    ve->add_option("--eps", va.eps, "relative error budget in (0,1)")->required();
    ve->add_option("--random", va.n_random, "fractional sample count");
    ve->add_option("--seed", va.seed, "random seed");
    ve->add_flag("--json", va.json, "JSON report");

    MatricesArgs ma;
    CLI::App* mx = app.add_subcommand("matrices", "incidence and crossing checks");
    mx->add_option("file", ma.file, "instance file")->required();
    mx->add_option("--perm", ma.perm, "'id', 'all', or a comma-separated permutation");
    mx->add_option("--seed", ma.seed, "random seed");
    mx->add_flag("--json", ma.json, "JSON report");

    CheegerArgs ca;
    CLI::App* ch = app.add_subcommand("cheeger", "expansion and spectral bounds");
    ch->add_option("file", ca.file, "instance file")->required();
    ch->add_option("--restarts", ca.restarts, "random descent restarts");
    ch->add_option("--iterations", ca.iterations, "descent sweep cap");
    ch->add_option("--seed", ca.seed, "random seed");
    ch->add_flag("--json", ca.json, "JSON report");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return run_gen(ga);
        if (en->parsed()) return run_energy(ea);
        if (sp->parsed()) return run_sparsify(sa);
        if (ve->parsed()) return run_verify(va);
        if (mx->parsed()) return run_matrices(ma);
        if (ch->parsed()) return run_cheeger(ca);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
