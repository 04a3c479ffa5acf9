#include "fieldcsp/csp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fieldcsp {

Constraint make_constraint(int p, std::vector<int> vars, std::vector<int> coeffs,
                           int offset, double weight) {
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime");
    if (vars.size() != coeffs.size())
        throw std::invalid_argument("vars and coeffs must have equal length");
    std::set<int> seen(vars.begin(), vars.end());
    if (seen.size() != vars.size())
        throw std::invalid_argument("constraint variables must be distinct");
    Constraint c;
    c.vars = std::move(vars);
    c.coeffs.reserve(coeffs.size());
    for (int a : coeffs) {
        int r = mod_reduce(a, p);
        if (r == 0) throw std::invalid_argument("coefficient is zero mod p");
        c.coeffs.push_back(r);
    }
    c.offset = mod_reduce(offset, p);
    if (!(weight >= 0.0) || !std::isfinite(weight))
        throw std::invalid_argument("weight must be finite and nonnegative");
    c.weight = weight;
    return c;
}

CspInstance make_instance(int n, int p, std::vector<Constraint> constraints,
                          bool augmented) {
    if (n < 1) throw std::invalid_argument("variable count must be positive");
    CspInstance C{n, FieldPrime(p), std::move(constraints), augmented};
    for (const Constraint& c : C.constraints) {
        if (c.vars.size() != c.coeffs.size())
            throw std::invalid_argument("vars and coeffs must have equal length");
        std::set<int> seen;
        for (int v : c.vars) {
            if (v < 0 || v >= n) throw std::invalid_argument("variable index out of range");
            if (!seen.insert(v).second)
                throw std::invalid_argument("constraint variables must be distinct");
        }
        for (int a : c.coeffs) {
            if (a <= 0 || a >= p) throw std::invalid_argument("coefficient not in [1, p)");
        }
        if (c.offset < 0 || c.offset >= p)
            throw std::invalid_argument("offset not in [0, p)");
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw std::invalid_argument("weight must be finite and nonnegative");
    }
    if (augmented && !is_zero_closed(C))
        throw std::invalid_argument("augmented instance fails zero closure");
    return C;
}

void check_boolean(const BooleanAssignment& x, int n) {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("assignment has wrong length");
    for (auto b : x) {
        if (b != 0 && b != 1) throw std::invalid_argument("assignment entry not 0/1");
    }
}

void check_fractional(const FractionalAssignment& x, int n) {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("assignment has wrong length");
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("assignment entry outside [0,1]");
    }
}

int eval_constraint(const Constraint& c, const BooleanAssignment& x, int p) {
    long long s = 0;
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
        int v = c.vars[i];
        if (v < 0 || static_cast<std::size_t>(v) >= x.size())
            throw std::out_of_range("constraint variable outside assignment");
        if (x[v]) s += c.coeffs[i];
    }
    return mod_reduce(s, p) != c.offset ? 1 : 0;
}

double csp_value(const CspInstance& C, const BooleanAssignment& x) {
    check_boolean(x, C.n);
    double total = 0.0;
    for (const Constraint& c : C.constraints) {
        if (eval_constraint(c, x, C.p.p)) total += c.weight;
    }
    return total;
}

BooleanAssignment round_assignment(const FractionalAssignment& x, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("threshold outside [0,1]");
    BooleanAssignment bits(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) bits[i] = x[i] >= theta ? 1 : 0;
    return bits;
}

double sat_prob(const Constraint& c, int p, const FractionalAssignment& x) {
    std::vector<double> vals;
    vals.reserve(c.vars.size() + 2);
    vals.push_back(0.0);
    vals.push_back(1.0);
    for (int v : c.vars) {
        if (v < 0 || static_cast<std::size_t>(v) >= x.size())
            throw std::out_of_range("constraint variable outside assignment");
        double xv = x[v];
        if (!(xv >= 0.0 && xv <= 1.0))
            throw std::invalid_argument("assignment entry outside [0,1]");
        vals.push_back(xv);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    double total = 0.0;
    for (std::size_t t = 0; t + 1 < vals.size(); ++t) {
        double hi = vals[t + 1];
        long long s = 0;
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            if (x[c.vars[i]] >= hi) s += c.coeffs[i];
        }
        if (mod_reduce(s, p) != c.offset) total += hi - vals[t];
    }
    return total;
}

double energy(const CspInstance& C, const FractionalAssignment& x) {
    check_fractional(x, C.n);
    double total = 0.0;
    for (const Constraint& c : C.constraints) {
        double q = sat_prob(c, C.p.p, x);
        total += c.weight * q * q;
    }
    return total;
}

bool is_zero_closed(const CspInstance& C) {
    BooleanAssignment zeros(C.n, 0), ones(C.n, 1);
    for (const Constraint& c : C.constraints) {
        if (eval_constraint(c, zeros, C.p.p)) return false;
        if (eval_constraint(c, ones, C.p.p)) return false;
    }
    return true;
}

void require_zero_closed(const CspInstance& C) {
    if (!is_zero_closed(C))
        throw std::invalid_argument(
            "operation requires an instance that evaluates to 0 on the all-zeros "
            "and all-ones assignments; augment it first");
}

bool augment_uses_two_dummies(const CspInstance& C) {
    if (C.p.p != 2) return true;
    for (const Constraint& c : C.constraints) {
        if (c.offset != 0) return true;
    }
    return false;
}

CspInstance augment_instance_layout(const CspInstance& C, bool two_dummies) {
    if (!two_dummies && augment_uses_two_dummies(C))
        throw std::invalid_argument("single-dummy layout needs p = 2 and all offsets zero");
    int p = C.p.p;
    int d1 = C.n;
    int d2 = two_dummies ? C.n + 1 : C.n;
    int n2 = C.n + (two_dummies ? 2 : 1);
    std::vector<Constraint> out;
    out.reserve(C.constraints.size());
    for (const Constraint& c : C.constraints) {
        Constraint a = c;
        long long sum = 0;
        for (int v : c.coeffs) sum += v;
        int c1 = two_dummies ? mod_reduce(-static_cast<long long>(c.offset), p) : 0;
        int c2 = mod_reduce(static_cast<long long>(c.offset) - sum, p);
        if (c1 != 0) {
            a.vars.push_back(d1);
            a.coeffs.push_back(c1);
        }
        if (c2 != 0) {
            a.vars.push_back(d2);
            a.coeffs.push_back(c2);
        }
        a.offset = 0;
        out.push_back(std::move(a));
    }
    return make_instance(n2, p, std::move(out), true);
}

CspInstance augment_instance(const CspInstance& C) {
    return augment_instance_layout(C, augment_uses_two_dummies(C));
}

} // namespace fieldcsp
