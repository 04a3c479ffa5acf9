#include "fieldcsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace fieldcsp {

namespace {

std::vector<std::string> tokens_of(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtoll(s.c_str(), &end, 10);
    return errno == 0 && end == s.c_str() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size();
}

std::string strip_spaces(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
    return out;
}

// One term of a constraint expression: <int>*x<digits>.
void parse_term(const std::string& term, int line, long long& coeff, long long& index) {
    std::size_t star = term.find('*');
    if (star == std::string::npos || star + 1 >= term.size() || term[star + 1] != 'x')
        throw ParseError(line, "malformed term '" + term + "', expected a*x<i>");
    if (!parse_int(term.substr(0, star), coeff))
        throw ParseError(line, "malformed coefficient in term '" + term + "'");
    std::string idx = term.substr(star + 2);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos ||
        !parse_int(idx, index))
        throw ParseError(line, "malformed variable index in term '" + term + "'");
}

} // namespace

CspInstance parse_instance(std::istream& in) {
    enum Stage { kVersion, kField, kVars, kConstraints } stage = kVersion;
    int p = 0, n = 0;
    std::vector<Constraint> cs;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::size_t hash = raw.find('#');
        std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::vector<std::string> toks = tokens_of(body);
        if (toks.empty()) continue;

        if (stage == kVersion) {
            long long v;
            if (toks[0] != "csp" || toks.size() != 2 || !parse_int(toks[1], v))
                throw ParseError(line, "expected header 'csp 1'");
            if (v != 1)
                throw ParseError(line, "unsupported format version " + toks[1]);
            stage = kField;
            continue;
        }
        if (stage == kField) {
            long long v;
            if (toks[0] != "field" || toks.size() != 2 || !parse_int(toks[1], v))
                throw ParseError(line, "expected 'field <p>'");
            if (v < 2 || v > 1000000 || !is_prime(v))
                throw ParseError(line, "field size " + toks[1] + " is not a prime in range");
            p = (int)v;
            stage = kVars;
            continue;
        }
        if (stage == kVars) {
            long long v;
            if (toks[0] != "vars" || toks.size() != 2 || !parse_int(toks[1], v))
                throw ParseError(line, "expected 'vars <n>'");
            if (v < 1 || v > 1000000)
                throw ParseError(line, "variable count out of range");
            n = (int)v;
            stage = kConstraints;
            continue;
        }

        if (toks[0] != "c")
            throw ParseError(line, "expected a constraint line starting with 'c'");
        std::size_t colon = body.find(':');
        if (colon == std::string::npos)
            throw ParseError(line, "missing ':' in constraint line");
        std::vector<std::string> head = tokens_of(body.substr(0, colon));
        double w;
        if (head.size() != 2 || head[0] != "c" || !parse_double(head[1], w))
            throw ParseError(line, "expected 'c <weight> :'");
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ParseError(line, "weight must be finite and nonnegative");

        std::string expr = strip_spaces(body.substr(colon + 1));
        std::size_t neq = expr.find("!=");
        if (neq == std::string::npos || expr.find("!=", neq + 1) != std::string::npos)
            throw ParseError(line, "constraint needs exactly one '!='");
        long long offset;
        if (!parse_int(expr.substr(neq + 2), offset))
            throw ParseError(line, "malformed right-hand side");

        std::string lhs = expr.substr(0, neq);
        if (lhs.empty()) throw ParseError(line, "constraint has no terms");
        std::vector<int> vars, coeffs;
        std::size_t pos = 0;
        while (pos <= lhs.size()) {
            std::size_t plus = lhs.find('+', pos);
            std::string term = lhs.substr(pos, plus == std::string::npos
                                                   ? std::string::npos
                                                   : plus - pos);
            long long a, idx;
            parse_term(term, line, a, idx);
            if (idx < 1 || idx > n)
                throw ParseError(line, "variable index x" + std::to_string(idx) +
                                           " out of range [1, " + std::to_string(n) + "]");
            for (int seen : vars)
                if (seen == (int)idx - 1)
                    throw ParseError(line, "duplicate variable x" + std::to_string(idx));
            if (mod_reduce(a, p) == 0)
                throw ParseError(line, "coefficient of x" + std::to_string(idx) +
                                           " is zero mod " + std::to_string(p));
            vars.push_back((int)idx - 1);
            coeffs.push_back((int)mod_reduce(a, p));
            if (plus == std::string::npos) break;
            pos = plus + 1;
        }
        // Canonical term order: ascending variable index, matching the
        // generators, so round-trips are stable for any input order.
        std::vector<std::size_t> order(vars.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
        std::vector<int> svars, scoeffs;
        svars.reserve(vars.size());
        scoeffs.reserve(coeffs.size());
        for (std::size_t i : order) {
            svars.push_back(vars[i]);
            scoeffs.push_back(coeffs[i]);
        }
        cs.push_back(make_constraint(p, std::move(svars), std::move(scoeffs),
                                     (int)mod_reduce(offset, p), w));
    }
    if (stage != kConstraints)
        throw ParseError(line, "incomplete header: need 'csp 1', 'field <p>', 'vars <n>'");
    return make_instance(n, p, std::move(cs));
}

CspInstance parse_instance_text(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

std::string serialize_instance(const CspInstance& C) {
    std::ostringstream out;
    out << "csp 1\n";
    out << "field " << C.p.p << "\n";
    out << "vars " << C.n << "\n";
    char buf[64];
    for (const Constraint& c : C.constraints) {
        std::snprintf(buf, sizeof buf, "%.17g", c.weight);
        out << "c " << buf << " : ";
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            if (i) out << " + ";
            out << c.coeffs[i] << "*x" << (c.vars[i] + 1);
        }
        out << " != " << c.offset << "\n";
    }
    return out.str();
}

CspInstance load_instance_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return parse_instance(f);
}

void save_instance_file(const CspInstance& C, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << serialize_instance(C);
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

} // namespace fieldcsp
