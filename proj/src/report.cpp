#include "fieldcsp/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace fieldcsp {

bool RunReport::all_pass() const {
    for (const CheckResult& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

void RunReport::add_param(const std::string& k, const std::string& v) {
    params.emplace_back(k, v);
}

void RunReport::add_info(const std::string& k, const std::string& v) {
    info.emplace_back(k, v);
}

void RunReport::add_check(const CheckResult& c) { checks.push_back(c); }

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string render_text(const RunReport& r) {
    std::string out;
    out += "report " + r.command + "\n";
    for (const auto& [k, v] : r.params) out += "param " + k + "=" + v + "\n";
    if (r.has_seed) out += "seed " + std::to_string(r.seed) + "\n";
    for (const auto& [k, v] : r.info) out += "info " + k + "=" + v + "\n";
    for (const CheckResult& c : r.checks) {
        out += "CHECK " + c.name + (c.pass ? " pass" : " fail") +
               " margin=" + format_double(c.margin) + " tol=" + format_double(c.tol) +
               "\n";
    }
    out += std::string("result ") + (r.all_pass() ? "pass" : "fail") + "\n";
    return out;
}

std::string render_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    if (r.has_seed) j["seed"] = r.seed;
    nlohmann::ordered_json info = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.info) info[k] = v;
    j["info"] = info;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& c : r.checks) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["pass"] = c.pass;
        jc["margin"] = c.margin;
        jc["tol"] = c.tol;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    j["result"] = r.all_pass();
    return j.dump();
}

} // namespace fieldcsp
