#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fieldcsp {

// One named check: pass iff margin <= tol. Margin is the worst observed
// violation (negative values mean slack).
struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    double tol = 0.0;
};

// Structured output of a CLI run. Rendering is a pure function of the fields,
// so repeated runs with the same seed produce byte-identical text; elapsed time
// is deliberately not part of the report (the tool prints it to stderr).
struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> info;
    std::vector<CheckResult> checks;

    bool all_pass() const;
    void add_param(const std::string& k, const std::string& v);
    void add_info(const std::string& k, const std::string& v);
    void add_check(const CheckResult& c);
};

// Fixed %.17g rendering: enough digits to round-trip the double exactly.
std::string format_double(double v);

// One line per field:
//   report <command>
//   param <k>=<v> ...
//   seed <s>
//   info <k>=<v> ...
//   CHECK <name> <pass|fail> margin=<v> tol=<v> ...
//   result <pass|fail>
std::string render_text(const RunReport& r);

// The same data as a single JSON object with stable key order.
std::string render_json(const RunReport& r);

} // namespace fieldcsp
