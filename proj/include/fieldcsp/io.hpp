#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "fieldcsp/csp.hpp"

namespace fieldcsp {

// Error with the 1-based line number where parsing failed.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

// Text format, one declaration per line, `#` starts a comment, blank lines
// ignored, whitespace between tokens free-form:
//
//   csp 1
//   field <p>
//   vars <n>
//   c <weight> : <a1>*x<i1> + <a2>*x<i2> + ... != <b>
//
// Variable indices are 1-based in files. Coefficients and the offset may be
// any integers; they are reduced mod p (a coefficient reducing to zero is an
// error). The parsed instance always has augmented = false.
CspInstance parse_instance(std::istream& in);
CspInstance parse_instance_text(const std::string& text);

// Inverse of the parser: canonical header plus one `c` line per constraint,
// weights printed with enough digits to round-trip exactly.
std::string serialize_instance(const CspInstance& C);

// File wrappers; throw std::runtime_error when the file cannot be opened.
CspInstance load_instance_file(const std::string& path);
void save_instance_file(const CspInstance& C, const std::string& path);

} // namespace fieldcsp
