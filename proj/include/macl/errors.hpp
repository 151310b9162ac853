#pragma once

#include <stdexcept>
#include <string>

namespace macl {

// Violated precondition, malformed input, or broken invariant. CLI exit code 2.
class ContractViolation : public std::runtime_error {
public:
    explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Input file that fails schema or syntax checks.
class ParseError : public ContractViolation {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : ContractViolation(file + ":" + std::to_string(line) + ": " + what) {}
};

// NaN/Inf detected in a numeric pipeline. CLI exit code 3.
class NumericFault : public std::runtime_error {
public:
    explicit NumericFault(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace macl
