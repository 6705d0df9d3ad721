#pragma once

#include <stdexcept>
#include <string>

namespace phaseq {

// Invalid inputs, violated preconditions, malformed configuration.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

// Algorithmic failure on valid inputs: non-convergence, overflow, lost bracket.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace phaseq
