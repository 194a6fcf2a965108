#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bdrd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries 1-based line/column of the offending token.
struct ParseError : Error {
    ParseError(std::string msg, std::uint64_t line, std::uint64_t column = 0)
        : Error(format(msg, line, column)), line(line), column(column) {}

    std::uint64_t line;
    std::uint64_t column;

    static std::string format(const std::string& msg, std::uint64_t line, std::uint64_t column) {
        std::string s = "line " + std::to_string(line);
        if (column > 0) s += ", column " + std::to_string(column);
        return s + ": " + msg;
    }
};

/// An oracle query outside the (R, i <= n, j <= d) contract. Distinct from a
/// legal query whose answer is "no such tuple".
struct ContractViolation : Error {
    using Error::Error;
};

/// An exact search was asked to run beyond its configured size cap.
struct SizeCapError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

}  // namespace bdrd
