#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liesym {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

struct IndexError : Error { using Error::Error; };
struct ValueError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct OrderOverflow : Error { using Error::Error; };
struct NonPolynomialJet : Error { using Error::Error; };
struct EvaluationError : Error { using Error::Error; };

}  // namespace liesym
