#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace emtrace {

/// Thrown when an operation that needs a finite group is handed one with
/// free rank > 0 (element enumeration, tabulation, index arithmetic).
class InfiniteGroupError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown by fit_params when a value table is not the table of any
/// quadratic form.
class NotQuadraticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by the brute-force engines when the candidate space (flat loops)
/// or the explored node count (DFS) exceeds the search budget.
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(std::string what, std::uint64_t required, std::uint64_t limit)
        : std::runtime_error(std::move(what)), required(required), limit(limit) {}

    std::uint64_t required;
    std::uint64_t limit;
};

/// Malformed input document or descriptor string.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace emtrace
