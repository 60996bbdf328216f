#pragma once

#include <stdexcept>
#include <string>

namespace confint {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values: bounds out of order, correlations outside (-1,1), ...
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// The constraint set admits no point at all.
struct empty_feasible_set : error {
    explicit empty_feasible_set(const std::string& msg) : error(msg) {}
};

// A design matrix is rank deficient.
struct rank_error : error {
    explicit rank_error(const std::string& msg) : error(msg) {}
};

// A data column is constant where nonzero variance is required.
struct degenerate_variance_error : error {
    explicit degenerate_variance_error(const std::string& msg) : error(msg) {}
};

// Requested tuple cannot be realized by any dataset.
struct infeasible_tuple_error : error {
    explicit infeasible_tuple_error(const std::string& msg) : error(msg) {}
};

// Prior essentially never intersects the realizable set.
struct low_acceptance_error : error {
    explicit low_acceptance_error(const std::string& msg) : error(msg) {}
};

// Malformed text input; row/col are 1-based, 0 when not applicable.
struct parse_error : error {
    parse_error(const std::string& msg, std::size_t row_, std::size_t col_)
        : error(msg), row(row_), col(col_) {}
    std::size_t row;
    std::size_t col;
};

struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};

} // namespace confint
