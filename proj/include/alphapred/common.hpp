#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alphapred {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// A numerical result with an attached error measure: the standard error for
// Monte Carlo estimates, an error bound for quadrature.
struct Estimate {
    double value = 0.0;
    double error = 0.0;      // >= 0
    std::int64_t n = 0;      // samples or integrand evaluations
    std::uint64_t seed = 0;  // MC only
};

// Thrown when an iterative numerical routine fails to converge. Invalid
// arguments (rejected preconditions) throw std::invalid_argument instead.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace alphapred
