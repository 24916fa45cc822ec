#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sacq {

using Vector = std::vector<double>;

/// Base for every error the library reports.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A parameter or input value outside its admissible range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Direction of a linear inequality. UpperLE: <a, x> <= b. LowerGE: <a, x> >= c.
enum class Sense { UpperLE, LowerGE };

const char* to_string(Sense s);

inline void require_same_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                             std::to_string(got));
}

bool all_finite(std::span<const double> x);

/// Throws InvalidArgument naming `what` if any entry is NaN or infinite.
void require_finite(std::span<const double> x, const char* what);

}  // namespace sacq
