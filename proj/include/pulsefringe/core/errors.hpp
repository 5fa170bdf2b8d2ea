#pragma once

#include <stdexcept>
#include <string>

namespace pf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Grid too short or too coarse for the requested density.
struct GridError : Error {
    using Error::Error;
};

struct NoFringes : Error {
    NoFringes() : Error("no fringes") {}
    explicit NoFringes(const std::string& what) : Error("no fringes: " + what) {}
};

struct TableRangeError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    QuadratureError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual(residual) {}
    double residual;
};

struct Infeasible : Error {
    using Error::Error;
};

inline void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw InvalidArgument(msg);
}

} // namespace pf
