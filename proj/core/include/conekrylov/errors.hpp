#ifndef CONEKRYLOV_ERRORS_HPP
#define CONEKRYLOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace conekrylov {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Cholesky pivot fell below tolerance * ||M||_1: the matrix is outside
/// the SPD problem class.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

/// M - sJ is numerically singular: s coincides with an eigenvalue of MJ.
/// Callers are expected to perturb the shift and retry.
struct SingularShift : Error {
    explicit SingularShift(double s)
        : Error("shift " + std::to_string(s) + " hits an eigenvalue of MJ"), shift(s) {}
    double shift;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct ZeroVector : Error {
    using Error::Error;
};

/// h(s0) = 0 within tolerance: s0 cannot serve as a reduction center.
struct DegenerateCenter : Error {
    using Error::Error;
};

struct InvalidParams : Error {
    using Error::Error;
};

struct TooLarge : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
    int line;
    int col;
};

struct NotSymmetric : Error {
    using Error::Error;
};

struct NotSquare : Error {
    using Error::Error;
};

}  // namespace conekrylov

#endif
