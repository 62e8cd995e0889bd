#ifndef CONEKRYLOV_REDUCED_HPP
#define CONEKRYLOV_REDUCED_HPP

#include <optional>

#include "conekrylov/linalg.hpp"

namespace conekrylov {

/// Galerkin projection of (M, J, q) onto an orthonormal basis U.
struct ReducedTriple {
    Matrix m_hat;  // U^T M U, symmetrized
    Matrix j_hat;  // U^T J U, symmetrized
    Vector q_hat;  // U^T q
};

ReducedTriple project(const SymmetricMatrix& m, const Vector& q, const OrthoBasis& u);

/// Simultaneously diagonalized reduced pencil:
///   V^T M_hat V = Omega = diag(omega_1, ..., omega_m),
///   V^T J_hat V = J_m,
/// with omega_1 carrying the J-positive direction. The reduced transfer
/// function becomes the explicit partial-fraction form
///   h_hat(s) = xi_1^2/(s - omega_1)^2 - sum_{i>=2} xi_i^2/(s + omega_i)^2.
struct ReducedPencil {
    Vector omega;       // all positive, omega[0] is the pole of h_hat
    Matrix v;           // the congruence transform
    Vector xi;          // V^T q_hat
    bool pole_active;   // false when xi_1 is negligible and deflated

    double pole() const { return omega[0]; }
    Index dim() const { return omega.size(); }
};

/// Returns std::nullopt when the reduced J has no positive eigenvalue
/// (inertia failure), signalling the caller to inject compulsory shifts.
std::optional<ReducedPencil> diagonalize_pencil(const ReducedTriple& t);

/// The partial-fraction value; signed infinity at a pole.
double eval_h_hat(const ReducedPencil& p, double s);

enum class RootPick { kSmallest, kLargest };

/// Unique zero of h_hat in (0, omega_1), present iff h_hat(0) < 0 and the
/// pole term is active. h_hat is strictly increasing on this interval.
std::optional<double> find_zero_left(const ReducedPencil& p);

/// A zero of h_hat in (omega_1, infinity), located by a geometric scan of
/// sign changes out to `scan_limit` (64 points) followed by root polishing.
/// With several roots the pick policy selects which one is returned.
std::optional<double> find_zero_right(const ReducedPencil& p, double scan_limit = 0.0,
                                      RootPick pick = RootPick::kLargest);

}  // namespace conekrylov

#endif
