#ifndef CONEKRYLOV_SOCONE_HPP
#define CONEKRYLOV_SOCONE_HPP

#include "conekrylov/types.hpp"

namespace conekrylov {

/// Composite relative residual of a candidate solution: cone violation of x,
/// cone violation of g = Mx + q, and the complementarity defect |x^T g|,
/// each scaled relative to the problem data.
struct ResidualBreakdown {
    double chi1 = 0.0;
    double chi2 = 0.0;
    double chi3 = 0.0;
    double total = 0.0;
};

/// ||x_(2:n)|| <= x_1 + tol * ||x||, i.e. membership in the closed cone.
bool in_cone(const Vector& x, double tol = 0.0);

/// x_1 > 0 and |x_1 - ||x_(2:n)||| < eps3 * ||x||.
bool on_boundary(const Vector& x, double eps3 = 1e-6);

/// J x with J = diag(1, -1, ..., -1); an involution.
Vector apply_J(const Vector& x);

/// x^T J x, evaluated without forming Jx.
double j_quadratic_form(const Vector& x);

ResidualBreakdown chi_rel(const Vector& x, const SymmetricMatrix& m, const Vector& q);

}  // namespace conekrylov

#endif
