#ifndef CONEKRYLOV_GENERATE_HPP
#define CONEKRYLOV_GENERATE_HPP

#include <cstdint>

#include "conekrylov/types.hpp"

namespace conekrylov {

/// Random SPD test instance M = R^T R, where R is a random sparse symmetric
/// matrix with reciprocal condition number rc and the requested fill.
///
///   kind = 1: R = D + E with log-spaced diagonal D on [rc, 1] and a random
///             sparse symmetric perturbation E scaled to ||E|| <= rc/2; the
///             spectrum only approximates the target.
///   kind = 2: R carries the log-spaced spectrum exactly, scattered by a
///             sequence of random Givens congruences until the fill target
///             is met, so cond(M) = (1/rc)^2 exactly.
///
/// `density` is the fill target for R; M = R^T R is somewhat denser. The
/// output is bit-reproducible for a fixed seed. The contract is condition
/// targeting (cond(M) within a factor of 10 of (1/rc)^2) and determinism;
/// matching any particular reference generator's distribution is not.
SymmetricMatrix gen_random_spd(Index n, double density, double rc, int kind,
                               std::uint64_t seed);

}  // namespace conekrylov

#endif
