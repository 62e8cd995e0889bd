#ifndef CONEKRYLOV_TRANSFER_HPP
#define CONEKRYLOV_TRANSFER_HPP

#include <map>
#include <memory>
#include <shared_mutex>

#include "conekrylov/linalg.hpp"

namespace conekrylov {

/// Evaluates x(s) = -(M - sJ)^{-1} q and the scalar rational functions
/// h(s) = x(s)^T J x(s) and f(s) = q^T (M - sJ)^{-1} q, caching one shifted
/// factorization per distinct shift. Concurrent lookups are allowed;
/// insertions are serialized. Singular shifts are never cached.
class TransferEvaluator {
public:
    TransferEvaluator(const SymmetricMatrix& m, Vector q);

    Vector eval_x(double s) const;
    double eval_h(double s) const;
    double eval_f(double s) const;

    const SymmetricMatrix& matrix() const { return m_; }
    const Vector& q() const { return q_; }

    /// Factorization for shift s, from cache when available.
    std::shared_ptr<const ShiftedFactorization> factorization(double s) const;

private:
    const SymmetricMatrix& m_;
    Vector q_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::uint64_t, std::shared_ptr<const ShiftedFactorization>> cache_;
};

}  // namespace conekrylov

#endif
