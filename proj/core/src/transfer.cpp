#include "conekrylov/transfer.hpp"

#include <bit>
#include <cmath>
#include <mutex>

#include "conekrylov/socone.hpp"

namespace conekrylov {

TransferEvaluator::TransferEvaluator(const SymmetricMatrix& m, Vector q)
    : m_(m), q_(std::move(q)) {
    if (q_.size() != m_.n()) throw DimensionMismatch("q dimension mismatch");
}

std::shared_ptr<const ShiftedFactorization> TransferEvaluator::factorization(double s) const {
    const auto key = std::bit_cast<std::uint64_t>(s);
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    // may throw SingularShift; failures are not cached
    auto fact = std::make_shared<const ShiftedFactorization>(m_, s);
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(key, std::move(fact)).first->second;
}

Vector TransferEvaluator::eval_x(double s) const { return -factorization(s)->solve(q_); }

double TransferEvaluator::eval_h(double s) const {
    const Vector x = eval_x(s);
    const double h = j_quadratic_form(x);
    // near the pole the value overflows gracefully into a signed infinity,
    // which is all a bracketing zero-finder needs
    if (std::abs(h) > 1e100) return std::copysign(HUGE_VAL, h);
    return h;
}

double TransferEvaluator::eval_f(double s) const { return -q_.dot(eval_x(s)); }

}  // namespace conekrylov
