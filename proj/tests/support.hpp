#ifndef CONEKRYLOV_TESTS_SUPPORT_HPP
#define CONEKRYLOV_TESTS_SUPPORT_HPP

#include <random>

#include <Eigen/QR>

#include "conekrylov/linalg.hpp"

namespace testsupport {

using conekrylov::Index;
using conekrylov::Matrix;
using conekrylov::Vector;

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto u = [&eng] { return double(eng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) a(i, j) = u();
    return a;
}

inline Vector random_vector(Index n, std::uint64_t seed) {
    return random_matrix(n, 1, seed).col(0);
}

// dense SPD with log-spaced spectrum on [1/cond, 1], random orthogonal frame
inline Matrix random_spd(Index n, double cond, std::uint64_t seed) {
    Matrix g = random_matrix(n, n, seed);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Vector d(n);
    for (Index i = 0; i < n; ++i)
        d[i] = std::exp(-std::log(cond) * double(i) / double(std::max<Index>(n - 1, 1)));
    return q * d.asDiagonal() * q.transpose();
}

inline Matrix random_orthonormal(Index n, Index m, std::uint64_t seed) {
    Matrix g = random_matrix(n, m, seed);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(n, m);
}

}  // namespace testsupport

#endif
