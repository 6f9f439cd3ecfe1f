#pragma once

#include <random>

#include "qlv/model.hpp"

// Shared randomised-input helpers for the test suites. Everything is seeded
// explicitly so failures reproduce.

namespace qlv::test {

using Rng = std::mt19937_64;

inline Vector random_vector(Rng &rng, Index n)
{
    std::normal_distribution<double> g;
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = cxd(g(rng), g(rng));
    return v;
}

inline Vector random_unit_vector(Rng &rng, Index n)
{
    Vector v = random_vector(rng, n);
    return v / v.norm();
}

inline Matrix random_matrix(Rng &rng, Index r, Index c)
{
    std::normal_distribution<double> g;
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = cxd(g(rng), g(rng));
    return m;
}

// Haar-ish random unitary via QR of a Ginibre matrix.
inline Matrix random_unitary(Rng &rng, Index n)
{
    Matrix m = random_matrix(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
        cxd d = r(i, i);
        q.col(i) *= d / std::abs(d);
    }
    return q;
}

inline Matrix random_hermitian(Rng &rng, Index n)
{
    Matrix m = random_matrix(rng, n, n);
    return (m + m.adjoint().eval()) / 2.0;
}

inline OracleFamily random_unitary_family(Rng &rng,
                                          std::vector<std::string> labels,
                                          std::vector<Index> block_dims)
{
    std::map<std::string, std::vector<Matrix>> ops;
    for (auto const &x : labels) {
        std::vector<Matrix> blocks;
        for (Index b : block_dims)
            blocks.push_back(random_unitary(rng, b));
        ops[x] = std::move(blocks);
    }
    return OracleFamily(std::move(labels), std::move(block_dims),
                        std::move(ops), OracleKind::unitary);
}

} // namespace qlv::test
