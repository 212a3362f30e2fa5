#pragma once

#include <random>

#include "woldlab/woldlab.hpp"

namespace woldlab::testing {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

/// Well-conditioned positive definite Gram.
inline Matrix random_gram(Index n, std::mt19937_64& rng)
{
    const Matrix a = random_matrix(n, n, rng);
    return a.adjoint() * a / double(n) + Matrix::Identity(n, n);
}

/// V with V^H G V = G: C^{-1} Q C for Euclidean-unitary Q.
inline Matrix gram_unitary(const InnerProductSpace& h, std::mt19937_64& rng)
{
    Eigen::HouseholderQR<Matrix> qr(random_matrix(h.dim(), h.dim(), rng));
    const Matrix q = qr.householderQ();
    return h.from_euclidean(q * h.to_euclidean(Matrix::Identity(h.dim(), h.dim())));
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// || P_a - P_b ||, zero when the subspaces coincide.
inline double projector_gap(const Subspace& a, const Subspace& b)
{
    return max_abs(a.projector() - b.projector());
}

/// Gallery examples small enough for exhaustive checks.
inline std::vector<Example> gallery_examples(const TolerancePolicy& tol = {})
{
    std::vector<Example> out;
    for (const auto& name : gallery_names()) out.push_back(make_example(name, tol));
    return out;
}

} // namespace woldlab::testing
