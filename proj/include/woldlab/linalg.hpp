#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "woldlab/types.hpp"

namespace woldlab {

//
// Finite inner-product space: C^dim with <x, y> = y^H G x.
//
// The Cholesky factor G = L L^H is computed once and shared between copies;
// C := L^H maps to Euclidean coordinates, so that <x, y> = (C y)^H (C x).
//
class InnerProductSpace
{
public:
    InnerProductSpace() : InnerProductSpace(Index(0)) {}

    /// Euclidean space of the given dimension.
    explicit InnerProductSpace(Index dim)
    {
        if (dim < 0)
            throw Error(ErrorCode::InvalidArgument, "negative dimension");
        auto impl       = std::make_shared<Impl>();
        impl->gram      = Matrix::Identity(dim, dim);
        impl->euclidean = true;
        impl->llt.compute(impl->gram);
        impl_ = std::move(impl);
    }

    explicit InnerProductSpace(Matrix gram, const TolerancePolicy& tol = {})
    {
        if (gram.rows() != gram.cols())
            throw Error(ErrorCode::InvalidArgument, "gram must be square");
        const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
        if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > tol.residual_tol * scale)
            throw Error(ErrorCode::InvalidArgument, "gram is not Hermitian");

        auto impl  = std::make_shared<Impl>();
        impl->gram = (gram + gram.adjoint()) / 2.0;
        impl->euclidean = impl->gram.isIdentity(0.0);

        if (gram.rows() > 0) {
            Eigen::SelfAdjointEigenSolver<Matrix> eig(impl->gram, Eigen::EigenvaluesOnly);
            const double lo = eig.eigenvalues().minCoeff();
            const double hi = eig.eigenvalues().maxCoeff();
            if (!(hi > 0.0) || lo <= tol.rank_tol * hi)
                throw Error(ErrorCode::GramSingular, "gram is not positive definite (lambda_min = "
                                                         + std::to_string(lo) + ")");
        }
        impl->llt.compute(impl->gram);
        if (impl->llt.info() != Eigen::Success)
            throw Error(ErrorCode::GramSingular, "Cholesky factorization failed");
        impl_ = std::move(impl);
    }

    Index         dim() const { return impl_->gram.rows(); }
    const Matrix& gram() const { return impl_->gram; }
    bool          euclidean() const { return impl_->euclidean; }

    /// C x
    Matrix to_euclidean(const Matrix& x) const
    {
        if (euclidean()) return x;
        return impl_->llt.matrixU() * x;
    }

    /// C^{-1} y
    Matrix from_euclidean(const Matrix& y) const
    {
        if (euclidean()) return y;
        return impl_->llt.matrixU().solve(y);
    }

    /// G^{-1} x
    Matrix solve(const Matrix& x) const
    {
        if (euclidean()) return x;
        return impl_->llt.solve(x);
    }

    /// Matrix of the sesquilinear form: entry (f, e) = <X e, Y f> = Y^H G X.
    Matrix form(const Matrix& x, const Matrix& y) const
    {
        if (euclidean()) return y.adjoint() * x;
        return y.adjoint() * (impl_->gram * x);
    }

    Complex inner(const Vector& x, const Vector& y) const { return form(x, y)(0, 0); }

    /// Subspace spanned by a set of basis vectors, with the restricted gram.
    InnerProductSpace restrict_to(std::span<const Index> basis) const
    {
        const Index k = static_cast<Index>(basis.size());
        if (euclidean()) return InnerProductSpace(k);
        Matrix g(k, k);
        for (Index a = 0; a < k; ++a)
            for (Index b = 0; b < k; ++b)
                g(a, b) = impl_->gram(basis[a], basis[b]);
        return InnerProductSpace(std::move(g));
    }

    bool same_as(const InnerProductSpace& other) const
    {
        return impl_ == other.impl_ || (dim() == other.dim() && gram() == other.gram());
    }

private:
    struct Impl
    {
        Matrix               gram;
        Eigen::LLT<Matrix>   llt;
        bool                 euclidean = false;
    };
    std::shared_ptr<const Impl> impl_;
};

namespace detail {

inline Matrix select_columns(const Matrix& m, std::span<const Index> cols)
{
    Matrix out(m.rows(), static_cast<Index>(cols.size()));
    for (Index j = 0; j < out.cols(); ++j)
        out.col(j) = m.col(cols[j]);
    return out;
}

inline Matrix select_block(const Matrix& m, std::span<const Index> rows, std::span<const Index> cols)
{
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = m(rows[i], cols[j]);
    return out;
}

inline double spectral_norm(const Matrix& m)
{
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

/// Largest |eigenvalue| of a Hermitian matrix.
inline double hermitian_norm(const Matrix& h)
{
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

inline std::vector<Index> iota(Index n)
{
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

} // namespace detail

/// Operator norm of the restriction of a Hermitian form to the span of the
/// given basis vectors, measured against the gram of that span.
inline double form_norm(const InnerProductSpace& space, const Matrix& form,
                        std::span<const Index> window)
{
    if (window.empty()) return 0.0;
    const auto sub = space.restrict_to(window);
    // L^{-1} R L^{-H}, L the Cholesky factor of the window gram
    const Matrix left = sub.from_euclidean(Matrix::Identity(sub.dim(), sub.dim()));
    return detail::hermitian_norm(left.adjoint() * form * left);
}

} // namespace woldlab
