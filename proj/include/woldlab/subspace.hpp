#pragma once

#include "woldlab/operator_core.hpp"

namespace woldlab {

//
// Subspace of a finite inner-product space, stored as a Gram-orthonormal
// frame F (dim x k, F^H G F = I).  k = 0 is the zero subspace.
//
class Subspace
{
public:
    Subspace() = default;

    Subspace(InnerProductSpace space, Matrix frame) : space_(std::move(space)), frame_(std::move(frame))
    {
        if (frame_.rows() != space_.dim())
            throw Error(ErrorCode::InvalidArgument, "frame rows do not match the ambient dimension");
    }

    static Subspace zero(const InnerProductSpace& space) { return {space, Matrix(space.dim(), 0)}; }

    static Subspace full(const InnerProductSpace& space)
    {
        return from_euclidean(space, Matrix::Identity(space.dim(), space.dim()));
    }

    /// Q has Euclidean-orthonormal columns in the coordinates y = C x.
    static Subspace from_euclidean(const InnerProductSpace& space, const Matrix& q)
    {
        return {space, space.from_euclidean(q)};
    }

    Index                    dim() const { return frame_.cols(); }
    Index                    ambient_dim() const { return space_.dim(); }
    const InnerProductSpace& space() const { return space_; }
    const Matrix&            frame() const { return frame_; }
    bool                     is_zero() const { return frame_.cols() == 0; }

    /// C F: Euclidean-orthonormal columns.
    Matrix euclidean_frame() const { return space_.to_euclidean(frame_); }

    /// Gram-orthogonal projection P = F F^H G.
    Matrix projector() const { return frame_ * (frame_.adjoint() * space_.gram()); }

    /// Defect of F^H G F = I.
    double orthonormality_defect() const
    {
        if (dim() == 0) return 0.0;
        return (space_.form(frame_, frame_) - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    }

private:
    InnerProductSpace space_;
    Matrix            frame_;
};

/// Gram-orthonormal basis of the column span of X.  A direction is kept when
/// its singular value exceeds rank_tol * reference (reference < 0 means the
/// largest singular value).
inline Subspace span_of(const InnerProductSpace& space, const Matrix& x, const TolerancePolicy& tol = {},
                        double reference = -1.0)
{
    if (x.cols() == 0 || x.rows() == 0) return Subspace::zero(space);
    const Matrix e = space.to_euclidean(x);
    // BDCSVD mis-deflates on the heavily repeated singular values of shift
    // blocks (wrong left basis); Jacobi is exact enough and fast at this size.
    Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeThinU);
    const auto& sv  = svd.singularValues();
    const double ref = reference < 0.0 ? sv(0) : reference;
    if (!(sv(0) > 0.0)) return Subspace::zero(space);
    Index r = 0;
    while (r < sv.size() && sv(r) > tol.rank_tol * ref) ++r;
    return Subspace::from_euclidean(space, svd.matrixU().leftCols(r));
}

/// Closed range of T (in T's codomain).
inline Subspace range(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    const Matrix e = t.euclidean();
    if (e.size() == 0) return Subspace::zero(t.codomain());
    return Subspace::from_euclidean(t.codomain(), span_of(InnerProductSpace(e.rows()), e, tol).frame());
}

/// Null space of T (in T's domain).
inline Subspace kernel(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    const Index n = t.domain().dim();
    if (n == 0) return Subspace::zero(t.domain());
    const Matrix e = t.euclidean();
    if (e.rows() == 0) return Subspace::full(t.domain());
    Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullV);
    const auto&  sv = svd.singularValues();
    const double hi = sv.size() > 0 ? sv(0) : 0.0;
    Index r = 0;
    while (r < sv.size() && hi > 0.0 && sv(r) > tol.rank_tol * hi) ++r;
    return Subspace::from_euclidean(t.domain(), svd.matrixV().rightCols(n - r));
}

/// T(S), with rank decided relative to ||T|| so that numerically annihilated
/// directions are dropped.
inline Subspace image(const DenseOperator& t, const Subspace& s, const TolerancePolicy& tol = {})
{
    if (s.is_zero()) return Subspace::zero(t.codomain());
    const double norm = detail::spectral_norm(t.euclidean());
    if (!(norm > 0.0)) return Subspace::zero(t.codomain());
    return span_of(t.codomain(), t.matrix() * s.frame(), tol, norm);
}

/// A ∩ B through principal angles: directions with cos(theta) > 1 - rank_tol.
inline Subspace intersect(const Subspace& a, const Subspace& b, const TolerancePolicy& tol = {})
{
    if (a.is_zero() || b.is_zero()) return Subspace::zero(a.space());
    const Matrix qa = a.euclidean_frame();
    const Matrix qb = b.euclidean_frame();
    Eigen::JacobiSVD<Matrix> svd(qa.adjoint() * qb, Eigen::ComputeFullU);
    const auto& cosines = svd.singularValues();
    Index r = 0;
    while (r < cosines.size() && cosines(r) > 1.0 - tol.rank_tol) ++r;
    const Matrix q = qa * svd.matrixU().leftCols(r);
    // re-orthonormalize to absorb rounding in the rotated frame
    return span_of(a.space(), a.space().from_euclidean(q), tol, 1.0);
}

inline Subspace join(const Subspace& a, const Subspace& b, const TolerancePolicy& tol = {})
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Matrix x(a.ambient_dim(), a.dim() + b.dim());
    x << a.frame(), b.frame();
    return span_of(a.space(), x, tol, 1.0);
}

/// Operator norm of (I - P_B) restricted to A; zero iff A ⊆ B.
inline double containment_defect(const Subspace& a, const Subspace& b)
{
    if (a.is_zero()) return 0.0;
    const Matrix qa = a.euclidean_frame();
    const Matrix qb = b.euclidean_frame();
    return detail::spectral_norm(qa - qb * (qb.adjoint() * qa));
}

/// B ⊖ A, for A ⊆ B.
inline Subspace complement(const Subspace& a, const Subspace& within, const TolerancePolicy& tol = {})
{
    if (containment_defect(a, within) > tol.residual_tol)
        throw Error(ErrorCode::NotNested, "complement: A is not contained in B");
    if (a.is_zero()) return within;
    const Matrix qb = within.euclidean_frame();
    const Matrix m  = qb.adjoint() * a.euclidean_frame();
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
    const Index keep = within.dim() - a.dim();
    if (keep <= 0) return Subspace::zero(a.space());
    return Subspace::from_euclidean(a.space(), qb * svd.matrixU().rightCols(keep));
}

inline Subspace orthogonal_complement(const Subspace& a, const TolerancePolicy& tol = {})
{
    return complement(a, Subspace::full(a.space()), tol);
}

/// ||P_A - P_B||: sine of the largest principal angle, 1 when dims differ.
inline double distance(const Subspace& a, const Subspace& b)
{
    const Matrix qa = a.euclidean_frame();
    const Matrix qb = b.euclidean_frame();
    return detail::spectral_norm(qa * qa.adjoint() - qb * qb.adjoint());
}

/// ||Q_A^H Q_B||: largest cosine between A and B, zero iff A ⟂ B.
inline double cross_gram_norm(const Subspace& a, const Subspace& b)
{
    if (a.is_zero() || b.is_zero()) return 0.0;
    return detail::spectral_norm(a.euclidean_frame().adjoint() * b.euclidean_frame());
}

struct InvarianceReport
{
    double invariant = 0.0; // ||(I - P) T P||
    double reducing  = 0.0; // max(invariant, ||(I - P) T* P||)
};

inline InvarianceReport invariance_report(const DenseOperator& t, const Subspace& s)
{
    detail::require_endomorphism(t, "invariance_report");
    InvarianceReport out;
    if (s.is_zero()) return out;
    const Matrix q  = s.euclidean_frame();
    const Matrix te = t.euclidean();
    auto off = [&](const Matrix& m) {
        const Matrix mq = m * q;
        return detail::spectral_norm(mq - q * (q.adjoint() * mq));
    };
    out.invariant = off(te);
    out.reducing  = std::max(out.invariant, off(te.adjoint()));
    return out;
}

/// Defect of T|_S being unitary on S: max of the invariance defect and the
/// isometry defect ||(TF)^H G (TF) - I||.
inline double unitary_defect(const DenseOperator& t, const Subspace& s)
{
    if (s.is_zero()) return 0.0;
    const Matrix tf  = t.matrix() * s.frame();
    const Matrix iso = t.codomain().form(tf, tf) - Matrix::Identity(s.dim(), s.dim());
    return std::max(detail::hermitian_norm(iso), invariance_report(t, s).invariant);
}

} // namespace woldlab
