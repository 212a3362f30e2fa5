#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "woldlab/linalg.hpp"

namespace woldlab {

//
// A linear map between finite inner-product spaces.
//
// Operators coming from truncations (a shift on polynomials of degree <= N)
// are only genuinely defined on part of their domain; the remaining domain
// basis vectors are listed in `truncated_columns` and the corresponding
// matrix columns are exactly zero.  Left inverses and Cauchy duals are taken
// on the admissible columns only, and identity checks are evaluated on the
// window of basis vectors that stay admissible under the required number of
// applications (see `window`).
//
class DenseOperator
{
public:
    DenseOperator() = default;

    DenseOperator(Matrix matrix, InnerProductSpace domain, InnerProductSpace codomain,
                  std::vector<Index> truncated_columns = {})
        : matrix_(std::move(matrix)), domain_(std::move(domain)), codomain_(std::move(codomain)),
          truncated_(std::move(truncated_columns))
    {
        if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
            throw Error(ErrorCode::InvalidArgument, "matrix shape does not match domain/codomain");
        std::sort(truncated_.begin(), truncated_.end());
        truncated_.erase(std::unique(truncated_.begin(), truncated_.end()), truncated_.end());
        for (Index j : truncated_) {
            if (j < 0 || j >= matrix_.cols())
                throw Error(ErrorCode::InvalidArgument, "truncated column out of range");
            if (!matrix_.col(j).isZero(0.0))
                throw Error(ErrorCode::InvalidArgument, "truncated columns must be zero");
        }
    }

    /// Endomorphism of `space`.
    DenseOperator(Matrix matrix, InnerProductSpace space, std::vector<Index> truncated_columns = {})
        : DenseOperator(std::move(matrix), space, space, std::move(truncated_columns))
    {}

    const Matrix&             matrix() const { return matrix_; }
    const InnerProductSpace&  domain() const { return domain_; }
    const InnerProductSpace&  codomain() const { return codomain_; }
    const std::vector<Index>& truncated_columns() const { return truncated_; }

    bool is_truncated() const { return !truncated_.empty(); }
    bool is_endomorphism() const { return domain_.same_as(codomain_); }

    std::vector<Index> admissible_columns() const
    {
        std::vector<Index> out;
        out.reserve(static_cast<std::size_t>(matrix_.cols()));
        auto it = truncated_.begin();
        for (Index j = 0; j < matrix_.cols(); ++j) {
            if (it != truncated_.end() && *it == j) { ++it; continue; }
            out.push_back(j);
        }
        return out;
    }

    /// Matrix of the same map in Euclidean coordinates: C_cod A C_dom^{-1}.
    Matrix euclidean() const
    {
        return codomain_.to_euclidean(domain_.from_euclidean(matrix_.adjoint()).adjoint());
    }

private:
    Matrix             matrix_;
    InnerProductSpace  domain_;
    InnerProductSpace  codomain_;
    std::vector<Index> truncated_;
};

namespace detail {

inline void require_endomorphism(const DenseOperator& t, const char* what)
{
    if (!t.is_endomorphism())
        throw Error(ErrorCode::InvalidArgument, std::string(what) + ": operator must be an endomorphism");
}

inline void require_common_space(std::span<const DenseOperator> ts, const char* what)
{
    for (const auto& t : ts) {
        require_endomorphism(t, what);
        if (!t.domain().same_as(ts.front().domain()))
            throw Error(ErrorCode::InvalidArgument, std::string(what) + ": operators act on different spaces");
    }
}

/// Operator norm of M restricted to the span of the `window` basis vectors of
/// `dom`, measured in `cod`.
inline double restricted_norm(const Matrix& m, const InnerProductSpace& dom, const InnerProductSpace& cod,
                              std::span<const Index> window)
{
    if (window.empty()) return 0.0;
    const auto   sub  = dom.restrict_to(window);
    const Matrix cols = select_columns(m, window);
    // C_cod M_W C_W^{-1}
    const Matrix e = cod.to_euclidean(sub.from_euclidean(cols.adjoint()).adjoint());
    return spectral_norm(e);
}

} // namespace detail

inline DenseOperator identity_operator(const InnerProductSpace& space)
{
    return DenseOperator(Matrix::Identity(space.dim(), space.dim()), space);
}

/// Adjoint with respect to the stored grams: A* = G_dom^{-1} A^H G_cod.
inline DenseOperator adjoint(const DenseOperator& t)
{
    Matrix m = t.domain().solve(t.matrix().adjoint() * t.codomain().gram());
    return DenseOperator(std::move(m), t.codomain(), t.domain());
}

/// Product a * b as plain operators (truncation metadata of b is kept only
/// when a is not truncated).
inline DenseOperator compose(const DenseOperator& a, const DenseOperator& b)
{
    if (!a.domain().same_as(b.codomain()))
        throw Error(ErrorCode::InvalidArgument, "compose: incompatible spaces");
    Matrix m = a.matrix() * b.matrix();
    std::vector<Index> trunc;
    if (!a.is_truncated()) trunc = b.truncated_columns();
    else {
        const std::set<Index> bad(a.truncated_columns().begin(), a.truncated_columns().end());
        for (Index j = 0; j < m.cols(); ++j) {
            bool drop = std::binary_search(b.truncated_columns().begin(), b.truncated_columns().end(), j);
            for (Index i : bad)
                if (b.matrix()(i, j) != Complex(0.0)) drop = true;
            if (drop) {
                m.col(j).setZero();
                trunc.push_back(j);
            }
        }
    }
    return DenseOperator(std::move(m), b.domain(), a.codomain(), std::move(trunc));
}

/// Power T^k of an endomorphism, truncation-aware.
inline DenseOperator power(const DenseOperator& t, int k)
{
    detail::require_endomorphism(t, "power");
    DenseOperator out = identity_operator(t.domain());
    for (int i = 0; i < k; ++i) out = compose(t, out);
    return out;
}

/// Basis vectors on which every word of length <= depth in `ops` is
/// genuinely defined: W_0 = all, W_{k+1} = { e admissible for every T_i with
/// supp(T_i e) inside W_k }.
inline std::vector<Index> window(std::span<const DenseOperator> ops, int depth)
{
    if (ops.empty()) return {};
    const Index n = ops.front().domain().dim();
    std::vector<char> in(static_cast<std::size_t>(n), 1);
    for (int k = 0; k < depth; ++k) {
        std::vector<char> next(static_cast<std::size_t>(n), 1);
        for (const auto& t : ops) {
            for (Index j : t.truncated_columns()) next[static_cast<std::size_t>(j)] = 0;
            for (Index j = 0; j < n; ++j) {
                if (!next[static_cast<std::size_t>(j)]) continue;
                for (Index i = 0; i < t.matrix().rows(); ++i)
                    if (!in[static_cast<std::size_t>(i)] && t.matrix()(i, j) != Complex(0.0)) {
                        next[static_cast<std::size_t>(j)] = 0;
                        break;
                    }
            }
        }
        in = std::move(next);
    }
    std::vector<Index> out;
    for (Index j = 0; j < n; ++j)
        if (in[static_cast<std::size_t>(j)]) out.push_back(j);
    return out;
}

inline std::vector<Index> window(const DenseOperator& t, int depth)
{
    return window(std::span<const DenseOperator>(&t, 1), depth);
}

namespace detail {

struct AdmissibleBlock
{
    std::vector<Index> cols;
    Matrix             a;       // codomain x admissible
    Matrix             normal;  // A^H G A
};

inline AdmissibleBlock left_invertible_block(const DenseOperator& t, const TolerancePolicy& tol)
{
    AdmissibleBlock blk;
    blk.cols   = t.admissible_columns();
    blk.a      = select_columns(t.matrix(), blk.cols);
    blk.normal = t.codomain().form(blk.a, blk.a);
    if (blk.cols.empty()) return blk;

    const auto   sub = t.domain().restrict_to(blk.cols);
    const Matrix e   = t.codomain().to_euclidean(sub.from_euclidean(blk.a.adjoint()).adjoint());
    const auto   sv  = Eigen::JacobiSVD<Matrix>(e).singularValues();
    const double hi  = sv(0);
    const double lo  = sv(sv.size() - 1);
    if (!(hi > 0.0) || lo <= tol.rank_tol * hi || e.rows() < e.cols())
        throw Error(ErrorCode::NotLeftInvertible,
                    "T*T is singular on the admissible window (sigma_min/sigma_max = "
                        + std::to_string(hi > 0.0 ? lo / hi : 0.0) + ")");
    return blk;
}

} // namespace detail

/// L = (T*T)^{-1} T*, computed on the admissible columns; maps the codomain
/// into the span of the admissible domain vectors.
inline DenseOperator left_inverse(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    const auto blk = detail::left_invertible_block(t, tol);
    // (T*T)^{-1} T* = (A^H G A)^{-1} A^H G, independent of the domain gram.
    const Matrix la = blk.normal.ldlt().solve(blk.a.adjoint() * t.codomain().gram());
    Matrix l = Matrix::Zero(t.domain().dim(), t.codomain().dim());
    for (std::size_t r = 0; r < blk.cols.size(); ++r)
        l.row(blk.cols[r]) = la.row(static_cast<Index>(r));
    return DenseOperator(std::move(l), t.codomain(), t.domain());
}

/// T' = T (T*T)^{-1}, on the admissible columns; truncation is preserved.
inline DenseOperator cauchy_dual(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    const auto blk = detail::left_invertible_block(t, tol);
    const auto sub = t.domain().restrict_to(blk.cols);
    // (T*T)^{-1} = (A^H G A)^{-1} G_adm
    const Matrix inv = blk.normal.ldlt().solve(sub.gram());
    const Matrix da  = blk.a * inv;
    Matrix d = Matrix::Zero(t.codomain().dim(), t.domain().dim());
    for (std::size_t c = 0; c < blk.cols.size(); ++c)
        d.col(blk.cols[c]) = da.col(static_cast<Index>(c));
    return DenseOperator(std::move(d), t.domain(), t.codomain(), t.truncated_columns());
}

inline bool is_left_invertible(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    try {
        detail::left_invertible_block(t, tol);
        return true;
    } catch (const Error&) {
        return false;
    }
}

//
// Identity checks.  All of them evaluate sesquilinear forms on the window
// of basis vectors where the compositions involved are genuinely defined.
//

struct IdentityResidual
{
    double residual   = 0.0;
    Index  window_dim = 0;
    bool   pass       = false;
};

/// Residual of I - 2T*T + T*^2 T^2 = 0 as the form
/// <T^2 e, T^2 f> - 2 <T e, T f> + <e, f>.
inline IdentityResidual check_two_isometry(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    detail::require_endomorphism(t, "check_two_isometry");
    const auto w = window(t, 2);
    if (w.empty())
        throw Error(ErrorCode::CapTooSmall, "no basis vector admits two applications of T");

    const auto&  h   = t.domain();
    const Matrix x1  = detail::select_columns(t.matrix(), w);
    const Matrix x2  = t.matrix() * x1;
    const Matrix g_w = detail::select_block(h.gram(), w, w);
    const Matrix r   = h.form(x2, x2) - 2.0 * h.form(x1, x1) + g_w;

    IdentityResidual out;
    out.residual   = form_norm(h, r, w);
    out.window_dim = static_cast<Index>(w.size());
    out.pass       = out.residual < tol.residual_tol;
    return out;
}

struct ToralReport
{
    std::array<std::array<double, 2>, 2> residuals{}; // (i, j)
    double residual   = 0.0;
    Index  window_dim = 0;
    bool   pass       = false;
};

/// I - T_i*T_i - T_j*T_j + T_j*T_i*T_iT_j = 0 for i, j in {1, 2}.
inline ToralReport check_toral_two_isometry(const DenseOperator& t1, const DenseOperator& t2,
                                            const TolerancePolicy& tol = {})
{
    const std::array<DenseOperator, 2> ts{t1, t2};
    detail::require_common_space(ts, "check_toral_two_isometry");
    const auto w = window(ts, 2);
    if (w.empty())
        throw Error(ErrorCode::CapTooSmall, "no basis vector admits two applications");

    const auto&  h   = t1.domain();
    const Matrix g_w = detail::select_block(h.gram(), w, w);
    std::array<Matrix, 2> once;
    for (int i = 0; i < 2; ++i) once[i] = detail::select_columns(ts[i].matrix(), w);

    ToralReport out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Matrix both = ts[i].matrix() * once[j];
            const Matrix r    = h.form(both, both) - h.form(once[i], once[i]) - h.form(once[j], once[j]) + g_w;
            out.residuals[i][j] = form_norm(h, r, w);
            out.residual        = std::max(out.residual, out.residuals[i][j]);
        }
    out.window_dim = static_cast<Index>(w.size());
    out.pass       = out.residual < tol.residual_tol;
    return out;
}

struct LeftInverseCommutingReport
{
    Matrix lic;        // (i, j): || L_i T_j - T_j L_i || on the window
    Matrix commutator; // (i, j): || T_i T_j - T_j T_i || on the window
    double lic_residual        = 0.0;
    double commutator_residual = 0.0;
    Index  window_dim          = 0;
    bool   commuting           = false;
    bool   pass                = false;
};

/// Left-inverse commuting test.  A commutator failure does not abort: both
/// residuals are always reported.
inline LeftInverseCommutingReport check_left_inverse_commuting(std::span<const DenseOperator> ts,
                                                               const TolerancePolicy& tol = {})
{
    LeftInverseCommutingReport out;
    const Index n = static_cast<Index>(ts.size());
    out.lic        = Matrix::Zero(n, n);
    out.commutator = Matrix::Zero(n, n);
    if (ts.empty()) {
        out.commuting = out.pass = true;
        return out;
    }
    detail::require_common_space(ts, "check_left_inverse_commuting");

    std::vector<DenseOperator> ls;
    ls.reserve(ts.size());
    for (const auto& t : ts) ls.push_back(left_inverse(t, tol));

    const auto  w = window(ts, 2);
    const auto& h = ts.front().domain();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const Matrix& ti = ts[i].matrix();
            const Matrix& tj = ts[j].matrix();
            const Matrix& li = ls[static_cast<std::size_t>(i)].matrix();
            out.lic(i, j)        = detail::restricted_norm(li * tj - tj * li, h, h, w);
            out.commutator(i, j) = detail::restricted_norm(ti * tj - tj * ti, h, h, w);
        }
    out.lic_residual        = out.lic.real().maxCoeff();
    out.commutator_residual = out.commutator.real().maxCoeff();
    out.window_dim          = static_cast<Index>(w.size());
    out.commuting           = out.commutator_residual < tol.residual_tol;
    out.pass                = out.commuting && out.lic_residual < tol.residual_tol;
    return out;
}

inline LeftInverseCommutingReport check_left_inverse_commuting(std::initializer_list<DenseOperator> ts,
                                                               const TolerancePolicy& tol = {})
{
    const std::vector<DenseOperator> v(ts);
    return check_left_inverse_commuting(std::span<const DenseOperator>(v), tol);
}

//
// Building blocks for constructed examples.
//

inline InnerProductSpace direct_sum(std::span<const InnerProductSpace> parts)
{
    Index n        = 0;
    bool  all_eucl = true;
    for (const auto& p : parts) {
        n += p.dim();
        all_eucl = all_eucl && p.euclidean();
    }
    if (all_eucl) return InnerProductSpace(n);
    Matrix g = Matrix::Zero(n, n);
    Index  o = 0;
    for (const auto& p : parts) {
        g.block(o, o, p.dim(), p.dim()) = p.gram();
        o += p.dim();
    }
    return InnerProductSpace(std::move(g));
}

/// Block-diagonal operator on the direct sum of the blocks' spaces.
inline DenseOperator direct_sum(std::span<const DenseOperator> blocks)
{
    std::vector<InnerProductSpace> spaces;
    for (const auto& b : blocks) {
        detail::require_endomorphism(b, "direct_sum");
        spaces.push_back(b.domain());
    }
    auto   h = direct_sum(std::span<const InnerProductSpace>(spaces));
    Matrix m = Matrix::Zero(h.dim(), h.dim());
    std::vector<Index> trunc;
    Index o = 0;
    for (const auto& b : blocks) {
        const Index d = b.domain().dim();
        m.block(o, o, d, d) = b.matrix();
        for (Index j : b.truncated_columns()) trunc.push_back(o + j);
        o += d;
    }
    return DenseOperator(std::move(m), std::move(h), std::move(trunc));
}

inline InnerProductSpace tensor(const InnerProductSpace& a, const InnerProductSpace& b)
{
    if (a.euclidean() && b.euclidean()) return InnerProductSpace(a.dim() * b.dim());
    const Index na = a.dim(), nb = b.dim();
    Matrix g(na * nb, na * nb);
    for (Index i = 0; i < na; ++i)
        for (Index k = 0; k < na; ++k)
            g.block(i * nb, k * nb, nb, nb) = a.gram()(i, k) * b.gram();
    return InnerProductSpace(std::move(g));
}

/// A (x) B on the tensor product, basis index i * dim(B) + j.
inline DenseOperator tensor(const DenseOperator& a, const DenseOperator& b)
{
    detail::require_endomorphism(a, "tensor");
    detail::require_endomorphism(b, "tensor");
    const Index na = a.domain().dim(), nb = b.domain().dim();
    Matrix m(na * nb, na * nb);
    for (Index i = 0; i < na; ++i)
        for (Index k = 0; k < na; ++k)
            m.block(i * nb, k * nb, nb, nb) = a.matrix()(i, k) * b.matrix();
    std::vector<Index> trunc;
    for (Index i = 0; i < na; ++i)
        for (Index j = 0; j < nb; ++j) {
            const bool ta = std::binary_search(a.truncated_columns().begin(), a.truncated_columns().end(), i);
            const bool tb = std::binary_search(b.truncated_columns().begin(), b.truncated_columns().end(), j);
            if (ta || tb) {
                m.col(i * nb + j).setZero();
                trunc.push_back(i * nb + j);
            }
        }
    return DenseOperator(std::move(m), tensor(a.domain(), b.domain()), std::move(trunc));
}

/// V^{-1} T V for an invertible change of basis V (Gram-unitary when V^H G V = G).
inline DenseOperator conjugate(const DenseOperator& t, const Matrix& v)
{
    detail::require_endomorphism(t, "conjugate");
    Matrix m = v.partialPivLu().solve(t.matrix() * v);
    return DenseOperator(std::move(m), t.domain());
}

} // namespace woldlab
