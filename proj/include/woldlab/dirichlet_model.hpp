#pragma once

#include <array>
#include <utility>
#include <vector>

#include "woldlab/graded.hpp"
#include "woldlab/measure.hpp"
#include "woldlab/subspace.hpp"

namespace woldlab {

/// D_E(mu1, mu2) truncated to total degree <= cap.
struct ModelSpec
{
    OpValuedMeasure mu1;
    OpValuedMeasure mu2;
    int             cap = 0;

    /// Only mu^(k) with |k| <= cap - 1 enter the Gram (the (n ∧ q) factor
    /// vanishes otherwise), so that is the window required.
    void validate() const
    {
        if (cap < 0) throw Error(ErrorCode::InvalidArgument, "cap must be nonnegative");
        if (mu1.coeff_dim() != mu2.coeff_dim())
            throw Error(ErrorCode::InvalidArgument, "mu1 and mu2 act on different coefficient spaces");
        if (mu1.window() < cap - 1 || mu2.window() < cap - 1)
            throw Error(ErrorCode::CapTooSmall, "measure window smaller than cap - 1");
    }
};

namespace detail {

/// Monomial inner products <x z1^m z2^n, y z1^p z2^q>:
///   0                              m != p, n != q
///   (n ∧ q) <mu2^(q - n) x, y>     m == p, n != q
///   (m ∧ p) <mu1^(p - m) x, y>     m != p, n == q
///   <x, y> + m <mu1^(0) x, y> + n <mu2^(0) x, y>   on the diagonal
/// Block (row (p,q), column (m,n)) is the matrix of the corresponding map on E.
inline Matrix model_gram_entries(const OpValuedMeasure& mu1, const OpValuedMeasure& mu2, int cap)
{
    const int d     = mu1.coeff_dim();
    const Index n   = GradedSpace::basis_size(cap, d);
    const auto mons = GradedSpace::hardy(cap, 1).monomials();
    Matrix g        = Matrix::Zero(n, n);
    const Matrix id = Matrix::Identity(d, d);
    for (std::size_t c = 0; c < mons.size(); ++c)
        for (std::size_t r = 0; r < mons.size(); ++r) {
            const auto [m, nn] = mons[c];
            const auto [p, q]  = mons[r];
            Matrix blk;
            if (m == p && nn == q) blk = id + double(m) * mu1.at(0) + double(nn) * mu2.at(0);
            else if (m == p && std::min(nn, q) > 0) blk = double(std::min(nn, q)) * mu2.at(q - nn);
            else if (nn == q && std::min(m, p) > 0) blk = double(std::min(m, p)) * mu1.at(p - m);
            else continue;
            g.block(Index(r) * d, Index(c) * d, d, d) = blk;
        }
    return g;
}

inline InnerProductSpace validated_gram(Matrix g, const TolerancePolicy& tol)
{
    try {
        return InnerProductSpace(std::move(g), tol);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::GramSingular || e.code() == ErrorCode::InvalidArgument)
            throw Error(ErrorCode::GramNotPSD, e.what());
        throw;
    }
}

} // namespace detail

inline GradedSpace gram_matrix(const ModelSpec& spec, const TolerancePolicy& tol = {})
{
    spec.validate();
    return GradedSpace(spec.cap, spec.mu1.coeff_dim(),
                       detail::validated_gram(detail::model_gram_entries(spec.mu1, spec.mu2, spec.cap), tol));
}

/// One-variable D(mu) truncated to degree <= cap, basis index k * d + i.
inline InnerProductSpace one_variable_space(const OpValuedMeasure& mu, int cap, const TolerancePolicy& tol = {})
{
    if (mu.window() < cap - 1) throw Error(ErrorCode::CapTooSmall, "measure window smaller than cap - 1");
    const int d = mu.coeff_dim();
    Matrix g    = Matrix::Zero(Index(cap + 1) * d, Index(cap + 1) * d);
    for (int n = 0; n <= cap; ++n)
        for (int q = 0; q <= cap; ++q) {
            Matrix blk = Matrix::Zero(d, d);
            if (n == q) blk = Matrix::Identity(d, d) + double(n) * mu.at(0);
            else if (std::min(n, q) > 0) blk = double(std::min(n, q)) * mu.at(q - n);
            g.block(Index(q) * d, Index(n) * d, d, d) = blk;
        }
    return detail::validated_gram(std::move(g), tol);
}

/// (M_z1, M_z2) on the truncated model space.
inline std::pair<GradedOperator, GradedOperator> mz_operators(const GradedSpace& space)
{
    if (space.cap() < 1) throw Error(ErrorCode::CapTooSmall, "cap 0 leaves no admissible domain for M_z");
    return {shift_operator(space, {1, 0}), shift_operator(space, {0, 1})};
}

using BidiscPoint = std::array<Complex, 2>;

namespace detail {

inline Complex ipow(Complex z, int k)
{
    Complex out(1.0);
    for (int i = 0; i < k; ++i) out *= z;
    return out;
}

} // namespace detail

/// d x dim matrix B(z) with column (m, n, i) equal to e_i z1^m z2^n, so that a
/// coefficient vector p evaluates to B(z) p.
inline Matrix monomial_row(const GradedSpace& space, const BidiscPoint& z)
{
    Matrix b = Matrix::Zero(space.coeff_dim(), space.dim());
    for (Index j = 0; j < space.dim(); ++j) {
        const auto g = space.monomial_of(j);
        b(space.coeff_of(j), j) = detail::ipow(z[0], g.m) * detail::ipow(z[1], g.n);
    }
    return b;
}

/// Truncated reproducing kernel K_N(z, w) = B(z) G^{-1} B(w)^H.
inline Matrix kernel_eval(const GradedSpace& space, const BidiscPoint& z, const BidiscPoint& w)
{
    for (const auto& p : {z[0], z[1], w[0], w[1]})
        if (!(std::abs(p) < 1.0)) throw Error(ErrorCode::PointOutsideDisc, "kernel_eval needs points in the open bidisc");
    return monomial_row(space, z) * space.space().solve(monomial_row(space, w).adjoint());
}

/// Coefficient vector of K_N(., w) v.
inline Vector kernel_section(const GradedSpace& space, const BidiscPoint& w, const Vector& v)
{
    for (const auto& p : w)
        if (!(std::abs(p) < 1.0)) throw Error(ErrorCode::PointOutsideDisc, "kernel_section needs a point in the open bidisc");
    return space.space().solve(monomial_row(space, w).adjoint() * v);
}

namespace detail {

/// Largest c <= limit such that the frame of S lives on window(ops, c).
inline int headroom(std::span<const DenseOperator> ops, const Subspace& s, int limit, const TolerancePolicy& tol)
{
    if (s.is_zero()) return limit;
    const double scale = std::max(1.0, s.frame().cwiseAbs().maxCoeff());
    int c = 0;
    while (c < limit) {
        const auto w = window(ops, c + 1);
        std::vector<char> in(static_cast<std::size_t>(s.ambient_dim()), 0);
        for (Index j : w) in[static_cast<std::size_t>(j)] = 1;
        double outside = 0.0;
        for (Index r = 0; r < s.ambient_dim(); ++r)
            if (!in[static_cast<std::size_t>(r)]) outside = std::max(outside, s.frame().row(r).cwiseAbs().maxCoeff());
        if (outside > tol.rank_tol * scale) break;
        ++c;
    }
    return c;
}

/// mu^(k)[j, i] = <T e_i, T^{k+1} e_j> - <e_i, T^k e_j>, the compression
/// P_E T*^k (T*T - I)|_E read off as forms.
inline OpValuedMeasure recover_unchecked(const DenseOperator& t, const Subspace& e, int k_max)
{
    const auto&  h = t.domain();
    Matrix       tk = e.frame(); // T^k F
    const Matrix tf = t.matrix() * e.frame();
    std::vector<Matrix> coeffs;
    for (int k = 0; k <= k_max; ++k) {
        const Matrix next = t.matrix() * tk;
        coeffs.push_back(h.form(tf, next) - h.form(e.frame(), tk));
        tk = next;
    }
    const int d = static_cast<int>(e.dim());
    return OpValuedMeasure(d, coeffs, MeasureSource{MeasureKind::Fourier, {}, {}, coeffs});
}

} // namespace detail

/// Fourier window mu^(0..K) of the measure attached to (T, E).
inline OpValuedMeasure recover_measure(const DenseOperator& t, const Subspace& e, int k_max,
                                       const TolerancePolicy& tol = {})
{
    detail::require_endomorphism(t, "recover_measure");
    if (!e.space().same_as(t.domain()))
        throw Error(ErrorCode::InvalidArgument, "recover_measure: subspace is not in the operator's space");
    if (e.is_zero()) throw Error(ErrorCode::EmptyWanderingSubspace, "recover_measure: empty subspace");
    if (k_max < 0) throw Error(ErrorCode::InvalidArgument, "window must be nonnegative");
    const auto iso = check_two_isometry(t, tol);
    if (!iso.pass)
        throw Error(ErrorCode::PrerequisiteFailed,
                    "operator is not a 2-isometry on its window (residual " + std::to_string(iso.residual) + ")");
    if (detail::headroom(std::span<const DenseOperator>(&t, 1), e, k_max + 1, tol) < k_max + 1)
        throw Error(ErrorCode::CapTooSmall, "subspace does not admit " + std::to_string(k_max + 1)
                                                + " applications of T inside the truncation");
    return detail::recover_unchecked(t, e, k_max);
}

struct EquivalenceReport
{
    OpValuedMeasure recovered_mu1;
    OpValuedMeasure recovered_mu2;
    int             cap                   = 0;
    Index           dictionary_size       = 0;
    double          gram_residual         = 0.0;
    double          intertwining_residual = 0.0;
    // hypotheses of the model theorem, reported alongside the verdict
    LeftInverseCommutingReport lic;
    ToralReport                toral;
    bool                       prerequisites_pass = false;
    bool                       pass               = false;
};

/// Compare <T1^m T2^n e_i, T1^p T2^q e_j> with the D_E(mu1, mu2) Gram built
/// from the measures recovered out of (T1, T2) itself.
inline EquivalenceReport verify_model_equivalence(const DenseOperator& t1, const DenseOperator& t2, const Subspace& e,
                                                  int cap, const TolerancePolicy& tol = {})
{
    const std::array<DenseOperator, 2> ts{t1, t2};
    detail::require_common_space(ts, "verify_model_equivalence");
    if (e.is_zero()) throw Error(ErrorCode::EmptyWanderingSubspace, "wandering subspace ker T1* ∩ ker T2* is zero");
    if (!e.space().same_as(t1.domain()))
        throw Error(ErrorCode::InvalidArgument, "verify_model_equivalence: subspace is not in the operators' space");
    if (cap < 1) throw Error(ErrorCode::CapTooSmall, "cap must be at least 1");
    if (detail::headroom(ts, e, cap, tol) < cap)
        throw Error(ErrorCode::CapTooSmall, "wandering subspace does not admit words of length " + std::to_string(cap));

    EquivalenceReport r;
    r.cap = cap;
    try {
        r.lic = check_left_inverse_commuting(ts, tol);
    } catch (const Error& err) {
        if (err.code() == ErrorCode::NotLeftInvertible) throw Error(ErrorCode::PrerequisiteFailed, err.what());
        throw;
    }
    if (cap >= 2) r.toral = check_toral_two_isometry(t1, t2, tol);
    else r.toral.pass = true;
    r.prerequisites_pass = r.lic.pass && r.toral.pass;

    r.recovered_mu1 = detail::recover_unchecked(t1, e, cap - 1);
    r.recovered_mu2 = detail::recover_unchecked(t2, e, cap - 1);
    const int d     = static_cast<int>(e.dim());

    // dictionary in graded-lex order
    const auto& h    = t1.domain();
    const auto  mons = GradedSpace::hardy(cap, 1).monomials();
    std::vector<Matrix> t2pow{e.frame()};
    for (int n = 1; n <= cap; ++n) t2pow.push_back(t2.matrix() * t2pow.back());
    Matrix v(h.dim(), Index(mons.size()) * d);
    std::vector<Matrix> blocks;
    for (std::size_t c = 0; c < mons.size(); ++c) {
        Matrix x = t2pow[std::size_t(mons[c].n)];
        for (int m = 0; m < mons[c].m; ++m) x = t1.matrix() * x;
        v.middleCols(Index(c) * d, d) = x;
        blocks.push_back(std::move(x));
    }
    r.dictionary_size = v.cols();
    const auto sv = Eigen::JacobiSVD<Matrix>(h.to_euclidean(v)).singularValues();
    if (sv.size() < v.cols() || !(sv(0) > 0.0) || sv(sv.size() - 1) <= tol.rank_tol * sv(0))
        throw Error(ErrorCode::DictionaryRankDeficient, "vectors T1^m T2^n e_i are linearly dependent");

    const Matrix g_cand  = h.form(v, v);
    const Matrix g_model = detail::model_gram_entries(r.recovered_mu1, r.recovered_mu2, cap);
    r.gram_residual      = (g_cand - g_model).cwiseAbs().maxCoeff();

    const auto idx = [&](int m, int n) {
        for (std::size_t c = 0; c < mons.size(); ++c)
            if (mons[c].m == m && mons[c].n == n) return c;
        return mons.size();
    };
    for (std::size_t c = 0; c < mons.size(); ++c) {
        const auto [m, n] = mons[c];
        if (m + n >= cap) continue;
        const Matrix d1 = t1.matrix() * blocks[c] - blocks[idx(m + 1, n)];
        const Matrix d2 = t2.matrix() * blocks[c] - blocks[idx(m, n + 1)];
        for (const Matrix* dm : {&d1, &d2})
            r.intertwining_residual = std::max(r.intertwining_residual, std::sqrt(h.form(*dm, *dm).diagonal().real().maxCoeff()));
    }
    r.pass = r.gram_residual < tol.residual_tol && r.intertwining_residual < tol.residual_tol;
    return r;
}

} // namespace woldlab
