#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "woldlab/subspace.hpp"

namespace woldlab {

struct HyperRange
{
    Subspace subspace;
    int      iterations = 0;
    /// The operator is a truncation, so the chain of ranges collapses through
    /// the degree cap rather than through genuine stabilization.
    bool truncation_limited = false;
};

/// H_inf(T) = ∩_{m>=1} T^m H via S_1 = T H, S_{m+1} = S_m ∩ T(S_m).
inline HyperRange hyper_range(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    detail::require_endomorphism(t, "hyper_range");
    Subspace s = range(t, tol);
    for (int m = 1; m <= tol.max_iter; ++m) {
        Subspace next = intersect(s, image(t, s, tol), tol);
        if (next.dim() == s.dim()) return {std::move(s), m, t.is_truncated()};
        s = std::move(next);
    }
    throw Error(ErrorCode::NoStabilization,
                "hyper-range still shrinking after " + std::to_string(tol.max_iter) + " iterations");
}

/// W_T(S) = ∨_{m>=0} T^m S; stabilizes after at most dim H steps.
inline Subspace wandering_span(const DenseOperator& t, const Subspace& s, const TolerancePolicy& tol = {})
{
    detail::require_endomorphism(t, "wandering_span");
    Subspace j = s;
    const Index cap = std::max<Index>(tol.max_iter, t.domain().dim() + 1);
    for (Index it = 0; it < cap; ++it) {
        Subspace next = join(j, image(t, j, tol), tol);
        if (next.dim() == j.dim()) return j;
        j = std::move(next);
    }
    return j;
}

/// ∩_{k>=0} T^k X for T-invariant X, as the fixed point of Y <- Y ∩ T(Y).
inline Subspace stable_intersection(const DenseOperator& t, const Subspace& x, const TolerancePolicy& tol = {})
{
    Subspace y = x;
    for (int it = 0; it <= tol.max_iter; ++it) {
        Subspace next = intersect(y, image(t, y, tol), tol);
        if (next.dim() == y.dim()) return y;
        y = std::move(next);
    }
    throw Error(ErrorCode::NoStabilization, "intersection chain did not stabilize");
}

/// Joint intersection over all words in `ops`: alternate single-direction
/// stabilizations until a whole sweep leaves the dimension unchanged.
inline Subspace joint_stable_intersection(std::span<const DenseOperator> ops, const Subspace& x,
                                          const TolerancePolicy& tol = {})
{
    Subspace y = x;
    for (int sweep = 0; sweep <= tol.max_iter; ++sweep) {
        const Index before = y.dim();
        for (const auto& t : ops) y = stable_intersection(t, y, tol);
        if (y.dim() == before) return y;
    }
    throw Error(ErrorCode::NoStabilization, "joint intersection did not stabilize");
}

/// Joint span ∨ T^m X over all words in `ops`.
inline Subspace joint_span(std::span<const DenseOperator> ops, const Subspace& x, const TolerancePolicy& tol = {})
{
    Subspace y = x;
    for (Index sweep = 0; sweep <= x.ambient_dim() + 1; ++sweep) {
        const Index before = y.dim();
        for (const auto& t : ops) y = wandering_span(t, y, tol);
        if (y.dim() == before) return y;
    }
    return y;
}

/// E_T = ker T*.
inline Subspace wandering_subspace(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    return kernel(adjoint(t), tol);
}

struct WoldReport
{
    Subspace h_inf;
    Subspace wandering;
    double   completeness_residual  = 0.0; // ||I - P_h - P_W||
    double   orthogonality_residual = 0.0; // ||Q_h^H Q_W||
    double   unitary_residual       = 0.0; // T|_{H_inf} unitary
    double   reducing_residual      = 0.0; // H_inf reduces T
    int      iterations_to_stabilize = 0;
    bool     truncation_limited     = false;
    bool     pass                   = false;
};

namespace detail {

inline double completeness(std::span<const Subspace> parts, Index n)
{
    Matrix p = Matrix::Identity(n, n);
    for (const auto& s : parts) {
        if (s.is_zero()) continue;
        const Matrix q = s.euclidean_frame();
        p -= q * q.adjoint();
    }
    return spectral_norm(p);
}

} // namespace detail

/// H = H_inf(T) ⊕ W_T(ker T*), with H_inf reducing and T unitary on it.
/// A failing decomposition is reported, not thrown.
inline WoldReport wold_single(const DenseOperator& t, const TolerancePolicy& tol = {})
{
    detail::require_endomorphism(t, "wold_single");
    if (!is_left_invertible(t, tol)) left_inverse(t, tol); // throws NotLeftInvertible with details

    WoldReport r;
    auto hr = hyper_range(t, tol);
    r.h_inf                   = std::move(hr.subspace);
    r.iterations_to_stabilize = hr.iterations;
    r.truncation_limited      = hr.truncation_limited;
    r.wandering               = wandering_span(t, wandering_subspace(t, tol), tol);

    const std::array<Subspace, 2> parts{r.h_inf, r.wandering};
    r.completeness_residual  = detail::completeness(parts, t.domain().dim());
    r.orthogonality_residual = cross_gram_norm(r.h_inf, r.wandering);
    r.unitary_residual       = unitary_defect(t, r.h_inf);
    r.reducing_residual      = invariance_report(t, r.h_inf).reducing;
    r.pass = r.completeness_residual < tol.residual_tol && r.orthogonality_residual < tol.residual_tol
             && r.unitary_residual < tol.residual_tol && r.reducing_residual < tol.residual_tol;
    return r;
}

//
// Joint decomposition of a left-inverse commuting tuple into 2^n pieces H_α,
// α ∈ {0,1}^n.  α_i = 0 marks a direction in which T_i is unitary on the
// piece, α_i = 1 a shift direction:
//
//   E_α = ∩_{α_i = 1} ker T_i*            (E_0 = H)
//   H_α = ∨_{α_i = 1} T^m ( ∩_{α_j = 0} T^m E_α )
//
// For pairs, α = (0,0), (0,1), (1,0), (1,1) are H_00, H_01, H_10, H_11:
// T_1 is unitary on H_00 and H_01, T_2 on H_00 and H_10.
//

using Alpha = std::vector<int>;

inline std::string alpha_string(const Alpha& a)
{
    std::string s;
    for (int v : a) s.push_back(v ? '1' : '0');
    return s;
}

/// All α ∈ {0,1}^n in canonical order (α_1 most significant).
inline std::vector<Alpha> all_alphas(std::size_t n)
{
    std::vector<Alpha> out;
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
        Alpha a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = int((code >> (n - 1 - i)) & 1u);
        out.push_back(std::move(a));
    }
    return out;
}

struct WoldPiece
{
    Alpha               alpha;
    Subspace            subspace;
    std::vector<double> unitary_residual; // per operator; gating only where α_i = 0
    double              reducing_residual = 0.0;
};

struct TupleWoldReport
{
    std::vector<WoldPiece> pieces;
    double completeness_residual  = 0.0;
    double orthogonality_residual = 0.0;
    bool   pass                   = false;
};

/// Raised by wold_tuple when the left-inverse commuting or single-operator
/// hypotheses fail; carries the failing sub-reports.
class PrerequisiteFailure : public Error
{
public:
    PrerequisiteFailure(const std::string& what, LeftInverseCommutingReport lic, std::vector<WoldReport> singles)
        : Error(ErrorCode::PrerequisiteFailed, what), lic_(std::move(lic)), singles_(std::move(singles))
    {}

    const LeftInverseCommutingReport& lic() const { return lic_; }
    const std::vector<WoldReport>&    singles() const { return singles_; }

private:
    LeftInverseCommutingReport lic_;
    std::vector<WoldReport>    singles_;
};

namespace detail {

inline std::vector<DenseOperator> pick(std::span<const DenseOperator> ts, const Alpha& a, int value)
{
    std::vector<DenseOperator> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] == value) out.push_back(ts[i]);
    return out;
}

} // namespace detail

/// The piece H_α alone (no prerequisite checks).
inline Subspace wold_piece(std::span<const DenseOperator> ts, const Alpha& a, const TolerancePolicy& tol = {})
{
    const auto& h = ts.front().domain();
    Subspace e = Subspace::full(h);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] == 1) e = intersect(e, wandering_subspace(ts[i], tol), tol);

    const auto unitary_dirs = detail::pick(ts, a, 0);
    const auto shift_dirs   = detail::pick(ts, a, 1);
    const Subspace inner = joint_stable_intersection(unitary_dirs, e, tol);
    return joint_span(shift_dirs, inner, tol);
}

inline TupleWoldReport wold_tuple(std::span<const DenseOperator> ts, const TolerancePolicy& tol = {},
                                  bool force = false)
{
    if (ts.empty()) throw Error(ErrorCode::InvalidArgument, "wold_tuple needs at least one operator");
    detail::require_common_space(ts, "wold_tuple");

    if (!force) {
        auto lic = check_left_inverse_commuting(ts, tol);
        std::vector<WoldReport> singles;
        bool ok = lic.pass;
        for (const auto& t : ts) {
            singles.push_back(wold_single(t, tol));
            ok = ok && singles.back().pass;
        }
        if (!ok)
            throw PrerequisiteFailure("tuple is not left-inverse commuting or a component lacks a Wold-type decomposition",
                                      std::move(lic), std::move(singles));
    }

    TupleWoldReport r;
    const auto& h = ts.front().domain();
    std::vector<Subspace> spaces;
    for (const auto& a : all_alphas(ts.size())) {
        WoldPiece p;
        p.alpha    = a;
        p.subspace = wold_piece(ts, a, tol);
        bool ok    = true;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            p.unitary_residual.push_back(unitary_defect(ts[i], p.subspace));
            p.reducing_residual = std::max(p.reducing_residual, invariance_report(ts[i], p.subspace).reducing);
            if (a[i] == 0) ok = ok && p.unitary_residual.back() < tol.residual_tol;
        }
        ok = ok && p.reducing_residual < tol.residual_tol;
        r.pass = (spaces.empty() ? true : r.pass) && ok;
        spaces.push_back(p.subspace);
        r.pieces.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < spaces.size(); ++i)
        for (std::size_t j = i + 1; j < spaces.size(); ++j)
            r.orthogonality_residual = std::max(r.orthogonality_residual, cross_gram_norm(spaces[i], spaces[j]));
    r.completeness_residual = detail::completeness(spaces, h.dim());
    r.pass = r.pass && r.orthogonality_residual < tol.residual_tol && r.completeness_residual < tol.residual_tol;
    return r;
}

inline TupleWoldReport wold_tuple(std::initializer_list<DenseOperator> ts, const TolerancePolicy& tol = {},
                                  bool force = false)
{
    const std::vector<DenseOperator> v(ts);
    return wold_tuple(std::span<const DenseOperator>(v), tol, force);
}

struct ComplementLemmaReport
{
    Subspace h_inf;        // H_inf(T1)
    Subspace shifted;      // T2(H_inf(T1))
    Subspace intersection; // ∩_m T1^m(ker T2*)
    double   residual               = 0.0; // distance(H_inf, shifted ∨ intersection)
    double   orthogonality_residual = 0.0; // shifted ⟂ intersection
    Index    analytic_part_dim      = 0;   // dim ∩_n T2^n (H_inf(T1) ⊖ H_00)
    bool     pass                   = false;
};

/// H_inf(T1) = T2(H_inf(T1)) ⊕ ∩_m T1^m(ker T2*), together with the
/// analyticity of T2 on H_inf(T1) ⊖ H_00.
inline ComplementLemmaReport complement_lemma_check(const DenseOperator& t1, const DenseOperator& t2,
                                                    const TolerancePolicy& tol = {})
{
    const std::array<DenseOperator, 2> ts{t1, t2};
    auto lic = check_left_inverse_commuting(ts, tol);
    auto w1  = wold_single(t1, tol);
    if (!lic.pass || !w1.pass)
        throw PrerequisiteFailure("complement lemma needs a left-inverse commuting pair with T1 admitting a Wold decomposition",
                                  std::move(lic), {w1});

    ComplementLemmaReport r;
    r.h_inf        = w1.h_inf;
    r.shifted      = image(t2, r.h_inf, tol);
    r.intersection = stable_intersection(t1, wandering_subspace(t2, tol), tol);
    r.residual               = distance(r.h_inf, join(r.shifted, r.intersection, tol));
    r.orthogonality_residual = cross_gram_norm(r.shifted, r.intersection);

    const Subspace h00  = joint_stable_intersection(ts, Subspace::full(t1.domain()), tol);
    const Subspace rest = complement(h00, r.h_inf, tol);
    r.analytic_part_dim = stable_intersection(t2, rest, tol).dim();

    r.pass = r.residual < tol.residual_tol && r.orthogonality_residual < tol.residual_tol && r.analytic_part_dim == 0;
    return r;
}

} // namespace woldlab
