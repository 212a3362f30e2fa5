#pragma once

#include <optional>

#include "woldlab/dirichlet_model.hpp"
#include "woldlab/wold.hpp"

namespace woldlab {

/// A shift-type block of the structural decomposition: the wandering part it
/// is generated from, the block itself, the measures recovered on the
/// wandering part and the Gram deviation from the matching model space.
struct ShiftBlock
{
    Subspace wandering;
    Subspace block;
    std::optional<OpValuedMeasure> mu_a; // first (or only) measure
    std::optional<OpValuedMeasure> mu_b; // second measure of the bidisc block
    int    cap           = 0;            // degree of the dictionary compared
    double gram_residual = 0.0;
};

//
// Four-block decomposition of a left-inverse commuting toral 2-isometric pair
//
//   H = H_00 ⊕ W_{T2}(E_01) ⊕ W_{T1}(E_10) ⊕ W_{T1,T2}(E)
//
// with H_00 = ∩ T1^m T2^n H, E_01 = ∩_m T1^m ker T2*, E_10 = ∩_n T2^n ker T1*,
// E = ker T1* ∩ ker T2*.  T1 is unitary on H_00 and H_01, T2 on H_00 and H_10;
// T2 on H_01 is M_z on D_{E_01}(mu1), T1 on H_10 is M_z on D_{E_10}(mu2), and
// the pair on H_11 is (M_z1, M_z2) on D_E(nu1, nu2).
//
struct StructuralReport
{
    Subspace   h00;
    ShiftBlock h01; // measure mu1, recovered from T2 on E_01
    ShiftBlock h10; // measure mu2, recovered from T1 on E_10
    ShiftBlock h11; // measures nu1 (T1), nu2 (T2) on E

    double orthogonality_residual = 0.0;
    double completeness_residual  = 0.0;
    double off_diagonal_residual  = 0.0; // every block reduces T1 and T2
    double unitary_residual       = 0.0; // T1 on H_00, H_01; T2 on H_00, H_10
    double gram_residual          = 0.0; // max over shift blocks
    bool   pass                   = false;
};

namespace detail {

/// Gram of the one-variable dictionary T^n e_i, n <= cap, against D(mu).
inline double one_variable_gram_residual(const DenseOperator& t, const Subspace& e, const OpValuedMeasure& mu,
                                         int cap)
{
    const int d = static_cast<int>(e.dim());
    Matrix v(e.ambient_dim(), Index(cap + 1) * d);
    Matrix x = e.frame();
    for (int n = 0; n <= cap; ++n) {
        v.middleCols(Index(n) * d, d) = x;
        x = t.matrix() * x;
    }
    const Matrix g_cand = t.domain().form(v, v);
    Matrix g_model = Matrix::Zero(v.cols(), v.cols());
    for (int n = 0; n <= cap; ++n)
        for (int q = 0; q <= cap; ++q) {
            Matrix blk = Matrix::Zero(d, d);
            if (n == q) blk = Matrix::Identity(d, d) + double(n) * mu.at(0);
            else if (std::min(n, q) > 0) blk = double(std::min(n, q)) * mu.at(q - n);
            g_model.block(Index(q) * d, Index(n) * d, d, d) = blk;
        }
    return (g_cand - g_model).cwiseAbs().maxCoeff();
}

inline double bidisc_gram_residual(const DenseOperator& t1, const DenseOperator& t2, const Subspace& e,
                                   const OpValuedMeasure& nu1, const OpValuedMeasure& nu2, int cap)
{
    const int d     = static_cast<int>(e.dim());
    const auto mons = GradedSpace::hardy(cap, 1).monomials();
    Matrix v(e.ambient_dim(), Index(mons.size()) * d);
    for (std::size_t c = 0; c < mons.size(); ++c) {
        Matrix x = e.frame();
        for (int n = 0; n < mons[c].n; ++n) x = t2.matrix() * x;
        for (int m = 0; m < mons[c].m; ++m) x = t1.matrix() * x;
        v.middleCols(Index(c) * d, d) = x;
    }
    const Matrix g_cand = t1.domain().form(v, v);
    return (g_cand - model_gram_entries(nu1, nu2, cap)).cwiseAbs().maxCoeff();
}

} // namespace detail

/// `cap_limit` bounds the dictionary degree used for measure recovery and the
/// Gram comparison on blocks that are not truncated.
inline StructuralReport structural_decomposition_pair(const DenseOperator& t1, const DenseOperator& t2,
                                                      const TolerancePolicy& tol = {}, int cap_limit = 4)
{
    const std::array<DenseOperator, 2> ts{t1, t2};
    detail::require_common_space(ts, "structural_decomposition_pair");
    auto lic = check_left_inverse_commuting(ts, tol);
    const auto iso1 = check_two_isometry(t1, tol);
    const auto iso2 = check_two_isometry(t2, tol);
    if (!lic.pass || !iso1.pass || !iso2.pass)
        throw PrerequisiteFailure("pair is not left-inverse commuting with 2-isometric components", std::move(lic), {});

    const auto& h = t1.domain();
    const std::array<DenseOperator, 1> only1{t1}, only2{t2};
    const Subspace ker1 = wandering_subspace(t1, tol);
    const Subspace ker2 = wandering_subspace(t2, tol);

    StructuralReport r;
    r.h00           = joint_stable_intersection(ts, Subspace::full(h), tol);
    r.h01.wandering = stable_intersection(t1, ker2, tol);
    r.h10.wandering = stable_intersection(t2, ker1, tol);
    r.h11.wandering = intersect(ker1, ker2, tol);
    r.h01.block     = wandering_span(t2, r.h01.wandering, tol);
    r.h10.block     = wandering_span(t1, r.h10.wandering, tol);
    r.h11.block     = joint_span(ts, r.h11.wandering, tol);

    if (!r.h01.wandering.is_zero()) {
        r.h01.cap = detail::headroom(only2, r.h01.wandering, cap_limit, tol);
        if (r.h01.cap >= 1) {
            r.h01.mu_a          = detail::recover_unchecked(t2, r.h01.wandering, r.h01.cap - 1);
            r.h01.gram_residual = detail::one_variable_gram_residual(t2, r.h01.wandering, *r.h01.mu_a, r.h01.cap);
        }
    }
    if (!r.h10.wandering.is_zero()) {
        r.h10.cap = detail::headroom(only1, r.h10.wandering, cap_limit, tol);
        if (r.h10.cap >= 1) {
            r.h10.mu_a          = detail::recover_unchecked(t1, r.h10.wandering, r.h10.cap - 1);
            r.h10.gram_residual = detail::one_variable_gram_residual(t1, r.h10.wandering, *r.h10.mu_a, r.h10.cap);
        }
    }
    if (!r.h11.wandering.is_zero()) {
        r.h11.cap = detail::headroom(ts, r.h11.wandering, cap_limit, tol);
        if (r.h11.cap >= 1) {
            r.h11.mu_a = detail::recover_unchecked(t1, r.h11.wandering, r.h11.cap - 1);
            r.h11.mu_b = detail::recover_unchecked(t2, r.h11.wandering, r.h11.cap - 1);
            r.h11.gram_residual =
                detail::bidisc_gram_residual(t1, t2, r.h11.wandering, *r.h11.mu_a, *r.h11.mu_b, r.h11.cap);
        }
    }

    const std::array<Subspace, 4> blocks{r.h00, r.h01.block, r.h10.block, r.h11.block};
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            r.orthogonality_residual = std::max(r.orthogonality_residual, cross_gram_norm(blocks[i], blocks[j]));
        for (const auto& t : ts)
            r.off_diagonal_residual = std::max(r.off_diagonal_residual, invariance_report(t, blocks[i]).reducing);
    }
    r.completeness_residual = detail::completeness(blocks, h.dim());
    r.unitary_residual = std::max({unitary_defect(t1, r.h00), unitary_defect(t1, r.h01.block),
                                   unitary_defect(t2, r.h00), unitary_defect(t2, r.h10.block)});
    r.gram_residual = std::max({r.h01.gram_residual, r.h10.gram_residual, r.h11.gram_residual});

    r.pass = r.orthogonality_residual < tol.residual_tol && r.completeness_residual < tol.residual_tol
             && r.off_diagonal_residual < tol.residual_tol && r.unitary_residual < tol.residual_tol
             && r.gram_residual < tol.residual_tol;
    return r;
}

} // namespace woldlab
