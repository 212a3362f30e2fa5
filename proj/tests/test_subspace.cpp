#include <gtest/gtest.h>

#include "support.hpp"

using namespace woldlab;
using namespace woldlab::testing;

namespace {

Matrix unit(Index n, std::initializer_list<std::pair<Index, double>> entries)
{
    Matrix v = Matrix::Zero(n, 1);
    for (auto [i, x] : entries) v(i, 0) = x;
    return v;
}

Subspace span(const InnerProductSpace& h, std::initializer_list<Matrix> vs)
{
    Matrix x(h.dim(), Index(vs.size()));
    Index c = 0;
    for (const auto& v : vs) x.col(c++) = v.col(0);
    return span_of(h, x);
}

/// Random subspace of the given dimension.
Subspace random_subspace(const InnerProductSpace& h, Index k, std::mt19937_64& rng)
{
    return span_of(h, random_matrix(h.dim(), k, rng));
}

} // namespace

TEST(Range, ZeroMatrixHasZeroRange)
{
    const DenseOperator z(Matrix::Zero(3, 3), InnerProductSpace(3));
    EXPECT_TRUE(range(z).is_zero());
    EXPECT_EQ(kernel(z).dim(), 3);
}

TEST(Kernel, HardyShiftAdjointIsConstants)
{
    const auto s = gallery::hardy_shift(5);
    const auto e = kernel(adjoint(s));
    ASSERT_EQ(e.dim(), 1);
    EXPECT_NEAR(std::abs(e.frame()(0, 0)), 1.0, 1e-14);
    EXPECT_LT(max_abs(e.frame().bottomRows(5)), 1e-14);
}

TEST(Kernel, BidiscFirstShiftAdjointIsSecondVariableSlice)
{
    // <x, z1 g> = 0 for all g: exactly the monomials z2^n.
    const int  cap   = 3;
    const auto space = GradedSpace::hardy(cap);
    const auto [m1, m2] = mz_operators(space);
    const auto e = wandering_subspace(m1.op);
    EXPECT_EQ(e.dim(), cap + 1);
    Matrix slice = Matrix::Zero(space.dim(), cap + 1);
    for (int n = 0; n <= cap; ++n) slice(space.index_of({0, n}, 0), n) = 1.0;
    EXPECT_LT(projector_gap(e, span_of(space.space(), slice)), 1e-12);
}

TEST(Kernel, RespectsGram)
{
    // Weighted shift on D(Lebesgue): ker T* still the constants.
    const auto t = gallery::dirichlet_shift(lebesgue_measure(2.0, 1, 4), 4);
    const auto e = wandering_subspace(t);
    ASSERT_EQ(e.dim(), 1);
    EXPECT_LT(e.orthonormality_defect(), 1e-13);
    EXPECT_LT(max_abs(e.frame().bottomRows(4)), 1e-13);
}

TEST(Complement, UnitVectorInPlane)
{
    const InnerProductSpace h(2);
    const auto c = complement(span(h, {unit(2, {{0, 1.0}})}), Subspace::full(h));
    EXPECT_LT(projector_gap(c, span(h, {unit(2, {{1, 1.0}})})), 1e-14);
}

TEST(Complement, NotNestedThrows)
{
    const InnerProductSpace h(3);
    try {
        complement(span(h, {unit(3, {{0, 1.0}})}), span(h, {unit(3, {{1, 1.0}})}));
        FAIL() << "expected NotNested";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotNested);
    }
}

TEST(Complement, IsAnInvolutionWithinB)
{
    std::mt19937_64 rng(41);
    const InnerProductSpace h(random_gram(7, rng));
    const auto b = random_subspace(h, 5, rng);
    const auto a = span_of(h, b.frame() * random_matrix(5, 2, rng));
    const auto c = complement(a, b);
    EXPECT_EQ(c.dim(), 3);
    EXPECT_LT(cross_gram_norm(a, c), 1e-12);
    EXPECT_LT(projector_gap(complement(c, b), a), 1e-10);
}

TEST(Intersect, SharedDiagonalDirection)
{
    const InnerProductSpace h(4);
    const auto a = span(h, {unit(4, {{0, 1.0}, {1, 1.0}}), unit(4, {{2, 1.0}})});
    const auto b = span(h, {unit(4, {{0, 1.0}, {1, 1.0}}), unit(4, {{3, 1.0}})});
    const auto i = intersect(a, b);
    ASSERT_EQ(i.dim(), 1);
    EXPECT_LT(projector_gap(i, span(h, {unit(4, {{0, 1.0}, {1, 1.0}})})), 1e-14);
}

TEST(Intersect, DimensionFormulaOnRandomPairs)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const InnerProductSpace h(random_gram(8, rng));
        // shared part of dim 2 plus generic parts: well separated principal angles
        const Matrix shared = random_matrix(8, 2, rng);
        Matrix xa(8, 4), xb(8, 3);
        xa << shared, random_matrix(8, 2, rng);
        xb << shared, random_matrix(8, 1, rng);
        const auto a = span_of(h, xa), b = span_of(h, xb);
        const auto i = intersect(a, b), j = join(a, b);
        EXPECT_EQ(i.dim(), 2);
        EXPECT_EQ(i.dim() + j.dim(), a.dim() + b.dim());
        EXPECT_LT(containment_defect(i, a), 1e-10);
        EXPECT_LT(containment_defect(i, b), 1e-10);
    }
}

TEST(Projector, IdempotentAndGramOrthogonal)
{
    std::mt19937_64 rng(43);
    const InnerProductSpace h(random_gram(6, rng));
    const auto a = random_subspace(h, 3, rng);
    const Matrix p = a.projector();
    EXPECT_LT(max_abs(p * p - p), 1e-12);
    // self-adjoint in the Gram inner product: G P = P^H G
    EXPECT_LT(max_abs(h.gram() * p - p.adjoint() * h.gram()), 1e-12);
    EXPECT_LT(a.orthonormality_defect(), 1e-12);
}

TEST(Projector, JoinDominatesEachPart)
{
    std::mt19937_64 rng(44);
    const InnerProductSpace h(random_gram(6, rng));
    const auto a = random_subspace(h, 2, rng), b = random_subspace(h, 2, rng);
    const auto j = join(a, b);
    // Euclidean images of Gram-orthogonal projections are orthogonal projections
    const Matrix qj = j.euclidean_frame(), qa = a.euclidean_frame();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(qj * qj.adjoint() - qa * qa.adjoint());
    EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
}

TEST(Invariance, FullSpaceHasZeroResiduals)
{
    std::mt19937_64 rng(45);
    const InnerProductSpace h(random_gram(4, rng));
    const DenseOperator t(random_matrix(4, 4, rng), h);
    const auto r = invariance_report(t, Subspace::full(h));
    EXPECT_LT(r.invariant, 1e-12);
    EXPECT_LT(r.reducing, 1e-12);
}

TEST(Invariance, ShiftInvariantButNotReducing)
{
    const auto s = gallery::hardy_shift(3);
    const InnerProductSpace& h = s.domain();
    Matrix tail = Matrix::Zero(4, 3);
    tail.bottomRows(3) = Matrix::Identity(3, 3);
    const auto r = invariance_report(s, span_of(h, tail));
    EXPECT_LT(r.invariant, 1e-14);
    EXPECT_NEAR(r.reducing, 1.0, 1e-14);
}

TEST(Distance, UnequalDimensionsAreFar)
{
    const InnerProductSpace h(3);
    EXPECT_NEAR(distance(span(h, {unit(3, {{0, 1.0}})}), Subspace::full(h)), 1.0, 1e-14);
    EXPECT_NEAR(distance(Subspace::full(h), Subspace::full(h)), 0.0, 1e-14);
}

TEST(Duality, ComplementOfDualHyperRangeIsWanderingSpan)
{
    // H ⊖ H_inf(T') = W_T(E_T) and H ⊖ H_inf(T) = W_T'(E_T).
    for (const auto& ex : gallery_examples()) {
        for (const auto& t : ex.ops) {
            if (!is_left_invertible(t) || !wold_single(t).pass) continue;
            const auto td   = cauchy_dual(t);
            const auto full = Subspace::full(t.domain());
            const auto e    = wandering_subspace(t);
            EXPECT_LT(distance(complement(hyper_range(td).subspace, full), wandering_span(t, e)), 1e-8)
                << ex.spec.name;
            EXPECT_LT(distance(complement(hyper_range(t).subspace, full), wandering_span(td, e)), 1e-8)
                << ex.spec.name;
        }
    }
}

TEST(ZeroSubspace, IsFirstClass)
{
    const InnerProductSpace h(3);
    const auto z = Subspace::zero(h);
    EXPECT_EQ(z.dim(), 0);
    EXPECT_TRUE(intersect(z, Subspace::full(h)).is_zero());
    EXPECT_EQ(join(z, Subspace::full(h)).dim(), 3);
    EXPECT_EQ(complement(z, Subspace::full(h)).dim(), 3);
    EXPECT_TRUE(image(gallery::hardy_shift(2), z).is_zero());
}
