#pragma once

#include <vector>

#include "woldlab/operator_core.hpp"

namespace woldlab {

/// Bidegree of the monomial z1^m z2^n.
struct GradedIndex
{
    int m = 0;
    int n = 0;

    int  total() const { return m + n; }
    bool operator==(const GradedIndex&) const = default;
};

//
// Polynomials of total degree <= cap in two variables with coefficients in
// E = C^coeff_dim.
//
// Canonical basis order (graded lex with z1 before z2): by total degree t,
// then m from t down to 0, then the coefficient index.  Degree-<=d polynomials
// therefore occupy a leading block of the basis, and the degree-0 slice is E.
//
class GradedSpace
{
public:
    GradedSpace() = default;

    GradedSpace(int cap, int coeff_dim, InnerProductSpace space)
        : cap_(cap), coeff_dim_(coeff_dim), space_(std::move(space))
    {
        if (cap < 0 || coeff_dim < 1)
            throw Error(ErrorCode::InvalidArgument, "graded space needs cap >= 0 and coeff_dim >= 1");
        if (space_.dim() != basis_size(cap, coeff_dim))
            throw Error(ErrorCode::InvalidArgument, "gram size does not match cap/coeff_dim");
    }

    /// Identity gram: the truncated Hardy space of the bidisc.
    static GradedSpace hardy(int cap, int coeff_dim = 1)
    {
        return GradedSpace(cap, coeff_dim, InnerProductSpace(basis_size(cap, coeff_dim)));
    }

    static Index basis_size(int cap, int coeff_dim)
    {
        if (cap < 0) return 0;
        return Index(coeff_dim) * (cap + 1) * (cap + 2) / 2;
    }

    int                      cap() const { return cap_; }
    int                      coeff_dim() const { return coeff_dim_; }
    Index                    dim() const { return space_.dim(); }
    const InnerProductSpace& space() const { return space_; }
    const Matrix&            gram() const { return space_.gram(); }

    /// Number of basis vectors of total degree <= d.
    Index slice_dim(int d) const { return basis_size(std::min(d, cap_), coeff_dim_); }

    Index index_of(GradedIndex g, int coeff) const
    {
        const int t = g.total();
        return Index(coeff_dim_) * (Index(t) * (t + 1) / 2 + (t - g.m)) + coeff;
    }

    GradedIndex monomial_of(Index idx) const
    {
        const Index pos = idx / coeff_dim_;
        int t = 0;
        while (Index(t + 1) * (t + 2) / 2 <= pos) ++t;
        const int off = static_cast<int>(pos - Index(t) * (t + 1) / 2);
        return {t - off, off};
    }

    int coeff_of(Index idx) const { return static_cast<int>(idx % coeff_dim_); }

    /// All bidegrees in canonical order.
    std::vector<GradedIndex> monomials() const
    {
        std::vector<GradedIndex> out;
        for (int t = 0; t <= cap_; ++t)
            for (int m = t; m >= 0; --m) out.push_back({m, t - m});
        return out;
    }

private:
    int               cap_       = 0;
    int               coeff_dim_ = 1;
    InnerProductSpace space_;
};

/// Degree-shifting operator (m, n, x) -> (m + a, n + b, x) on a graded space;
/// columns of degree > cap - |shift| are truncated.
struct GradedOperator
{
    GradedSpace   space;
    GradedIndex   shift;
    DenseOperator op;
};

inline GradedOperator shift_operator(const GradedSpace& space, GradedIndex shift)
{
    if (shift.m < 0 || shift.n < 0)
        throw Error(ErrorCode::InvalidArgument, "shift must be nonnegative");
    if (space.cap() < shift.total())
        throw Error(ErrorCode::CapTooSmall, "cap leaves no admissible domain for the shift");

    const Index n = space.dim();
    Matrix m = Matrix::Zero(n, n);
    std::vector<Index> trunc;
    for (Index j = 0; j < n; ++j) {
        const auto g = space.monomial_of(j);
        if (g.total() + shift.total() > space.cap()) {
            trunc.push_back(j);
            continue;
        }
        m(space.index_of({g.m + shift.m, g.n + shift.n}, space.coeff_of(j)), j) = 1.0;
    }
    return {space, shift, DenseOperator(std::move(m), space.space(), std::move(trunc))};
}

/// Single-variable counterpart: polynomials of degree <= cap in z with
/// coefficients in C^coeff_dim, basis index k * coeff_dim + i.
inline DenseOperator single_variable_shift(const InnerProductSpace& space, int cap, int coeff_dim = 1)
{
    const Index n = Index(cap + 1) * coeff_dim;
    if (space.dim() != n)
        throw Error(ErrorCode::InvalidArgument, "space size does not match cap/coeff_dim");
    Matrix m = Matrix::Zero(n, n);
    std::vector<Index> trunc;
    for (int k = 0; k <= cap; ++k)
        for (int i = 0; i < coeff_dim; ++i) {
            const Index j = Index(k) * coeff_dim + i;
            if (k == cap) trunc.push_back(j);
            else m(j + coeff_dim, j) = 1.0;
        }
    return DenseOperator(std::move(m), space, std::move(trunc));
}

} // namespace woldlab
