#pragma once

// Independent re-derivations used to validate the library.  Nothing here
// calls into the subspace lattice, the Wold engine or the model Gram.

#include <complex>
#include <vector>

#include "woldlab/measure.hpp"
#include "woldlab/operator_core.hpp"

namespace woldlab::oracle {

using Real  = long double;
using CReal = std::complex<long double>;
using Table = std::vector<std::vector<CReal>>;

/// ||f||^2 = ||f||_{H^2}^2 + D_mu(f) for f = Σ a_k z^k, scalar measures only.
///
/// Lebesgue (scale s): D(f) = s Σ k |a_k|^2.  Atom at ζ = e^{iθ} with weight w:
/// D(f) = w ||(f - f(ζ)) / (z - ζ)||_{H^2}^2, the quotient obtained by
/// synthetic division.
inline double dirichlet_integral_oracle(const std::vector<Complex>& a, const OpValuedMeasure& mu)
{
    const auto& src = mu.source();
    if (mu.coeff_dim() != 1)
        throw Error(ErrorCode::UnsupportedMeasureKind, "oracle handles scalar measures only");

    Real hardy = 0;
    for (const auto& c : a) hardy += Real(std::norm(c));

    switch (src.kind) {
    case MeasureKind::Zero: return double(hardy);
    case MeasureKind::Lebesgue: {
        const Real s = src.weight(0, 0).real();
        Real d = 0;
        for (std::size_t k = 0; k < a.size(); ++k) d += Real(k) * Real(std::norm(a[k]));
        return double(hardy + s * d);
    }
    case MeasureKind::Atoms: {
        Real total = hardy;
        for (const auto& atom : src.atoms) {
            const CReal zeta = std::polar(Real(1), Real(atom.angle));
            const Real  w    = atom.weight(0, 0).real();
            // b_{j} = a_{j+1} + ζ b_{j+1}
            CReal b = 0;
            Real  d = 0;
            for (std::size_t k = a.size(); k-- > 1;) {
                b = CReal(a[k]) + zeta * b;
                d += std::norm(b);
            }
            total += w * d;
        }
        return double(total);
    }
    case MeasureKind::Fourier: break;
    }
    throw Error(ErrorCode::UnsupportedMeasureKind, "oracle needs a zero, Lebesgue or atomic measure");
}

struct WoldDims
{
    Index h_inf     = 0;
    Index wandering = 0;
};

namespace detail {

inline Table to_table(const Matrix& m)
{
    Table t(static_cast<std::size_t>(m.rows()), std::vector<CReal>(static_cast<std::size_t>(m.cols())));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) t[std::size_t(i)][std::size_t(j)] = CReal(m(i, j).real(), m(i, j).imag());
    return t;
}

inline Table multiply(const Table& a, const Table& b)
{
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Table c(n, std::vector<CReal>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == CReal(0)) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

/// Reduced row echelon form by Gauss-Jordan elimination with partial
/// pivoting; returns the pivot columns.
inline std::vector<std::size_t> rref(Table& a)
{
    std::vector<std::size_t> pivots;
    if (a.empty()) return pivots;
    const std::size_t rows = a.size(), cols = a[0].size();
    Real scale = 0;
    for (const auto& r : a)
        for (const auto& v : r) scale = std::max(scale, std::abs(v));
    const Real eps = Real(1e-9) * (scale > 0 ? scale : Real(1));

    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t best = row;
        for (std::size_t i = row + 1; i < rows; ++i)
            if (std::abs(a[i][col]) > std::abs(a[best][col])) best = i;
        if (std::abs(a[best][col]) <= eps) continue;
        std::swap(a[row], a[best]);
        const CReal p = a[row][col];
        for (auto& v : a[row]) v /= p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col] == CReal(0)) continue;
            const CReal f = a[i][col];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(Table a) { return rref(a).size(); }

/// Columns spanning the null space, read off the RREF.
inline Table null_space(Table a, std::size_t cols)
{
    const auto pivots = rref(a);
    std::vector<char> is_pivot(cols, 0);
    for (auto p : pivots) is_pivot[p] = 1;
    Table basis(cols); // cols x k
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<CReal> v(cols);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
        for (std::size_t i = 0; i < cols; ++i) basis[i].push_back(v[i]);
    }
    return basis;
}

} // namespace detail

/// dim H_inf = stabilized rank of T^m; E_T = ker(T^H G); dim W = rank of the
/// Krylov block [N, T N, T^2 N, ...].  Intended for dim <= 64.
inline WoldDims brute_force_wold_oracle(const DenseOperator& t)
{
    const Table a = detail::to_table(t.matrix());
    const std::size_t n = a.size();
    WoldDims out;
    if (n == 0) return out;

    Table       p  = a;
    std::size_t rk = detail::rank(p);
    for (std::size_t m = 0; m <= n + 1; ++m) {
        p = detail::multiply(a, p);
        const std::size_t next = detail::rank(p);
        if (next == rk) break;
        rk = next;
    }
    out.h_inf = Index(rk);

    Table ah_g = detail::multiply(detail::to_table(t.matrix().adjoint()), detail::to_table(t.domain().gram()));
    Table krylov = detail::null_space(std::move(ah_g), n);
    const std::size_t k = krylov.empty() ? 0 : krylov[0].size();
    if (k == 0) return out;
    Table block = krylov;
    Table cur   = krylov;
    for (std::size_t m = 1; m <= n; ++m) {
        cur = detail::multiply(a, cur);
        for (std::size_t i = 0; i < n; ++i) block[i].insert(block[i].end(), cur[i].begin(), cur[i].end());
    }
    out.wandering = Index(detail::rank(std::move(block)));
    return out;
}

} // namespace woldlab::oracle
