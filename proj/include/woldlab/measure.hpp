#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "woldlab/linalg.hpp"

namespace woldlab {

enum class MeasureKind
{
    Zero,
    Lebesgue,
    Atoms,
    Fourier, // explicit coefficient list (trig_density, or recovered from an operator)
};

inline const char* to_string(MeasureKind k)
{
    switch (k) {
    case MeasureKind::Zero: return "zero";
    case MeasureKind::Lebesgue: return "lebesgue";
    case MeasureKind::Atoms: return "atoms";
    case MeasureKind::Fourier: return "fourier";
    }
    return "?";
}

struct Atom
{
    double angle = 0.0;
    Matrix weight;
};

/// How a measure was specified.  Kept alongside the Fourier window so that
/// closed-form oracles can work from the original description.
struct MeasureSource
{
    MeasureKind         kind = MeasureKind::Zero;
    Matrix              weight;  // Lebesgue: mu^(0)
    std::vector<Atom>   atoms;
    std::vector<Matrix> fourier; // Fourier: mu^(0..K)
};

//
// Positive L(E)-valued measure on the circle, represented by the window of
// Fourier coefficients mu^(k) = ∫ e^{-ikt} dmu(t), 0 <= k <= K.  Negative
// indices follow from mu^(-k) = mu^(k)^H.
//
class OpValuedMeasure
{
public:
    OpValuedMeasure() = default;

    OpValuedMeasure(int coeff_dim, std::vector<Matrix> coeffs, MeasureSource source)
        : coeff_dim_(coeff_dim), coeffs_(std::move(coeffs)), source_(std::move(source))
    {
        if (coeff_dim_ < 1 || coeffs_.empty())
            throw Error(ErrorCode::InvalidArgument, "measure needs coeff_dim >= 1 and at least mu^(0)");
        for (const auto& c : coeffs_)
            if (c.rows() != coeff_dim_ || c.cols() != coeff_dim_)
                throw Error(ErrorCode::InvalidArgument, "Fourier coefficient has the wrong shape");
    }

    int                        coeff_dim() const { return coeff_dim_; }
    int                        window() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Matrix>& coefficients() const { return coeffs_; }
    const MeasureSource&       source() const { return source_; }

    /// mu^(k) for |k| <= window.
    Matrix at(int k) const
    {
        if (std::abs(k) > window())
            throw Error(ErrorCode::CapTooSmall, "Fourier index " + std::to_string(k) + " outside window "
                                                    + std::to_string(window()));
        return k >= 0 ? coeffs_[static_cast<std::size_t>(k)] : Matrix(coeffs_[static_cast<std::size_t>(-k)].adjoint());
    }

private:
    int                 coeff_dim_ = 1;
    std::vector<Matrix> coeffs_;
    MeasureSource       source_;
};

struct PsdCertificate
{
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    bool   pass       = false;
};

/// Smallest eigenvalue of the block Toeplitz moment matrix [mu^(j-k)], 0 <= j,k <= K.
inline PsdCertificate psd_check(const OpValuedMeasure& mu, const TolerancePolicy& tol = {})
{
    const int   d = mu.coeff_dim(), k = mu.window();
    const Index n = Index(d) * (k + 1);
    Matrix t(n, n);
    for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b)
            t.block(Index(a) * d, Index(b) * d, d, d) = mu.at(a - b);
    Eigen::SelfAdjointEigenSolver<Matrix> eig((t + t.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    PsdCertificate c;
    c.lambda_min = eig.eigenvalues().minCoeff();
    c.lambda_max = eig.eigenvalues().maxCoeff();
    c.pass       = c.lambda_min >= -tol.rank_tol * std::max(std::abs(c.lambda_max), 1.0);
    return c;
}

namespace detail {

inline void require_psd_weight(const Matrix& w, int d, const TolerancePolicy& tol, const char* what)
{
    if (w.rows() != d || w.cols() != d)
        throw Error(ErrorCode::InvalidArgument, std::string(what) + ": weight has the wrong shape");
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if ((w - w.adjoint()).cwiseAbs().maxCoeff() > tol.residual_tol * scale)
        throw Error(ErrorCode::NotPSD, std::string(what) + ": weight is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> eig((w + w.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol.rank_tol * scale)
        throw Error(ErrorCode::NotPSD, std::string(what) + ": weight is not positive semidefinite");
}

} // namespace detail

inline OpValuedMeasure zero_measure(int coeff_dim, int window)
{
    if (window < 0) throw Error(ErrorCode::InvalidArgument, "window must be nonnegative");
    return OpValuedMeasure(coeff_dim, std::vector<Matrix>(std::size_t(window) + 1, Matrix::Zero(coeff_dim, coeff_dim)),
                           MeasureSource{MeasureKind::Zero, {}, {}, {}});
}

/// W times normalized arc length: mu^(0) = W, mu^(k) = 0 otherwise.
inline OpValuedMeasure lebesgue_measure(const Matrix& weight, int window, const TolerancePolicy& tol = {})
{
    if (window < 0) throw Error(ErrorCode::InvalidArgument, "window must be nonnegative");
    const int d = static_cast<int>(weight.rows());
    detail::require_psd_weight(weight, d, tol, "lebesgue");
    const Matrix w = (weight + weight.adjoint()) / 2.0;
    std::vector<Matrix> c(std::size_t(window) + 1, Matrix::Zero(d, d));
    c[0] = w;
    return OpValuedMeasure(d, std::move(c), MeasureSource{MeasureKind::Lebesgue, w, {}, {}});
}

inline OpValuedMeasure lebesgue_measure(double scale, int coeff_dim, int window, const TolerancePolicy& tol = {})
{
    return lebesgue_measure(Matrix(scale * Matrix::Identity(coeff_dim, coeff_dim)), window, tol);
}

/// Σ_j W_j δ_{θ_j}: mu^(k) = Σ_j e^{-ik θ_j} W_j.
inline OpValuedMeasure atomic_measure(std::vector<Atom> atoms, int window, const TolerancePolicy& tol = {})
{
    if (window < 0) throw Error(ErrorCode::InvalidArgument, "window must be nonnegative");
    if (atoms.empty()) throw Error(ErrorCode::InvalidArgument, "atomic measure needs at least one atom");
    const int d = static_cast<int>(atoms.front().weight.rows());
    for (auto& a : atoms) {
        detail::require_psd_weight(a.weight, d, tol, "atoms");
        a.weight = (a.weight + a.weight.adjoint()) / 2.0;
    }
    std::vector<Matrix> c(std::size_t(window) + 1, Matrix::Zero(d, d));
    for (int k = 0; k <= window; ++k)
        for (const auto& a : atoms) c[std::size_t(k)] += std::polar(1.0, -k * a.angle) * a.weight;
    return OpValuedMeasure(d, std::move(c), MeasureSource{MeasureKind::Atoms, {}, std::move(atoms), {}});
}

/// Measure given directly by mu^(0..K); validated by the moment certificate.
inline OpValuedMeasure trig_density_measure(std::vector<Matrix> coeffs, const TolerancePolicy& tol = {})
{
    if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "trig_density needs mu^(0)");
    const int d = static_cast<int>(coeffs.front().rows());
    detail::require_psd_weight(coeffs.front(), d, tol, "trig_density");
    coeffs.front() = (coeffs.front() + coeffs.front().adjoint()) / 2.0;
    OpValuedMeasure mu(d, coeffs, MeasureSource{MeasureKind::Fourier, {}, {}, coeffs});
    const auto cert = psd_check(mu, tol);
    if (!cert.pass)
        throw Error(ErrorCode::NotPSD, "moment matrix has lambda_min = " + std::to_string(cert.lambda_min));
    return mu;
}

/// Same measure with a different Fourier window (source descriptor kept).
/// Only measures with a closed form can be extended beyond their window.
inline OpValuedMeasure with_window(const OpValuedMeasure& mu, int window, const TolerancePolicy& tol = {})
{
    const auto& s = mu.source();
    switch (s.kind) {
    case MeasureKind::Zero: return zero_measure(mu.coeff_dim(), window);
    case MeasureKind::Lebesgue: return lebesgue_measure(s.weight, window, tol);
    case MeasureKind::Atoms: return atomic_measure(s.atoms, window, tol);
    case MeasureKind::Fourier: break;
    }
    if (window > mu.window())
        throw Error(ErrorCode::CapTooSmall, "cannot extend a coefficient-list measure beyond its window");
    std::vector<Matrix> c(mu.coefficients().begin(), mu.coefficients().begin() + window + 1);
    return OpValuedMeasure(mu.coeff_dim(), c, MeasureSource{MeasureKind::Fourier, {}, {}, c});
}

/// Generic constructor used by the document layer.
struct MeasureSpec
{
    MeasureKind         kind      = MeasureKind::Zero;
    int                 coeff_dim = 1;
    int                 window    = 0;
    double              scale     = 1.0;
    Matrix              weight; // Lebesgue weight; empty means scale * I
    std::vector<Atom>   atoms;
    std::vector<Matrix> fourier;
};

inline OpValuedMeasure make_measure(const MeasureSpec& s, const TolerancePolicy& tol = {})
{
    switch (s.kind) {
    case MeasureKind::Zero: return zero_measure(s.coeff_dim, s.window);
    case MeasureKind::Lebesgue:
        if (s.weight.size() > 0) return lebesgue_measure(s.weight, s.window, tol);
        return lebesgue_measure(s.scale, s.coeff_dim, s.window, tol);
    case MeasureKind::Atoms: return atomic_measure(s.atoms, s.window, tol);
    case MeasureKind::Fourier: return trig_density_measure(s.fourier, tol);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown measure kind");
}

} // namespace woldlab
