#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace woldlab {

using Index   = Eigen::Index;
using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds shared by every check in the library.
///
/// `rank_tol` is a relative singular-value cutoff, `residual_tol` the pass
/// threshold for identity residuals (operator norm), `max_iter` the cap on
/// any stabilization loop.
struct TolerancePolicy
{
    double rank_tol     = 1e-10;
    double residual_tol = 1e-8;
    int    max_iter     = 200;

    void validate() const;
};

enum class ErrorCode
{
    GramSingular,
    NotLeftInvertible,
    NonCommuting,
    CapTooSmall,
    NotNested,
    NoStabilization,
    PrerequisiteFailed,
    NotPSD,
    GramNotPSD,
    PointOutsideDisc,
    EmptyWanderingSubspace,
    DictionaryRankDeficient,
    UnknownExample,
    UnsupportedMeasureKind,
    InvalidArgument,
    SchemaError,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::GramSingular:            return "GramSingular";
    case ErrorCode::NotLeftInvertible:       return "NotLeftInvertible";
    case ErrorCode::NonCommuting:            return "NonCommuting";
    case ErrorCode::CapTooSmall:             return "CapTooSmall";
    case ErrorCode::NotNested:               return "NotNested";
    case ErrorCode::NoStabilization:         return "NoStabilization";
    case ErrorCode::PrerequisiteFailed:      return "PrerequisiteFailed";
    case ErrorCode::NotPSD:                  return "NotPSD";
    case ErrorCode::GramNotPSD:              return "GramNotPSD";
    case ErrorCode::PointOutsideDisc:        return "PointOutsideDisc";
    case ErrorCode::EmptyWanderingSubspace:  return "EmptyWanderingSubspace";
    case ErrorCode::DictionaryRankDeficient: return "DictionaryRankDeficient";
    case ErrorCode::UnknownExample:          return "UnknownExample";
    case ErrorCode::UnsupportedMeasureKind:  return "UnsupportedMeasureKind";
    case ErrorCode::InvalidArgument:         return "InvalidArgument";
    case ErrorCode::SchemaError:             return "SchemaError";
    }
    return "Unknown";
}

/// The single exception type thrown by the library; `code()` identifies the
/// failure class.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void TolerancePolicy::validate() const
{
    if (!(rank_tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "rank_tol must be positive");
    if (!(residual_tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "residual_tol must be positive");
    if (max_iter < 1)
        throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
}

} // namespace woldlab
