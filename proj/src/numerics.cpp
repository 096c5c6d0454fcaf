#include "pep1d/numerics.hpp"
#include "pep1d/error.hpp"

#include <cmath>

namespace pep {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::TauOutOfRange: return "TauOutOfRange";
    case ErrorCode::BadConstantK: return "BadConstantK";
    case ErrorCode::BisectionFailure: return "BisectionFailure";
    case ErrorCode::EventHorizonExceeded: return "EventHorizonExceeded";
    case ErrorCode::RootBracketFailure: return "RootBracketFailure";
    case ErrorCode::NoClusterAt: return "NoClusterAt";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::StencilTooCloseToShock: return "StencilTooCloseToShock";
    case ErrorCode::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

double exp_neg(double z) {
    return z > kExpFlush ? 0.0 : std::exp(-z);
}

double one_minus_exp_neg(double z) {
    return z > kExpFlush ? 1.0 : -std::expm1(-z);
}

double exp_neg_remainder(double z) {
    if (std::fabs(z) < 0.25) {
        // z^2/2 - z^3/6 + z^4/24 - ...
        double term = z * z / 2.0;
        double sum = 0.0;
        for (int n = 3; n < 30; ++n) {
            sum += term;
            term *= -z / n;
            if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    if (z > kExpFlush) return z - 1.0;
    return std::expm1(-z) + z;
}

double expm1_ratio(double z) {
    if (z > kExpFlush) return 1.0;
    if (std::fabs(z) < 0.05) {
        // z/2 - z^2/12 + z^4/720 - z^6/30240 + z^8/1209600
        const double z2 = z * z;
        return z / 2.0 - z2 / 12.0 + z2 * z2 / 720.0 - z2 * z2 * z2 / 30240.0 +
               z2 * z2 * z2 * z2 / 1209600.0;
    }
    return 1.0 - z / std::expm1(z);
}

double inverse_decay_excess(double z) {
    return z - expm1_ratio(z);
}

double inv_expm1(double z) {
    return z > kExpFlush ? 0.0 : 1.0 / std::expm1(z);
}

void NeumaierSum::add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

}  // namespace pep
