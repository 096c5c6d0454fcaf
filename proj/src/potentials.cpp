#include "pep1d/potentials.hpp"
#include "pep1d/error.hpp"
#include "pep1d/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pep {

void check_tolerances(const Tolerances& tol) {
    const bool ok = std::isfinite(tol.tie) && std::isfinite(tol.pos) && std::isfinite(tol.event) &&
                    tol.tie >= 0.0 && tol.pos > 0.0 && tol.event >= 0.0;
    if (!ok) throw Error(ErrorCode::InvalidArgument, "tolerances must be finite, tie/event >= 0, pos > 0");
}

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::NonPositiveTime, "time must be positive and finite");
}

PotentialCoefficients PotentialCoefficients::euler_poisson(double tau, double t) {
    PotentialCoefficients c;
    c.tau = tau;
    c.z = t / tau;
    c.decay = exp_neg(c.z);
    c.A = tau * one_minus_exp_neg(c.z);
    c.B = -tau * tau * exp_neg_remainder(c.z);
    c.vel_u = c.decay;
    c.vel_m = -c.A;
    return c;
}

PotentialCoefficients PotentialCoefficients::scaled(double tau, double t) {
    PotentialCoefficients c;
    c.tau = tau;
    c.z = t / (tau * tau);
    c.decay = exp_neg(c.z);
    c.A = tau * one_minus_exp_neg(c.z);
    c.B = c.z > kExpFlush ? tau * tau - t : -tau * tau * exp_neg_remainder(c.z);
    c.vel_u = c.decay;
    c.vel_m = -c.A;
    return c;
}

PotentialCoefficients PotentialCoefficients::drift_limit(double t) {
    PotentialCoefficients c;
    c.tau = 1.0;
    c.z = t;
    c.decay = 0.0;
    c.A = 0.0;
    c.B = -t;
    c.vel_u = 0.0;
    c.vel_m = -1.0;
    c.drift = true;
    return c;
}

double PotentialCoefficients::initial_speed(double dx, double mtilde) const {
    if (drift || A == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return dx / A + mtilde * tau * inverse_decay_excess(z);
}

double PotentialCoefficients::line_velocity(double dx, double mtilde) const {
    if (drift) return -mtilde;
    return dx * inv_expm1(z) / tau - mtilde * tau * expm1_ratio(z);
}

FreeFlow::FreeFlow(const InitialData& data, const PotentialCoefficients& coeffs)
    : data_(&data), coeffs_(coeffs) {
    const AtomicMeasure& mu = data.measure();
    const std::size_t n = mu.size();
    eta_ = mu.positions();
    shift_.resize(n);
    magnitude_.resize(n);
    mtilde_.resize(n);
    velocity_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = mu.atom_mtilde(i);
        const double a = data.velocity(i) * coeffs.A;
        const double b = m * coeffs.B;
        mtilde_[i] = m;
        shift_[i] = a + b;
        magnitude_[i] = std::fabs(eta_[i]) + std::fabs(a) + std::fabs(b);
        velocity_[i] = data.velocity(i) * coeffs.vel_u + m * coeffs.vel_m;
    }
}

std::vector<double> FreeFlow::prefix_values(double x) const {
    const AtomicMeasure& mu = data_->measure();
    std::vector<double> T(mu.size() + 1, 0.0);
    NeumaierSum sum;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        sum.add(mu.mass(i) * ((eta_[i] - x) + shift_[i]));
        T[i + 1] = sum.value();
    }
    return T;
}

std::pair<double, double> coercivity_window(const InitialData& data,
                                            const PotentialCoefficients& coeffs, double x) {
    const double half_m = 0.5 * data.total_mass();
    const double reach = data.U0() * coeffs.A - half_m * coeffs.B;
    return {x - reach, x + reach};
}

MinimizerResult FreeFlow::minimize(double x, double tol_tie) const {
    const AtomicMeasure& mu = data_->measure();
    if (mu.empty()) throw Error(ErrorCode::EmptyMeasure, "measure must be nonempty");
    if (!(tol_tie >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tie tolerance must be nonnegative");
    const std::vector<double> T = prefix_values(x);
    double scale = 1.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        scale += mu.mass(i) * (magnitude_[i] + std::fabs(x));
    const double nu = *std::min_element(T.begin(), T.end());
    const double threshold = nu + tol_tie * scale;

    MinimizerResult r;
    r.nu = nu;
    r.k_min = T.size();
    for (std::size_t k = 0; k < T.size(); ++k) {
        if (T[k] <= threshold) {
            if (r.k_min == T.size()) r.k_min = k;
            r.k_max = k;
        }
    }
    r.y_star = eta_[std::max<std::size_t>(r.k_min, 1) - 1];
    r.y_star_up = eta_[std::max<std::size_t>(r.k_max, 1) - 1];
    // T_{k_min-1} > nu by construction, so nu is attained at y* only for k_min = 0.
    r.attained_at_y_star = (r.k_min == 0);

    const auto [lo, hi] = coercivity_window(*data_, coeffs_, x);
    const double slack = 1e-9 * (1.0 + std::fabs(lo) + std::fabs(hi));
    if (mu.lower_index(lo - slack) > r.k_min || mu.upper_index(hi + slack) < r.k_max)
        throw Error(ErrorCode::IdentityViolation, "minimizer outside the coercivity window");
    return r;
}

double FreeFlow::block_position(std::size_t first, std::size_t last) const {
    const AtomicMeasure& mu = data_->measure();
    NeumaierSum num, den;
    for (std::size_t i = first; i < last; ++i) {
        num.add(mu.mass(i) * eta_[i]);
        num.add(mu.mass(i) * shift_[i]);
        den.add(mu.mass(i));
    }
    return num.value() / den.value();
}

double FreeFlow::block_velocity(std::size_t first, std::size_t last) const {
    const AtomicMeasure& mu = data_->measure();
    NeumaierSum num, den;
    for (std::size_t i = first; i < last; ++i) {
        num.add(mu.mass(i) * velocity_[i]);
        den.add(mu.mass(i));
    }
    return num.value() / den.value();
}

namespace {

double prefix_value(const InitialData& data, std::size_t k, double x, double t) {
    require_positive_time(t);
    if (k == 0) return 0.0;
    const FreeFlow flow(data, PotentialCoefficients::euler_poisson(data.tau(), t));
    return flow.prefix_values(x)[k];
}

}  // namespace

double eval_F(const InitialData& data, double y, double x, double t) {
    return prefix_value(data, data.measure().lower_index(y), x, t);
}

double eval_F_right(const InitialData& data, double y, double x, double t) {
    return prefix_value(data, data.measure().upper_index(y), x, t);
}

MinimizerResult minimize_F(const InitialData& data, double x, double t, const Tolerances& tol) {
    require_positive_time(t);
    const FreeFlow flow(data, PotentialCoefficients::euler_poisson(data.tau(), t));
    return flow.minimize(x, tol.tie);
}

double initial_speed_c(const InitialData& data, double y, double x, double t) {
    require_positive_time(t);
    return PotentialCoefficients::euler_poisson(data.tau(), t)
        .initial_speed(x - y, data.measure().mtilde0(y));
}

double initial_speed_c_left(const InitialData& data, double y, double x, double t) {
    require_positive_time(t);
    return PotentialCoefficients::euler_poisson(data.tau(), t)
        .initial_speed(x - y, data.measure().mtilde0_left(y));
}

double initial_speed_c_right(const InitialData& data, double y, double x, double t) {
    require_positive_time(t);
    return PotentialCoefficients::euler_poisson(data.tau(), t)
        .initial_speed(x - y, data.measure().mtilde0_right(y));
}

InitialData drift_data(const AtomicMeasure& measure) {
    return InitialData(measure, std::vector<double>(measure.size(), 0.0), 1.0);
}

double eval_Fbar(const AtomicMeasure& measure, double y, double x, double t) {
    require_positive_time(t);
    const std::size_t k = measure.lower_index(y);
    if (k == 0) return 0.0;
    const InitialData data = drift_data(measure);
    const FreeFlow flow(data, PotentialCoefficients::drift_limit(t));
    return flow.prefix_values(x)[k];
}

MinimizerResult minimize_Fbar(const AtomicMeasure& measure, double x, double t,
                              const Tolerances& tol) {
    require_positive_time(t);
    const InitialData data = drift_data(measure);
    const FreeFlow flow(data, PotentialCoefficients::drift_limit(t));
    return flow.minimize(x, tol.tie);
}

double default_constant_k(const InitialData& data) {
    return data.U0() + 0.5 * data.total_mass() * data.tau() + 1.0;
}

namespace {

void check_G_inputs(const InitialData& data, const std::vector<double>& fp, double t, double k) {
    require_positive_time(t);
    if (fp.size() != data.size())
        throw Error(ErrorCode::InvalidArgument, "one forward position per atom is required");
    if (!(k > data.U0() + 0.5 * data.total_mass() * data.tau()))
        throw Error(ErrorCode::BadConstantK, "k must exceed U0 + M*tau/2");
}

}  // namespace

double eval_G(const InitialData& data, const std::vector<double>& forward_positions, double y,
              double x, double t, double k) {
    check_G_inputs(data, forward_positions, t, k);
    const auto c = PotentialCoefficients::euler_poisson(data.tau(), t);
    const AtomicMeasure& mu = data.measure();
    NeumaierSum sum;
    for (std::size_t i = 0; i < mu.lower_index(y); ++i) {
        const double v = data.velocity(i) * c.vel_u + mu.atom_mtilde(i) * c.vel_m;
        sum.add(mu.mass(i) * (v + k) * (forward_positions[i] - x));
    }
    return sum.value();
}

double eval_H(const InitialData& data, const std::vector<double>& forward_positions, double y,
              double x, double t, double k) {
    check_G_inputs(data, forward_positions, t, k);
    const auto c = PotentialCoefficients::euler_poisson(data.tau(), t);
    const AtomicMeasure& mu = data.measure();
    NeumaierSum sum;
    for (std::size_t i = 0; i < mu.lower_index(y); ++i) {
        const double a = data.velocity(i) + data.tau() * mu.atom_mtilde(i) + k;
        sum.add(mu.mass(i) * a * (forward_positions[i] - x));
    }
    return -c.decay / data.tau() * sum.value();
}

}  // namespace pep
