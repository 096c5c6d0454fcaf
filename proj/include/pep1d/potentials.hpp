#pragma once

#include "pep1d/measure.hpp"

#include <cstddef>
#include <vector>

namespace pep {

struct Tolerances {
    double tie = 1e-12;
    double pos = 1e-12;
    double event = 1e-11;
};

/// Throws InvalidArgument unless tie >= 0, pos > 0 and event >= 0 (all finite).
void check_tolerances(const Tolerances& tol);

/// Time weights of the generalized potential. Free trajectories are
/// X_i = eta_i + u_i*A + mtilde_i*B and particle velocities are
/// u_i*vel_u + mtilde_i*vel_m.
struct PotentialCoefficients {
    double A = 0.0;
    double B = 0.0;
    double tau = 1.0;
    double z = 0.0;      // t/tau of the underlying damped system
    double decay = 1.0;  // e^{-z}
    double vel_u = 1.0;
    double vel_m = 0.0;
    bool drift = false;

    static PotentialCoefficients euler_poisson(double tau, double t);
    /// Slow-time coefficients: the damped system with relaxation time tau at time t/tau.
    static PotentialCoefficients scaled(double tau, double t);
    static PotentialCoefficients drift_limit(double t);

    bool initial() const { return !drift && z == 0.0; }

    /// c(y;x,t) for a given m~ value at y.
    double initial_speed(double dx, double mtilde) const;
    /// Terminal velocity of the line with initial speed c(y;x,t).
    double line_velocity(double dx, double mtilde) const;
};

struct MinimizerResult {
    double nu = 0.0;
    double y_star = 0.0;
    double y_star_up = 0.0;
    bool attained_at_y_star = true;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
};

/// Prefix sums of the free-flow terms at a fixed time.
class FreeFlow {
public:
    FreeFlow(const InitialData& data, const PotentialCoefficients& coeffs);

    const InitialData& data() const { return *data_; }
    const PotentialCoefficients& coeffs() const { return coeffs_; }
    double free_position(std::size_t i) const { return eta_[i] + shift_[i]; }
    double particle_velocity(std::size_t i) const { return velocity_[i]; }
    double mtilde(std::size_t i) const { return mtilde_[i]; }

    /// T_k for k = 0..N.
    std::vector<double> prefix_values(double x) const;
    /// Tie tolerance 0 selects the exact floating-point argmin.
    MinimizerResult minimize(double x, double tol_tie) const;
    /// Centre of mass of the free positions of atoms [first, last).
    double block_position(std::size_t first, std::size_t last) const;
    double block_velocity(std::size_t first, std::size_t last) const;

private:
    const InitialData* data_;
    PotentialCoefficients coeffs_;
    std::vector<double> eta_;
    std::vector<double> shift_;
    std::vector<double> magnitude_;
    std::vector<double> mtilde_;
    std::vector<double> velocity_;
};

double eval_F(const InitialData& data, double y, double x, double t);
double eval_F_right(const InitialData& data, double y, double x, double t);
MinimizerResult minimize_F(const InitialData& data, double x, double t,
                           const Tolerances& tol = {});

double initial_speed_c(const InitialData& data, double y, double x, double t);
double initial_speed_c_left(const InitialData& data, double y, double x, double t);
double initial_speed_c_right(const InitialData& data, double y, double x, double t);

double eval_Fbar(const AtomicMeasure& measure, double y, double x, double t);
MinimizerResult minimize_Fbar(const AtomicMeasure& measure, double x, double t,
                              const Tolerances& tol = {});

/// Drift data: zero velocities, unit relaxation time.
InitialData drift_data(const AtomicMeasure& measure);

double default_constant_k(const InitialData& data);
double eval_G(const InitialData& data, const std::vector<double>& forward_positions, double y,
              double x, double t, double k);
double eval_H(const InitialData& data, const std::vector<double>& forward_positions, double y,
              double x, double t, double k);

/// Coercivity window [lo, hi] of the minimizer for the point x.
std::pair<double, double> coercivity_window(const InitialData& data,
                                            const PotentialCoefficients& coeffs, double x);

void require_positive_time(double t);

}  // namespace pep
