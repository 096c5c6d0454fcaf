#pragma once

#include "pep1d/eps.hpp"
#include "pep1d/oracle.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace pep {

struct ResidualLevel {
    double parameter = 0.0;  // cells, stencil width or time, depending on the check
    double residual = 0.0;
    double floor = 0.0;      // roundoff level below which decay is not asserted
    bool pass = true;
    std::vector<double> parts;
};

struct ResidualReport {
    std::string name;
    std::vector<ResidualLevel> levels;
    bool pass = true;
    std::string detail;
};

enum class Layer { Oracle, Formula };

/// phi(x,t) = b((x-c)/r) * b((t-s)/rho), b(z) = (1-z^2)^3 on |z| < 1.
struct Bump {
    double c = 0.0;
    double r = 1.0;
    double s = 1.0;
    double rho = 0.5;
    double amplitude = 1.0;
};

double bump_profile(double z);
double bump_profile_derivative(double z);
/// Integral of the profile from z to 1.
double bump_tail(double z);

struct WeakFormOptions {
    int levels = 5;
    int base_cells = 1;
    double decay_factor = 4.0;
    double final_tolerance = 1e-8;
    Layer layer = Layer::Oracle;
};

/// Mass and momentum residuals of the weak formulation, in that order.
std::vector<ResidualReport> check_weak_form(const InitialData& data,
                                            const std::vector<Bump>& family,
                                            std::pair<double, double> window,
                                            const WeakFormOptions& options = {},
                                            const Tolerances& tol = {});

ResidualReport check_oleinik(const InitialData& data, const std::vector<double>& t_samples,
                             const std::vector<std::pair<double, double>>& x_pairs,
                             double tolerance = 1e-10, Layer layer = Layer::Formula,
                             const Tolerances& tol = {});

ResidualReport check_initial_continuity(const InitialData& data,
                                        const std::vector<double>& x_grid,
                                        const std::vector<double>& t_sequence,
                                        double final_tolerance = 1e-6,
                                        const Tolerances& tol = {});

struct StencilPoint {
    double x = 0.0;
    double t = 1.0;
};

bool stencil_is_smooth(const InitialData& data, StencilPoint p, double h,
                       const Tolerances& tol = {});

/// Reports for nu_x+m, nu_t-q, theta_x+q, theta_t-E-omega, omega_x-q/tau-m^2/2+(M/2)m.
std::vector<ResidualReport> check_potential_identities(const InitialData& data,
                                                       const std::vector<StencilPoint>& points,
                                                       const std::vector<double>& h_sequence,
                                                       double final_tolerance = 1e-6,
                                                       const Tolerances& tol = {});

struct InstanceRanges {
    std::size_t max_atoms = 50;
    double position_min = -10.0, position_max = 10.0;
    double mass_min = 0.01, mass_max = 2.0;
    double velocity_min = -2.0, velocity_max = 2.0;
    std::vector<double> taus{1.0, 0.5, 0.1};
};

InitialData random_instance(std::mt19937_64& rng, const InstanceRanges& ranges = {});

/// Time by which every merge has happened (or a nominal horizon without merges).
Trajectory simulate_to_collapse(const InitialData& data, const Tolerances& tol = {});

/// `count` jittered times spanning the trajectory, nudged away from merge events and
/// near-contacts so that pointwise comparisons are well posed.
std::vector<double> choose_sample_times(const Trajectory& traj, std::size_t count,
                                        std::mt19937_64& rng);

struct CompareRow {
    double t = 0.0;
    double max_dm = 0.0;
    double max_du = 0.0;
    std::size_t points = 0;
    std::size_t clusters = 0;
};

/// Formula layer against the oracle: m between and beside clusters, u at clusters.
std::vector<CompareRow> compare_layers(const InitialData& data, const Trajectory& traj,
                                       const std::vector<double>& times,
                                       const Tolerances& tol = {});

}  // namespace pep
