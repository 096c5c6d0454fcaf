#pragma once

#include "pep1d/potentials.hpp"

#include <cstddef>
#include <vector>

namespace pep {

enum class Branch { VacuumRight, VacuumLeft, DeltaShock, Characteristic, Initial, Offsupport };

const char* to_string(Branch b);

struct VelocityResult {
    double u = 0.0;
    Branch branch = Branch::Characteristic;
};

struct SolutionSample {
    double x = 0.0;
    double t = 0.0;
    double m = 0.0;
    double q = 0.0;
    double u = 0.0;
    double E = 0.0;
    double nu = 0.0;
    double theta = 0.0;
    double omega = 0.0;
    double h = 0.0;
    Branch branch = Branch::Characteristic;
};

struct PotentialFields {
    double nu = 0.0;
    double theta = 0.0;
    double omega = 0.0;
    double h = 0.0;
};

/// A cluster of the formula layer: atoms [first, last) sharing one forward position.
struct FormulaCluster {
    std::size_t first = 0;
    std::size_t last = 0;
    double position = 0.0;
    double velocity = 0.0;
    double mass = 0.0;
};

struct ShockSample {
    double t = 0.0;
    double x = 0.0;
    double u = 0.0;
    std::size_t first = 0;  // absorbed atoms [first, last); empty when first == last
    std::size_t last = 0;
};

struct ShockCurve {
    double x0 = 0.0;
    double t0 = 0.0;
    std::vector<ShockSample> samples;
};

/// Evaluator bound to one instance and one time; all fields share the minimizer machinery.
class Snapshot {
public:
    Snapshot(const InitialData& data, const PotentialCoefficients& coeffs,
             const Tolerances& tol = {});

    const FreeFlow& flow() const { return flow_; }
    const Tolerances& tolerances() const { return tol_; }

    MinimizerResult minimize(double x) const { return flow_.minimize(x, tol_.tie); }
    double m(double x) const;
    double q(double x) const;
    VelocityResult u(double x) const;
    double forward_position(std::size_t atom) const;
    const std::vector<FormulaCluster>& clusters() const;
    double E(double x) const;
    PotentialFields fields(double x) const;
    SolutionSample sample(double x) const;

    /// Refines a bracket [lo, hi] around a cluster boundary to the cluster's exact
    /// centre of mass when one is found inside it.
    double refine(double lo, double hi) const;

private:
    struct Located {
        double position;
        std::size_t first;
        std::size_t last;
    };
    Located locate(std::size_t atom) const;
    std::size_t absorbed(double x) const;
    const FormulaCluster& cluster_of(std::size_t atom) const;
    void build_clusters() const;

    FreeFlow flow_;
    Tolerances tol_;
    mutable std::vector<FormulaCluster> clusters_;
    mutable std::vector<std::size_t> owner_;
    mutable bool clusters_ready_ = false;
};

double eval_m(const InitialData& data, double x, double t, const Tolerances& tol = {});
double eval_q(const InitialData& data, double x, double t, const Tolerances& tol = {});
VelocityResult eval_u(const InitialData& data, double x, double t, const Tolerances& tol = {});
double forward_position(const InitialData& data, std::size_t atom, double t,
                        const Tolerances& tol = {});
double eval_E(const InitialData& data, double x, double t, const Tolerances& tol = {});
PotentialFields eval_nu_theta_omega(const InitialData& data, double x, double t,
                                    const Tolerances& tol = {});
SolutionSample solve_point(const InitialData& data, double x, double t,
                           const Tolerances& tol = {});
std::vector<FormulaCluster> formula_clusters(const InitialData& data, double t,
                                             const Tolerances& tol = {});

ShockCurve trace_shock(const InitialData& data, double x0, double t0, double t_end, double dt,
                       const Tolerances& tol = {});

/// Coefficients for time t >= 0 of the damped system (t = 0 gives the initial-data convention).
PotentialCoefficients time_coefficients(const InitialData& data, double t);

}  // namespace pep
