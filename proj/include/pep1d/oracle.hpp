#pragma once

#include "pep1d/measure.hpp"
#include "pep1d/potentials.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace pep {

enum class Dynamics { EulerPoisson, Drift };

struct Cluster {
    double position = 0.0;
    double velocity = 0.0;
    double mass = 0.0;
    double mtilde = 0.0;  // force is -mtilde
    std::size_t first = 0;  // atoms [first, last)
    std::size_t last = 0;
};

struct ClusterState {
    double time = 0.0;
    std::vector<Cluster> clusters;

    double total_mass() const;
    double total_momentum() const;
};

struct MergeEvent {
    double time = 0.0;
    double position = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> merged;  // atom ranges before the merge
};

class Trajectory {
public:
    Dynamics dynamics = Dynamics::EulerPoisson;
    double tau = 1.0;
    double t_end = 0.0;
    std::vector<double> prefix;          // prefix masses of the atoms
    std::vector<ClusterState> snapshots; // initial state, then the state after each event
    std::vector<MergeEvent> events;

    ClusterState state_at(double t) const;
    bool collapsed() const { return snapshots.back().clusters.size() <= 1; }
};

Cluster evolve(const Cluster& c, double dt, Dynamics dynamics, double tau);

ClusterState initial_state(const InitialData& data);

/// Event-driven sticky-particle evolution starting from `start`.
Trajectory simulate(const ClusterState& start, std::vector<double> prefix, Dynamics dynamics,
                    double tau, double t_end, const Tolerances& tol = {});

Trajectory simulate_ep(const InitialData& data, double t_end, const Tolerances& tol = {});
Trajectory simulate_drift(const AtomicMeasure& measure, double t_end,
                          const Tolerances& tol = {});

double oracle_cdf(const ClusterState& state, double x);
const Cluster& oracle_cluster(const ClusterState& state, double x, double tol);
double oracle_velocity(const ClusterState& state, double x, double tol);

/// Time at which the gap between two clusters closes, or a negative value if it
/// stays open on [0, horizon].
double collision_delay(const Cluster& left, const Cluster& right, Dynamics dynamics, double tau,
                       double horizon);

}  // namespace pep
