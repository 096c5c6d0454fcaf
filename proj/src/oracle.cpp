#include "pep1d/oracle.hpp"
#include "pep1d/error.hpp"
#include "pep1d/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pep {

double ClusterState::total_mass() const {
    NeumaierSum s;
    for (const Cluster& c : clusters) s.add(c.mass);
    return s.value();
}

double ClusterState::total_momentum() const {
    NeumaierSum s;
    for (const Cluster& c : clusters) s.add(c.mass * c.velocity);
    return s.value();
}

Cluster evolve(const Cluster& c, double dt, Dynamics dynamics, double tau) {
    Cluster out = c;
    if (dt == 0.0) return out;
    if (dynamics == Dynamics::Drift) {
        out.velocity = -c.mtilde;
        out.position = c.position - c.mtilde * dt;
        return out;
    }
    const double z = dt / tau;
    const double A = tau * one_minus_exp_neg(z);
    const double B = -tau * tau * exp_neg_remainder(z);
    out.position = c.position + c.velocity * A + c.mtilde * B;
    out.velocity = c.velocity * exp_neg(z) - c.mtilde * A;
    return out;
}

ClusterState initial_state(const InitialData& data) {
    const AtomicMeasure& mu = data.measure();
    ClusterState s;
    s.time = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        Cluster c;
        c.position = mu.position(i);
        c.velocity = data.velocity(i);
        c.mass = mu.prefix(i + 1) - mu.prefix(i);
        c.mtilde = mu.block_mtilde(i, i + 1);
        c.first = i;
        c.last = i + 1;
        s.clusters.push_back(c);
    }
    return s;
}

double collision_delay(const Cluster& left, const Cluster& right, Dynamics dynamics, double tau,
                       double horizon) {
    const double d = right.position - left.position;
    const double b = right.mtilde - left.mtilde;
    if (d <= 0.0) return 0.0;
    if (dynamics == Dynamics::Drift) {
        if (b <= 0.0) return -1.0;
        const double dt = d / b;
        return dt <= horizon ? dt : -1.0;
    }
    const double a = right.velocity - left.velocity;
    const auto gap = [&](double dt) {
        const double z = dt / tau;
        return d + a * tau * one_minus_exp_neg(z) - b * tau * tau * exp_neg_remainder(z);
    };
    if (!(horizon > 0.0) || gap(horizon) > 0.0) return -1.0;
    double lo = 0.0;
    double hi = std::min(horizon, tau);
    while (gap(hi) > 0.0) {
        lo = hi;
        hi = std::min(2.0 * hi, horizon);
    }
    for (int it = 0; it < 2000; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    if (!(gap(lo) >= 0.0 || lo == 0.0))
        throw Error(ErrorCode::RootBracketFailure, "collision root lost its bracket");
    return hi;
}

ClusterState Trajectory::state_at(double t) const {
    auto it = std::upper_bound(snapshots.begin(), snapshots.end(), t,
                               [](double v, const ClusterState& s) { return v < s.time; });
    if (it != snapshots.begin()) --it;
    ClusterState out;
    out.time = t;
    out.clusters.reserve(it->clusters.size());
    for (const Cluster& c : it->clusters)
        out.clusters.push_back(evolve(c, t - it->time, dynamics, tau));
    return out;
}

Trajectory simulate(const ClusterState& start, std::vector<double> prefix, Dynamics dynamics,
                    double tau, double t_end, const Tolerances& tol) {
    require_positive_time(t_end);
    check_tolerances(tol);
    Trajectory traj;
    traj.dynamics = dynamics;
    traj.tau = tau;
    traj.t_end = t_end;
    traj.prefix = std::move(prefix);
    traj.snapshots.push_back(start);
    const double total = traj.prefix.back();
    const std::size_t max_events = start.clusters.empty() ? 0 : start.clusters.size() - 1;

    while (true) {
        const ClusterState& cur = traj.snapshots.back();
        const std::size_t n = cur.clusters.size();
        if (n <= 1 || cur.time >= t_end) break;
        std::vector<double> when(n - 1, -1.0);
        double earliest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double dt = collision_delay(cur.clusters[j], cur.clusters[j + 1], dynamics, tau,
                                              t_end - cur.time);
            if (dt >= 0.0) {
                when[j] = cur.time + dt;
                earliest = std::min(earliest, when[j]);
            }
        }
        if (!std::isfinite(earliest)) break;
        if (traj.events.size() >= max_events)
            throw Error(ErrorCode::EventHorizonExceeded, "more merge events than atoms");

        const double window = earliest + tol.event * (1.0 + std::fabs(earliest));
        ClusterState next;
        next.time = earliest;
        MergeEvent ev;
        ev.time = earliest;
        std::size_t j = 0;
        while (j < n) {
            std::size_t k = j;
            while (k + 1 < n && when[k] >= 0.0 && when[k] <= window) ++k;
            if (k == j) {
                next.clusters.push_back(evolve(cur.clusters[j], earliest - cur.time, dynamics, tau));
                ++j;
                continue;
            }
            NeumaierSum pos, mom;
            for (std::size_t i = j; i <= k; ++i) {
                const Cluster c = evolve(cur.clusters[i], earliest - cur.time, dynamics, tau);
                pos.add(c.mass * c.position);
                mom.add(c.mass * c.velocity);
                ev.merged.emplace_back(c.first, c.last);
            }
            Cluster merged;
            merged.first = cur.clusters[j].first;
            merged.last = cur.clusters[k].last;
            merged.mass = traj.prefix[merged.last] - traj.prefix[merged.first];
            merged.mtilde = 0.5 * (traj.prefix[merged.first] + traj.prefix[merged.last] - total);
            merged.position = pos.value() / merged.mass;
            merged.velocity = mom.value() / merged.mass;
            ev.position = merged.position;
            next.clusters.push_back(merged);
            j = k + 1;
        }
        for (std::size_t i = 1; i < next.clusters.size(); ++i) {
            if (next.clusters[i].position <= next.clusters[i - 1].position)
                next.clusters[i].position = next.clusters[i - 1].position;
        }
        traj.events.push_back(ev);
        traj.snapshots.push_back(std::move(next));
    }
    return traj;
}

Trajectory simulate_ep(const InitialData& data, double t_end, const Tolerances& tol) {
    const AtomicMeasure& mu = data.measure();
    std::vector<double> prefix(mu.size() + 1);
    for (std::size_t k = 0; k <= mu.size(); ++k) prefix[k] = mu.prefix(k);
    return simulate(initial_state(data), std::move(prefix), Dynamics::EulerPoisson, data.tau(),
                    t_end, tol);
}

Trajectory simulate_drift(const AtomicMeasure& measure, double t_end, const Tolerances& tol) {
    const InitialData data = drift_data(measure);
    ClusterState start = initial_state(data);
    for (Cluster& c : start.clusters) c.velocity = -c.mtilde;
    std::vector<double> prefix(measure.size() + 1);
    for (std::size_t k = 0; k <= measure.size(); ++k) prefix[k] = measure.prefix(k);
    return simulate(start, std::move(prefix), Dynamics::Drift, 1.0, t_end, tol);
}

double oracle_cdf(const ClusterState& state, double x) {
    NeumaierSum s;
    for (const Cluster& c : state.clusters)
        if (c.position < x) s.add(c.mass);
    return s.value();
}

const Cluster& oracle_cluster(const ClusterState& state, double x, double tol) {
    const Cluster* best = nullptr;
    for (const Cluster& c : state.clusters) {
        if (std::fabs(c.position - x) <= tol &&
            (!best || std::fabs(c.position - x) < std::fabs(best->position - x)))
            best = &c;
    }
    if (!best) throw Error(ErrorCode::NoClusterAt, "no oracle cluster at the queried position");
    return *best;
}

double oracle_velocity(const ClusterState& state, double x, double tol) {
    return oracle_cluster(state, x, tol).velocity;
}

}  // namespace pep
