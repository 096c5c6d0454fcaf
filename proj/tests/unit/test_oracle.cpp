#include "common.hpp"

using namespace pep;

TEST_CASE("single free atom") {
    const Trajectory traj = simulate_ep(fixtures::single_atom(), 5.0);
    CHECK(traj.events.empty());
    for (double t : {0.1, 1.0, 4.5}) {
        const ClusterState st = traj.state_at(t);
        REQUIRE(st.clusters.size() == 1);
        CHECK(st.clusters[0].position == doctest::Approx(-std::expm1(-t)).epsilon(1e-15));
        CHECK(st.clusters[0].velocity == doctest::Approx(std::exp(-t)).epsilon(1e-15));
    }
}

TEST_CASE("two-atom collision time") {
    const Trajectory traj = simulate_ep(fixtures::two_atom(), 10.0);
    REQUIRE(traj.events.size() == 1);
    const long double root = testing::ref_root_t_plus_exp(5.0L);
    CHECK(std::fabs(static_cast<long double>(traj.events[0].time) - root) <= 1e-10L);
    CHECK(traj.events[0].time == doctest::Approx(4.993).epsilon(1e-3));
    CHECK(traj.events[0].position == 0.0);
    const ClusterState after = traj.state_at(6.0);
    REQUIRE(after.clusters.size() == 1);
    CHECK(after.clusters[0].velocity == 0.0);
    CHECK(after.clusters[0].mass == 1.0);
    CHECK(traj.collapsed());
}

TEST_CASE("oracle cdf and velocity lookup") {
    const Trajectory traj = simulate_ep(fixtures::two_atom(), 10.0);
    CHECK(oracle_cdf(traj.state_at(6.0), 0.1) == 1.0);
    CHECK(oracle_cdf(traj.state_at(6.0), -5.0) == 0.0);
    CHECK(oracle_cdf(traj.state_at(1.0), 0.0) == 0.5);
    CHECK(oracle_velocity(traj.state_at(6.0), 0.0, 1e-12) == 0.0);
    CHECK_THROWS_AS(oracle_velocity(traj.state_at(6.0), 0.5, 1e-12), Error);
    try {
        oracle_cluster(traj.state_at(1.0), 0.0, 1e-12);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoClusterAt);
    }
}

TEST_CASE("drift oracle examples") {
    const Trajectory two = simulate_drift(AtomicMeasure({-1.0, 1.0}, {0.5, 0.5}), 10.0);
    const ClusterState s0 = two.state_at(1.0);
    CHECK(s0.clusters[0].velocity == 0.25);
    CHECK(s0.clusters[1].velocity == -0.25);
    REQUIRE(two.events.size() == 1);
    CHECK(two.events[0].time == 4.0);
    CHECK(two.events[0].position == 0.0);
    CHECK(two.state_at(5.0).clusters[0].velocity == 0.0);

    const Trajectory one = simulate_drift(AtomicMeasure({0.3}, {2.0}), 3.0);
    CHECK(one.state_at(2.0).clusters[0].velocity == 0.0);
    CHECK(one.state_at(2.0).clusters[0].position == 0.3);

    const double w = 1.0 / 3.0;
    const Trajectory three = simulate_drift(AtomicMeasure({-1.0, 0.0, 1.0}, {w, w, w}), 0.5);
    const ClusterState st = three.state_at(0.5);
    const AtomicMeasure mu({-1.0, 0.0, 1.0}, {w, w, w});
    for (std::size_t i = 0; i < 3; ++i) CHECK(st.clusters[i].velocity == doctest::Approx(-mu.atom_mtilde(i)));
    CHECK(st.clusters[1].velocity == 0.0);
    CHECK(st.clusters[0].velocity == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("simultaneous collisions merge as one event") {
    const InitialData d(AtomicMeasure({-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}), {1.0, 0.0, -1.0}, 1.0);
    const Trajectory traj = simulate_ep(d, 20.0);
    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].merged.size() == 3);
    CHECK(traj.events[0].position == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("collision delay") {
    const Cluster a{-1.0, -1.0, 0.5, -0.25, 0, 1};
    const Cluster b{1.0, 1.0, 0.5, 0.25, 1, 2};
    CHECK(collision_delay(a, b, Dynamics::EulerPoisson, 1.0, 2.0) < 0.0);
    const Cluster c{-1.0, 0.0, 0.5, -0.25, 0, 1};
    const Cluster d{1.0, 0.0, 0.5, 0.25, 1, 2};
    CHECK(collision_delay(c, d, Dynamics::Drift, 1.0, 10.0) == 4.0);
    CHECK(collision_delay(c, d, Dynamics::Drift, 1.0, 3.0) < 0.0);
}

TEST_CASE("trajectory invariants on random instances") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const InitialData d = random_instance(rng, InstanceRanges{20});
        const Trajectory traj = simulate_to_collapse(d);
        CHECK(traj.events.size() <= d.size() - 1);
        CHECK(traj.snapshots.size() == traj.events.size() + 1);
        const double q0 = initial_state(d).total_momentum();
        for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
            const ClusterState& s = traj.snapshots[j];
            CHECK(s.total_mass() == doctest::Approx(d.total_mass()).epsilon(1e-14));
            std::size_t next = 0;
            for (std::size_t k = 0; k < s.clusters.size(); ++k) {
                CHECK(s.clusters[k].first == next);
                next = s.clusters[k].last;
                if (k > 0) CHECK(s.clusters[k].position > s.clusters[k - 1].position);
            }
            CHECK(next == d.size());
            double l1 = 0.0;
            for (const Cluster& c : s.clusters) l1 += c.mass * std::fabs(c.velocity);
            if (j > 0) {
                for (const Cluster& c : traj.snapshots[j - 1].clusters) {
                    const Cluster moved = evolve(c, s.time - traj.snapshots[j - 1].time, traj.dynamics, traj.tau);
                    l1 += moved.mass * std::fabs(moved.velocity);
                }
            }
            CHECK(std::fabs(s.total_momentum() - q0 * std::exp(-s.time / d.tau())) <=
                  1e-13 * (l1 + std::fabs(q0)));
        }
        // Re-running from an event state reproduces the remaining events exactly.
        if (traj.events.size() >= 2) {
            const std::size_t j = traj.events.size() / 2;
            const Trajectory rerun = simulate(traj.snapshots[j], traj.prefix, traj.dynamics, traj.tau, traj.t_end);
            REQUIRE(rerun.events.size() == traj.events.size() - j);
            for (std::size_t k = 0; k < rerun.events.size(); ++k) {
                CHECK(rerun.events[k].time == traj.events[j + k].time);
                CHECK(rerun.events[k].position == traj.events[j + k].position);
            }
        }
    }
}

TEST_CASE("drift total momentum vanishes") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const InitialData d = random_instance(rng, InstanceRanges{20});
        const Trajectory traj = simulate_drift(d.measure(), 100.0);
        for (const ClusterState& s : traj.snapshots) {
            double l1 = 0.0;
            for (const Cluster& c : s.clusters) l1 += c.mass * std::fabs(c.velocity);
            CHECK(std::fabs(s.total_momentum()) <= 1e-13 * (1.0 + l1));
        }
    }
}
