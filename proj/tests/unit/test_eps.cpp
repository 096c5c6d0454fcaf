#include "common.hpp"

using namespace pep;

namespace {

const double ln2 = std::log(2.0);
const double e1 = std::exp(-1.0);

}  // namespace

TEST_CASE("eval_m examples") {
    CHECK(eval_m(fixtures::two_atom(), 0.0, 1.0) == 0.5);
    CHECK(eval_m(fixtures::single_atom(), -5.0, 1.0) == 0.0);
    CHECK(eval_m(fixtures::single_atom(), 5.0, 1.0) == 1.0);
}

TEST_CASE("eval_q examples") {
    CHECK(eval_q(fixtures::single_atom(), 5.0, ln2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eval_q(fixtures::single_atom(), -5.0, ln2) == 0.0);
    for (double t : {0.5, 1.0, 3.0, 6.0}) CHECK(std::fabs(eval_q(fixtures::two_atom(), 5.0, t)) < 1e-16);
}

TEST_CASE("eval_u examples") {
    const VelocityResult a = eval_u(fixtures::single_atom(), 0.5, ln2);
    CHECK(a.u == doctest::Approx(0.5).epsilon(1e-14));
    // m jumps by the atom mass here, so the point is tagged as a concentration.
    CHECK(a.branch == Branch::DeltaShock);
    CHECK(eval_u(fixtures::single_atom(), 0.4, ln2).branch == Branch::Characteristic);
    const VelocityResult b = eval_u(fixtures::two_atom(), 0.0, 6.0);
    CHECK(b.u == 0.0);
    CHECK(b.branch == Branch::DeltaShock);
    const VelocityResult c = eval_u(fixtures::single_atom(), 10.0, 1.0);
    CHECK(c.u == doctest::Approx(e1 + 0.5 * (e1 - 1.0)).epsilon(1e-14));
    CHECK(c.u == doctest::Approx(0.0518).epsilon(1e-3));
    CHECK(c.branch == Branch::VacuumRight);
    const VelocityResult d = eval_u(fixtures::single_atom(-1.0), -10.0, 1.0);
    CHECK(d.branch == Branch::VacuumLeft);
    CHECK(d.u == doctest::Approx(-e1 + 0.5 * (1.0 - e1)).epsilon(1e-14));
}

TEST_CASE("forward_position examples") {
    CHECK(forward_position(fixtures::single_atom(), 0, ln2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::fabs(forward_position(fixtures::two_atom(), 0, 6.0)) < 1e-12);
    CHECK(std::fabs(forward_position(fixtures::two_atom(), 1, 6.0)) < 1e-12);
    const double expected = static_cast<double>(testing::ref_particle_position(-1.0L, 0.0L, -0.25L, 1.0L, 1.0L));
    CHECK(expected == doctest::Approx(-0.908030).epsilon(1e-6));
    CHECK(forward_position(fixtures::two_atom(), 0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("eval_E examples") {
    CHECK(eval_E(fixtures::single_atom(), 5.0, ln2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(eval_E(fixtures::single_atom(), -5.0, ln2) == 0.0);
    CHECK(eval_E(fixtures::two_atom(), 5.0, 6.0) == 0.0);
}

TEST_CASE("auxiliary fields") {
    const double t = ln2;
    const double x = static_cast<double>(testing::ref_particle_position(0.0L, 1.0L, 0.0L, 1.0L, t));
    const PotentialFields on = eval_nu_theta_omega(fixtures::single_atom(), x, t);
    CHECK(std::fabs(on.theta) < 1e-14);
    CHECK(std::fabs(on.omega) < 1e-14);
    const PotentialFields left = eval_nu_theta_omega(fixtures::single_atom(), -5.0, t);
    CHECK(left.nu == 0.0);
    CHECK(left.theta == 0.0);
    CHECK(left.omega == 0.0);
    CHECK(left.h == 0.0);

    const long double xl = testing::ref_particle_position(-1.0L, 0.0L, -0.25L, 1.0L, 1.0L);
    const long double ul = testing::ref_particle_velocity(0.0L, -0.25L, 1.0L, 1.0L);
    const long double el = std::exp(-1.0L);
    const PotentialFields f = eval_nu_theta_omega(fixtures::two_atom(), 0.0, 1.0);
    CHECK(f.theta == doctest::Approx(static_cast<double>(0.5L * ul * xl)).epsilon(1e-12));
    CHECK(f.omega == doctest::Approx(static_cast<double>(-el * 0.5L * (-0.25L) * xl)).epsilon(1e-12));
    CHECK(f.h == doctest::Approx(static_cast<double>(0.5L * ul)).epsilon(1e-12));
    const double h = 1e-5;
    const double dtheta = (eval_nu_theta_omega(fixtures::two_atom(), h, 1.0).theta -
                           eval_nu_theta_omega(fixtures::two_atom(), -h, 1.0).theta) / (2 * h);
    CHECK(dtheta == doctest::Approx(-eval_q(fixtures::two_atom(), 0.0, 1.0)).epsilon(1e-8));
}

TEST_CASE("time zero returns initial data") {
    const InitialData d = fixtures::two_atom();
    CHECK(eval_m(d, 0.0, 0.0) == 0.5);
    CHECK(eval_m(d, -1.0, 0.0) == 0.0);
    const VelocityResult u = eval_u(fixtures::single_atom(0.7), 0.0, 0.0);
    CHECK(u.u == 0.7);
    CHECK(u.branch == Branch::Initial);
    CHECK(eval_q(fixtures::single_atom(0.7), 1.0, 0.0) == doctest::Approx(0.7));
    CHECK(eval_E(fixtures::single_atom(0.7), 1.0, 0.0) == doctest::Approx(0.49));
    CHECK_THROWS_AS(eval_m(d, 0.0, -1.0), Error);
}

TEST_CASE("trace_shock examples") {
    const ShockCurve a = trace_shock(fixtures::single_atom(), 1e-3 - 0.5e-6, 1e-3, 2.0, 0.25);
    REQUIRE(a.samples.size() == 8);
    for (std::size_t j = 1; j < a.samples.size(); ++j) {
        CHECK(a.samples[j].t > a.samples[j - 1].t);
        CHECK(a.samples[j].x == doctest::Approx(-std::expm1(-a.samples[j].t)).epsilon(1e-10));
    }
    const long double root = testing::ref_root_t_plus_exp(5.0L);
    const ShockCurve b = trace_shock(fixtures::two_atom(), 0.0, static_cast<double>(root) + 0.01, 8.0, 0.5);
    for (const ShockSample& s : b.samples) {
        CHECK(std::fabs(s.x) < 1e-12);
        CHECK(s.u == 0.0);
    }
}

TEST_CASE("trace_shock follows oracle clusters") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const InitialData d = fixtures::small_instance(rng, 3);
        const Trajectory traj = simulate_ep(d, 6.0);
        const double t0 = 0.5;
        const ClusterState s0 = traj.state_at(t0);
        const Cluster& start = s0.clusters.front();
        const ShockCurve curve = trace_shock(d, start.position, t0, 5.0, 0.5);
        const double lip = d.U0() + d.tau() * 0.5 * d.total_mass();
        std::size_t prev_first = 0, prev_last = 0;
        for (std::size_t j = 0; j < curve.samples.size(); ++j) {
            const ShockSample& s = curve.samples[j];
            const ClusterState st = traj.state_at(s.t);
            const Cluster* owner = nullptr;
            for (const Cluster& c : st.clusters)
                if (c.first <= start.first && start.first < c.last) owner = &c;
            REQUIRE(owner != nullptr);
            CHECK(s.x == doctest::Approx(owner->position).epsilon(1e-9));
            if (j > 0) {
                const ShockSample& p = curve.samples[j - 1];
                CHECK(std::fabs(s.x - p.x) <= lip * (s.t - p.t) * (1 + 1e-9) + 1e-9);
                CHECK(s.first <= prev_first);
                CHECK(s.last >= prev_last);
            }
            prev_first = s.first;
            prev_last = s.last;
        }
    }
}

TEST_CASE("solution invariants on random instances") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 150; ++trial) {
        const InitialData d = fixtures::small_instance(rng);
        std::uniform_real_distribution<double> ts(0.05, 6.0);
        const double t = ts(rng);
        const Snapshot s(d, time_coefficients(d, t));
        const double M = d.total_mass();
        const double vmax = d.U0() + d.tau() * M / 2;
        double prev_m = -1.0;
        for (int j = 0; j <= 60; ++j) {
            const double x = -8.0 + 16.0 * j / 60.0;
            const SolutionSample p = s.sample(x);
            CHECK(p.m >= 0.0);
            CHECK(p.m <= M);
            CHECK(p.m >= prev_m);
            CHECK(std::fabs(p.q) <= M * vmax * (1 + 1e-12));
            CHECK(std::fabs(p.u) <= vmax * (1 + 1e-12));
            prev_m = p.m;
        }
        // Total momentum decays exponentially.
        NeumaierSum q0;
        double l1 = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            q0.add(d.measure().mass(i) * d.velocity(i));
            l1 += d.measure().mass(i) * (std::fabs(d.velocity(i)) + d.tau() * M);
        }
        CHECK(std::fabs(s.q(1e6) - q0.value() * std::exp(-t / d.tau())) <= 1e-13 * l1);

        const auto& clusters = s.clusters();
        for (std::size_t i = 1; i < d.size(); ++i) CHECK(s.forward_position(i - 1) <= s.forward_position(i));
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            const FormulaCluster& c = clusters[k];
            const double x1 = k == 0 ? c.position - 1.0 : 0.5 * (clusters[k - 1].position + c.position);
            const double x2 = k + 1 == clusters.size() ? c.position + 1.0
                                                       : 0.5 * (c.position + clusters[k + 1].position);
            const double dm = s.m(x2) - s.m(x1);
            CHECK(dm == doctest::Approx(c.mass).epsilon(1e-12));
            const VelocityResult uc = s.u(c.position);
            CHECK(uc.branch == Branch::DeltaShock);
            CHECK((s.q(x2) - s.q(x1)) / dm == doctest::Approx(uc.u).epsilon(1e-9).scale(1.0));
            CHECK((s.E(x2) - s.E(x1)) / dm == doctest::Approx(uc.u * uc.u).epsilon(1e-9).scale(1.0));
            // One-sided ordering across the cluster.
            const double delta = 1e-7;
            const double slack = 3.0 * delta / t + 1e-12;
            CHECK(s.u(c.position + delta).u <= uc.u + slack);
            CHECK(uc.u <= s.u(c.position - delta).u + slack);
            CHECK(s.m(c.position - delta) == s.m(c.position));
            CHECK(s.m(c.position + delta) - s.m(c.position) == doctest::Approx(c.mass).epsilon(1e-12));
        }
        // Away from clusters there is no jump in m, so the branch is never DeltaShock.
        for (std::size_t k = 0; k + 1 < clusters.size(); ++k) {
            const double mid = 0.5 * (clusters[k].position + clusters[k + 1].position);
            CHECK(s.u(mid).branch != Branch::DeltaShock);
        }
    }
}

TEST_CASE("forward positions are continuous in time") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const InitialData d = fixtures::small_instance(rng);
        const double lip = d.U0() + d.tau() * 0.5 * d.total_mass();
        for (double t : {0.3, 1.0, 2.5}) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                const double a = forward_position(d, i, t);
                const double b = forward_position(d, i, t + 1e-4);
                CHECK(std::fabs(b - a) <= lip * 1e-4 * (1 + 1e-6) + 1e-11);
            }
        }
    }
}

TEST_CASE("formula layer matches the oracle on small instances") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 30; ++trial) {
        const InitialData d = random_instance(rng, InstanceRanges{12});
        const Trajectory traj = simulate_to_collapse(d);
        const std::vector<double> times = choose_sample_times(traj, 10, rng);
        for (const CompareRow& r : compare_layers(d, traj, times)) {
            CHECK(r.max_dm <= 1e-9);
            CHECK(r.max_du <= 1e-9);
        }
    }
}
