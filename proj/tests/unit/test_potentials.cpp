#include "common.hpp"

using namespace pep;
using fixtures::reference;

namespace {

const double e1 = std::exp(-1.0);

}  // namespace

TEST_CASE("eval_F examples") {
    const InitialData empty(AtomicMeasure({}, {}), {}, 1.0);
    CHECK(eval_F(empty, 1.0, 2.0, 3.0) == 0.0);
    const InitialData one = fixtures::single_atom();
    CHECK(std::fabs(eval_F(one, 5.0, 1.0 - e1, 1.0)) < 1e-15);
    const InitialData two = fixtures::two_atom();
    CHECK(eval_F(two, 0.0, 0.0, 1.0) == doctest::Approx(-0.454015).epsilon(1e-6));
    CHECK(eval_F(two, 0.0, 0.0, 1.0) == doctest::Approx(0.5 * (-1.0 + 0.25 * e1)).epsilon(1e-14));
    CHECK(eval_F(two, -1.0, 0.0, 1.0) == 0.0);
    CHECK(eval_F_right(two, -1.0, 0.0, 1.0) == eval_F(two, 0.0, 0.0, 1.0));
    CHECK_THROWS_AS(eval_F(two, 0.0, 0.0, 0.0), Error);
    CHECK_THROWS_AS(eval_F(two, 0.0, 0.0, -1.0), Error);
}

TEST_CASE("minimize_F examples") {
    const MinimizerResult a = minimize_F(fixtures::single_atom(), 1.0 - e1, 1.0);
    CHECK(std::fabs(a.nu) < 1e-15);
    CHECK(a.k_min == 0);
    CHECK(a.k_max == 1);
    CHECK(a.y_star == 0.0);
    CHECK(a.y_star_up == 0.0);

    const MinimizerResult b = minimize_F(fixtures::two_atom(), 0.0, 1.0);
    CHECK(b.nu == doctest::Approx(-0.454015).epsilon(1e-6));
    CHECK(b.k_min == 1);
    CHECK(b.k_max == 1);
    CHECK(b.y_star == -1.0);
    CHECK(b.y_star_up == -1.0);
    CHECK_FALSE(b.attained_at_y_star);

    const MinimizerResult c = minimize_F(fixtures::two_atom(), 0.0, 6.0);
    CHECK(c.k_min == 0);
    CHECK(c.k_max == 2);
    CHECK(c.y_star == -1.0);
    CHECK(c.y_star_up == 1.0);

    const InitialData empty(AtomicMeasure({}, {}), {}, 1.0);
    CHECK_THROWS_AS(minimize_F(empty, 0.0, 1.0), Error);
}

TEST_CASE("initial speed examples") {
    CHECK(initial_speed_c(fixtures::single_atom(), 0.0, 1.0 - e1, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double t : {1e-9, 0.3, 5.0, 1e4}) CHECK(initial_speed_c(fixtures::single_atom(), 0.0, 0.0, t) == 0.0);
    // Direct evaluation: 1/(1-e^-1) + (1/4)(1 - 1/(1-e^-1)).
    const double expected = 1.0 / (1.0 - e1) + 0.25 * (1.0 - 1.0 / (1.0 - e1));
    const double c = initial_speed_c(fixtures::two_atom(), -1.0, 0.0, 1.0);
    CHECK(c == doctest::Approx(expected).epsilon(1e-14));
    CHECK(c == doctest::Approx(1.436483).epsilon(1e-6));
    CHECK(initial_speed_c_left(fixtures::two_atom(), -1.0, 0.0, 1.0) <
          initial_speed_c_right(fixtures::two_atom(), -1.0, 0.0, 1.0));
}

TEST_CASE("initial speed is stable for tiny times") {
    const InitialData d = fixtures::two_atom(0.5);
    const testing::RefInstance r = reference(d);
    for (double t : {1e-12, 1e-8, 1e-4, 0.1, 3.0, 400.0}) {
        const long double z = t / r.tau;
        const long double A = -r.tau * std::expm1(-z);
        const long double mt = testing::ref_mtilde(r, 0);
        const long double x = static_cast<double>(-1.0L + 0.3L * A);
        const long double ref = (x - r.eta[0]) / A - mt * (r.tau - t / (-std::expm1(-z)));
        const double c = initial_speed_c(d, -1.0, static_cast<double>(x), t);
        CHECK(c == doctest::Approx(static_cast<double>(ref)).epsilon(1e-8));
    }
}

TEST_CASE("drift potential examples") {
    const AtomicMeasure two({-1.0, 1.0}, {0.5, 0.5});
    const MinimizerResult a = minimize_Fbar(two, 0.0, 1.0);
    CHECK(a.k_min == 1);
    CHECK(a.nu == doctest::Approx(-0.375).epsilon(1e-15));
    CHECK(a.y_star == -1.0);
    const MinimizerResult b = minimize_Fbar(two, 0.0, 5.0);
    CHECK(b.k_min == 0);
    CHECK(b.k_max == 2);
    CHECK(eval_Fbar(two, -1.0, 0.0, 1.0) == 0.0);
    CHECK(eval_Fbar(two, -2.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("auxiliary potentials G and H") {
    const InitialData one = fixtures::single_atom();
    const double t = std::log(2.0);
    const std::vector<double> fp1{forward_position(one, 0, t)};
    const double k1 = default_constant_k(one);
    CHECK(std::fabs(eval_G(one, fp1, 5.0, 0.5, t, k1)) < 1e-14);
    CHECK(std::fabs(eval_H(one, fp1, 5.0, 0.5, t, k1)) < 1e-14);
    CHECK(eval_G(one, fp1, -1.0, 0.5, t, k1) == 0.0);

    const InitialData two = fixtures::two_atom();
    const double k = default_constant_k(two);
    CHECK(k == 1.5);
    const std::vector<double> fp{forward_position(two, 0, 1.0), forward_position(two, 1, 1.0)};
    const long double xl = testing::ref_particle_position(-1.0L, 0.0L, -0.25L, 1.0L, 1.0L);
    const long double el = std::exp(-1.0L);
    const long double G = 0.5L * (0.0L + (-0.25L) * (el - 1.0L) + 1.5L) * xl;
    const long double H = -el * 0.5L * (0.0L + (-0.25L) + 1.5L) * xl;
    CHECK(eval_G(two, fp, 0.0, 0.0, 1.0, k) == doctest::Approx(static_cast<double>(G)).epsilon(1e-13));
    CHECK(eval_H(two, fp, 0.0, 0.0, 1.0, k) == doctest::Approx(static_cast<double>(H)).epsilon(1e-13));
    CHECK_THROWS_AS(eval_G(two, fp, 0.0, 0.0, 1.0, 0.5), Error);
    CHECK_THROWS_AS(eval_H(two, fp, 0.0, 0.0, 1.0, 0.4), Error);
}

TEST_CASE("coefficient signs and limits") {
    for (double tau : {1.0, 0.5, 0.01})
        for (double t : {0.0, 1e-10, 0.2, 3.0, 900.0}) {
            const PotentialCoefficients c = PotentialCoefficients::euler_poisson(tau, t);
            CHECK(c.B <= 0.0);
            CHECK(c.A >= 0.0);
            CHECK(c.A <= tau);
            if (t / tau < 30.0) CHECK(c.A < tau);
        }
    const PotentialCoefficients d = PotentialCoefficients::drift_limit(2.0);
    CHECK(d.A == 0.0);
    CHECK(d.B == -2.0);
    const PotentialCoefficients s = PotentialCoefficients::scaled(0.01, 10.0);
    CHECK(s.B == 0.01 * 0.01 - 10.0);
}

TEST_CASE("stable primitives against extended precision") {
    for (double z : {1e-12, 1e-6, 1e-3, 0.04, 0.06, 0.2, 0.3, 1.0, 7.0, 40.0, 650.0}) {
        const long double Z = z;
        const long double em1 = std::expm1(Z);
        CHECK(expm1_ratio(z) == doctest::Approx(static_cast<double>(1.0L - Z / em1)).epsilon(1e-13));
        CHECK(inverse_decay_excess(z) ==
              doctest::Approx(static_cast<double>(Z / (-std::expm1(-Z)) - 1.0L)).epsilon(1e-13));
        CHECK(inv_expm1(z) == doctest::Approx(static_cast<double>(1.0L / em1)).epsilon(1e-13));
        CHECK(exp_neg_remainder(z) ==
              doctest::Approx(static_cast<double>(std::expm1(-Z) + Z)).epsilon(1e-13));
        CHECK(one_minus_exp_neg(z) == doctest::Approx(static_cast<double>(-std::expm1(-Z))).epsilon(1e-15));
    }
    CHECK(exp_neg(800.0) == 0.0);
    CHECK(inv_expm1(800.0) == 0.0);
    NeumaierSum s;
    for (double v : {1.0, 1e100, 1.0, -1e100}) s.add(v);
    CHECK(s.value() == 2.0);
}

TEST_CASE("minimizer agrees with extended-precision enumeration") {
    std::mt19937_64 rng(21);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const InitialData d = fixtures::small_instance(rng);
        const testing::RefInstance r = reference(d);
        std::uniform_real_distribution<double> xs(-6.0, 6.0), ts(0.01, 8.0);
        const double x = xs(rng), t = ts(rng);
        const MinimizerResult got = minimize_F(d, x, t);
        const testing::RefMin ref = testing::ref_minimize(r, x, t, 0.0L);
        CHECK(got.nu == doctest::Approx(static_cast<double>(ref.nu)).epsilon(1e-12).scale(1.0));
        const std::vector<long double> T = testing::ref_prefix_sums(r, x, t);
        long double gap = 1e300L;
        for (std::size_t k = 0; k < T.size(); ++k)
            if (k != ref.k_min) gap = std::min(gap, T[k] - ref.nu);
        if (gap > 1e-9L) {
            ++compared;
            CHECK(got.k_min == ref.k_min);
            CHECK(got.k_max == ref.k_min);
        }
    }
    CHECK(compared > 250);
}

TEST_CASE("drift minimizer is the Euler-Poisson minimizer with drift weights") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const InitialData d = fixtures::small_instance(rng);
        std::uniform_real_distribution<double> xs(-6.0, 6.0), ts(0.01, 8.0);
        const double x = xs(rng), t = ts(rng);
        const InitialData dd = drift_data(d.measure());
        const FreeFlow flow(dd, PotentialCoefficients::drift_limit(t));
        const MinimizerResult a = minimize_Fbar(d.measure(), x, t);
        const MinimizerResult b = flow.minimize(x, Tolerances{}.tie);
        CHECK(a.nu == b.nu);
        CHECK(a.k_min == b.k_min);
        CHECK(a.k_max == b.k_max);
        const testing::RefMin ref = testing::ref_minimize(reference(d), x, t, 1e-12L, true);
        CHECK(a.nu == doctest::Approx(static_cast<double>(ref.nu)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("minimizer monotonicity and right limits") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const InitialData d = fixtures::small_instance(rng);
        std::uniform_real_distribution<double> xs(-6.0, 6.0), ts(0.01, 8.0);
        const double t = ts(rng);
        double x1 = xs(rng), x2 = xs(rng);
        if (x1 > x2) std::swap(x1, x2);
        const MinimizerResult a = minimize_F(d, x1, t);
        const MinimizerResult b = minimize_F(d, x2, t);
        CHECK(a.y_star <= a.y_star_up);
        CHECK(a.k_min <= a.k_max);
        CHECK(a.y_star_up <= b.y_star);
        const MinimizerResult right = minimize_F(d, x1 + 1e-9, t);
        CHECK(right.y_star == a.y_star_up);
        // On a free path the prefix sums tie; the right limit selects the larger index.
        const FreeFlow flow(d, time_coefficients(d, 1e-3));
        const double xp = flow.free_position(d.size() - 1);
        const MinimizerResult tie = minimize_F(d, xp, 1e-3);
        const MinimizerResult past = minimize_F(d, xp + 1e-6, 1e-3);
        CHECK(tie.y_star_up == past.y_star);
        // Atoms left of the window are always absorbed and atoms right of it never are.
        const auto [lo, hi] = coercivity_window(d, time_coefficients(d, t), x1);
        CHECK(a.k_min >= d.measure().lower_index(lo));
        CHECK(a.k_max <= d.measure().upper_index(hi));
    }
}

TEST_CASE("attained flag follows the atom tie rule") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 300; ++trial) {
        const InitialData d = fixtures::small_instance(rng);
        std::uniform_real_distribution<double> xs(-6.0, 6.0), ts(0.01, 8.0);
        const double x = xs(rng), t = ts(rng);
        const MinimizerResult r = minimize_F(d, x, t);
        if (r.k_min == 0) continue;
        const std::size_t i = r.k_min - 1;
        const double c = initial_speed_c(d, d.measure().position(i), x, t);
        CHECK(r.attained_at_y_star == (c <= d.velocity(i)));
    }
}

TEST_CASE("G minimizers and H maximizers match F for any admissible constant") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const InitialData d = fixtures::small_instance(rng, 6);
        std::uniform_real_distribution<double> xs(-5.0, 5.0), ts(0.05, 4.0);
        const double t = ts(rng);
        const Snapshot s(d, time_coefficients(d, t));
        std::vector<double> fp;
        for (std::size_t i = 0; i < d.size(); ++i) fp.push_back(s.forward_position(i));
        const double x = xs(rng);
        bool near = false;
        for (double p : fp) near = near || std::fabs(p - x) < 1e-6;
        if (near) continue;
        const MinimizerResult f = s.minimize(x);
        for (double k : {default_constant_k(d), 3.0 * default_constant_k(d) + 2.0}) {
            std::vector<double> ys{d.measure().position(0) - 1.0};
            for (std::size_t i = 0; i < d.size(); ++i)
                ys.push_back(i + 1 < d.size() ? 0.5 * (d.measure().position(i) + d.measure().position(i + 1))
                                              : d.measure().position(i) + 1.0);
            std::size_t kg = 0, kh = 0;
            double gmin = 1e300, hmax = -1e300;
            for (std::size_t j = 0; j < ys.size(); ++j) {
                const double g = eval_G(d, fp, ys[j], x, t, k);
                const double h = eval_H(d, fp, ys[j], x, t, k);
                if (g < gmin - 1e-13) gmin = g, kg = j;
                if (h > hmax + 1e-13) hmax = h, kh = j;
            }
            CHECK(kg == f.k_min);
            CHECK(kh == f.k_min);
        }
    }
}
