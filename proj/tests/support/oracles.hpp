#pragma once

#include <cstddef>
#include <vector>

namespace pep::testing {

/// Atomic data held in extended precision, independent of the library types.
struct RefInstance {
    std::vector<long double> eta;
    std::vector<long double> w;
    std::vector<long double> u;
    long double tau = 1.0L;
};

struct RefMin {
    long double nu = 0.0L;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
};

/// m~ at atom i by direct summation: m0(eta_i-) + w_i/2 - M/2.
long double ref_mtilde(const RefInstance& d, std::size_t i);

/// T_k for k = 0..N with Euler-Poisson weights, or drift weights when `drift` is set.
std::vector<long double> ref_prefix_sums(const RefInstance& d, long double x, long double t,
                                         bool drift = false);

/// F(y;x,t) summed over atoms strictly left of y.
long double ref_F(const RefInstance& d, long double y, long double x, long double t,
                  bool drift = false);

/// Argmin of the prefix sums with an absolute tie band.
RefMin ref_minimize(const RefInstance& d, long double x, long double t, long double band,
                    bool drift = false);

/// Newton iteration for t + exp(-t) = target on t > 0.
long double ref_root_t_plus_exp(long double target);

/// Position of a lone particle with constant force -mtilde under damping tau.
long double ref_particle_position(long double x0, long double u0, long double mtilde,
                                  long double tau, long double t);
long double ref_particle_velocity(long double u0, long double mtilde, long double tau,
                                  long double t);

}  // namespace pep::testing
