#pragma once

#include "doctest.h"
#include "oracles.hpp"
#include "pep1d/numerics.hpp"
#include "pep1d/pep1d.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace fixtures {

inline pep::InitialData two_atom(double tau = 1.0) {
    return pep::InitialData(pep::AtomicMeasure({-1.0, 1.0}, {0.5, 0.5}), {0.0, 0.0}, tau);
}

inline pep::InitialData asymmetric_two_atom(double tau = 1.0) {
    return pep::InitialData(pep::AtomicMeasure({-1.0, 1.0}, {1.0 / 3.0, 2.0 / 3.0}), {0.0, 0.0}, tau);
}

inline pep::InitialData single_atom(double u = 1.0) {
    return pep::InitialData(pep::AtomicMeasure({0.0}, {1.0}), {u}, 1.0);
}

inline pep::testing::RefInstance reference(const pep::InitialData& d) {
    pep::testing::RefInstance r;
    for (std::size_t i = 0; i < d.size(); ++i) {
        r.eta.push_back(d.measure().position(i));
        r.w.push_back(d.measure().mass(i));
        r.u.push_back(d.velocity(i));
    }
    r.tau = d.tau();
    return r;
}

/// Small random instances with a few atoms; independent of the library generator.
inline pep::InitialData small_instance(std::mt19937_64& rng, std::size_t max_atoms = 8) {
    std::uniform_int_distribution<std::size_t> count(1, max_atoms);
    std::uniform_real_distribution<double> pos(-3.0, 3.0), mass(0.05, 1.5), vel(-1.5, 1.5);
    std::discrete_distribution<int> tau_pick{1, 1, 1};
    const double taus[] = {1.0, 0.5, 0.2};
    std::vector<pep::Atom> atoms;
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({pos(rng), mass(rng), vel(rng)});
    return pep::InitialData::from_atoms(atoms, taus[tau_pick(rng)]);
}

}  // namespace fixtures
