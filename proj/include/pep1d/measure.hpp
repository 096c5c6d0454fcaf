#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pep {

struct Atom {
    double position = 0.0;
    double mass = 0.0;
    double velocity = 0.0;
};

class AtomicMeasure {
public:
    AtomicMeasure() : prefix_{0.0} {}
    AtomicMeasure(std::vector<double> positions, std::vector<double> masses);

    std::size_t size() const { return positions_.size(); }
    bool empty() const { return positions_.empty(); }

    double position(std::size_t i) const { return positions_[i]; }
    double mass(std::size_t i) const { return masses_[i]; }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& masses() const { return masses_; }

    double total_mass() const { return prefix_.back(); }

    /// P_k: mass of the first k atoms.
    double prefix(std::size_t k) const { return prefix_[k]; }

    double cdf_left(double x) const;
    double cdf_right(double x) const;

    double mtilde0(double x) const;
    double mtilde0_left(double x) const;
    double mtilde0_right(double x) const;

    /// m~ of the atom block [first, last), i.e. (P_first + P_last - M)/2.
    double block_mtilde(std::size_t first, std::size_t last) const;
    double atom_mtilde(std::size_t i) const { return block_mtilde(i, i + 1); }

    /// Index of the first atom with position >= x.
    std::size_t lower_index(double x) const;
    /// Index of the first atom with position > x.
    std::size_t upper_index(double x) const;

    AtomicMeasure reflected() const;

private:
    std::vector<double> positions_;
    std::vector<double> masses_;
    std::vector<double> prefix_;
};

class InitialData {
public:
    InitialData() = default;
    InitialData(AtomicMeasure measure, std::vector<double> velocities, double tau);

    /// Sorts atoms and merges duplicate positions (masses added, velocity
    /// mass-averaged). A note per merge is appended to `warnings` if given.
    static InitialData from_atoms(std::vector<Atom> atoms, double tau,
                                  std::vector<std::string>* warnings = nullptr);

    const AtomicMeasure& measure() const { return measure_; }
    const std::vector<double>& velocities() const { return velocities_; }
    double velocity(std::size_t i) const { return velocities_[i]; }
    double tau() const { return tau_; }
    double U0() const { return U0_; }
    double total_mass() const { return measure_.total_mass(); }
    std::size_t size() const { return measure_.size(); }

    InitialData with_tau(double tau) const;
    std::vector<Atom> atoms() const;

private:
    AtomicMeasure measure_;
    std::vector<double> velocities_;
    double tau_ = 1.0;
    double U0_ = 0.0;
};

/// Midpoint-mass quadrature of a piecewise-constant density and velocity.
/// Piece j covers [breaks[j], breaks[j+1]) and is split into `cells` cells.
std::vector<Atom> discretize_piecewise_constant(const std::vector<double>& breaks,
                                                const std::vector<double>& density,
                                                const std::vector<double>& velocity,
                                                std::size_t cells);

}  // namespace pep
