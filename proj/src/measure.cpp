#include "pep1d/measure.hpp"
#include "pep1d/error.hpp"
#include "pep1d/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pep {

AtomicMeasure::AtomicMeasure(std::vector<double> positions, std::vector<double> masses)
    : positions_(std::move(positions)), masses_(std::move(masses)) {
    if (positions_.size() != masses_.size())
        throw Error(ErrorCode::InvalidMeasure, "positions and masses differ in length");
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (!std::isfinite(positions_[i]))
            throw Error(ErrorCode::InvalidMeasure, "atom position must be finite");
        if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i]))
            throw Error(ErrorCode::InvalidMeasure, "atom mass must be positive and finite");
        if (i > 0 && !(positions_[i - 1] < positions_[i]))
            throw Error(ErrorCode::InvalidMeasure, "atom positions must be strictly increasing");
    }
    prefix_.resize(positions_.size() + 1);
    prefix_[0] = 0.0;
    NeumaierSum sum;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        sum.add(masses_[i]);
        prefix_[i + 1] = sum.value();
    }
}

std::size_t AtomicMeasure::lower_index(double x) const {
    return static_cast<std::size_t>(std::lower_bound(positions_.begin(), positions_.end(), x) -
                                    positions_.begin());
}

std::size_t AtomicMeasure::upper_index(double x) const {
    return static_cast<std::size_t>(std::upper_bound(positions_.begin(), positions_.end(), x) -
                                    positions_.begin());
}

double AtomicMeasure::cdf_left(double x) const { return prefix_[lower_index(x)]; }

double AtomicMeasure::cdf_right(double x) const { return prefix_[upper_index(x)]; }

double AtomicMeasure::mtilde0(double x) const {
    return block_mtilde(lower_index(x), upper_index(x));
}

double AtomicMeasure::mtilde0_left(double x) const {
    return cdf_left(x) - 0.5 * total_mass();
}

double AtomicMeasure::mtilde0_right(double x) const {
    return cdf_right(x) - 0.5 * total_mass();
}

double AtomicMeasure::block_mtilde(std::size_t first, std::size_t last) const {
    return 0.5 * (prefix_[first] + prefix_[last] - total_mass());
}

AtomicMeasure AtomicMeasure::reflected() const {
    std::vector<double> pos(positions_.rbegin(), positions_.rend());
    for (double& p : pos) p = -p;
    return AtomicMeasure(std::move(pos), std::vector<double>(masses_.rbegin(), masses_.rend()));
}

InitialData::InitialData(AtomicMeasure measure, std::vector<double> velocities, double tau)
    : measure_(std::move(measure)), velocities_(std::move(velocities)), tau_(tau) {
    if (velocities_.size() != measure_.size())
        throw Error(ErrorCode::InvalidMeasure, "one velocity per atom is required");
    if (!(tau_ > 0.0 && tau_ <= 1.0))
        throw Error(ErrorCode::TauOutOfRange, "tau must lie in (0, 1]");
    for (double u : velocities_) {
        if (!std::isfinite(u)) throw Error(ErrorCode::InvalidMeasure, "velocity must be finite");
        U0_ = std::max(U0_, std::fabs(u));
    }
}

InitialData InitialData::from_atoms(std::vector<Atom> atoms, double tau,
                                    std::vector<std::string>* warnings) {
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.position < b.position; });
    std::vector<double> pos, mass, vel;
    for (const Atom& a : atoms) {
        if (!(a.mass > 0.0) || !std::isfinite(a.mass))
            throw Error(ErrorCode::InvalidMeasure, "atom mass must be positive and finite");
        if (!pos.empty() && pos.back() == a.position) {
            const double w = mass.back() + a.mass;
            vel.back() = (mass.back() * vel.back() + a.mass * a.velocity) / w;
            mass.back() = w;
            if (warnings) {
                std::ostringstream os;
                os.precision(17);
                os << "merged duplicate atom at position " << a.position;
                warnings->push_back(os.str());
            }
            continue;
        }
        pos.push_back(a.position);
        mass.push_back(a.mass);
        vel.push_back(a.velocity);
    }
    return InitialData(AtomicMeasure(std::move(pos), std::move(mass)), std::move(vel), tau);
}

InitialData InitialData::with_tau(double tau) const {
    return InitialData(measure_, velocities_, tau);
}

std::vector<Atom> InitialData::atoms() const {
    std::vector<Atom> out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = {measure_.position(i), measure_.mass(i), velocities_[i]};
    return out;
}

std::vector<Atom> discretize_piecewise_constant(const std::vector<double>& breaks,
                                                const std::vector<double>& density,
                                                const std::vector<double>& velocity,
                                                std::size_t cells) {
    if (breaks.size() < 2 || density.size() + 1 != breaks.size() ||
        velocity.size() != density.size() || cells == 0)
        throw Error(ErrorCode::InvalidArgument, "inconsistent piecewise-constant density");
    std::vector<Atom> out;
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
        const double a = breaks[j], b = breaks[j + 1];
        if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "density breaks must increase");
        if (density[j] < 0.0) throw Error(ErrorCode::InvalidArgument, "density must be nonnegative");
        if (density[j] == 0.0) continue;
        const double h = (b - a) / static_cast<double>(cells);
        for (std::size_t c = 0; c < cells; ++c)
            out.push_back({a + (static_cast<double>(c) + 0.5) * h, density[j] * h, velocity[j]});
    }
    return out;
}

}  // namespace pep
