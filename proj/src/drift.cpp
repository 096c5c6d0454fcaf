#include "pep1d/drift.hpp"
#include "pep1d/error.hpp"
#include "pep1d/numerics.hpp"

#include <cmath>

namespace pep {

double qbar_closed_form(double mbar, double total_mass) {
    return -0.5 * mbar * mbar + 0.5 * total_mass * mbar;
}

DriftSnapshot::DriftSnapshot(const AtomicMeasure& measure, double t, const Tolerances& tol)
    : data_(drift_data(measure)),
      snapshot_(data_, (require_positive_time(t), PotentialCoefficients::drift_limit(t)), tol),
      t_(t) {}

double DriftSnapshot::mbar(double x) const { return snapshot_.m(x); }

double DriftSnapshot::qbar(double x) const {
    const AtomicMeasure& mu = data_.measure();
    const std::size_t k = snapshot_.minimize(x).k_min;
    NeumaierSum sum;
    for (std::size_t i = 0; i < k; ++i) sum.add(-mu.atom_mtilde(i) * mu.mass(i));
    const double q = sum.value();
    const double m = mu.prefix(k);
    const double M = mu.total_mass();
    const double closed = qbar_closed_form(m, M);
    const double scale = 0.5 * m * m + 0.5 * M * m;
    if (std::fabs(q - closed) > 1e-14 * scale)
        throw Error(ErrorCode::IdentityViolation, "drift momentum prefix disagrees with closed form");
    return q;
}

VelocityResult DriftSnapshot::ubar(double x) const { return snapshot_.u(x); }

DriftSample DriftSnapshot::sample(double x) const {
    DriftSample s;
    s.x = x;
    s.t = t_;
    s.mbar = mbar(x);
    s.qbar = qbar(x);
    const VelocityResult v = ubar(x);
    s.ubar = v.u;
    s.branch = v.branch;
    return s;
}

double eval_mbar(const AtomicMeasure& measure, double x, double t, const Tolerances& tol) {
    return DriftSnapshot(measure, t, tol).mbar(x);
}

double eval_qbar(const AtomicMeasure& measure, double x, double t, const Tolerances& tol) {
    return DriftSnapshot(measure, t, tol).qbar(x);
}

VelocityResult eval_ubar(const AtomicMeasure& measure, double x, double t,
                         const Tolerances& tol) {
    return DriftSnapshot(measure, t, tol).ubar(x);
}

}  // namespace pep
