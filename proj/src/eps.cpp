#include "pep1d/eps.hpp"
#include "pep1d/error.hpp"
#include "pep1d/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace pep {

const char* to_string(Branch b) {
    switch (b) {
    case Branch::VacuumRight: return "VacuumRight";
    case Branch::VacuumLeft: return "VacuumLeft";
    case Branch::DeltaShock: return "DeltaShock";
    case Branch::Characteristic: return "Characteristic";
    case Branch::Initial: return "Initial";
    case Branch::Offsupport: return "Offsupport";
    }
    return "Unknown";
}

PotentialCoefficients time_coefficients(const InitialData& data, double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::NonPositiveTime, "time must be nonnegative and finite");
    return PotentialCoefficients::euler_poisson(data.tau(), t);
}

Snapshot::Snapshot(const InitialData& data, const PotentialCoefficients& coeffs,
                   const Tolerances& tol)
    : flow_(data, coeffs), tol_(tol) {
    if (data.measure().empty()) throw Error(ErrorCode::EmptyMeasure, "measure must be nonempty");
    check_tolerances(tol);
}

std::size_t Snapshot::absorbed(double x) const { return minimize(x).k_min; }

double Snapshot::m(double x) const {
    return flow_.data().measure().prefix(absorbed(x));
}

double Snapshot::q(double x) const {
    const std::size_t k = absorbed(x);
    const AtomicMeasure& mu = flow_.data().measure();
    NeumaierSum sum;
    for (std::size_t i = 0; i < k; ++i) sum.add(mu.mass(i) * flow_.particle_velocity(i));
    return sum.value();
}

VelocityResult Snapshot::u(double x) const {
    const InitialData& data = flow_.data();
    const AtomicMeasure& mu = data.measure();
    const PotentialCoefficients& c = flow_.coeffs();
    if (c.initial()) {
        const std::size_t i = mu.lower_index(x);
        const bool at_atom = i < mu.size() && mu.position(i) == x;
        return {at_atom ? data.velocity(i) : 0.0, Branch::Initial};
    }
    const MinimizerResult r = minimize(x);
    if (r.k_min < r.k_max) {
        return {flow_.block_velocity(r.k_min, r.k_max), Branch::DeltaShock};
    }
    const std::size_t k = r.k_min;
    const double half_m = 0.5 * mu.total_mass();
    if (c.drift) return {-(mu.prefix(k) - half_m), Branch::Offsupport};
    const double U0 = data.U0();
    if (k >= 1) {
        const double y = mu.position(k - 1);
        const double mt = mu.prefix(k) - half_m;
        if (c.initial_speed(x - y, mt) > U0)
            return {U0 * c.vel_u + mt * c.vel_m, Branch::VacuumRight};
        return {c.line_velocity(x - y, mt), Branch::Characteristic};
    }
    const double y = mu.position(0);
    const double mt = -half_m;
    if (c.initial_speed(x - y, mt) < -U0)
        return {-U0 * c.vel_u + mt * c.vel_m, Branch::VacuumLeft};
    return {c.line_velocity(x - y, mt), Branch::Characteristic};
}

double Snapshot::refine(double lo, double hi) const {
    const double mid = lo + 0.5 * (hi - lo);
    const std::size_t a = flow_.minimize(lo, 0.0).k_min;
    const std::size_t b = flow_.minimize(hi, 0.0).k_min;
    if (b <= a) return mid;
    const double xc = flow_.block_position(a, b);
    const double slack = std::max(hi - lo, tol_.pos * (1.0 + std::fabs(xc)));
    return (xc >= lo - slack && xc <= hi + slack) ? xc : mid;
}

Snapshot::Located Snapshot::locate(std::size_t atom) const {
    const InitialData& data = flow_.data();
    const AtomicMeasure& mu = data.measure();
    if (atom >= mu.size()) throw Error(ErrorCode::InvalidArgument, "atom index out of range");
    if (flow_.coeffs().initial()) return {mu.position(atom), atom, atom + 1};

    const auto absorbs = [&](double x) { return flow_.minimize(x, 0.0).k_min > atom; };
    const auto [wlo, whi] = coercivity_window(data, flow_.coeffs(), mu.position(atom));
    const double pad = 1e-9 * (1.0 + std::fabs(wlo) + std::fabs(whi));
    double lo = wlo - pad, hi = whi + pad;
    if (absorbs(lo) || !absorbs(hi)) {
        double xmin = flow_.free_position(0), xmax = xmin;
        for (std::size_t i = 1; i < mu.size(); ++i) {
            xmin = std::min(xmin, flow_.free_position(i));
            xmax = std::max(xmax, flow_.free_position(i));
        }
        lo = xmin - 1.0;
        hi = xmax + 1.0;
        if (absorbs(lo) || !absorbs(hi))
            throw Error(ErrorCode::BisectionFailure, "cannot bracket forward position");
    }
    const double width = tol_.pos * (1.0 + (hi - lo));
    for (int it = 0; it < 400 && hi - lo > width; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (absorbs(mid) ? hi : lo) = mid;
    }
    std::size_t a = flow_.minimize(lo, 0.0).k_min;
    std::size_t b = flow_.minimize(hi, 0.0).k_min;
    a = std::min(a, atom);
    b = std::max(b, atom + 1);
    return {refine(lo, hi), a, b};
}

double Snapshot::forward_position(std::size_t atom) const {
    if (clusters_ready_) return cluster_of(atom).position;
    return locate(atom).position;
}

void Snapshot::build_clusters() const {
    const AtomicMeasure& mu = flow_.data().measure();
    clusters_.clear();
    owner_.assign(mu.size(), 0);
    std::size_t i = 0;
    while (i < mu.size()) {
        const Located loc = locate(i);
        FormulaCluster c;
        c.first = i;
        c.last = std::max(loc.last, i + 1);
        c.position = loc.position;
        c.velocity = flow_.block_velocity(c.first, c.last);
        c.mass = mu.prefix(c.last) - mu.prefix(c.first);
        for (std::size_t j = c.first; j < c.last; ++j) owner_[j] = clusters_.size();
        clusters_.push_back(c);
        i = c.last;
    }
    clusters_ready_ = true;
}

const std::vector<FormulaCluster>& Snapshot::clusters() const {
    if (!clusters_ready_) build_clusters();
    return clusters_;
}

const FormulaCluster& Snapshot::cluster_of(std::size_t atom) const {
    clusters();
    return clusters_[owner_[atom]];
}

double Snapshot::E(double x) const {
    const std::size_t k = absorbed(x);
    const AtomicMeasure& mu = flow_.data().measure();
    NeumaierSum sum;
    for (std::size_t i = 0; i < k; ++i)
        sum.add(mu.mass(i) * flow_.particle_velocity(i) * cluster_of(i).velocity);
    return sum.value();
}

PotentialFields Snapshot::fields(double x) const {
    const MinimizerResult r = minimize(x);
    const InitialData& data = flow_.data();
    const AtomicMeasure& mu = data.measure();
    const PotentialCoefficients& c = flow_.coeffs();
    NeumaierSum theta, omega, h;
    for (std::size_t i = 0; i < r.k_min; ++i) {
        const FormulaCluster& cl = cluster_of(i);
        const double d = cl.position - x;
        theta.add(mu.mass(i) * flow_.particle_velocity(i) * d);
        omega.add(mu.mass(i) * (data.velocity(i) + c.tau * flow_.mtilde(i)) * d);
        h.add(mu.mass(i) * cl.velocity);
    }
    return {r.nu, theta.value(), -c.decay / c.tau * omega.value(), h.value()};
}

SolutionSample Snapshot::sample(double x) const {
    SolutionSample s;
    s.x = x;
    s.m = m(x);
    s.q = q(x);
    const VelocityResult v = u(x);
    s.u = v.u;
    s.branch = v.branch;
    s.E = E(x);
    const PotentialFields f = fields(x);
    s.nu = f.nu;
    s.theta = f.theta;
    s.omega = f.omega;
    s.h = f.h;
    return s;
}

double eval_m(const InitialData& data, double x, double t, const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).m(x);
}

double eval_q(const InitialData& data, double x, double t, const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).q(x);
}

VelocityResult eval_u(const InitialData& data, double x, double t, const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).u(x);
}

double forward_position(const InitialData& data, std::size_t atom, double t,
                        const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).forward_position(atom);
}

double eval_E(const InitialData& data, double x, double t, const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).E(x);
}

PotentialFields eval_nu_theta_omega(const InitialData& data, double x, double t,
                                    const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).fields(x);
}

SolutionSample solve_point(const InitialData& data, double x, double t, const Tolerances& tol) {
    SolutionSample s = Snapshot(data, time_coefficients(data, t), tol).sample(x);
    s.t = t;
    return s;
}

std::vector<FormulaCluster> formula_clusters(const InitialData& data, double t,
                                             const Tolerances& tol) {
    return Snapshot(data, time_coefficients(data, t), tol).clusters();
}

namespace {

void absorbed_range(const Snapshot& s, double x, ShockSample& out) {
    const MinimizerResult r = s.minimize(x);
    out.first = r.k_min;
    out.last = r.k_min < r.k_max ? r.k_max : r.k_min;
}

}  // namespace

ShockCurve trace_shock(const InitialData& data, double x0, double t0, double t_end, double dt,
                       const Tolerances& tol) {
    require_positive_time(t0);
    if (!(t_end > t0) || !(dt > 0.0))
        throw Error(ErrorCode::InvalidArgument, "trace_shock needs t0 < t_end and dt > 0");
    const AtomicMeasure& mu = data.measure();
    const double half_m = 0.5 * mu.total_mass();
    const double lip = data.U0() + data.tau() * half_m;
    const PotentialCoefficients c0 = time_coefficients(data, t0);

    ShockCurve curve;
    curve.x0 = x0;
    curve.t0 = t0;
    {
        const Snapshot s(data, c0, tol);
        ShockSample first{t0, x0, s.u(x0).u, 0, 0};
        absorbed_range(s, x0, first);
        curve.samples.push_back(first);
    }
    const auto steps = static_cast<long>(std::floor((t_end - t0) / dt * (1.0 + 1e-12)));
    for (long j = 1; j <= steps; ++j) {
        const double t = t0 + static_cast<double>(j) * dt;
        const Snapshot s(data, time_coefficients(data, t), tol);
        const FreeFlow& flow = s.flow();
        const auto left_of_curve = [&](double x) {
            const std::size_t k = flow.minimize(x, 0.0).k_min;
            const double y = mu.position(k >= 1 ? k - 1 : 0);
            const double mt = k >= 1 ? mu.prefix(k) - half_m : -half_m;
            const double speed = flow.coeffs().initial_speed(x - y, mt);
            return y + speed * c0.A + mt * c0.B < x0;
        };
        double reach = lip * (t - t0) + 1e-9 * (1.0 + std::fabs(x0));
        double lo = x0 - reach, hi = x0 + reach;
        int widen = 0;
        while ((!left_of_curve(lo) || left_of_curve(hi)) && widen < 8) {
            reach *= 4.0;
            lo = x0 - reach;
            hi = x0 + reach;
            ++widen;
        }
        if (!left_of_curve(lo) || left_of_curve(hi))
            throw Error(ErrorCode::BisectionFailure, "cannot bracket generalized characteristic");
        const double width = tol.pos * (1.0 + (hi - lo));
        for (int it = 0; it < 400 && hi - lo > width; ++it) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            (left_of_curve(mid) ? lo : hi) = mid;
        }
        ShockSample smp;
        smp.t = t;
        smp.x = s.refine(lo, hi);
        smp.u = s.u(smp.x).u;
        absorbed_range(s, smp.x, smp);
        curve.samples.push_back(smp);
    }
    return curve;
}

}  // namespace pep
