#include "pep1d/relax.hpp"
#include "pep1d/error.hpp"

#include <algorithm>
#include <cmath>

namespace pep {

namespace {

void check_tau(double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::TauOutOfRange, "tau must lie in (0, 1]");
}

constexpr double kErrorFloor = 1e-14;

}  // namespace

ScaledSample eval_scaled(const InitialData& data, double x, double t, double tau,
                         const Tolerances& tol) {
    check_tau(tau);
    require_positive_time(t);
    const InitialData scaled = data.with_tau(tau);
    const Snapshot s(scaled, PotentialCoefficients::scaled(tau, t), tol);
    const VelocityResult v = s.u(x);
    return {s.m(x), v.u / tau, s.q(x) / tau, v.branch};
}

std::vector<double> default_tau_sequence() {
    std::vector<double> taus;
    for (int k = 1; k <= 10; ++k) taus.push_back(std::ldexp(1.0, -k));
    return taus;
}

bool monotone_nonincreasing(const std::vector<double>& errors, double slack, double floor) {
    for (std::size_t j = 1; j < errors.size(); ++j) {
        if (errors[j] <= floor) continue;
        if (errors[j] > slack * errors[j - 1]) return false;
    }
    return true;
}

RelaxationReport convergence_study(const InitialData& data, double t,
                                   const std::vector<double>& x_grid,
                                   const std::vector<double>& tau_sequence,
                                   const Tolerances& tol) {
    require_positive_time(t);
    for (std::size_t j = 0; j < tau_sequence.size(); ++j) {
        check_tau(tau_sequence[j]);
        if (j > 0 && !(tau_sequence[j] < tau_sequence[j - 1]))
            throw Error(ErrorCode::InvalidArgument, "tau sequence must decrease");
    }
    RelaxationReport report;
    report.t = t;
    report.tau_sequence = tau_sequence;

    const DriftSnapshot drift(data.measure(), t, tol);
    const std::vector<FormulaCluster>& shocks = drift.snapshot().clusters();
    for (double x : x_grid) {
        bool near = false;
        for (const FormulaCluster& c : shocks)
            near = near || std::fabs(x - c.position) <= 1e-9 * (1.0 + std::fabs(x));
        if (!near) report.x_grid.push_back(x);
    }
    std::vector<double> mbar(report.x_grid.size());
    for (std::size_t g = 0; g < report.x_grid.size(); ++g) mbar[g] = drift.mbar(report.x_grid[g]);

    std::vector<double> em, eu;
    for (double tau : tau_sequence) {
        const InitialData scaled = data.with_tau(tau);
        const Snapshot s(scaled, PotentialCoefficients::scaled(tau, t), tol);
        RelaxationRow row;
        row.tau = tau;
        for (std::size_t g = 0; g < report.x_grid.size(); ++g)
            row.err_m = std::max(row.err_m, std::fabs(s.m(report.x_grid[g]) - mbar[g]));
        const std::vector<FormulaCluster>& fine = s.clusters();
        for (const FormulaCluster& c : shocks) {
            ClusterError ce{c.first, c.last, c.position, c.velocity, 0.0};
            for (const FormulaCluster& f : fine) {
                if (f.last <= c.first || f.first >= c.last) continue;
                ce.error = std::max(ce.error, std::fabs(f.velocity / tau - c.velocity));
            }
            row.err_u = std::max(row.err_u, ce.error);
            row.clusters.push_back(ce);
        }
        em.push_back(row.err_m);
        eu.push_back(row.err_u);
        report.rows.push_back(std::move(row));
    }
    for (std::size_t j = 1; j < em.size(); ++j) {
        const double step = std::log2(tau_sequence[j - 1] / tau_sequence[j]);
        const auto order = [&](double a, double b) {
            return (a > kErrorFloor && b > kErrorFloor) ? std::log2(a / b) / step : 0.0;
        };
        report.observed_order_m.push_back(order(em[j - 1], em[j]));
        report.observed_order_u.push_back(order(eu[j - 1], eu[j]));
    }
    report.monotone_m = monotone_nonincreasing(em, RelaxationReport::kSlack, kErrorFloor);
    report.monotone_u = monotone_nonincreasing(eu, RelaxationReport::kSlack, kErrorFloor);
    return report;
}

}  // namespace pep
