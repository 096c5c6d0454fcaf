#pragma once

#include "pep1d/drift.hpp"

#include <vector>

namespace pep {

struct ScaledSample {
    double m_tau = 0.0;
    double u_tau = 0.0;
    double q_tau_over_tau = 0.0;
    Branch branch = Branch::Characteristic;
};

ScaledSample eval_scaled(const InitialData& data, double x, double t, double tau,
                         const Tolerances& tol = {});

struct ClusterError {
    std::size_t first = 0;
    std::size_t last = 0;
    double position = 0.0;  // drift cluster position
    double ubar = 0.0;
    double error = 0.0;     // max over constituent atoms of |u^tau - ubar|
};

struct RelaxationRow {
    double tau = 0.0;
    double err_m = 0.0;
    double err_u = 0.0;
    std::vector<ClusterError> clusters;
};

struct RelaxationReport {
    double t = 0.0;
    std::vector<double> tau_sequence;
    std::vector<double> x_grid;  // grid after removing drift shock locations
    std::vector<RelaxationRow> rows;
    std::vector<double> observed_order_m;  // log2 error ratios between consecutive taus
    std::vector<double> observed_order_u;
    bool monotone_m = true;
    bool monotone_u = true;
    static constexpr double kSlack = 1.05;
};

std::vector<double> default_tau_sequence();

RelaxationReport convergence_study(const InitialData& data, double t,
                                   const std::vector<double>& x_grid,
                                   const std::vector<double>& tau_sequence,
                                   const Tolerances& tol = {});

/// err(next) <= slack*err(prev), with errors below `floor` treated as zero.
bool monotone_nonincreasing(const std::vector<double>& errors, double slack, double floor);

}  // namespace pep
