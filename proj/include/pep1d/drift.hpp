#pragma once

#include "pep1d/eps.hpp"

namespace pep {

struct DriftSample {
    double x = 0.0;
    double t = 0.0;
    double mbar = 0.0;
    double qbar = 0.0;
    double ubar = 0.0;
    Branch branch = Branch::Offsupport;
};

/// Formula-layer drift solution at a fixed time.
class DriftSnapshot {
public:
    DriftSnapshot(const AtomicMeasure& measure, double t, const Tolerances& tol = {});
    DriftSnapshot(const DriftSnapshot&) = delete;
    DriftSnapshot& operator=(const DriftSnapshot&) = delete;

    const Snapshot& snapshot() const { return snapshot_; }
    double mbar(double x) const;
    double qbar(double x) const;
    VelocityResult ubar(double x) const;
    DriftSample sample(double x) const;

private:
    InitialData data_;
    Snapshot snapshot_;
    double t_;
};

double eval_mbar(const AtomicMeasure& measure, double x, double t, const Tolerances& tol = {});
double eval_qbar(const AtomicMeasure& measure, double x, double t, const Tolerances& tol = {});
VelocityResult eval_ubar(const AtomicMeasure& measure, double x, double t,
                         const Tolerances& tol = {});

/// -1/2 m^2 + (M/2) m.
double qbar_closed_form(double mbar, double total_mass);

}  // namespace pep
