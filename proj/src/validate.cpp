#include "pep1d/validate.hpp"
#include "pep1d/error.hpp"
#include "pep1d/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pep {

double bump_profile(double z) {
    if (std::fabs(z) >= 1.0) return 0.0;
    const double w = 1.0 - z * z;
    return w * w * w;
}

double bump_profile_derivative(double z) {
    if (std::fabs(z) >= 1.0) return 0.0;
    const double w = 1.0 - z * z;
    return -6.0 * z * w * w;
}

double bump_tail(double z) {
    const auto P = [](double v) {
        const double v2 = v * v;
        return v * (1.0 - v2 + 0.6 * v2 * v2 - v2 * v2 * v2 / 7.0);
    };
    if (z >= 1.0) return 0.0;
    if (z <= -1.0) return 2.0 * P(1.0);
    return P(1.0) - P(z);
}

namespace {

struct ClusterView {
    double position;
    double velocity;
    double mass;
    double mtilde;
};

std::vector<ClusterView> clusters_at(const InitialData& data, const Trajectory& traj, double t,
                                     Layer layer, const Tolerances& tol) {
    std::vector<ClusterView> out;
    const AtomicMeasure& mu = data.measure();
    if (layer == Layer::Oracle) {
        for (const Cluster& c : traj.state_at(t).clusters)
            out.push_back({c.position, c.velocity, c.mass, c.mtilde});
    } else {
        for (const FormulaCluster& c : formula_clusters(data, t, tol))
            out.push_back({c.position, c.velocity, c.mass, mu.block_mtilde(c.first, c.last)});
    }
    return out;
}

struct WeakIntegrand {
    double mass = 0.0;
    double momentum = 0.0;
    double mass_abs = 0.0;
    double momentum_abs = 0.0;
};

WeakIntegrand weak_integrand(const std::vector<ClusterView>& cl, const Bump& b, double t,
                             double tau) {
    WeakIntegrand w;
    const double zt = (t - b.s) / b.rho;
    const double bt = b.amplitude * bump_profile(zt);
    const double dbt = b.amplitude * bump_profile_derivative(zt) / b.rho;
    for (const ClusterView& c : cl) {
        const double zx = (c.position - b.c) / b.r;
        const double bx = bump_profile(zx);
        const double dbx = bump_profile_derivative(zx) / b.r;
        const double phi = bx * bt;
        const double m1 = dbt * b.r * bump_tail(zx);
        const double m2 = phi * c.velocity;
        w.mass += c.mass * (m1 - m2);
        w.mass_abs += c.mass * (std::fabs(m1) + std::fabs(m2));
        const double p1 = bx * dbt * c.velocity;
        const double p2 = dbx * bt * c.velocity * c.velocity;
        const double p3 = (c.mtilde + c.velocity / tau) * phi;
        w.momentum += c.mass * (p1 + p2 - p3);
        w.momentum_abs += c.mass * (std::fabs(p1) + std::fabs(p2) + std::fabs(p3));
    }
    return w;
}

void finish_decay(ResidualReport& rep, double factor, double final_tolerance) {
    bool ok = true;
    std::ostringstream os;
    for (std::size_t j = 0; j < rep.levels.size(); ++j) {
        ResidualLevel& lv = rep.levels[j];
        lv.pass = std::isfinite(lv.residual);
        if (j > 0) {
            const ResidualLevel& prev = rep.levels[j - 1];
            if (lv.residual > lv.floor && prev.residual > prev.floor)
                lv.pass = lv.pass && lv.residual * factor <= prev.residual;
            else
                lv.pass = lv.pass && lv.residual <= std::max(lv.floor, prev.residual);
        }
        ok = ok && lv.pass;
    }
    if (!rep.levels.empty() && !(rep.levels.back().residual <= final_tolerance)) {
        ok = false;
        os << "final residual above " << final_tolerance;
    }
    rep.pass = ok;
    rep.detail = os.str();
}

}  // namespace

std::vector<ResidualReport> check_weak_form(const InitialData& data,
                                            const std::vector<Bump>& family,
                                            std::pair<double, double> window,
                                            const WeakFormOptions& options,
                                            const Tolerances& tol) {
    if (!(window.first >= 0.0 && window.second > window.first))
        throw Error(ErrorCode::InvalidArgument, "time window must be increasing and nonnegative");
    if (options.levels < 1 || options.base_cells < 1)
        throw Error(ErrorCode::InvalidArgument, "weak form needs at least one level");
    const Trajectory traj = simulate_ep(data, window.second, tol);

    // Gauss-Legendre two-point nodes on [-1, 1].
    const double g = 1.0 / std::sqrt(3.0);
    ResidualReport mass{"weak_form_mass", {}, true, {}};
    ResidualReport mom{"weak_form_momentum", {}, true, {}};
    for (int level = 0; level < options.levels; ++level) {
        const int cells = options.base_cells << level;
        double rm = 0.0, rp = 0.0, am = 0.0, ap = 0.0;
        for (const Bump& b : family) {
            const double lo = std::max(window.first, b.s - b.rho);
            const double hi = std::min(window.second, b.s + b.rho);
            if (!(hi > lo) || b.amplitude == 0.0) continue;
            std::vector<double> cuts{lo};
            for (const MergeEvent& ev : traj.events)
                if (ev.time > lo && ev.time < hi) cuts.push_back(ev.time);
            cuts.push_back(hi);
            NeumaierSum im, ip;
            double abs_m = 0.0, abs_p = 0.0;
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
                const double h = (cuts[p + 1] - cuts[p]) / cells;
                for (int k = 0; k < cells; ++k) {
                    const double mid = cuts[p] + (k + 0.5) * h;
                    for (double node : {mid - 0.5 * h * g, mid + 0.5 * h * g}) {
                        const auto cl = clusters_at(data, traj, node, options.layer, tol);
                        const WeakIntegrand w = weak_integrand(cl, b, node, data.tau());
                        im.add(0.5 * h * w.mass);
                        ip.add(0.5 * h * w.momentum);
                        abs_m += 0.5 * h * w.mass_abs;
                        abs_p += 0.5 * h * w.momentum_abs;
                    }
                }
            }
            rm = std::max(rm, std::fabs(im.value()));
            rp = std::max(rp, std::fabs(ip.value()));
            am = std::max(am, abs_m);
            ap = std::max(ap, abs_p);
        }
        mass.levels.push_back({double(cells), rm, 1e-13 * (1.0 + am), true, {}});
        mom.levels.push_back({double(cells), rp, 1e-13 * (1.0 + ap), true, {}});
    }
    for (ResidualReport* rep : {&mass, &mom}) {
        for (std::size_t j = 1; j < rep->levels.size(); ++j) {
            const ResidualLevel& a = rep->levels[j - 1];
            const ResidualLevel& b = rep->levels[j];
            if (b.residual > b.floor && b.residual > 2.0 * a.residual)
                throw Error(ErrorCode::QuadratureDivergence,
                            rep->name + " grows under refinement");
        }
        finish_decay(*rep, options.decay_factor, options.final_tolerance);
    }
    return {mass, mom};
}

ResidualReport check_oleinik(const InitialData& data, const std::vector<double>& t_samples,
                             const std::vector<std::pair<double, double>>& x_pairs,
                             double tolerance, Layer layer, const Tolerances& tol) {
    ResidualReport rep{"oleinik", {}, true, {}};
    for (const auto& [x1, x2] : x_pairs)
        if (!(x1 < x2)) throw Error(ErrorCode::InvalidArgument, "Oleinik pairs need x1 < x2");
    double t_max = 0.0;
    for (double t : t_samples) {
        require_positive_time(t);
        t_max = std::max(t_max, t);
    }
    Trajectory traj;
    if (layer == Layer::Oracle && !t_samples.empty()) traj = simulate_ep(data, t_max, tol);
    for (double t : t_samples) {
        const double z = t / data.tau();
        const double bound = inv_expm1(z) / data.tau();
        double worst = -std::numeric_limits<double>::infinity();
        if (layer == Layer::Formula) {
            const Snapshot s(data, time_coefficients(data, t), tol);
            for (const auto& [x1, x2] : x_pairs) {
                const double quotient = (s.u(x2).u - s.u(x1).u) / (x2 - x1);
                worst = std::max(worst, quotient - bound);
            }
        } else {
            const ClusterState st = traj.state_at(t);
            for (std::size_t i = 0; i < st.clusters.size(); ++i)
                for (std::size_t j = i + 1; j < st.clusters.size(); ++j) {
                    const Cluster& a = st.clusters[i];
                    const Cluster& b = st.clusters[j];
                    if (!(b.position > a.position)) continue;
                    const double quotient = (b.velocity - a.velocity) / (b.position - a.position);
                    worst = std::max(worst, quotient - bound);
                }
        }
        ResidualLevel lv;
        lv.parameter = t;
        lv.residual = std::max(worst, 0.0);
        lv.parts = {worst, bound, 1.0 / t};
        lv.pass = worst <= tolerance && bound <= 1.0 / t + 1e-12;
        rep.pass = rep.pass && lv.pass;
        rep.levels.push_back(lv);
    }
    return rep;
}

ResidualReport check_initial_continuity(const InitialData& data,
                                        const std::vector<double>& x_grid,
                                        const std::vector<double>& t_sequence,
                                        double final_tolerance, const Tolerances& tol) {
    ResidualReport rep{"initial_continuity", {}, true, {}};
    const AtomicMeasure& mu = data.measure();
    std::vector<double> grid, m0, q0, E0;
    for (double x : x_grid) {
        const std::size_t i = mu.lower_index(x);
        if (i < mu.size() && mu.position(i) == x) continue;
        grid.push_back(x);
        NeumaierSum q, e;
        for (std::size_t j = 0; j < i; ++j) {
            q.add(mu.mass(j) * data.velocity(j));
            e.add(mu.mass(j) * data.velocity(j) * data.velocity(j));
        }
        m0.push_back(mu.prefix(i));
        q0.push_back(q.value());
        E0.push_back(e.value());
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double t : t_sequence) {
        require_positive_time(t);
        const Snapshot s(data, time_coefficients(data, t), tol);
        double em = 0.0, eq = 0.0, eE = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            em = std::max(em, std::fabs(s.m(grid[g]) - m0[g]));
            eq = std::max(eq, std::fabs(s.q(grid[g]) - q0[g]));
            eE = std::max(eE, std::fabs(s.E(grid[g]) - E0[g]));
        }
        ResidualLevel lv;
        lv.parameter = t;
        lv.residual = std::max({em, eq, eE});
        lv.parts = {em, eq, eE};
        lv.floor = 1e-14;
        lv.pass = lv.residual <= lv.floor || lv.residual <= 1.05 * prev;
        prev = lv.residual;
        rep.pass = rep.pass && lv.pass;
        rep.levels.push_back(lv);
    }
    if (!rep.levels.empty() && !(rep.levels.back().residual <= final_tolerance)) {
        rep.pass = false;
        std::ostringstream os;
        os.precision(3);
        os << "final residual " << rep.levels.back().residual << " above " << final_tolerance;
        rep.detail = os.str();
    }
    return rep;
}

namespace {

bool same_partition(const std::vector<FormulaCluster>& a, const std::vector<FormulaCluster>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || a[i].last != b[i].last) return false;
    return true;
}

}  // namespace

bool stencil_is_smooth(const InitialData& data, StencilPoint p, double h, const Tolerances& tol) {
    if (!(p.t - h > 0.0)) return false;
    const auto before = formula_clusters(data, p.t - h, tol);
    const auto now = formula_clusters(data, p.t, tol);
    const auto after = formula_clusters(data, p.t + h, tol);
    if (!same_partition(before, now) || !same_partition(now, after)) return false;
    for (const auto* cl : {&before, &now, &after})
        for (const FormulaCluster& c : *cl)
            if (std::fabs(c.position - p.x) < 2.0 * h) return false;
    return true;
}

std::vector<ResidualReport> check_potential_identities(const InitialData& data,
                                                       const std::vector<StencilPoint>& points,
                                                       const std::vector<double>& h_sequence,
                                                       double final_tolerance,
                                                       const Tolerances& tol) {
    const char* names[5] = {"nu_x+m", "nu_t-q", "theta_x+q", "theta_t-E-omega",
                            "omega_x-q/tau-m^2/2+Mm/2"};
    std::vector<ResidualReport> reps(5);
    for (int k = 0; k < 5; ++k) reps[k].name = names[k];
    const double M = data.total_mass();
    const double tau = data.tau();
    for (double h : h_sequence) {
        double res[5] = {0, 0, 0, 0, 0};
        double mag[5] = {0, 0, 0, 0, 0};
        for (const StencilPoint& p : points) {
            if (!stencil_is_smooth(data, p, h, tol))
                throw Error(ErrorCode::StencilTooCloseToShock, "stencil touches a cluster");
            const Snapshot now(data, time_coefficients(data, p.t), tol);
            const Snapshot before(data, time_coefficients(data, p.t - h), tol);
            const Snapshot after(data, time_coefficients(data, p.t + h), tol);
            const PotentialFields xl = now.fields(p.x - h), xr = now.fields(p.x + h);
            const PotentialFields tl = before.fields(p.x), tr = after.fields(p.x);
            const PotentialFields c = now.fields(p.x);
            const double m = now.m(p.x), q = now.q(p.x), E = now.E(p.x);
            const double vals[5] = {
                (xr.nu - xl.nu) / (2 * h) + m,
                (tr.nu - tl.nu) / (2 * h) - q,
                (xr.theta - xl.theta) / (2 * h) + q,
                (tr.theta - tl.theta) / (2 * h) - E - c.omega,
                (xr.omega - xl.omega) / (2 * h) - q / tau - 0.5 * m * m + 0.5 * M * m,
            };
            const double scales[5] = {
                std::max(std::fabs(xl.nu), std::fabs(xr.nu)),
                std::max(std::fabs(tl.nu), std::fabs(tr.nu)),
                std::max(std::fabs(xl.theta), std::fabs(xr.theta)),
                std::max(std::fabs(tl.theta), std::fabs(tr.theta)),
                std::max(std::fabs(xl.omega), std::fabs(xr.omega)),
            };
            for (int k = 0; k < 5; ++k) {
                res[k] = std::max(res[k], std::fabs(vals[k]));
                mag[k] = std::max(mag[k], scales[k]);
            }
        }
        for (int k = 0; k < 5; ++k) {
            ResidualLevel lv;
            lv.parameter = h;
            lv.residual = res[k];
            lv.floor = 1e-13 * (1.0 + mag[k]) / h;
            reps[k].levels.push_back(lv);
        }
    }
    for (ResidualReport& rep : reps) {
        bool ok = true;
        for (std::size_t j = 0; j < rep.levels.size(); ++j) {
            ResidualLevel& lv = rep.levels[j];
            lv.pass = std::isfinite(lv.residual);
            if (j > 0) {
                const ResidualLevel& prev = rep.levels[j - 1];
                const double ratio = lv.parameter / prev.parameter;
                if (lv.residual > lv.floor && prev.residual > prev.floor)
                    lv.pass = lv.pass && lv.residual <= 1.1 * prev.residual * ratio * ratio;
            }
            ok = ok && lv.pass;
        }
        if (!rep.levels.empty() && !(rep.levels.back().residual <= final_tolerance)) {
            ok = false;
            rep.detail = "final residual above tolerance";
        }
        rep.pass = ok;
    }
    return reps;
}

}  // namespace pep

namespace pep {

InitialData random_instance(std::mt19937_64& rng, const InstanceRanges& ranges) {
    std::uniform_int_distribution<std::size_t> count(1, ranges.max_atoms);
    std::uniform_real_distribution<double> pos(ranges.position_min, ranges.position_max);
    std::uniform_real_distribution<double> mass(ranges.mass_min, ranges.mass_max);
    std::uniform_real_distribution<double> vel(ranges.velocity_min, ranges.velocity_max);
    std::uniform_int_distribution<std::size_t> pick(0, ranges.taus.size() - 1);
    const std::size_t n = count(rng);
    std::vector<Atom> atoms(n);
    for (Atom& a : atoms) {
        a.position = pos(rng);
        a.mass = mass(rng);
        a.velocity = vel(rng);
    }
    const double tau = ranges.taus[pick(rng)];
    return InitialData::from_atoms(std::move(atoms), tau);
}

Trajectory simulate_to_collapse(const InitialData& data, const Tolerances& tol) {
    return simulate_ep(data, 1e9, tol);
}

namespace {

bool well_posed_time(const Trajectory& traj, double t) {
    for (const MergeEvent& ev : traj.events)
        if (std::fabs(ev.time - t) <= 1e-6 * (1.0 + t)) return false;
    const ClusterState st = traj.state_at(t);
    double span = 0.0;
    for (const Cluster& c : st.clusters) span = std::max(span, std::fabs(c.position));
    for (std::size_t i = 1; i < st.clusters.size(); ++i)
        if (st.clusters[i].position - st.clusters[i - 1].position < 1e-5 * (1.0 + span))
            return false;
    return true;
}

}  // namespace

std::vector<double> choose_sample_times(const Trajectory& traj, std::size_t count,
                                        std::mt19937_64& rng) {
    const double horizon =
        traj.events.empty() ? 10.0 * traj.tau : 1.2 * traj.events.back().time;
    std::uniform_real_distribution<double> jitter(0.1, 0.9);
    std::vector<double> times;
    for (std::size_t j = 0; j < count; ++j) {
        const double cell = horizon / static_cast<double>(count);
        double t = cell * (static_cast<double>(j) + jitter(rng));
        for (int attempt = 0; attempt < 40 && !well_posed_time(traj, t); ++attempt)
            t = cell * (static_cast<double>(j) + jitter(rng));
        times.push_back(t);
    }
    return times;
}

std::vector<CompareRow> compare_layers(const InitialData& data, const Trajectory& traj,
                                       const std::vector<double>& times, const Tolerances& tol) {
    std::vector<CompareRow> rows;
    for (double t : times) {
        const ClusterState st = traj.state_at(t);
        const Snapshot s(data, time_coefficients(data, t), tol);
        CompareRow row;
        row.t = t;
        std::vector<double> xs;
        const auto& cl = st.clusters;
        xs.push_back(cl.front().position - 1.0);
        for (std::size_t i = 1; i < cl.size(); ++i)
            xs.push_back(0.5 * (cl[i - 1].position + cl[i].position));
        xs.push_back(cl.back().position + 1.0);
        for (double x : xs)
            row.max_dm = std::max(row.max_dm, std::fabs(s.m(x) - oracle_cdf(st, x)));
        for (const Cluster& c : cl)
            row.max_du = std::max(row.max_du, std::fabs(s.u(c.position).u - c.velocity));
        row.points = xs.size();
        row.clusters = cl.size();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace pep
