#include "commands.hpp"
#include "report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

namespace pep::cli {

namespace {

template <class F>
auto guarded(const char* op, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw NumericFailure(std::string(op) + " failed (" + to_string(e.code()) + "): " + e.what());
    }
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

std::string flag(bool b) { return b ? "1" : "0"; }

double oracle_horizon(const RunConfig& cfg) {
    if (cfg.oracle_t_end > 0.0) return cfg.oracle_t_end;
    double t = 0.0;
    for (double v : cfg.times) t = std::max(t, v);
    return t > 0.0 ? t : 1.0;
}

}  // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.out) cfg.output_dir = *o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (o.tol_tie) cfg.tolerances.tie = *o.tol_tie;
    if (o.tol_pos) cfg.tolerances.pos = *o.tol_pos;
    if (o.tol_event) cfg.tolerances.event = *o.tol_event;
    if (o.tol_compare) cfg.compare.tolerance = *o.tol_compare;
    try {
        check_tolerances(cfg.tolerances);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.compare.tolerance >= 0.0)) throw ConfigError("compare tolerance must be nonnegative");
}

int cmd_solve(RunConfig& cfg) {
    const InitialData data = cfg.initial_data();
    const std::vector<double> xs = cfg.grid.points();
    for (double t : cfg.times) {
        CsvTable table;
        table.header = {"x", "m", "q", "u", "E", "branch"};
        guarded("solve_point", [&] {
            const Snapshot s(data, time_coefficients(data, t), cfg.tolerances);
            for (double x : xs) {
                const SolutionSample p = s.sample(x);
                table.rows.push_back({format_number(x), format_number(p.m), format_number(p.q),
                                      format_number(p.u), format_number(p.E), to_string(p.branch)});
            }
            return 0;
        });
        write_atomic(out_path(cfg, "solution_t" + time_label(t) + ".csv"), table.render());
    }
    return kOk;
}

int cmd_oracle(RunConfig& cfg) {
    const InitialData data = cfg.initial_data();
    const Trajectory traj =
        guarded("simulate_ep", [&] { return simulate_ep(data, oracle_horizon(cfg), cfg.tolerances); });
    CsvTable events;
    events.header = {"event", "time", "position", "first", "last", "merged_clusters"};
    for (std::size_t k = 0; k < traj.events.size(); ++k) {
        const MergeEvent& ev = traj.events[k];
        std::size_t first = ev.merged.front().first, last = ev.merged.front().second;
        for (const auto& [a, b] : ev.merged) {
            first = std::min(first, a);
            last = std::max(last, b);
        }
        events.rows.push_back({std::to_string(k), format_number(ev.time), format_number(ev.position),
                               std::to_string(first), std::to_string(last),
                               std::to_string(ev.merged.size())});
    }
    write_atomic(out_path(cfg, "oracle_events.csv"), events.render());
    for (double t : cfg.times) {
        const ClusterState st = traj.state_at(t);
        CsvTable table;
        table.header = {"cluster", "position", "mass", "velocity", "first", "last"};
        for (std::size_t k = 0; k < st.clusters.size(); ++k) {
            const Cluster& c = st.clusters[k];
            table.rows.push_back({std::to_string(k), format_number(c.position), format_number(c.mass),
                                  format_number(c.velocity), std::to_string(c.first),
                                  std::to_string(c.last)});
        }
        write_atomic(out_path(cfg, "oracle_t" + time_label(t) + ".csv"), table.render());
    }
    return kOk;
}

int cmd_compare(RunConfig& cfg) {
    std::vector<std::pair<InitialData, std::vector<double>>> cases;
    if (!cfg.atoms.empty() || cfg.density) {
        std::vector<double> times;
        for (double t : cfg.times)
            if (t > 0.0) times.push_back(t);
        cases.emplace_back(cfg.initial_data(), times);
    }
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t k = 0; k < cfg.compare.random_instances; ++k) {
        InitialData data = random_instance(rng);
        const Trajectory traj = guarded("simulate_ep", [&] { return simulate_to_collapse(data, cfg.tolerances); });
        cases.emplace_back(std::move(data), choose_sample_times(traj, cfg.compare.sample_times, rng));
    }
    if (cases.empty()) throw ConfigError("measure must be nonempty");
    CsvTable table;
    table.header = {"instance", "t", "max_dm", "max_du", "pass"};
    bool all = true;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& [data, times] = cases[k];
        if (times.empty()) continue;
        const double t_end = *std::max_element(times.begin(), times.end());
        const auto rows = guarded("compare_layers", [&] {
            const Trajectory traj = simulate_ep(data, t_end, cfg.tolerances);
            return compare_layers(data, traj, times, cfg.tolerances);
        });
        for (const CompareRow& r : rows) {
            const bool ok = r.max_dm <= cfg.compare.tolerance && r.max_du <= cfg.compare.tolerance;
            all = all && ok;
            table.rows.push_back({std::to_string(k), format_number(r.t), format_number(r.max_dm),
                                  format_number(r.max_du), flag(ok)});
        }
    }
    write_atomic(out_path(cfg, "compare.csv"), table.render());
    if (!all) {
        std::cerr << "compare: formula layer and oracle disagree beyond tolerance\n";
        return kMismatch;
    }
    return kOk;
}

int cmd_relax(RunConfig& cfg) {
    const InitialData data = cfg.initial_data();
    const RelaxationReport rep = guarded("convergence_study", [&] {
        return convergence_study(data, cfg.relax.t, cfg.grid.points(), cfg.relax.tau_sequence,
                                 cfg.tolerances);
    });
    CsvTable table;
    table.header = {"tau", "err_m", "err_u"};
    for (const RelaxationRow& r : rep.rows)
        table.rows.push_back({format_number(r.tau), format_number(r.err_m), format_number(r.err_u)});
    write_atomic(out_path(cfg, "relax_report.csv"), table.render());
    return kOk;
}

int cmd_validate(RunConfig& cfg) {
    const InitialData data = cfg.initial_data();
    std::vector<ResidualReport> reports;
    const double horizon = oracle_horizon(cfg);
    const std::vector<double> xs = cfg.grid.points();

    guarded("check_weak_form", [&] {
        const Trajectory traj = simulate_ep(data, horizon, cfg.tolerances);
        const ClusterState mid = traj.state_at(0.5 * horizon);
        const double lo = mid.clusters.front().position, hi = mid.clusters.back().position;
        std::vector<Bump> family{{0.5 * (lo + hi), 0.5 * (hi - lo) + 1.0, 0.5 * horizon, 0.45 * horizon, 1.0}};
        for (std::size_t k = 0; k < std::min<std::size_t>(3, mid.clusters.size()); ++k)
            family.push_back({mid.clusters[k].position, 0.5, 0.5 * horizon, 0.45 * horizon, 1.0});
        WeakFormOptions opt;
        opt.levels = cfg.validate.weak_form_levels;
        opt.base_cells = 4;
        opt.final_tolerance = 1e-6;
        for (ResidualReport& r : check_weak_form(data, family, {0.0, horizon}, opt, cfg.tolerances))
            reports.push_back(std::move(r));
        return 0;
    });

    std::vector<double> times;
    for (double t : cfg.times)
        if (t > 0.0) times.push_back(t);
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) pairs.emplace_back(xs[j], xs[j + 1]);
    pairs.emplace_back(xs.front(), xs.back());
    reports.push_back(guarded("check_oleinik", [&] {
        return check_oleinik(data, times, pairs, 1e-10, Layer::Formula, cfg.tolerances);
    }));

    std::vector<double> t_seq;
    for (int k = 1; k <= cfg.validate.continuity_levels; ++k) t_seq.push_back(std::ldexp(1.0, -k));
    reports.push_back(guarded("check_initial_continuity", [&] {
        return check_initial_continuity(data, xs, t_seq, 1e-6, cfg.tolerances);
    }));

    const std::vector<double> hs{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
    std::vector<StencilPoint> points;
    guarded("check_potential_identities", [&] {
        for (double t : times) {
            const auto cl = formula_clusters(data, t, cfg.tolerances);
            for (std::size_t k = 1; k < cl.size(); ++k) {
                const StencilPoint p{0.5 * (cl[k - 1].position + cl[k].position), t};
                if (stencil_is_smooth(data, p, 2.0 * hs.front(), cfg.tolerances)) points.push_back(p);
            }
        }
        if (!points.empty())
            for (ResidualReport& r : check_potential_identities(data, points, hs, 1e-6, cfg.tolerances))
                reports.push_back(std::move(r));
        return 0;
    });

    CsvTable table;
    table.header = {"check", "level", "parameter", "residual", "pass"};
    for (const ResidualReport& r : reports)
        for (std::size_t j = 0; j < r.levels.size(); ++j)
            table.rows.push_back({r.name, std::to_string(j), format_number(r.levels[j].parameter),
                                  format_number(r.levels[j].residual), flag(r.levels[j].pass && r.pass)});
    write_atomic(out_path(cfg, "validate_report.csv"), table.render());
    for (const ResidualReport& r : reports)
        std::cout << r.name << ": " << (r.pass ? "pass" : "FAIL")
                  << (r.detail.empty() ? "" : " (" + r.detail + ")") << '\n';
    return kOk;
}

int cmd_plot(RunConfig& cfg) {
    namespace fs = std::filesystem;
    std::vector<std::string> solutions;
    if (fs::is_directory(cfg.output_dir))
        for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("solution_t", 0) == 0 && entry.path().extension() == ".csv")
                solutions.push_back(name);
        }
    std::sort(solutions.begin(), solutions.end());
    const std::string relax = out_path(cfg, "relax_report.csv");
    const bool have_relax = fs::exists(relax);
    if (solutions.empty() && !have_relax)
        throw ConfigError("missing input: no solution_t*.csv or relax_report.csv in " + cfg.output_dir);

    const auto column = [](const CsvTable& t, const std::string& name) {
        const int c = t.column(name);
        if (c < 0) throw ConfigError("input lacks column " + name);
        std::vector<double> v;
        for (const auto& row : t.rows) v.push_back(std::stod(row.at(static_cast<std::size_t>(c))));
        return v;
    };
    for (const std::string& name : solutions) {
        const CsvTable t = read_csv(out_path(cfg, name));
        const std::vector<double> x = column(t, "x");
        const std::vector<Series> series{{"m", x, column(t, "m"), true}, {"u", x, column(t, "u"), true}};
        const std::string stem = name.substr(0, name.size() - 4);
        write_atomic(out_path(cfg, stem + ".svg"), render_svg(stem, series, false, false));
    }
    if (have_relax) {
        const CsvTable t = read_csv(relax);
        const std::vector<double> tau = column(t, "tau");
        const std::vector<Series> series{{"err_m", tau, column(t, "err_m"), false},
                                         {"err_u", tau, column(t, "err_u"), false}};
        write_atomic(out_path(cfg, "relax_report.svg"), render_svg("relaxation error", series, true, true));
    }
    return kOk;
}

int run_command(const std::string& command, RunConfig& cfg) {
    try {
        if (command == "solve") return cmd_solve(cfg);
        if (command == "oracle") return cmd_oracle(cfg);
        if (command == "compare") return cmd_compare(cfg);
        if (command == "relax") return cmd_relax(cfg);
        if (command == "validate") return cmd_validate(cfg);
        if (command == "plot") return cmd_plot(cfg);
        std::cerr << "unknown command " << command << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumericError;
    } catch (const Error& e) {
        std::cerr << "numeric error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kNumericError;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Semi-analytic solver for the 1D pressureless Euler-Poisson system with relaxation"};
    std::string command;
    std::string config_path;
    Overrides o;
    app.add_option("command", command, "solve | oracle | compare | relax | validate | plot")
        ->required()
        ->check(CLI::IsMember({"solve", "oracle", "compare", "relax", "validate", "plot"}));
    app.add_option("--config", config_path, "JSON run configuration")->required()->envname("PEP1D_CONFIG");
    app.add_option("--out", o.out, "output directory")->envname("PEP1D_OUT");
    app.add_option("--seed", o.seed, "random seed")->envname("PEP1D_SEED");
    app.add_option("--tol-tie", o.tol_tie, "prefix-sum tie tolerance")->envname("PEP1D_TOL_TIE");
    app.add_option("--tol-pos", o.tol_pos, "forward-position bisection tolerance")->envname("PEP1D_TOL_POS");
    app.add_option("--tol-event", o.tol_event, "simultaneous-merge window")->envname("PEP1D_TOL_EVENT");
    app.add_option("--tol-compare", o.tol_compare, "compare pass threshold")->envname("PEP1D_TOL_COMPARE");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        apply_overrides(cfg, o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    const int code = run_command(command, cfg);
    for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    return code;
}

}  // namespace pep::cli
