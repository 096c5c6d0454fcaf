#include "config.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pep::cli {

using nlohmann::json;

std::vector<double> GridSpec::points() const {
    std::vector<double> xs(count);
    for (std::size_t j = 0; j < count; ++j)
        xs[j] = min + (max - min) * static_cast<double>(j) / static_cast<double>(count - 1);
    return xs;
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(what + " must be finite");
    return d;
}

std::vector<double> numbers(const json& v, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) out.push_back(number(e, what));
    return out;
}

std::size_t count_of(const json& v, const std::string& what) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(what + " must be a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(root,
                   {"schema_version", "tau", "atoms", "density", "times", "grid", "oracle_t_end",
                    "relax", "compare", "validate", "tolerances", "output_dir", "seed"},
                   "config");
    RunConfig cfg;
    if (!root.contains("schema_version")) throw ConfigError("schema_version is required");
    if (!root["schema_version"].is_number_integer() ||
        root["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("unsupported schema_version (expected 1)");
    if (root.contains("tau")) cfg.tau = number(root["tau"], "tau");
    if (!(cfg.tau > 0.0 && cfg.tau <= 1.0)) throw ConfigError("tau must lie in (0, 1]");

    if (root.contains("atoms")) {
        if (!root["atoms"].is_array()) throw ConfigError("atoms must be an array");
        for (const json& a : root["atoms"]) {
            reject_unknown(a, {"position", "mass", "velocity"}, "atom");
            if (!a.contains("position") || !a.contains("mass"))
                throw ConfigError("atom needs position and mass");
            Atom atom;
            atom.position = number(a["position"], "atom position");
            atom.mass = number(a["mass"], "atom mass");
            atom.velocity = a.contains("velocity") ? number(a["velocity"], "atom velocity") : 0.0;
            if (!(atom.mass > 0.0)) throw ConfigError("atom mass must be positive");
            cfg.atoms.push_back(atom);
        }
    }
    if (root.contains("density")) {
        const json& d = root["density"];
        reject_unknown(d, {"breaks", "density", "velocity", "cells"}, "density");
        DensitySpec spec;
        spec.breaks = numbers(d.value("breaks", json::array()), "density.breaks");
        spec.density = numbers(d.value("density", json::array()), "density.density");
        spec.velocity = d.contains("velocity")
                            ? numbers(d["velocity"], "density.velocity")
                            : std::vector<double>(spec.density.size(), 0.0);
        if (d.contains("cells")) spec.cells = count_of(d["cells"], "density.cells");
        if (spec.breaks.size() < 2 || spec.density.size() + 1 != spec.breaks.size() ||
            spec.velocity.size() != spec.density.size() || spec.cells == 0)
            throw ConfigError("density needs n+1 breaks, n densities, n velocities, cells >= 1");
        cfg.density = spec;
    }
    if (root.contains("times")) cfg.times = numbers(root["times"], "times");
    for (double t : cfg.times)
        if (t < 0.0) throw ConfigError("times must be nonnegative");
    if (root.contains("grid")) {
        const json& g = root["grid"];
        reject_unknown(g, {"min", "max", "count"}, "grid");
        if (g.contains("min")) cfg.grid.min = number(g["min"], "grid.min");
        if (g.contains("max")) cfg.grid.max = number(g["max"], "grid.max");
        if (g.contains("count")) cfg.grid.count = count_of(g["count"], "grid.count");
    }
    if (cfg.grid.count < 2) throw ConfigError("grid count must be at least 2");
    if (!(cfg.grid.max > cfg.grid.min)) throw ConfigError("grid max must exceed grid min");
    if (root.contains("oracle_t_end")) {
        cfg.oracle_t_end = number(root["oracle_t_end"], "oracle_t_end");
        if (!(cfg.oracle_t_end > 0.0)) throw ConfigError("oracle_t_end must be positive");
    }
    if (root.contains("relax")) {
        const json& r = root["relax"];
        reject_unknown(r, {"t", "tau_sequence"}, "relax");
        if (r.contains("t")) cfg.relax.t = number(r["t"], "relax.t");
        if (r.contains("tau_sequence"))
            cfg.relax.tau_sequence = numbers(r["tau_sequence"], "relax.tau_sequence");
        if (!(cfg.relax.t > 0.0)) throw ConfigError("relax.t must be positive");
        for (std::size_t j = 0; j < cfg.relax.tau_sequence.size(); ++j) {
            const double tau = cfg.relax.tau_sequence[j];
            if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("relax taus must lie in (0, 1]");
            if (j > 0 && !(tau < cfg.relax.tau_sequence[j - 1]))
                throw ConfigError("relax.tau_sequence must decrease");
        }
    }
    if (root.contains("compare")) {
        const json& c = root["compare"];
        reject_unknown(c, {"random_instances", "sample_times", "tolerance"}, "compare");
        if (c.contains("random_instances"))
            cfg.compare.random_instances = count_of(c["random_instances"], "compare.random_instances");
        if (c.contains("sample_times"))
            cfg.compare.sample_times = count_of(c["sample_times"], "compare.sample_times");
        if (c.contains("tolerance")) cfg.compare.tolerance = number(c["tolerance"], "compare.tolerance");
        if (!(cfg.compare.tolerance >= 0.0)) throw ConfigError("compare.tolerance must be nonnegative");
    }
    if (root.contains("validate")) {
        const json& v = root["validate"];
        reject_unknown(v, {"weak_form_levels", "continuity_levels"}, "validate");
        if (v.contains("weak_form_levels"))
            cfg.validate.weak_form_levels = static_cast<int>(count_of(v["weak_form_levels"], "validate.weak_form_levels"));
        if (v.contains("continuity_levels"))
            cfg.validate.continuity_levels = static_cast<int>(count_of(v["continuity_levels"], "validate.continuity_levels"));
        if (cfg.validate.weak_form_levels < 2 || cfg.validate.continuity_levels < 1)
            throw ConfigError("validate levels too small");
    }
    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        reject_unknown(t, {"tie", "pos", "event"}, "tolerances");
        if (t.contains("tie")) cfg.tolerances.tie = number(t["tie"], "tolerances.tie");
        if (t.contains("pos")) cfg.tolerances.pos = number(t["pos"], "tolerances.pos");
        if (t.contains("event")) cfg.tolerances.event = number(t["event"], "tolerances.event");
        try {
            check_tolerances(cfg.tolerances);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
    }
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) throw ConfigError("output_dir must be a string");
        cfg.output_dir = root["output_dir"].get<std::string>();
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

InitialData RunConfig::initial_data() {
    std::vector<Atom> all = atoms;
    if (density) {
        const auto extra =
            discretize_piecewise_constant(density->breaks, density->density, density->velocity, density->cells);
        all.insert(all.end(), extra.begin(), extra.end());
    }
    if (all.empty()) throw ConfigError("measure must be nonempty");
    try {
        return InitialData::from_atoms(std::move(all), tau, &warnings);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace pep::cli
