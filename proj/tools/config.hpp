#pragma once

#include "pep1d/pep1d.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pep::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double min = -3.0;
    double max = 3.0;
    std::size_t count = 101;

    std::vector<double> points() const;
};

struct DensitySpec {
    std::vector<double> breaks;
    std::vector<double> density;
    std::vector<double> velocity;
    std::size_t cells = 16;
};

struct RelaxSpec {
    double t = 1.0;
    std::vector<double> tau_sequence = default_tau_sequence();
};

struct CompareSpec {
    std::size_t random_instances = 0;
    std::size_t sample_times = 20;
    double tolerance = 1e-9;
};

struct ValidateSpec {
    int weak_form_levels = 5;
    int continuity_levels = 20;
};

struct RunConfig {
    int schema_version = 1;
    double tau = 1.0;
    std::vector<Atom> atoms;
    std::optional<DensitySpec> density;
    std::vector<double> times{1.0};
    GridSpec grid;
    double oracle_t_end = 0.0;
    RelaxSpec relax;
    CompareSpec compare;
    ValidateSpec validate;
    Tolerances tolerances;
    std::string output_dir = "out";
    std::uint64_t seed = 1;

    std::vector<std::string> warnings;

    /// Atoms from the explicit list and the discretized density, merged.
    InitialData initial_data();
};

inline constexpr int kSchemaVersion = 1;

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace pep::cli
