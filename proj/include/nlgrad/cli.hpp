#pragma once

#include "nlgrad/config.hpp"
#include "nlgrad/grid.hpp"
#include "nlgrad/kernels.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nlgrad {

inline constexpr const char* version_string = "nlgrad 0.1.0";

struct RunConfig {
    KernelSpec kernel;
    Grid grid;
    std::string experiment;
    std::vector<double> delta_list;
    std::string regime = "vanishing";
    std::string test_function = "smooth_bump";
    double alpha = 0.5;
    std::string norm = "linf";
    double p = 2.0;
    int samples = 32;
    double xi_max = 1e3;
    std::vector<double> delta_bar;
    // energy block
    double energy_p = 2.0;
    std::string integrand = "power_norm";
    double g_amplitude = 1.0;
    double omega_lo = 0.3125, omega_hi = 0.6875; // fractions of the box length
    int max_iter = 500;
    // output block
    std::string output_dir = "out";
    std::vector<std::string> formats = {"json", "csv"};
    std::uint64_t seed = 42;
};

// Parse and semantically validate a run configuration (throws ConfigParse).
RunConfig parse_run_config(const ConfigFile& cfg);

// Dry-run validation; returns the report (derived quantities included) as a
// serialized JSON string.
std::string validate_config(const ConfigFile& cfg);

// Execute the configured experiment and write reports into the output
// directory. Throws Error on numerical failure.
void run_experiment(const RunConfig& rc, const ConfigFile& raw);

// One-line description of every shipped kernel family.
std::string list_kernels();

} // namespace nlgrad
