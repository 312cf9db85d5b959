#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quapi/analysis.hpp"
#include "quapi/bath.hpp"

namespace quapi {

struct BathSection {
    BathFamily family = BathFamily::Piezoelectric;
    double g = 0.0;
    double omega_d = 0.02;
    double omega_l = 0.5;
    double exponent = 2.0;  // power_law_gaussian only
    double temperature_mK = 30.0;
};

struct MaterialSection {
    MaterialParams params;
    BathFamily family = BathFamily::Piezoelectric;
    double temperature_mK = 30.0;
};

struct SystemSection {
    std::optional<double> t_c;        // ps^-1
    std::optional<double> t_c_ratio;  // t_c = ratio * omega_l
};

struct NumericsSection {
    double delta_t = 10.0;  // ps
    int n_steps = 50;
    int dkmax = 1;
    int dkmax_cap = 12;
    int workers = 1;
    std::optional<double> omega_max;
    std::optional<double> abs_tol;
    std::optional<int> max_panels;
};

struct OutputsSection {
    std::string trajectory = "trajectory.csv";
    std::string summary = "summary.txt";
    bool bloch = true;
    std::optional<std::string> eta_table;  // optional debug CSV
    bool verify_eta = false;
};

struct RunConfig {
    std::optional<BathSection> bath;
    std::optional<MaterialSection> material;
    SystemSection system;
    NumericsSection numerics;
    OutputsSection outputs;

    void validate() const;
    SpectralDensityModel resolve_model() const;
    double temperature_mK() const;
    BathSpec make_bath() const;
    double resolve_t_c() const;
    // Re-parseable echo of every effective value; prefixed per line when
    // embedded in CSV headers.
    std::string serialize() const;
};

struct SweepAxis {
    std::string field;  // e.g. bath.omega_l, system.t_c, numerics.dkmax
    std::vector<double> values;
};

struct SweepConfig {
    RunConfig base;
    std::vector<SweepAxis> axes;
    std::size_t cell_cap = 10000;

    std::size_t cell_count() const;
    // cartesian cell -> axis values (row-major over the axis lists)
    std::vector<double> cell_values(std::size_t index) const;
    RunConfig cell_config(std::size_t index) const;
};

struct FiguresConfig {
    double g_pz = 0.035;
    double g_df = 0.029;
    double omega_d = 0.02;
    double omega_l_a = 0.5;
    double omega_l_b = 0.7;
    double temperature_mK = 30.0;
    double t_c_ratio = 0.1;
    double delta_t_pz = 10.0;
    double delta_t_df = 20.0;
    int n_steps = 50;
    int dkmax = 1;
    double response_window = 10.0;  // fig1/fig2 plot |t| <= window
    int response_samples = 201;
    NumericsSection numerics;  // quadrature overrides + workers

    void validate() const;
};

RunConfig parse_run_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& path);
FiguresConfig parse_figures_config(const std::string& path);

// List of sweepable scalar fields (axis names accepted in [sweep]).
const std::vector<std::string>& sweepable_fields();

}  // namespace quapi
