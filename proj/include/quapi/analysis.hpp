#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "quapi/propagator.hpp"

namespace quapi {

struct DecoherenceResult {
    double tau2;         // ps
    int crossing_index;  // first trajectory step at/below threshold
    bool interpolated;
    double threshold;
    Method method;
};

// First time |rho01(t)| <= threshold * |rho01(0)|, linearly interpolated
// between the bracketing steps. NotCrossedError carries the final ratio.
DecoherenceResult decoherence_time(const Trajectory& traj,
                                   double threshold = std::exp(-1.0));

struct BlochTimes {
    double tau1;    // ps; tau1 = tau2 in this model
    double tau2;    // ps; +inf when J(omega0) = 0
    double omega0;  // 2 t_c, ps^-1
    bool infinite;
};

// tau2 = 2 / (J(2 t_c) coth(beta t_c)).
BlochTimes bloch_times(const BathSpec& bath, double t_c);

// Independent quadrature of the same rate through the time-domain kernel:
// 1/tau2 = int_0^tmax Re alpha(t) cos(omega0 t) dt.
double bloch_rate_time_route(const BathSpec& bath, double t_c, double t_max);

struct QualityFactor {
    double q;
    double omega_prime;  // omega0 + delta_omega, ps^-1
    double delta_omega;  // bath-induced shift, ps^-1
    double tau2;         // ps
};

enum class QfMode { FromTau2, FromQ };

// FromTau2: value is tau2, returns Q = tau2 * omega' / pi.
// FromQ: value is Q, returns tau2 = Q * pi / omega'.
QualityFactor quality_factor(double value, double omega0, double delta_omega,
                             QfMode mode = QfMode::FromTau2);

struct ConvergenceCell {
    double delta_t;
    int dkmax;
    std::optional<double> tau2;
    std::string status;  // ok | not-crossed | error text
    // max_t | |rho01|(dkmax) - |rho01|(previous dkmax) | at equal delta_t
    std::optional<double> delta_vs_prev;
    bool converged = false;
};

struct ConvergenceReport {
    std::vector<ConvergenceCell> cells;
};

// Grid of decoherence times over (delta_t, dkmax); cells fail soft (status),
// the grid never aborts. A cell is flagged converged when its deviation from
// the previous dkmax at the same delta_t drops below 1e-3.
ConvergenceReport convergence_report(const SystemSpec& sys,
                                     const BathSpec& bath,
                                     const std::vector<double>& delta_ts,
                                     const std::vector<int>& dkmaxes,
                                     int n_steps,
                                     const EvolveOptions& opts = {});

}  // namespace quapi
