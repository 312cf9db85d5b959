#pragma once

#include <array>
#include <string>
#include <vector>

#include "quapi/density.hpp"
#include "quapi/influence.hpp"

namespace quapi {

// Two-level system H0 = hbar T_c sigma_x with a factorized initial state.
struct SystemSpec {
    double t_c = 0.0;  // ps^-1
    DensityMatrix2 initial_state;

    void validate() const;
};

// exp(-i T_c sigma_x dt) = cos(T_c dt) 1 - i sin(T_c dt) sigma_x, row-major.
std::array<cplx, 4> short_time_propagator(double t_c, double delta_t);

enum class Method { ITM, BruteForce, PureDephasing };
std::string to_string(Method m);

struct TrajectoryPoint {
    double t;  // ps
    DensityMatrix2 state;
};

struct Trajectory {
    double delta_t = 0.0;
    std::vector<TrajectoryPoint> states;
    Method method = Method::ITM;
    int dkmax = 0;
    std::string bath_desc;
};

struct EvolveOptions {
    int dkmax_cap = 12;  // dense path tensor holds 4^dkmax amplitudes
    int workers = 1;     // threads for the per-step tensor contraction
};

// Iterative tensor propagation with finite memory table.dkmax. Emits
// n_steps+1 states; each emission closes the open path slots with the
// terminal influence factors. Trace drift beyond 1e-6 raises IntegrityError;
// 4^dkmax beyond the capacity cap raises CapacityError before allocation.
Trajectory itm_evolve(const SystemSpec& sys, const EtaTable& table,
                      int n_steps, const EvolveOptions& opts = {});

// Literal sum over all forward/backward spin paths (full memory); the
// exactness oracle for itm_evolve with dkmax = n_steps. Capped at
// n_steps <= 10.
Trajectory brute_force_evolve(const SystemSpec& sys, const EtaTable& table,
                              int n_steps);

// Closed-form T_c = 0 oracle: populations constant,
// rho01(t) = rho01(0) exp(-Gamma(t) - i Phi(t)) with
// Gamma = 4 * int_0^t dt' int_0^t' dt'' Re alpha(t'-t'') and Phi the
// matching Im-part double integral.
Trajectory pure_dephasing_exact(const BathSpec& bath,
                                const DensityMatrix2& initial,
                                const std::vector<double>& times);

// Gamma(t) via the frequency form (4/pi) int J coth(bw/2) (1-cos wt)/w^2 dw.
double dephasing_exponent(const BathSpec& bath, double t);
// Same quantity by nested time quadrature of Re alpha (oracle route).
double dephasing_exponent_time_route(const BathSpec& bath, double t);

}  // namespace quapi
