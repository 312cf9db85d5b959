#pragma once

#include <complex>

#include "quapi/quadrature.hpp"
#include "quapi/spectral.hpp"

namespace quapi {

using cplx = std::complex<double>;

// beta = hbar/(k_B T) in ps; input in millikelvin.
double thermal_beta(double temperature_mK);

// coth(beta*omega/2) with the Laurent branch 2/(beta w) + beta w/6 near 0.
double coth_half_beta(double beta, double omega);

// Immutable bath description; shareable across threads.
struct BathSpec {
    SpectralDensityModel model;
    double beta;  // ps
    QuadraturePolicy quadrature;

    BathSpec(SpectralDensityModel m, double beta_ps, QuadraturePolicy q = {});

    // oscillation rate of J(omega) in omega (the sin(w/w_d) factor)
    double spectral_phase_rate() const;
    std::string describe() const;
};

// Bath response kernel, ps^-2:
//   alpha(t) = (1/pi) int_0^wmax dw J(w) [coth(beta w/2) cos(wt) - i sin(wt)]
// Satisfies alpha(-t) = conj(alpha(t)).
cplx response_function(const BathSpec& bath, double t);

// As above at a custom absolute tolerance (kernel integrals only).
cplx response_function(const BathSpec& bath, double t, double abs_tol);

// Smallest grid time t* such that max(|Re alpha|, |Im alpha|) stays below
// fraction * its global peak for all sampled t >= t*. Grid: 512 uniform
// points over [0, 50/omega_l].
double memory_time(const BathSpec& bath, double fraction = 0.01);

}  // namespace quapi
