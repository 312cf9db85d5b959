#include "quapi/bath.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace quapi {

namespace {
constexpr double kBoltzmannOverHbar = 0.1309;  // ps^-1 per kelvin
}

double thermal_beta(double temperature_mK) {
    if (!(temperature_mK > 0.0))
        throw ValidationError("thermal_beta: temperature must be > 0");
    return 1.0 / (kBoltzmannOverHbar * temperature_mK * 1e-3);
}

double coth_half_beta(double beta, double omega) {
    const double x = 0.5 * beta * omega;
    const double ax = std::fabs(x);
    if (ax < 1e-4) return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    if (ax > 19.0) return x > 0 ? 1.0 : -1.0;
    return 1.0 / std::tanh(x);
}

BathSpec::BathSpec(SpectralDensityModel m, double beta_ps, QuadraturePolicy q)
    : model(m), beta(beta_ps), quadrature(q) {
    model.validate();
    if (!(beta > 0.0)) throw ValidationError("BathSpec: beta must be > 0");
    quadrature.omega_max = std::max(quadrature.omega_max, 8.0 * model.omega_l);
}

double BathSpec::spectral_phase_rate() const {
    return model.family == BathFamily::PowerLawGaussian ? 0.0
                                                        : 1.0 / model.omega_d;
}

std::string BathSpec::describe() const {
    return model.describe() + " beta=" + std::to_string(beta);
}

cplx response_function(const BathSpec& bath, double t, double abs_tol) {
    const double rate = std::fabs(t) + bath.spectral_phase_rate();
    const cplx val = integrate<cplx>(
        [&](double w) {
            const double j = spectral_density(bath.model, w);
            const double c = coth_half_beta(bath.beta, w);
            return cplx(j * c * std::cos(w * t), -j * std::sin(w * t));
        },
        0.0, bath.quadrature.omega_max, abs_tol, bath.quadrature.max_panels,
        rate);
    return val / M_PI;
}

cplx response_function(const BathSpec& bath, double t) {
    return response_function(bath, t, bath.quadrature.abs_tol);
}

double memory_time(const BathSpec& bath, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ValidationError("memory_time: fraction must lie in (0,1)");
    constexpr int kSamples = 512;
    const double t_max = 50.0 / bath.model.omega_l;
    std::vector<double> level(kSamples);
    double peak = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double t = t_max * i / (kSamples - 1);
        const cplx a = response_function(bath, t);
        level[i] = std::max(std::fabs(a.real()), std::fabs(a.imag()));
        peak = std::max(peak, level[i]);
    }
    if (peak == 0.0) return 0.0;
    const double threshold = fraction * peak;
    // last sample above threshold decides t*
    int idx = 0;
    for (int i = kSamples - 1; i >= 0; --i) {
        if (level[i] > threshold) {
            idx = std::min(i + 1, kSamples - 1);
            break;
        }
    }
    return t_max * idx / (kSamples - 1);
}

}  // namespace quapi
