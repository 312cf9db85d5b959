#pragma once

#include <string>

#include "quapi/errors.hpp"

namespace quapi {

enum class BathFamily { Piezoelectric, Deformation, PowerLawGaussian };

std::string to_string(BathFamily f);
BathFamily bath_family_from_string(const std::string& s);

// Parametric spectral density, frequencies in ps^-1, J(omega) in ps^-1:
//
//   J(w) = g * w^p * (1 - (w_d/w) sin(w/w_d)) * exp(-w^2 / (2 w_l^2))
//
// with p = 1 (Piezoelectric) or p = 3 (Deformation). PowerLawGaussian is a
// testing family without the geometric factor: J = g * w^p * exp(-w^2/2w_l^2).
struct SpectralDensityModel {
    BathFamily family = BathFamily::Piezoelectric;
    double g = 0.0;         // ps^(p-1)
    double omega_d = 0.02;  // ps^-1, s/d
    double omega_l = 0.5;   // ps^-1, s/l
    double exponent = 2.0;  // PowerLawGaussian only

    double p() const;
    void validate() const;
    std::string describe() const;
};

// J(omega); omega < 0 is a domain error, J(0) = 0 by the analytic limit.
double spectral_density(const SpectralDensityModel& m, double omega);

// J(omega)/omega^2, evaluated without cancellation; finite as omega -> 0
// for the paper families (ValidationError for PowerLawGaussian with p < 2
// when used where the w->0 limit must stay integrable).
double spectral_density_over_w2(const SpectralDensityModel& m, double omega);

// 1 - sin(x)/x with a series branch below the cancellation threshold.
double one_minus_sinc(double x);

// Crystal/material constants. Units: M in eV^2/nm^2 (squared piezoelectric
// coupling, (e h14)^2), Xi in eV, rho in kg/m^3, s in m/s, d and l in nm.
struct MaterialParams {
    double M = 0.0;
    double Xi = 0.0;
    double rho = 0.0;
    double s = 0.0;
    double x = 0.0;  // transverse/longitudinal sound-velocity ratio
    double d = 0.0;
    double l = 0.0;

    void validate() const;
};

struct GeometryModels {
    SpectralDensityModel piezo;
    SpectralDensityModel deformation;
};

// omega_d = s/d, omega_l = s/l (ps^-1),
// g_pz = M/(pi^2 rho s^3 hbar) * (6/35 + 8/(35x)),
// g_df = Xi^2/(8 pi^2 rho s^5 hbar) in ps^2.
GeometryModels derive_geometry(const MaterialParams& mp);

}  // namespace quapi
