#include "quapi/spectral.hpp"

#include <cmath>

namespace quapi {

namespace {

constexpr double kHbarSI = 1.054571817e-34;        // J s
constexpr double kElementaryCharge = 1.602176634e-19;  // C
// eV^2/nm^2 -> J^2/m^2
constexpr double kEv2PerNm2ToSI =
    (kElementaryCharge * kElementaryCharge) / 1e-18;

}  // namespace

std::string to_string(BathFamily f) {
    switch (f) {
        case BathFamily::Piezoelectric: return "piezoelectric";
        case BathFamily::Deformation: return "deformation";
        case BathFamily::PowerLawGaussian: return "power_law_gaussian";
    }
    return "?";
}

BathFamily bath_family_from_string(const std::string& s) {
    if (s == "piezoelectric" || s == "pz") return BathFamily::Piezoelectric;
    if (s == "deformation" || s == "df") return BathFamily::Deformation;
    if (s == "power_law_gaussian" || s == "plg")
        return BathFamily::PowerLawGaussian;
    throw ParseError("unknown bath family '" + s + "'");
}

double SpectralDensityModel::p() const {
    switch (family) {
        case BathFamily::Piezoelectric: return 1.0;
        case BathFamily::Deformation: return 3.0;
        case BathFamily::PowerLawGaussian: return exponent;
    }
    return 1.0;
}

void SpectralDensityModel::validate() const {
    if (!(g >= 0.0))
        throw ValidationError("spectral density: g must be >= 0");
    if (!(omega_l > 0.0))
        throw ValidationError("spectral density: omega_l must be > 0");
    if (family != BathFamily::PowerLawGaussian && !(omega_d > 0.0))
        throw ValidationError("spectral density: omega_d must be > 0");
    if (family == BathFamily::PowerLawGaussian && !(exponent > 0.0))
        throw ValidationError("spectral density: exponent must be > 0");
}

std::string SpectralDensityModel::describe() const {
    std::string s = to_string(family) + " g=" + std::to_string(g) +
                    " omega_l=" + std::to_string(omega_l);
    if (family != BathFamily::PowerLawGaussian)
        s += " omega_d=" + std::to_string(omega_d);
    else
        s += " p=" + std::to_string(exponent);
    return s;
}

double one_minus_sinc(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-2) {
        const double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return 1.0 - std::sin(x) / x;
}

double spectral_density(const SpectralDensityModel& m, double omega) {
    if (omega < 0.0)
        throw ValidationError("spectral_density: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    double v = m.g * std::pow(omega, m.p()) *
               std::exp(-omega * omega / (2.0 * m.omega_l * m.omega_l));
    if (m.family != BathFamily::PowerLawGaussian)
        v *= one_minus_sinc(omega / m.omega_d);
    return v;
}

double spectral_density_over_w2(const SpectralDensityModel& m, double omega) {
    if (omega < 0.0)
        throw ValidationError("spectral_density_over_w2: omega must be >= 0");
    if (m.family == BathFamily::PowerLawGaussian && m.exponent < 2.0 && m.g > 0.0)
        throw ValidationError(
            "spectral_density_over_w2: power-law exponent < 2 is not "
            "integrable against 1/omega^2");
    if (omega == 0.0) return 0.0;
    double v = m.g * std::pow(omega, m.p() - 2.0) *
               std::exp(-omega * omega / (2.0 * m.omega_l * m.omega_l));
    if (m.family != BathFamily::PowerLawGaussian)
        v *= one_minus_sinc(omega / m.omega_d);
    return v;
}

void MaterialParams::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ValidationError(std::string("material: ") + name +
                                  " must be > 0");
    };
    pos(M, "M");
    pos(Xi, "Xi");
    pos(rho, "rho");
    pos(s, "s");
    pos(d, "d");
    pos(l, "l");
    if (!(x > 0.0 && x <= 1.0))
        throw ValidationError("material: x must lie in (0, 1]");
}

GeometryModels derive_geometry(const MaterialParams& mp) {
    mp.validate();
    const double pi2 = M_PI * M_PI;
    // s/d and s/l in ps^-1 with d,l in nm and s in m/s
    const double omega_d = mp.s / (1e3 * mp.d);
    const double omega_l = mp.s / (1e3 * mp.l);

    const double m_si = mp.M * kEv2PerNm2ToSI;
    const double g_pz = m_si / (pi2 * mp.rho * std::pow(mp.s, 3) * kHbarSI) *
                        (6.0 / 35.0 + 8.0 / (35.0 * mp.x));

    const double xi_si = mp.Xi * kElementaryCharge;
    const double g_df_s2 =
        xi_si * xi_si / (8.0 * pi2 * mp.rho * std::pow(mp.s, 5) * kHbarSI);
    const double g_df = g_df_s2 * 1e24;  // s^2 -> ps^2

    GeometryModels out;
    out.piezo = {BathFamily::Piezoelectric, g_pz, omega_d, omega_l, 1.0};
    out.deformation = {BathFamily::Deformation, g_df, omega_d, omega_l, 3.0};
    return out;
}

}  // namespace quapi
