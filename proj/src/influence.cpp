#include "quapi/influence.hpp"

#include <cmath>
#include <sstream>

namespace quapi {

namespace {

// (w*width - sin(w*width)) without cancellation
double wt_minus_sin(double x) {
    if (std::fabs(x) < 1e-2) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return x - std::sin(x);
}

double one_minus_cos(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s;
}

const char* class_name(PairClass c) {
    switch (c) {
        case PairClass::InteriorInterior: return "II";
        case PairClass::TerminalInterior: return "TI";
        case PairClass::InteriorTerminal: return "IT";
        case PairClass::TerminalTerminal: return "TT";
    }
    return "?";
}

}  // namespace

// eta for the ordered triangle of a single window of the given width:
// (1/pi) int dw J/w^2 [coth(bw/2)(1-cos w W) - i (w W - sin w W)]
cplx eta_diag_freq_route(const BathSpec& bath, double width) {
    const double rate = width + bath.spectral_phase_rate();
    const cplx v = integrate<cplx>(
        [&](double w) {
            const double jw2 = spectral_density_over_w2(bath.model, w);
            const double c = coth_half_beta(bath.beta, w);
            const double x = w * width;
            return cplx(jw2 * c * one_minus_cos(x), -jw2 * wt_minus_sin(x));
        },
        0.0, bath.quadrature.omega_max, bath.quadrature.abs_tol,
        bath.quadrature.max_panels, rate);
    return v / M_PI;
}

namespace {

// eta for two disjoint windows with half-widths h_late/h_early and center
// separation dc:
// (1/pi) int dw J/w^2 4 sin(w h1) sin(w h2) [coth cos(w dc) - i sin(w dc)]
cplx eta_off_freq(const BathSpec& bath, double h_late, double h_early,
                  double dc) {
    const double rate = h_late + h_early + dc + bath.spectral_phase_rate();
    const cplx v = integrate<cplx>(
        [&](double w) {
            const double jw2 = spectral_density_over_w2(bath.model, w);
            const double win =
                4.0 * std::sin(w * h_late) * std::sin(w * h_early);
            const double c = coth_half_beta(bath.beta, w);
            return jw2 * win * cplx(c * std::cos(w * dc), -std::sin(w * dc));
        },
        0.0, bath.quadrature.omega_max, bath.quadrature.abs_tol,
        bath.quadrature.max_panels, rate);
    return v / M_PI;
}

// window geometry for an off-diagonal pair: half-widths and center distance
void pair_windows(double dt, int dk, PairClass c, double& h_late,
                  double& h_early, double& dc) {
    switch (c) {
        case PairClass::InteriorInterior:
            h_late = h_early = 0.5 * dt;
            dc = dk * dt;
            break;
        case PairClass::TerminalInterior:
            h_late = 0.5 * dt;
            h_early = 0.25 * dt;
            dc = (dk - 0.25) * dt;
            break;
        case PairClass::InteriorTerminal:
            h_late = 0.25 * dt;
            h_early = 0.5 * dt;
            dc = (dk - 0.25) * dt;
            break;
        case PairClass::TerminalTerminal:
            h_late = h_early = 0.25 * dt;
            dc = (dk - 0.5) * dt;
            break;
    }
}

}  // namespace

const cplx& EtaTable::off(int dk, PairClass c) const {
    if (dk < 1 || dk > dkmax)
        throw ValidationError("EtaTable: dk out of range");
    return offdiag[static_cast<int>(c)][dk - 1];
}

cplx eta_offdiag_time_route(const BathSpec& bath, double delta_t, int dk,
                            PairClass c) {
    double h1, h2, dc;
    pair_windows(delta_t, dk, c, h1, h2, dc);
    // later window centered at dc, earlier centered at 0
    const double a1 = dc - h1, b1 = dc + h1;
    const double a2 = -h2, b2 = h2;
    const double tol_alpha = std::min(1e-13, bath.quadrature.abs_tol * 1e-2);
    const double tol_inner = 3e-12;
    const double tol_outer = 3e-11;
    return integrate<cplx>(
        [&](double t) {
            return integrate<cplx>(
                [&](double tp) {
                    return response_function(bath, t - tp, tol_alpha);
                },
                a2, b2, tol_inner, bath.quadrature.max_panels);
        },
        a1, b1, tol_outer, bath.quadrature.max_panels);
}

cplx eta_diag_time_route(const BathSpec& bath, double width) {
    const double tol_alpha = std::min(1e-13, bath.quadrature.abs_tol * 1e-2);
    return integrate<cplx>(
        [&](double t) {
            if (t <= 0.0) return cplx{};
            return integrate<cplx>(
                [&](double tp) {
                    return response_function(bath, t - tp, tol_alpha);
                },
                0.0, t, 3e-12, bath.quadrature.max_panels);
        },
        0.0, width, 3e-11, bath.quadrature.max_panels);
}

EtaTable build_eta_table(const BathSpec& bath, double delta_t, int n_steps,
                         int dkmax, EtaVerify verify) {
    if (!(delta_t > 0.0))
        throw ValidationError("build_eta_table: delta_t must be > 0");
    if (dkmax < 1 || dkmax > n_steps)
        throw ValidationError(
            "build_eta_table: dkmax must satisfy 1 <= dkmax <= n_steps");

    EtaTable tab;
    tab.delta_t = delta_t;
    tab.n_steps = n_steps;
    tab.dkmax = dkmax;
    tab.diag_interior = eta_diag_freq_route(bath, delta_t);
    tab.diag_terminal = eta_diag_freq_route(bath, 0.5 * delta_t);
    for (auto& v : tab.offdiag) v.resize(dkmax);
    for (int dk = 1; dk <= dkmax; ++dk) {
        for (int ci = 0; ci < 4; ++ci) {
            const auto c = static_cast<PairClass>(ci);
            double h1, h2, dc;
            pair_windows(delta_t, dk, c, h1, h2, dc);
            tab.offdiag[ci][dk - 1] = eta_off_freq(bath, h1, h2, dc);
        }
    }

    if (verify != EtaVerify::None) {
        constexpr double kRouteTol = 1e-8;
        auto check = [&](cplx a, cplx b, const std::string& what) {
            if (std::abs(a - b) > kRouteTol) {
                std::ostringstream os;
                os << "eta route disagreement at " << what << ": |a-b|="
                   << std::abs(a - b);
                throw ConsistencyError(os.str());
            }
        };
        check(eta_diag_time_route(bath, delta_t), tab.diag_interior,
              "diag interior");
        check(eta_diag_time_route(bath, 0.5 * delta_t), tab.diag_terminal,
              "diag terminal");
        const int upto = verify == EtaVerify::Full ? dkmax
                                                   : std::min(dkmax, 5);
        for (int dk = 1; dk <= upto; ++dk)
            for (int ci = 0; ci < 4; ++ci) {
                const auto c = static_cast<PairClass>(ci);
                check(eta_offdiag_time_route(bath, delta_t, dk, c),
                      tab.offdiag[ci][dk - 1],
                      std::string("dk=") + std::to_string(dk) + " class " +
                          class_name(c));
            }
    }
    return tab;
}

cplx influence_factor_I0(SpinPair p, const EtaTable& table, DiagClass c) {
    const cplx eta = table.diag(c);
    const double dp = p.s_plus - p.s_minus;
    return std::exp(-dp * (eta * static_cast<double>(p.s_plus) -
                           std::conj(eta) * static_cast<double>(p.s_minus)));
}

cplx influence_factor_Idk(SpinPair later, SpinPair earlier, int dk,
                          const EtaTable& table, PairClass c) {
    const cplx eta = table.off(dk, c);
    const double dp = later.s_plus - later.s_minus;
    return std::exp(
        -dp * (eta * static_cast<double>(earlier.s_plus) -
               std::conj(eta) * static_cast<double>(earlier.s_minus)));
}

}  // namespace quapi
