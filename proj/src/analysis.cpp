#include "quapi/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace quapi {

DecoherenceResult decoherence_time(const Trajectory& traj, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ValidationError("decoherence_time: threshold must lie in (0,1)");
    if (traj.states.size() < 2)
        throw ValidationError("decoherence_time: trajectory too short");
    const double r0 = std::abs(traj.states.front().state(0, 1));
    if (!(r0 > 0.0))
        throw ValidationError(
            "decoherence_time: initial coherence |rho01(0)| must be > 0");
    const double target = threshold * r0;
    double prev = r0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const double cur = std::abs(traj.states[k].state(0, 1));
        if (cur <= target) {
            const double t_prev = traj.states[k - 1].t;
            const double t_cur = traj.states[k].t;
            double frac = 1.0;
            if (prev > cur) frac = (prev - target) / (prev - cur);
            return DecoherenceResult{t_prev + frac * (t_cur - t_prev),
                                     static_cast<int>(k), true, threshold,
                                     traj.method};
        }
        prev = cur;
    }
    const double final_ratio = std::abs(traj.states.back().state(0, 1)) / r0;
    std::ostringstream os;
    os << "decoherence_time: no crossing within trajectory (final ratio "
       << final_ratio << ")";
    throw NotCrossedError(os.str(), final_ratio);
}

BlochTimes bloch_times(const BathSpec& bath, double t_c) {
    if (!(t_c > 0.0)) throw ValidationError("bloch_times: t_c must be > 0");
    const double omega0 = 2.0 * t_c;
    const double j0 = spectral_density(bath.model, omega0);
    BlochTimes bt;
    bt.omega0 = omega0;
    if (j0 == 0.0) {
        bt.infinite = true;
        bt.tau1 = bt.tau2 = std::numeric_limits<double>::infinity();
        return bt;
    }
    bt.infinite = false;
    bt.tau2 = 2.0 / (j0 * coth_half_beta(bath.beta, omega0));
    bt.tau1 = bt.tau2;
    return bt;
}

double bloch_rate_time_route(const BathSpec& bath, double t_c, double t_max) {
    const double omega0 = 2.0 * t_c;
    const double alpha_tol = std::min(1e-13, bath.quadrature.abs_tol * 1e-2);
    // alpha(t) carries spectral content up to a few omega_l
    const double rate = omega0 + 2.0 * bath.model.omega_l;
    return integrate<double>(
        [&](double t) {
            return response_function(bath, t, alpha_tol).real() *
                   std::cos(omega0 * t);
        },
        0.0, t_max, 1e-10, bath.quadrature.max_panels, rate);
}

QualityFactor quality_factor(double value, double omega0, double delta_omega,
                             QfMode mode) {
    if (!(value > 0.0) || !(omega0 > 0.0) || !(delta_omega >= 0.0))
        throw ValidationError("quality_factor: inputs must be positive");
    QualityFactor qf;
    qf.delta_omega = delta_omega;
    qf.omega_prime = omega0 + delta_omega;
    if (mode == QfMode::FromTau2) {
        qf.tau2 = value;
        qf.q = value * qf.omega_prime / M_PI;
    } else {
        qf.q = value;
        qf.tau2 = value * M_PI / qf.omega_prime;
    }
    return qf;
}

ConvergenceReport convergence_report(const SystemSpec& sys,
                                     const BathSpec& bath,
                                     const std::vector<double>& delta_ts,
                                     const std::vector<int>& dkmaxes,
                                     int n_steps, const EvolveOptions& opts) {
    if (delta_ts.empty() || dkmaxes.empty())
        throw ValidationError("convergence_report: empty parameter lists");
    ConvergenceReport rep;
    for (double dt : delta_ts) {
        std::vector<double> prev_abs;
        bool have_prev = false;
        for (int dk : dkmaxes) {
            ConvergenceCell cell;
            cell.delta_t = dt;
            cell.dkmax = dk;
            try {
                const auto table = build_eta_table(bath, dt, n_steps, dk);
                const auto traj = itm_evolve(sys, table, n_steps, opts);
                std::vector<double> abs01(traj.states.size());
                for (std::size_t i = 0; i < traj.states.size(); ++i)
                    abs01[i] = std::abs(traj.states[i].state(0, 1));
                if (have_prev) {
                    double dev = 0.0;
                    for (std::size_t i = 0; i < abs01.size(); ++i)
                        dev = std::max(dev, std::fabs(abs01[i] - prev_abs[i]));
                    cell.delta_vs_prev = dev;
                    cell.converged = dev < 1e-3;
                }
                prev_abs = abs01;
                have_prev = true;
                const auto res = decoherence_time(traj);
                cell.tau2 = res.tau2;
                cell.status = "ok";
            } catch (const NotCrossedError&) {
                cell.status = "not-crossed";
            } catch (const Error& e) {
                cell.status = e.what();
            }
            rep.cells.push_back(std::move(cell));
        }
    }
    return rep;
}

}  // namespace quapi
