#pragma once

#include <string>
#include <vector>

#include "quapi/analysis.hpp"
#include "quapi/influence.hpp"
#include "quapi/propagator.hpp"

namespace quapi {

// Fixed scientific notation, 12 significant digits; -0 normalized to 0.
std::string format_sci(double v);

// Trajectory CSV: header row
//   t_ps,re_rho00,re_rho11,re_rho01,im_rho01,abs_rho01
// preceded by '#'-prefixed echo lines when header_echo is nonempty.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::string& header_echo = {});

// Response-kernel samples: t_ps,re_alpha,im_alpha.
struct ResponseSample {
    double t;
    cplx value;
};
void write_response_csv(const std::string& path,
                        const std::vector<ResponseSample>& samples,
                        const std::string& header_echo = {});

// EtaTable debug dump: dk,class,re_eta,im_eta (diagonals as dk = 0).
void write_eta_csv(const std::string& path, const EtaTable& table);

// Line-oriented key=value summary.
void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv);

void write_convergence_csv(const std::string& path,
                           const ConvergenceReport& report,
                           const std::string& header_echo = {});

}  // namespace quapi
