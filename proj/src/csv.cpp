#include "quapi/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace quapi {

std::string format_sci(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot open output file '" + path + "'");
    return out;
}

void write_echo(std::ofstream& out, const std::string& echo) {
    if (echo.empty()) return;
    std::istringstream is(echo);
    std::string line;
    while (std::getline(is, line)) out << "# " << line << "\n";
}

const char* class_label(int ci) {
    switch (ci) {
        case 0: return "II";
        case 1: return "TI";
        case 2: return "IT";
        case 3: return "TT";
    }
    return "?";
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::string& header_echo) {
    auto out = open_out(path);
    write_echo(out, header_echo);
    out << "t_ps,re_rho00,re_rho11,re_rho01,im_rho01,abs_rho01\n";
    for (const auto& pt : traj.states) {
        const auto& s = pt.state;
        out << format_sci(pt.t) << ',' << format_sci(s(0, 0).real()) << ','
            << format_sci(s(1, 1).real()) << ',' << format_sci(s(0, 1).real())
            << ',' << format_sci(s(0, 1).imag()) << ','
            << format_sci(std::abs(s(0, 1))) << "\n";
    }
}

void write_response_csv(const std::string& path,
                        const std::vector<ResponseSample>& samples,
                        const std::string& header_echo) {
    auto out = open_out(path);
    write_echo(out, header_echo);
    out << "t_ps,re_alpha,im_alpha\n";
    for (const auto& s : samples)
        out << format_sci(s.t) << ',' << format_sci(s.value.real()) << ','
            << format_sci(s.value.imag()) << "\n";
}

void write_eta_csv(const std::string& path, const EtaTable& table) {
    auto out = open_out(path);
    out << "dk,class,re_eta,im_eta\n";
    out << "0,diag_interior," << format_sci(table.diag_interior.real()) << ','
        << format_sci(table.diag_interior.imag()) << "\n";
    out << "0,diag_terminal," << format_sci(table.diag_terminal.real()) << ','
        << format_sci(table.diag_terminal.imag()) << "\n";
    for (int dk = 1; dk <= table.dkmax; ++dk)
        for (int ci = 0; ci < 4; ++ci) {
            const cplx v = table.offdiag[ci][dk - 1];
            out << dk << ',' << class_label(ci) << ','
                << format_sci(v.real()) << ',' << format_sci(v.imag()) << "\n";
        }
}

void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
    auto out = open_out(path);
    for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

void write_convergence_csv(const std::string& path,
                           const ConvergenceReport& report,
                           const std::string& header_echo) {
    auto out = open_out(path);
    write_echo(out, header_echo);
    out << "delta_t_ps,dkmax,tau2_ps,status,delta_vs_prev,converged\n";
    for (const auto& c : report.cells) {
        out << format_sci(c.delta_t) << ',' << c.dkmax << ',';
        out << (c.tau2 ? format_sci(*c.tau2) : std::string("")) << ',';
        out << c.status << ',';
        out << (c.delta_vs_prev ? format_sci(*c.delta_vs_prev)
                                : std::string(""))
            << ',';
        out << (c.converged ? "1" : "0") << "\n";
    }
}

}  // namespace quapi
