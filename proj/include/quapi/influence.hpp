#pragma once

#include <array>
#include <complex>
#include <vector>

#include "quapi/bath.hpp"

namespace quapi {

// Eigenvalues of sigma_z on the forward/backward paths.
struct SpinPair {
    int s_plus;   // +1 or -1
    int s_minus;  // +1 or -1
};

// Pair index p in 0..3 <-> (s+, s-): 0:(+,+) 1:(+,-) 2:(-,+) 3:(-,-).
// Row/column of the density matrix: n = 0 for s = +1, n = 1 for s = -1.
inline SpinPair spin_pair_from_index(int p) {
    return SpinPair{(p & 2) ? -1 : +1, (p & 1) ? -1 : +1};
}

// Endpoint class of an off-diagonal pair (k', k), k = k' + dk. The path
// start (k' = 0) and end (k = N) carry half-width windows [0, dt/2] and
// [t_N - dt/2, t_N]; interior points carry [t_k - dt/2, t_k + dt/2].
enum class PairClass {
    InteriorInterior = 0,
    TerminalInterior = 1,  // earlier point is the path start
    InteriorTerminal = 2,  // later point is the path end
    TerminalTerminal = 3,
};

enum class DiagClass { Interior, Terminal };

enum class EtaVerify { None, UpToDk5, Full };

// Influence coefficients eta_{kk'} as window double-integrals of alpha.
// Interior entries depend only on dk = k - k' (translation invariance);
// terminal corrections are stored per endpoint class.
struct EtaTable {
    double delta_t = 0.0;
    int n_steps = 0;
    int dkmax = 0;
    cplx diag_interior{};
    cplx diag_terminal{};
    std::array<std::vector<cplx>, 4> offdiag;  // [class][dk-1]

    const cplx& off(int dk, PairClass c) const;
    cplx diag(DiagClass c) const {
        return c == DiagClass::Interior ? diag_interior : diag_terminal;
    }
};

// Frequency-route table build (analytically pre-integrated window factors).
// verify enables the nested-time-quadrature cross-check; route disagreement
// beyond 1e-8 raises ConsistencyError.
EtaTable build_eta_table(const BathSpec& bath, double delta_t, int n_steps,
                         int dkmax, EtaVerify verify = EtaVerify::None);

// Route (a): nested adaptive time quadrature of alpha over the two windows.
cplx eta_offdiag_time_route(const BathSpec& bath, double delta_t, int dk,
                            PairClass c);
// Ordered-triangle double integral over one window of the given width.
cplx eta_diag_time_route(const BathSpec& bath, double width);
// Route (b) form of the same diagonal entry (single frequency integral);
// also the pure-dephasing exponent via Gamma(t) = 4 Re eta_diag(width=t).
cplx eta_diag_freq_route(const BathSpec& bath, double width);

// I0(s^pm) = exp{-(s+ - s-)(eta s+ - eta* s-)} with the class diagonal eta.
cplx influence_factor_I0(SpinPair p, const EtaTable& table, DiagClass c);

// I_dk(s_i^pm, s_{i+dk}^pm) = exp{-(s_{i+dk}+ - s_{i+dk}-) (eta s_i+ - eta* s_i-)}.
cplx influence_factor_Idk(SpinPair later, SpinPair earlier, int dk,
                          const EtaTable& table, PairClass c);

}  // namespace quapi
