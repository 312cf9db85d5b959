#include "quapi/propagator.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <thread>
#include <vector>

namespace quapi {

namespace {

// factor tables used by the per-step contraction; pair index p encodes
// (s+, s-) as bits (p>>1, p&1), matching DensityMatrix2.m[p]
struct StepTables {
    std::array<cplx, 16> K;          // [from*4 + to]
    std::array<cplx, 4> i0_int;      // interior diagonal
    std::array<cplx, 4> i0_term;     // terminal diagonal
    // [class][dk-1][later*4 + earlier]
    std::array<std::vector<std::array<cplx, 16>>, 4> idk;

    const std::array<cplx, 16>& pair_table(int dk, PairClass c) const {
        return idk[static_cast<int>(c)][dk - 1];
    }
};

StepTables make_step_tables(double t_c, const EtaTable& table) {
    StepTables st;
    const auto u = short_time_propagator(t_c, table.delta_t);
    for (int from = 0; from < 4; ++from)
        for (int to = 0; to < 4; ++to) {
            const cplx fwd = u[(to >> 1) * 2 + (from >> 1)];
            const cplx bwd = std::conj(u[(to & 1) * 2 + (from & 1)]);
            st.K[from * 4 + to] = fwd * bwd;
        }
    for (int p = 0; p < 4; ++p) {
        const auto sp = spin_pair_from_index(p);
        st.i0_int[p] = influence_factor_I0(sp, table, DiagClass::Interior);
        st.i0_term[p] = influence_factor_I0(sp, table, DiagClass::Terminal);
    }
    for (int ci = 0; ci < 4; ++ci) {
        st.idk[ci].resize(table.dkmax);
        for (int dk = 1; dk <= table.dkmax; ++dk)
            for (int later = 0; later < 4; ++later)
                for (int earlier = 0; earlier < 4; ++earlier)
                    st.idk[ci][dk - 1][later * 4 + earlier] =
                        influence_factor_Idk(spin_pair_from_index(later),
                                             spin_pair_from_index(earlier), dk,
                                             table,
                                             static_cast<PairClass>(ci));
    }
    return st;
}

using key_t = std::uint64_t;

inline int digit(key_t key, int i) { return static_cast<int>((key >> (2 * i)) & 3); }

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, std::size_t, int)>& body) {
    if (workers <= 1 || n < (1u << 16)) {
        body(0, n, 0);
        return;
    }
    const int w = std::min<int>(workers, 64);
    std::vector<std::thread> threads;
    threads.reserve(w);
    const std::size_t chunk = (n + w - 1) / w;
    for (int i = 0; i < w; ++i) {
        const std::size_t lo = std::min(n, i * chunk);
        const std::size_t hi = std::min(n, (i + 1) * chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi, i] { body(lo, hi, i); });
    }
    for (auto& t : threads) t.join();
}

// Reduced density matrix at step k: close the open slots with the terminal
// influence factors. A holds r slots (times k-r .. k-1), newest in the low
// digit.
DensityMatrix2 closure(const std::vector<cplx>& A, int r, int k,
                       const EtaTable& table, const StepTables& st,
                       int workers) {
    const int reach = std::min(table.dkmax, k);
    std::array<std::array<cplx, 4>, 64> partial{};
    parallel_for(
        A.size(), workers, [&](std::size_t lo, std::size_t hi, int tid) {
            std::array<cplx, 4> acc{};
            for (key_t key = lo; key < hi; ++key) {
                const cplx a = A[key];
                if (a == cplx{}) continue;
                const int prev = static_cast<int>(key & 3);
                for (int d = 0; d < 4; ++d) {
                    cplx f = st.K[prev * 4 + d] * st.i0_term[d];
                    for (int dk = 1; dk <= reach; ++dk) {
                        const auto c = (k - dk == 0)
                                           ? PairClass::TerminalTerminal
                                           : PairClass::InteriorTerminal;
                        f *= st.pair_table(dk, c)[d * 4 + digit(key, dk - 1)];
                    }
                    acc[d] += a * f;
                }
            }
            partial[tid] = acc;
        });
    DensityMatrix2 rho;
    for (int tid = 0; tid < 64; ++tid)
        for (int d = 0; d < 4; ++d) rho.m[d] += partial[tid][d];
    return rho;
}

// append slot k to a tensor of r < dkmax slots (interior factors)
std::vector<cplx> append_step(const std::vector<cplx>& A, int r, int k,
                              const EtaTable& table, const StepTables& st,
                              int workers) {
    const int reach = std::min(table.dkmax, k);
    std::vector<cplx> B(A.size() * 4);
    parallel_for(A.size(), workers, [&](std::size_t lo, std::size_t hi, int) {
        for (key_t key = lo; key < hi; ++key) {
            const cplx a = A[key];
            const int prev = static_cast<int>(key & 3);
            for (int d = 0; d < 4; ++d) {
                cplx f = st.K[prev * 4 + d] * st.i0_int[d];
                for (int dk = 1; dk <= reach; ++dk) {
                    const auto c = (k - dk == 0) ? PairClass::TerminalInterior
                                                 : PairClass::InteriorInterior;
                    f *= st.pair_table(dk, c)[d * 4 + digit(key, dk - 1)];
                }
                B[(key << 2) | d] = a * f;
            }
        }
    });
    return B;
}

// steady step: append slot k and contract away the oldest slot (k - dkmax)
void fused_step(const std::vector<cplx>& A, std::vector<cplx>& B, int k,
                const EtaTable& table, const StepTables& st, int workers) {
    const int M = table.dkmax;
    const int shift = 2 * (M - 1);
    const auto oldest_class =
        (k - M == 0) ? PairClass::TerminalInterior : PairClass::InteriorInterior;
    const auto& drop_tab = st.pair_table(M, oldest_class);
    if (M == 1) {
        // the dropped slot is also the K-transition source
        for (int d = 0; d < 4; ++d) {
            cplx s{};
            for (int d_old = 0; d_old < 4; ++d_old)
                s += st.K[d_old * 4 + d] * drop_tab[d * 4 + d_old] * A[d_old];
            B[d] = st.i0_int[d] * s;
        }
        return;
    }
    parallel_for(B.size(), workers, [&](std::size_t lo, std::size_t hi, int) {
        for (key_t out = lo; out < hi; ++out) {
            const int d = static_cast<int>(out & 3);
            const key_t rest = out >> 2;
            cplx f = st.K[(rest & 3) * 4 + d] * st.i0_int[d];
            for (int dk = 1; dk <= M - 1; ++dk)
                f *= st.pair_table(dk, PairClass::InteriorInterior)
                         [d * 4 + digit(rest, dk - 1)];
            cplx s{};
            for (int d_old = 0; d_old < 4; ++d_old)
                s += drop_tab[d * 4 + d_old] *
                     A[(static_cast<key_t>(d_old) << shift) | rest];
            B[out] = f * s;
        }
    });
}

}  // namespace

void SystemSpec::validate() const {
    if (!(t_c >= 0.0)) throw ValidationError("SystemSpec: t_c must be >= 0");
    initial_state.validate("SystemSpec initial state");
}

std::array<cplx, 4> short_time_propagator(double t_c, double delta_t) {
    if (!(delta_t > 0.0))
        throw ValidationError("short_time_propagator: delta_t must be > 0");
    const double th = t_c * delta_t;
    const cplx c(std::cos(th), 0.0), s(0.0, -std::sin(th));
    return {c, s, s, c};
}

std::string to_string(Method m) {
    switch (m) {
        case Method::ITM: return "itm";
        case Method::BruteForce: return "brute_force";
        case Method::PureDephasing: return "pure_dephasing";
    }
    return "?";
}

Trajectory itm_evolve(const SystemSpec& sys, const EtaTable& table,
                      int n_steps, const EvolveOptions& opts) {
    sys.validate();
    if (n_steps < 0) throw ValidationError("itm_evolve: n_steps must be >= 0");
    if (n_steps > 0 && table.dkmax > n_steps)
        throw ValidationError("itm_evolve: table dkmax exceeds n_steps");
    if (table.dkmax > opts.dkmax_cap) {
        std::ostringstream os;
        os << "itm_evolve: dkmax " << table.dkmax << " implies 4^" << table.dkmax
           << " tensor entries, beyond the configured cap " << opts.dkmax_cap;
        throw CapacityError(os.str());
    }

    Trajectory traj;
    traj.delta_t = table.delta_t;
    traj.method = Method::ITM;
    traj.dkmax = table.dkmax;
    traj.states.push_back({0.0, sys.initial_state});
    if (n_steps == 0) return traj;

    const StepTables st = make_step_tables(sys.t_c, table);
    const int M = table.dkmax;

    std::vector<cplx> A(4);
    for (int p = 0; p < 4; ++p) A[p] = sys.initial_state.m[p] * st.i0_term[p];
    int r = 1;

    std::vector<cplx> B;
    for (int k = 1; k <= n_steps; ++k) {
        DensityMatrix2 rho = closure(A, r, k, table, st, opts.workers);
        {
            std::ostringstream os;
            os << "itm_evolve: step " << k;
            rho.validate(os.str().c_str(), 1e-6, 1e-9, -1e-6);
        }
        traj.states.push_back({k * table.delta_t, rho});
        if (k == n_steps) break;
        if (r < M) {
            A = append_step(A, r, k, table, st, opts.workers);
            ++r;
        } else {
            B.resize(A.size());
            fused_step(A, B, k, table, st, opts.workers);
            A.swap(B);
        }
    }
    return traj;
}

Trajectory brute_force_evolve(const SystemSpec& sys, const EtaTable& table,
                              int n_steps) {
    sys.validate();
    constexpr int kCap = 10;
    if (n_steps > kCap) {
        std::ostringstream os;
        os << "brute_force_evolve: n_steps " << n_steps
           << " would enumerate 4^" << (n_steps + 1) << " paths (cap " << kCap
           << ")";
        throw CapacityError(os.str());
    }
    if (n_steps < 0)
        throw ValidationError("brute_force_evolve: n_steps must be >= 0");

    Trajectory traj;
    traj.delta_t = table.delta_t;
    traj.method = Method::BruteForce;
    traj.dkmax = table.dkmax;
    traj.states.push_back({0.0, sys.initial_state});

    const StepTables st = make_step_tables(sys.t_c, table);
    for (int n = 1; n <= n_steps; ++n) {
        DensityMatrix2 rho;
        const key_t total = key_t(1) << (2 * (n + 1));
        for (key_t path = 0; path < total; ++path) {
            cplx amp = sys.initial_state.m[digit(path, 0)];
            for (int j = 0; j < n; ++j)
                amp *= st.K[digit(path, j) * 4 + digit(path, j + 1)];
            for (int j = 0; j <= n; ++j)
                amp *= (j == 0 || j == n) ? st.i0_term[digit(path, j)]
                                          : st.i0_int[digit(path, j)];
            for (int j = 1; j <= n; ++j) {
                const int reach = std::min(table.dkmax, j);
                for (int dk = 1; dk <= reach; ++dk) {
                    const int i = j - dk;
                    PairClass c = PairClass::InteriorInterior;
                    if (i == 0 && j == n) c = PairClass::TerminalTerminal;
                    else if (i == 0) c = PairClass::TerminalInterior;
                    else if (j == n) c = PairClass::InteriorTerminal;
                    amp *= st.pair_table(dk, c)[digit(path, j) * 4 +
                                                digit(path, i)];
                }
            }
            rho.m[digit(path, n)] += amp;
        }
        traj.states.push_back({n * table.delta_t, rho});
    }
    return traj;
}

double dephasing_exponent(const BathSpec& bath, double t) {
    return 4.0 * eta_diag_freq_route(bath, t).real();
}

double dephasing_exponent_time_route(const BathSpec& bath, double t) {
    return 4.0 * eta_diag_time_route(bath, t).real();
}

Trajectory pure_dephasing_exact(const BathSpec& bath,
                                const DensityMatrix2& initial,
                                const std::vector<double>& times) {
    initial.validate("pure_dephasing_exact initial state");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ValidationError("pure_dephasing_exact: times must increase");

    Trajectory traj;
    traj.method = Method::PureDephasing;
    traj.dkmax = 0;
    traj.bath_desc = bath.describe();
    if (times.size() >= 2) traj.delta_t = times[1] - times[0];
    for (double t : times) {
        DensityMatrix2 rho = initial;
        if (t != 0.0) {
            const cplx e = eta_diag_freq_route(bath, t);
            const double gamma = 4.0 * e.real();
            const double phi = 4.0 * e.imag();
            const cplx decay = std::exp(cplx(-gamma, -phi));
            rho.m[1] = initial.m[1] * decay;
            rho.m[2] = std::conj(rho.m[1]);
        }
        traj.states.push_back({t, rho});
    }
    return traj;
}

}  // namespace quapi
