#include <doctest.h>

#include <cmath>
#include <vector>

#include "quapi/propagator.hpp"

using namespace quapi;

namespace {

BathSpec pz_bath(double g = 0.035, double omega_l = 0.5) {
    return BathSpec({BathFamily::Piezoelectric, g, 0.02, omega_l, 1.0},
                    thermal_beta(30.0));
}

BathSpec df_bath() {
    return BathSpec({BathFamily::Deformation, 0.029, 0.02, 0.5, 3.0},
                    thermal_beta(30.0));
}

double max_entry_diff(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.states.size() == b.states.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        for (int e = 0; e < 4; ++e)
            worst = std::max(worst, std::abs(a.states[k].state.m[e] -
                                             b.states[k].state.m[e]));
    return worst;
}

}  // namespace

TEST_CASE("short-time propagator") {
    const auto id = short_time_propagator(0.0, 10.0);
    CHECK(std::abs(id[0] - 1.0) < 1e-15);
    CHECK(std::abs(id[1]) < 1e-15);
    // T_c dt = pi/2 -> -i sigma_x
    const auto u = short_time_propagator(M_PI / 2.0 / 10.0, 10.0);
    CHECK(std::abs(u[0]) < 1e-15);
    CHECK(std::abs(u[1] - cplx(0.0, -1.0)) < 1e-15);
    // unitarity for assorted inputs
    for (double tc : {0.013, 0.05, 0.4}) {
        const auto v = short_time_propagator(tc, 7.3);
        const cplx a = std::conj(v[0]) * v[0] + std::conj(v[2]) * v[2];
        const cplx b = std::conj(v[0]) * v[1] + std::conj(v[2]) * v[3];
        CHECK(std::abs(a - 1.0) < 1e-14);
        CHECK(std::abs(b) < 1e-14);
    }
    CHECK_THROWS_AS(short_time_propagator(0.05, 0.0), ValidationError);
}

TEST_CASE("zero coupling keeps a sigma_x eigenstate coherent") {
    SpectralDensityModel zero{BathFamily::Piezoelectric, 0.0, 0.02, 0.5, 1.0};
    const BathSpec bath(zero, thermal_beta(30.0));
    const auto tab = build_eta_table(bath, 10.0, 12, 1);
    SystemSpec sys{0.05, DensityMatrix2::plus_x()};
    const auto traj = itm_evolve(sys, tab, 12);
    for (const auto& pt : traj.states) {
        CHECK(std::abs(pt.state(0, 1) - 0.5) < 1e-13);
        CHECK(std::abs(pt.state(0, 0) - 0.5) < 1e-13);
    }
}

TEST_CASE("closed-system limit reproduces unitary dynamics") {
    SpectralDensityModel zero{BathFamily::Deformation, 0.0, 0.02, 0.5, 3.0};
    const BathSpec bath(zero, thermal_beta(30.0));
    const double dt = 6.0, tc = 0.09;
    const auto tab = build_eta_table(bath, dt, 10, 2);
    DensityMatrix2 rho0;
    rho0.m = {cplx(0.7), cplx(0.2, 0.1), cplx(0.2, -0.1), cplx(0.3)};
    SystemSpec sys{tc, rho0};
    const auto traj = itm_evolve(sys, tab, 10);
    const auto u = short_time_propagator(tc, dt);
    DensityMatrix2 ref = rho0;
    for (int k = 1; k <= 10; ++k) {
        std::array<cplx, 4> t;
        t[0] = u[0] * ref.m[0] + u[1] * ref.m[2];
        t[1] = u[0] * ref.m[1] + u[1] * ref.m[3];
        t[2] = u[2] * ref.m[0] + u[3] * ref.m[2];
        t[3] = u[2] * ref.m[1] + u[3] * ref.m[3];
        ref.m[0] = t[0] * std::conj(u[0]) + t[1] * std::conj(u[1]);
        ref.m[1] = t[0] * std::conj(u[2]) + t[1] * std::conj(u[3]);
        ref.m[2] = t[2] * std::conj(u[0]) + t[3] * std::conj(u[1]);
        ref.m[3] = t[2] * std::conj(u[2]) + t[3] * std::conj(u[3]);
        for (int e = 0; e < 4; ++e)
            CHECK(std::abs(traj.states[k].state.m[e] - ref.m[e]) <= 1e-12);
    }
}

TEST_CASE("brute force: step zero returns the initial state; cap enforced") {
    const auto bath = pz_bath();
    const auto tab = build_eta_table(bath, 10.0, 4, 2);
    SystemSpec sys{0.05, DensityMatrix2::plus_x()};
    const auto traj = brute_force_evolve(sys, tab, 0);
    CHECK(traj.states.size() == 1);
    CHECK(std::abs(traj.states[0].state(0, 1) - 0.5) < 1e-15);
    CHECK_THROWS_AS(brute_force_evolve(sys, tab, 11), CapacityError);
}

TEST_CASE("itm equals brute force at full memory") {
    for (const auto& bath : {pz_bath(), df_bath()}) {
        for (double tc : {0.0, 0.05, 0.11}) {
            const auto tab = build_eta_table(bath, 10.0, 6, 6);
            SystemSpec sys{tc, DensityMatrix2::plus_x()};
            const auto a = itm_evolve(sys, tab, 6);
            const auto b = brute_force_evolve(sys, tab, 6);
            CHECK(max_entry_diff(a, b) < 1e-12);
        }
    }
}

TEST_CASE("itm equals brute force under matching truncation") {
    const auto bath = pz_bath();
    const auto tab = build_eta_table(bath, 10.0, 7, 3);
    SystemSpec sys{0.07, DensityMatrix2::plus_x()};
    const auto a = itm_evolve(sys, tab, 7);
    const auto b = brute_force_evolve(sys, tab, 7);
    CHECK(max_entry_diff(a, b) < 1e-12);
}

TEST_CASE("worker count does not change results") {
    const auto bath = df_bath();
    const auto tab = build_eta_table(bath, 20.0, 9, 5);
    SystemSpec sys{0.05, DensityMatrix2::plus_x()};
    const auto a = itm_evolve(sys, tab, 9, {12, 1});
    const auto b = itm_evolve(sys, tab, 9, {12, 4});
    CHECK(max_entry_diff(a, b) == 0.0);
}

TEST_CASE("trace and hermiticity hold at every step") {
    const auto bath = pz_bath();
    const auto tab = build_eta_table(bath, 10.0, 20, 4);
    SystemSpec sys{0.05, DensityMatrix2::plus_x()};
    const auto traj = itm_evolve(sys, tab, 20);
    for (const auto& pt : traj.states) {
        CHECK(std::abs(pt.state.trace() - 1.0) < 1e-10);
        CHECK(pt.state.hermiticity_defect() < 1e-12);
        CHECK(pt.state.min_eigenvalue() >= -1e-8);
    }
}

TEST_CASE("pure dephasing oracle: basics and dual-route exponent") {
    const auto bath = pz_bath();
    const auto traj = pure_dephasing_exact(bath, DensityMatrix2::plus_x(),
                                           {0.0, 10.0, 20.0});
    CHECK(std::abs(traj.states[0].state(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(traj.states[0].state(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(traj.states[1].state(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(traj.states[1].state(0, 1)) < 0.5);
    CHECK(std::abs(traj.states[1].state(1, 0) -
                   std::conj(traj.states[1].state(0, 1))) < 1e-15);

    SpectralDensityModel zero{BathFamily::Piezoelectric, 0.0, 0.02, 0.5, 1.0};
    const BathSpec free_bath(zero, thermal_beta(30.0));
    const auto free_traj =
        pure_dephasing_exact(free_bath, DensityMatrix2::plus_x(), {0.0, 50.0});
    CHECK(std::abs(free_traj.states[1].state(0, 1) - 0.5) < 1e-14);

    // frequency form vs double time quadrature
    for (double t : {5.0, 10.0, 30.0}) {
        const double a = dephasing_exponent(bath, t);
        const double b = dephasing_exponent_time_route(bath, t);
        CHECK(std::fabs(a - b) < 1e-8);
    }
    // frozen value
    CHECK(dephasing_exponent(bath, 100.0) ==
          doctest::Approx(0.12946410257721597).epsilon(1e-6));
}

TEST_CASE("itm at T_c = 0 matches the dephasing oracle (full memory)") {
    for (const auto& bath : {pz_bath(), df_bath()}) {
        const double dt = 10.0;
        const auto tab = build_eta_table(bath, dt, 8, 8);
        SystemSpec sys{0.0, DensityMatrix2::plus_x()};
        const auto traj = itm_evolve(sys, tab, 8);
        for (int k = 1; k <= 8; ++k) {
            const double expect =
                0.5 * std::exp(-dephasing_exponent(bath, k * dt));
            const double got = std::abs(traj.states[k].state(0, 1));
            CHECK(got == doctest::Approx(expect).epsilon(1e-7));
            CHECK(std::abs(traj.states[k].state(0, 0) - 0.5) < 1e-12);
        }
    }
}

TEST_CASE("coupling monotonicity at T_c = 0") {
    const double dt = 10.0;
    std::vector<double> prev;
    for (double g : {0.01, 0.035, 0.08}) {
        const auto bath = pz_bath(g);
        const auto tab = build_eta_table(bath, dt, 6, 6);
        SystemSpec sys{0.0, DensityMatrix2::plus_x()};
        const auto traj = itm_evolve(sys, tab, 6);
        std::vector<double> cur;
        for (int k = 1; k <= 6; ++k)
            cur.push_back(std::abs(traj.states[k].state(0, 1)));
        if (!prev.empty())
            for (std::size_t i = 0; i < cur.size(); ++i)
                CHECK(cur[i] <= prev[i] + 1e-12);
        prev = cur;
    }
}

TEST_CASE("memory convergence as dkmax covers the bath memory") {
    const auto bath = df_bath();
    const double dt = 20.0;
    const int n = 12;
    SystemSpec sys{0.05, DensityMatrix2::plus_x()};
    double last_dev = -1.0;
    std::vector<double> last;
    for (int dk : {1, 2, 3, 4}) {
        const auto tab = build_eta_table(bath, dt, n, dk);
        const auto traj = itm_evolve(sys, tab, n);
        std::vector<double> cur;
        for (const auto& pt : traj.states)
            cur.push_back(std::abs(pt.state(0, 1)));
        if (!last.empty()) {
            double dev = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i)
                dev = std::max(dev, std::fabs(cur[i] - last[i]));
            last_dev = dev;
        }
        last = cur;
    }
    // converged: dkmax 3 -> 4 moves |rho01| by less than 1e-3
    CHECK(last_dev >= 0.0);
    CHECK(last_dev < 1e-3);
}

TEST_CASE("capacity and validation guards") {
    const auto bath = pz_bath();
    const auto tab = build_eta_table(bath, 10.0, 14, 14);
    SystemSpec sys{0.05, DensityMatrix2::plus_x()};
    CHECK_THROWS_AS(itm_evolve(sys, tab, 14, {12, 1}), CapacityError);
    const auto tab2 = build_eta_table(bath, 10.0, 6, 4);
    CHECK_THROWS_AS(itm_evolve(sys, tab2, 3), ValidationError);
    SystemSpec bad{-0.1, DensityMatrix2::plus_x()};
    CHECK_THROWS_AS(itm_evolve(bad, tab2, 6), ValidationError);
    DensityMatrix2 nonphysical;
    nonphysical.m = {cplx(0.9), cplx(0.0), cplx(0.0), cplx(0.3)};
    SystemSpec bad2{0.05, nonphysical};
    CHECK_THROWS_AS(itm_evolve(bad2, tab2, 6), IntegrityError);
    CHECK_THROWS_AS(
        pure_dephasing_exact(bath, DensityMatrix2::plus_x(), {0.0, 5.0, 5.0}),
        ValidationError);
}
