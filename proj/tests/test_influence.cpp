#include <doctest.h>

#include <cmath>
#include <vector>

#include "quapi/influence.hpp"
#include "quapi/propagator.hpp"

using namespace quapi;

namespace {

BathSpec pz_bath() {
    return BathSpec({BathFamily::Piezoelectric, 0.035, 0.02, 0.5, 1.0},
                    thermal_beta(30.0));
}

BathSpec df_bath() {
    return BathSpec({BathFamily::Deformation, 0.029, 0.02, 0.5, 3.0},
                    thermal_beta(30.0));
}

// class of the pair (k', k) inside an N-step path
PairClass pair_class(int kp, int k, int n) {
    if (kp == 0 && k == n) return PairClass::TerminalTerminal;
    if (kp == 0) return PairClass::TerminalInterior;
    if (k == n) return PairClass::InteriorTerminal;
    return PairClass::InteriorInterior;
}

}  // namespace

TEST_CASE("zero coupling gives a zero table") {
    SpectralDensityModel zero{BathFamily::Piezoelectric, 0.0, 0.02, 0.5, 1.0};
    const BathSpec bath(zero, thermal_beta(30.0));
    const auto tab = build_eta_table(bath, 10.0, 6, 4);
    CHECK(std::abs(tab.diag_interior) < 1e-14);
    CHECK(std::abs(tab.diag_terminal) < 1e-14);
    for (int dk = 1; dk <= 4; ++dk)
        for (int ci = 0; ci < 4; ++ci)
            CHECK(std::abs(tab.off(dk, static_cast<PairClass>(ci))) < 1e-14);
    // and unit influence factors
    for (int p = 0; p < 4; ++p) {
        CHECK(std::abs(influence_factor_I0(spin_pair_from_index(p), tab,
                                           DiagClass::Interior) -
                       1.0) < 1e-14);
        for (int q = 0; q < 4; ++q)
            CHECK(std::abs(influence_factor_Idk(
                               spin_pair_from_index(p),
                               spin_pair_from_index(q), 2, tab,
                               PairClass::InteriorInterior) -
                           1.0) < 1e-14);
    }
}

TEST_CASE("frozen table entries, paper piezoelectric bath at dt = 10") {
    const auto tab = build_eta_table(pz_bath(), 10.0, 8, 3);
    CHECK(tab.diag_interior.real() ==
          doctest::Approx(2.4544415089134637e-2).epsilon(1e-6));
    CHECK(tab.diag_interior.imag() ==
          doctest::Approx(-5.231490910378466e-2).epsilon(1e-6));
    CHECK(tab.diag_terminal.real() ==
          doctest::Approx(1.5991834191767584e-2).epsilon(1e-6));
    CHECK(tab.off(1, PairClass::InteriorInterior).real() ==
          doctest::Approx(-1.7331863799316807e-2).epsilon(1e-6));
    CHECK(tab.off(1, PairClass::TerminalTerminal).imag() ==
          doctest::Approx(-1.7065333460390658e-2).epsilon(1e-6));
    CHECK(tab.off(3, PairClass::TerminalInterior).real() ==
          doctest::Approx(-1.1091993455973205e-3).epsilon(1e-6));
    // damping requirement on the diagonal class
    CHECK(tab.diag_interior.real() > 0.0);
    CHECK(tab.diag_terminal.real() > 0.0);
}

TEST_CASE("translation invariance of interior entries") {
    // interior off-diagonal entries depend only on dk; integrate windows at
    // (k, k') = (3, 1) directly and compare with the dk = 2 table entry
    const auto bath = pz_bath();
    const double dt = 10.0;
    const auto tab = build_eta_table(bath, dt, 8, 3);
    const cplx direct = integrate<cplx>(
        [&](double t) {
            return integrate<cplx>(
                [&](double tp) {
                    return response_function(bath, t - tp, 1e-13);
                },
                1.0 * dt - 0.5 * dt, 1.0 * dt + 0.5 * dt, 3e-12, 400000);
        },
        3.0 * dt - 0.5 * dt, 3.0 * dt + 0.5 * dt, 3e-11, 400000);
    CHECK(std::abs(direct - tab.off(2, PairClass::InteriorInterior)) < 1e-8);
}

TEST_CASE("route (a) vs route (b) agreement, both baths") {
    for (const auto& bath : {pz_bath(), df_bath()}) {
        const double dt = 10.0;
        const auto tab = build_eta_table(bath, dt, 8, 2);
        CHECK(std::abs(eta_diag_time_route(bath, dt) - tab.diag_interior) <
              1e-8);
        CHECK(std::abs(eta_diag_time_route(bath, 0.5 * dt) -
                       tab.diag_terminal) < 1e-8);
        for (int dk = 1; dk <= 2; ++dk)
            for (int ci = 0; ci < 4; ++ci) {
                const auto c = static_cast<PairClass>(ci);
                CHECK(std::abs(eta_offdiag_time_route(bath, dt, dk, c) -
                               tab.off(dk, c)) < 1e-8);
            }
    }
}

TEST_CASE("build-time route verification passes for a consistent table") {
    CHECK_NOTHROW(build_eta_table(pz_bath(), 10.0, 6, 1, EtaVerify::UpToDk5));
}

TEST_CASE("influence factor identities") {
    const auto tab = build_eta_table(pz_bath(), 10.0, 8, 3);
    // diagonal pair -> unit factor
    for (int p : {0, 3}) {
        CHECK(std::abs(influence_factor_I0(spin_pair_from_index(p), tab,
                                           DiagClass::Interior) -
                       1.0) < 1e-14);
        for (int q = 0; q < 4; ++q)
            CHECK(std::abs(influence_factor_Idk(
                               spin_pair_from_index(p),
                               spin_pair_from_index(q), 1, tab,
                               PairClass::InteriorInterior) -
                           1.0) < 1e-14);
    }
    // blip pair: I0 = exp(-4 Re eta), modulus <= 1
    const cplx i0 = influence_factor_I0({+1, -1}, tab, DiagClass::Interior);
    CHECK(std::abs(i0 - std::exp(cplx(-4.0 * tab.diag_interior.real(), 0.0))) <
          1e-14);
    CHECK(std::abs(i0) <= 1.0);
}

TEST_CASE("hermiticity symmetry: swapping s+ <-> s- conjugates the factors") {
    const auto tab = build_eta_table(df_bath(), 20.0, 8, 3);
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            const auto sp = spin_pair_from_index(p);
            const auto sq = spin_pair_from_index(q);
            const SpinPair sp_swapped{sp.s_minus, sp.s_plus};
            const SpinPair sq_swapped{sq.s_minus, sq.s_plus};
            const cplx a = influence_factor_Idk(sp, sq, 2, tab,
                                                PairClass::InteriorInterior);
            const cplx b = influence_factor_Idk(sp_swapped, sq_swapped, 2, tab,
                                                PairClass::InteriorInterior);
            CHECK(std::abs(b - std::conj(a)) < 1e-14);
        }
}

TEST_CASE("eta scales linearly in g, factor exponents quadratically") {
    auto m =
        SpectralDensityModel{BathFamily::Piezoelectric, 0.035, 0.02, 0.5, 1.0};
    const BathSpec b1(m, thermal_beta(30.0));
    m.g *= 2.0;
    const BathSpec b2(m, thermal_beta(30.0));
    const auto t1 = build_eta_table(b1, 10.0, 6, 2);
    const auto t2 = build_eta_table(b2, 10.0, 6, 2);
    CHECK(std::abs(t2.diag_interior - 2.0 * t1.diag_interior) < 1e-9);
    CHECK(std::abs(t2.off(2, PairClass::InteriorInterior) -
                   2.0 * t1.off(2, PairClass::InteriorInterior)) < 1e-9);
    const cplx f1 = influence_factor_I0({+1, -1}, t1, DiagClass::Interior);
    const cplx f2 = influence_factor_I0({+1, -1}, t2, DiagClass::Interior);
    CHECK(std::abs(f2 - f1 * f1) < 1e-12);
}

TEST_CASE("factorization equals the double-sum exponent for full paths") {
    // product over I0/I_dk factors == exp of the full double sum, N <= 6
    const auto bath = pz_bath();
    const int n = 5;
    const auto tab = build_eta_table(bath, 10.0, n, n);
    unsigned long long seed = 99;
    auto rnd4 = [&] {
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<int>(seed >> 61) & 3;
    };
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<SpinPair> path(n + 1);
        for (auto& p : path) p = spin_pair_from_index(rnd4());

        cplx product = 1.0;
        for (int k = 0; k <= n; ++k)
            product *= influence_factor_I0(
                path[k], tab,
                (k == 0 || k == n) ? DiagClass::Terminal : DiagClass::Interior);
        for (int k = 1; k <= n; ++k)
            for (int kp = 0; kp < k; ++kp)
                product *= influence_factor_Idk(path[k], path[kp], k - kp, tab,
                                                pair_class(kp, k, n));

        cplx exponent = 0.0;
        for (int k = 0; k <= n; ++k)
            for (int kp = 0; kp <= k; ++kp) {
                cplx eta;
                if (k == kp)
                    eta = (k == 0 || k == n) ? tab.diag_terminal
                                             : tab.diag_interior;
                else
                    eta = tab.off(k - kp, pair_class(kp, k, n));
                const double dp = path[k].s_plus - path[k].s_minus;
                exponent -= dp * (eta * double(path[kp].s_plus) -
                                  std::conj(eta) * double(path[kp].s_minus));
            }
        CHECK(std::abs(product - std::exp(exponent)) <=
              1e-12 * std::max(1.0, std::abs(product)));
    }
}

TEST_CASE("window consistency: eta sum reproduces the dephasing exponent") {
    // all spins fixed at the +/- blip: the sum of all eta entries over a
    // full path reproduces Gamma(t) = 4 Re( ordered double integral of alpha )
    for (const auto& bath : {pz_bath(), df_bath()}) {
        const double dt = 10.0;
        const int n = 6;
        const auto tab = build_eta_table(bath, dt, n, n);
        double sum = 2.0 * tab.diag_terminal.real() +
                     (n - 1) * tab.diag_interior.real();
        for (int k = 1; k <= n; ++k)
            for (int kp = 0; kp < k; ++kp)
                sum += tab.off(k - kp, pair_class(kp, k, n)).real();
        const double gamma = dephasing_exponent(bath, n * dt);
        CHECK(4.0 * sum == doctest::Approx(gamma).epsilon(1e-8));
    }
}

TEST_CASE("eta table accessor rejects out-of-range lags") {
    const auto tab = build_eta_table(pz_bath(), 10.0, 8, 3);
    CHECK_THROWS_AS(tab.off(0, PairClass::InteriorInterior), ValidationError);
    CHECK_THROWS_AS(tab.off(4, PairClass::InteriorInterior), ValidationError);
    CHECK_THROWS_AS(build_eta_table(pz_bath(), 10.0, 4, 5), ValidationError);
    CHECK_THROWS_AS(build_eta_table(pz_bath(), -1.0, 4, 2), ValidationError);
}
