#pragma once

#include <array>
#include <complex>

namespace quapi {

using cplx = std::complex<double>;

// 2x2 reduced density matrix, row-major (n,m) with n,m in {0,1}.
struct DensityMatrix2 {
    std::array<cplx, 4> m{};

    cplx operator()(int n, int mcol) const { return m[2 * n + mcol]; }
    cplx& operator()(int n, int mcol) { return m[2 * n + mcol]; }

    cplx trace() const { return m[0] + m[3]; }
    double hermiticity_defect() const;
    // smaller eigenvalue of the Hermitian part
    double min_eigenvalue() const;

    // Throws IntegrityError naming `where` on violation of
    // trace/Hermiticity/positivity within the given tolerances.
    void validate(const char* where, double trace_tol = 1e-10,
                  double herm_tol = 1e-12, double eig_tol = -1e-8) const;

    // (|0>+|1>)(<0|+<1|)/2 — pure state with maximal coherence
    static DensityMatrix2 plus_x();
    static DensityMatrix2 diag(double p0, double p1);
};

}  // namespace quapi
