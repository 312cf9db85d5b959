#include "quapi/density.hpp"

#include <cmath>
#include <sstream>

#include "quapi/errors.hpp"

namespace quapi {

double DensityMatrix2::hermiticity_defect() const {
    double d = std::abs(m[1] - std::conj(m[2]));
    d = std::max(d, std::fabs(m[0].imag()));
    d = std::max(d, std::fabs(m[3].imag()));
    return d;
}

double DensityMatrix2::min_eigenvalue() const {
    // Hermitian part
    const double a = m[0].real();
    const double d = m[3].real();
    const cplx off = 0.5 * (m[1] + std::conj(m[2]));
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(off));
    return 0.5 * (a + d) - rad;
}

void DensityMatrix2::validate(const char* where, double trace_tol,
                              double herm_tol, double eig_tol) const {
    std::ostringstream os;
    const double tr_err = std::abs(trace() - 1.0);
    if (tr_err > trace_tol) {
        os << where << ": trace drift " << tr_err;
        throw IntegrityError(os.str());
    }
    const double hd = hermiticity_defect();
    if (hd > herm_tol) {
        os << where << ": hermiticity defect " << hd;
        throw IntegrityError(os.str());
    }
    if (min_eigenvalue() < eig_tol) {
        os << where << ": negative eigenvalue " << min_eigenvalue();
        throw IntegrityError(os.str());
    }
}

DensityMatrix2 DensityMatrix2::plus_x() {
    DensityMatrix2 r;
    r.m = {cplx(0.5), cplx(0.5), cplx(0.5), cplx(0.5)};
    return r;
}

DensityMatrix2 DensityMatrix2::diag(double p0, double p1) {
    DensityMatrix2 r;
    r.m = {cplx(p0), cplx(0.0), cplx(0.0), cplx(p1)};
    return r;
}

}  // namespace quapi
