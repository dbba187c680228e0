// Copyright 2026 The qsl-rtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qslrtn/state.hpp"

#include <cmath>
#include <sstream>

#include "qslrtn/errors.hpp"

namespace qslrtn {

BlochVector::BlochVector(double rx, double ry, double rz) : rx_(rx), ry_(ry), rz_(rz) {
    if (!std::isfinite(rx) || !std::isfinite(ry) || !std::isfinite(rz)) {
        throw Error(ErrorKind::BlochOutOfBall, "non-finite Bloch component");
    }
    const double n = std::sqrt(norm_sq());
    if (n > 1.0 + kStateTol) {
        std::ostringstream os;
        os << "|r| = " << n << " exceeds 1";
        throw Error(ErrorKind::BlochOutOfBall, os.str());
    }
}

double BlochVector::perp() const noexcept { return std::hypot(rx_, ry_); }

DensityMatrix make_state(const BlochVector& r) {
    // rho01 = (rx - i ry) / 2
    return DensityMatrix({cplx(0.5 * (1.0 + r.rz()), 0.0), cplx(0.5 * r.rx(), -0.5 * r.ry()),
                          cplx(0.5 * r.rx(), 0.5 * r.ry()), cplx(0.5 * (1.0 - r.rz()), 0.0)});
}

DensityMatrix DensityMatrix::from_matrix(const std::array<cplx, 4>& m) {
    if (std::abs(m[0].imag()) > kStateTol || std::abs(m[3].imag()) > kStateTol) {
        throw Error(ErrorKind::InvalidState, "diagonal entries must be real");
    }
    if (std::abs(m[2] - std::conj(m[1])) > kStateTol) {
        throw Error(ErrorKind::InvalidState, "matrix is not Hermitian");
    }
    if (std::abs(m[0].real() + m[3].real() - 1.0) > kStateTol) {
        throw Error(ErrorKind::InvalidState, "trace differs from 1");
    }
    const double det = m[0].real() * m[3].real() - std::norm(m[1]);
    if (det < -kStateTol || m[0].real() < -kStateTol || m[3].real() < -kStateTol) {
        throw Error(ErrorKind::InvalidState, "matrix is not positive semidefinite");
    }
    return DensityMatrix({cplx(m[0].real(), 0.0), m[1], std::conj(m[1]), cplx(m[3].real(), 0.0)});
}

BlochVector to_bloch(const DensityMatrix& rho) {
    const cplx c = rho(0, 1);
    const double rx = 2.0 * c.real();
    const double ry = -2.0 * c.imag();
    const double rz = rho(0, 0).real() - rho(1, 1).real();
    // PSD with 1e-12 slack can put |r| marginally above 1; pull it back.
    const double n = std::sqrt(rx * rx + ry * ry + rz * rz);
    if (n > 1.0) {
        return BlochVector(rx / n, ry / n, rz / n);
    }
    return BlochVector(rx, ry, rz);
}

double purity(const DensityMatrix& rho) {
    const double p0 = rho(0, 0).real();
    const double p1 = rho(1, 1).real();
    return p0 * p0 + p1 * p1 + 2.0 * std::norm(rho(0, 1));
}

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
    // tr[AB] for Hermitian A, B is real
    return a(0, 0).real() * b(0, 0).real() + a(1, 1).real() * b(1, 1).real() +
           2.0 * (a(0, 1) * b(1, 0)).real();
}

double coherence_l1(const DensityMatrix& rho) { return 2.0 * std::abs(rho(0, 1)); }

}  // namespace qslrtn
