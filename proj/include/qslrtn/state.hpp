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

#pragma once

#include <array>
#include <complex>

namespace qslrtn {

using cplx = std::complex<double>;

/// Slack allowed on |r| <= 1, unit trace and positivity checks.
inline constexpr double kStateTol = 1e-12;

/// Qubit Bloch vector r = (<sx>, <sy>, <sz>), restricted to the closed unit ball.
class BlochVector {
public:
    /// Throws Error{BlochOutOfBall} when |r| > 1 + kStateTol or a component is not finite.
    BlochVector(double rx, double ry, double rz);
    BlochVector() = default;

    double rx() const noexcept { return rx_; }
    double ry() const noexcept { return ry_; }
    double rz() const noexcept { return rz_; }

    /// Transverse magnitude sqrt(rx^2 + ry^2).
    double perp() const noexcept;
    double norm_sq() const noexcept { return rx_ * rx_ + ry_ * ry_ + rz_ * rz_; }
    double dot(const BlochVector& other) const noexcept {
        return rx_ * other.rx_ + ry_ * other.ry_ + rz_ * other.rz_;
    }

    friend bool operator==(const BlochVector&, const BlochVector&) = default;

private:
    double rx_ = 0.0;
    double ry_ = 0.0;
    double rz_ = 0.0;
};

/// 2x2 density matrix. Only constructible through make_state or from_matrix,
/// both of which validate hermiticity, trace and positivity.
class DensityMatrix {
public:
    /// Validating constructor from raw entries {rho00, rho01, rho10, rho11}.
    static DensityMatrix from_matrix(const std::array<cplx, 4>& entries);

    cplx operator()(int row, int col) const noexcept { return m_[2 * row + col]; }
    const std::array<cplx, 4>& entries() const noexcept { return m_; }

private:
    explicit DensityMatrix(const std::array<cplx, 4>& m) : m_(m) {}
    friend DensityMatrix make_state(const BlochVector& r);

    std::array<cplx, 4> m_{};
};

/// rho = (I + r.sigma) / 2.
DensityMatrix make_state(const BlochVector& r);

BlochVector to_bloch(const DensityMatrix& rho);

/// tr[rho^2] = (1 + |r|^2) / 2.
double purity(const DensityMatrix& rho);

/// tr[rho_a rho_b]; symmetric.
double overlap(const DensityMatrix& a, const DensityMatrix& b);

/// l1-norm of coherence, sum of |rho_ij| over i != j.
double coherence_l1(const DensityMatrix& rho);

}  // namespace qslrtn
