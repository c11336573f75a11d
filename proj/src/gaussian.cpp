// Copyright Contributors to the prosplat-core project
// SPDX-License-Identifier: Apache-2.0

#include "prosplat/gaussian.hpp"

#include "prosplat/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace prosplat {

namespace {

constexpr double kShC0 = 0.28209479177387814;
constexpr double kShC1 = 0.4886025119029199;
constexpr std::array<double, 5> kShC2 = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                                         -1.0925484305920792, 0.5462742152960396};
constexpr std::array<double, 7> kShC3 = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658,
                                         0.3731763325901154,  -0.4570457994644658, 1.445305721320277,
                                         -0.5900435899266435};

int degree_for_size(std::size_t n) {
    for (int deg = 0; deg <= kMaxShDegree; ++deg) {
        if (n == static_cast<std::size_t>(3 * sh_basis_count(deg))) return deg;
    }
    return -1;
}

} // namespace

int GaussianPrimitive::sh_degree() const { return degree_for_size(sh.size()); }

Mat3 GaussianPrimitive::covariance() const {
    const Mat3 r = q.toRotationMatrix();
    const Mat3 rs = r * s.asDiagonal();
    return rs * rs.transpose();
}

void validate(const GaussianPrimitive &prim) {
    std::ostringstream msg;
    if (!prim.mu.allFinite()) msg << "non-finite position; ";
    if (!(std::abs(prim.q.norm() - 1.0) <= 1e-9)) msg << "quaternion norm " << prim.q.norm() << " != 1; ";
    if (!(prim.s.minCoeff() > 0.0) || !prim.s.allFinite()) msg << "scales must be positive; ";
    if (!(prim.alpha >= 0.0 && prim.alpha <= 1.0)) msg << "alpha " << prim.alpha << " outside [0,1]; ";
    if (prim.sh_degree() < 0) msg << "SH size " << prim.sh.size() << " is not 3(deg+1)^2 for deg <= 3; ";
    for (double c : prim.sh) {
        if (!std::isfinite(c)) {
            msg << "non-finite SH coefficient; ";
            break;
        }
    }
    const std::string problems = msg.str();
    if (!problems.empty()) throw Error(ErrorCode::InvalidPrimitive, "invalid primitive: " + problems);
}

Vec3 evaluate_sh(std::span<const double> sh, const Vec3 &direction, int max_degree) {
    const int deg = std::min(max_degree, degree_for_size(sh.size()));
    auto coeff = [&](int k) { return Vec3(sh[3 * k], sh[3 * k + 1], sh[3 * k + 2]); };

    Vec3 result = kShC0 * coeff(0);
    if (deg > 0) {
        const double x = direction.x(), y = direction.y(), z = direction.z();
        result += -kShC1 * y * coeff(1) + kShC1 * z * coeff(2) - kShC1 * x * coeff(3);
        if (deg > 1) {
            const double xx = x * x, yy = y * y, zz = z * z;
            const double xy = x * y, yz = y * z, xz = x * z;
            result += kShC2[0] * xy * coeff(4) + kShC2[1] * yz * coeff(5) +
                      kShC2[2] * (2.0 * zz - xx - yy) * coeff(6) + kShC2[3] * xz * coeff(7) +
                      kShC2[4] * (xx - yy) * coeff(8);
            if (deg > 2) {
                result += kShC3[0] * y * (3.0 * xx - yy) * coeff(9) + kShC3[1] * xy * z * coeff(10) +
                          kShC3[2] * y * (4.0 * zz - xx - yy) * coeff(11) +
                          kShC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy) * coeff(12) +
                          kShC3[4] * x * (4.0 * zz - xx - yy) * coeff(13) + kShC3[5] * z * (xx - yy) * coeff(14) +
                          kShC3[6] * x * (xx - 3.0 * yy) * coeff(15);
            }
        }
    }
    result.array() += 0.5;
    return result.cwiseMax(0.0).cwiseMin(1.0);
}

std::vector<double> sh_from_rgb(const Vec3 &rgb) {
    return {(rgb.x() - 0.5) / kShC0, (rgb.y() - 0.5) / kShC0, (rgb.z() - 0.5) / kShC0};
}

} // namespace prosplat
