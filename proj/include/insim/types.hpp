#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace insim {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

enum class ErrorCode {
    invalid_argument,
    domain,
    parse,
    io,
    state,
    solver,
    size,
};

/// Library error carrying a coarse code so the C boundary can map it
/// to a status value without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Deputy position/velocity relative to the chief, resolved in Hill's frame.
struct RelativeState {
    Vec3 pos{Vec3::Zero()};  ///< m
    Vec3 vel{Vec3::Zero()};  ///< m/s

    Vec6 as_vec6() const {
        Vec6 x;
        x << pos, vel;
        return x;
    }

    static RelativeState from_vec6(const Vec6& x) {
        return RelativeState{x.head<3>(), x.tail<3>()};
    }

    bool finite() const { return pos.allFinite() && vel.allFinite(); }
};

/// Absolute spacecraft state in the Earth-centered inertial frame.
struct InertialState {
    Vec3 pos{Vec3::Zero()};  ///< m
    Vec3 vel{Vec3::Zero()};  ///< m/s
    double mass{1.0};        ///< kg
};

/// Chief orbit and gravity-field constants shared by both fidelity tiers.
///
/// Invariant: n^2 * r0_mag^3 == mu (mean motion consistent with the radius).
struct OrbitParams {
    double mu;            ///< gravitational parameter, m^3/s^2
    double r0_mag;        ///< chief orbit radius, m
    double n;             ///< mean motion, rad/s
    double j2;            ///< oblateness coefficient
    double earth_radius;  ///< m

    static OrbitParams circular(double mu, double r0_mag,
                                double j2 = 1.08262668e-3,
                                double earth_radius = 6.3781e6);
    void validate() const;
};

inline constexpr double kEarthMu = 3.986004418e14;
inline constexpr double kDefaultChiefRadius = 7.0e6;
inline constexpr double kEarthJ2 = 1.08262668e-3;
inline constexpr double kEarthRadius = 6.3781e6;

}  // namespace insim
