#pragma once

#include "quatfact/errors.hpp"

#include <cmath>
#include <ostream>

namespace quatfact {

/// A quaternion w + x i + y j + z k.
struct Quaternion {
    double w{0.0};
    double x{0.0};
    double y{0.0};
    double z{0.0};

    friend constexpr bool operator==(const Quaternion &, const Quaternion &) = default;

    static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }
};

constexpr Quaternion operator+(const Quaternion &p, const Quaternion &q) {
    return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
}

constexpr Quaternion operator-(const Quaternion &p, const Quaternion &q) {
    return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
}

constexpr Quaternion operator-(const Quaternion &q) { return {-q.w, -q.x, -q.y, -q.z}; }

constexpr Quaternion operator*(double s, const Quaternion &q) { return {s * q.w, s * q.x, s * q.y, s * q.z}; }

/// Hamilton product. Not commutative: qmul(i, j) = k but qmul(j, i) = -k.
constexpr Quaternion qmul(const Quaternion &p, const Quaternion &q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion operator*(const Quaternion &p, const Quaternion &q) { return qmul(p, q); }

constexpr Quaternion conj(const Quaternion &q) { return {q.w, -q.x, -q.y, -q.z}; }

constexpr double modulus_squared(const Quaternion &q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }

inline double modulus(const Quaternion &q) { return std::sqrt(modulus_squared(q)); }

/// conj(q) / |q|^2. Throws domain_error for q = 0.
inline Quaternion qinv(const Quaternion &q) {
    const double n2 = modulus_squared(q);
    if (n2 == 0.0) {
        throw domain_error("qinv: zero quaternion has no inverse");
    }
    return (1.0 / n2) * conj(q);
}

inline std::ostream &operator<<(std::ostream &os, const Quaternion &q) {
    return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

}  // namespace quatfact
