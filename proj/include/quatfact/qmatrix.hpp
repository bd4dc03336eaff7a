#pragma once

#include "quatfact/quaternion.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>

namespace quatfact {

using RealMatrix = Eigen::MatrixXd;

/// Component plane index of a quaternion matrix.
enum class Part : int { real = 0, i = 1, j = 2, k = 3 };

/// Dense quaternion matrix stored as four equal-shape real planes
/// A = A0 + A1 i + A2 j + A3 k.
class QMatrix {
  public:
    QMatrix() = default;
    QMatrix(Eigen::Index rows, Eigen::Index cols);
    QMatrix(RealMatrix a0, RealMatrix a1, RealMatrix a2, RealMatrix a3);

    static QMatrix zeros(Eigen::Index rows, Eigen::Index cols) { return {rows, cols}; }
    static QMatrix identity(Eigen::Index n);
    /// Embeds a real matrix into the given plane, other planes zero.
    static QMatrix from_plane(Part part, const RealMatrix &m);
    /// Pure quaternion r i + g j + b k.
    static QMatrix pure(const RealMatrix &r, const RealMatrix &g, const RealMatrix &b);

    [[nodiscard]] Eigen::Index rows() const noexcept { return planes_[0].rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return planes_[0].cols(); }
    [[nodiscard]] bool same_shape(const QMatrix &o) const noexcept { return rows() == o.rows() && cols() == o.cols(); }

    [[nodiscard]] const RealMatrix &plane(Part p) const noexcept { return planes_[static_cast<int>(p)]; }
    [[nodiscard]] RealMatrix &plane(Part p) noexcept { return planes_[static_cast<int>(p)]; }
    [[nodiscard]] const RealMatrix &plane(int p) const noexcept { return planes_[p]; }
    [[nodiscard]] RealMatrix &plane(int p) noexcept { return planes_[p]; }

    [[nodiscard]] Quaternion at(Eigen::Index s, Eigen::Index t) const {
        return {planes_[0](s, t), planes_[1](s, t), planes_[2](s, t), planes_[3](s, t)};
    }
    void set(Eigen::Index s, Eigen::Index t, const Quaternion &q) {
        planes_[0](s, t) = q.w;
        planes_[1](s, t) = q.x;
        planes_[2](s, t) = q.y;
        planes_[3](s, t) = q.z;
    }

    [[nodiscard]] QMatrix col(Eigen::Index t) const;
    [[nodiscard]] QMatrix transpose() const;
    [[nodiscard]] QMatrix conjugate() const;
    [[nodiscard]] QMatrix conj_transpose() const;
    /// Copy with the real plane zeroed.
    [[nodiscard]] QMatrix imag() const;

    QMatrix &operator+=(const QMatrix &o);
    QMatrix &operator-=(const QMatrix &o);
    QMatrix &operator*=(double s);

    friend bool operator==(const QMatrix &a, const QMatrix &b);

  private:
    std::array<RealMatrix, 4> planes_{};
};

QMatrix operator+(QMatrix a, const QMatrix &b);
QMatrix operator-(QMatrix a, const QMatrix &b);
QMatrix operator*(double s, QMatrix a);

/// Quaternion matrix product A·B (OpenMP kernel).
QMatrix qmat_mul(const QMatrix &a, const QMatrix &b);
/// A·B*.
QMatrix mul_adjoint_right(const QMatrix &a, const QMatrix &b);
/// A*·B.
QMatrix mul_adjoint_left(const QMatrix &a, const QMatrix &b);

inline QMatrix conj_transpose(const QMatrix &a) { return a.conj_transpose(); }

/// sqrt of the sum of squared entry moduli.
double fro_norm(const QMatrix &a);
/// Re<A, B> = Re Tr(B* A) = sum of the four channelwise real inner products.
double re_inner(const QMatrix &a, const QMatrix &b);
/// Largest absolute entry over all four planes.
double max_abs(const QMatrix &a);

/// Clamps the i, j, k planes at zero; the real plane passes through.
QMatrix project_quasi_nonneg(const QMatrix &a);
/// True iff every entry of the i, j, k planes is >= 0.
bool is_quasi_nonneg(const QMatrix &a);

void require_same_shape(const QMatrix &a, const QMatrix &b, const char *op);
void require_conformable(const QMatrix &a, const QMatrix &b, const char *op);
std::string shape_string(const QMatrix &a);

}  // namespace quatfact
