#pragma once

#include "quatfact/qmatrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace quatfact {

/// RGB image with channel values clamped to [0, 255] on construction.
class ColorImage {
  public:
    ColorImage() = default;
    ColorImage(Eigen::Index height, Eigen::Index width);
    ColorImage(RealMatrix r, RealMatrix g, RealMatrix b);

    [[nodiscard]] Eigen::Index height() const noexcept { return r_.rows(); }
    [[nodiscard]] Eigen::Index width() const noexcept { return r_.cols(); }
    [[nodiscard]] const RealMatrix &r() const noexcept { return r_; }
    [[nodiscard]] const RealMatrix &g() const noexcept { return g_; }
    [[nodiscard]] const RealMatrix &b() const noexcept { return b_; }
    [[nodiscard]] const RealMatrix &channel(int c) const { return c == 0 ? r_ : (c == 1 ? g_ : b_); }

    friend bool operator==(const ColorImage &a, const ColorImage &b);

  private:
    RealMatrix r_, g_, b_;
};

/// 0 + R i + G j + B k.
QMatrix to_quaternion(const ColorImage &img);
/// Drops the real plane and clamps i, j, k to [0, 255].
ColorImage from_quaternion(const QMatrix &q);

/// Rec. 601 luma.
RealMatrix to_gray(const ColorImage &img);

enum class PsnrForm {
    /// 20 log10(255 / MSE) with MSE the root mean squared entry modulus.
    as_printed,
    /// 10 log10(255^2 / mean squared entry modulus).
    conventional,
};

struct QualityReport {
    double mse{0.0};      ///< root mean squared modulus of X - Z
    double psnr_db{0.0};  ///< +inf iff mse == 0
    double res{0.0};      ///< ||Im X - Im Z||_F
};

/// Quality of the reconstruction Z of X. No clamping is applied.
QualityReport psnr(const QMatrix &x, const QMatrix &z, PsnrForm form = PsnrForm::as_printed);

/// Binary PPM (P6). maxval up to 255 is accepted; values below 255 are
/// rescaled to [0, 255]. Comments after '#' are skipped in the header.
ColorImage decode_ppm(const std::vector<std::uint8_t> &bytes);
/// P6 with maxval 255, values rounded to the nearest integer.
std::vector<std::uint8_t> encode_ppm(const ColorImage &img);

/// Chooses the codec from the extension: .ppm always, .png when built with libpng.
ColorImage load_image(const std::string &path);
void save_image(const ColorImage &img, const std::string &path);
bool png_supported() noexcept;

/// Nearest-neighbour resample to height x width.
ColorImage downscale_nearest(const ColorImage &img, Eigen::Index height, Eigen::Index width);

/// Smooth seeded test image (gradients plus soft colored blobs).
ColorImage synthetic_color_image(std::uint64_t seed, Eigen::Index height, Eigen::Index width);

std::vector<std::uint8_t> read_file(const std::string &path);
void write_file(const std::string &path, const std::vector<std::uint8_t> &bytes);

}  // namespace quatfact
