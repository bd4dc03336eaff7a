#include "quatfact/imaging.hpp"

#include "quatfact/errors.hpp"
#include "quatfact/init.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>

#ifdef QUATFACT_HAVE_PNG
#include <png.h>
#endif

namespace quatfact {

namespace {

RealMatrix clamp255(RealMatrix m) { return m.cwiseMax(0.0).cwiseMin(255.0); }

bool ends_with_ci(const std::string &s, const std::string &suffix) {
    if (s.size() < suffix.size()) {
        return false;
    }
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

class HeaderReader {
  public:
    explicit HeaderReader(const std::vector<std::uint8_t> &bytes) : b_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            if (b_[pos_] == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(b_[pos_]) != 0) {
                ++pos_;
            } else {
                return;
            }
        }
    }

    unsigned long number(const char *what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        unsigned long v = 0;
        while (pos_ < b_.size() && std::isdigit(b_[pos_]) != 0) {
            v = v * 10 + (b_[pos_] - '0');
            if (v > 1'000'000'000UL) {
                throw parse_error(std::string("PPM ") + what + " too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw parse_error(std::string("PPM header: expected ") + what, start);
        }
        return v;
    }

    std::size_t &pos() { return pos_; }

  private:
    const std::vector<std::uint8_t> &b_;
    std::size_t pos_{0};
};

#ifdef QUATFACT_HAVE_PNG
ColorImage load_png(const std::string &path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
        throw io_error("cannot read PNG " + path + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
    if (png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr) == 0) {
        png_image_free(&image);
        throw io_error("cannot decode PNG " + path + ": " + image.message);
    }
    const Eigen::Index h = image.height;
    const Eigen::Index w = image.width;
    RealMatrix r(h, w), g(h, w), b(h, w);
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            const std::size_t o = 3 * (static_cast<std::size_t>(y) * w + x);
            r(y, x) = buf[o];
            g(y, x) = buf[o + 1];
            b(y, x) = buf[o + 2];
        }
    }
    return {std::move(r), std::move(g), std::move(b)};
}

void save_png(const ColorImage &img, const std::string &path) {
    std::vector<std::uint8_t> ppm = encode_ppm(img);
    const std::size_t header = ppm.size() - static_cast<std::size_t>(3 * img.width() * img.height());
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_RGB;
    if (png_image_write_to_file(&image, path.c_str(), 0, ppm.data() + header, 0, nullptr) == 0) {
        throw io_error("cannot write PNG " + path + ": " + image.message);
    }
}
#endif

}  // namespace

ColorImage::ColorImage(Eigen::Index height, Eigen::Index width)
    : r_(RealMatrix::Zero(height, width)), g_(RealMatrix::Zero(height, width)), b_(RealMatrix::Zero(height, width)) {}

ColorImage::ColorImage(RealMatrix r, RealMatrix g, RealMatrix b) {
    if (r.rows() != g.rows() || r.rows() != b.rows() || r.cols() != g.cols() || r.cols() != b.cols()) {
        throw dimension_error("ColorImage: channel shapes differ");
    }
    r_ = clamp255(std::move(r));
    g_ = clamp255(std::move(g));
    b_ = clamp255(std::move(b));
}

bool operator==(const ColorImage &a, const ColorImage &b) {
    return a.height() == b.height() && a.width() == b.width() && a.r_ == b.r_ && a.g_ == b.g_ && a.b_ == b.b_;
}

QMatrix to_quaternion(const ColorImage &img) { return QMatrix::pure(img.r(), img.g(), img.b()); }

ColorImage from_quaternion(const QMatrix &q) { return {q.plane(Part::i), q.plane(Part::j), q.plane(Part::k)}; }

RealMatrix to_gray(const ColorImage &img) { return 0.299 * img.r() + 0.587 * img.g() + 0.114 * img.b(); }

QualityReport psnr(const QMatrix &x, const QMatrix &z, PsnrForm form) {
    require_same_shape(x, z, "psnr");
    const double count = static_cast<double>(x.rows() * x.cols());
    if (count == 0.0) {
        throw dimension_error("psnr: empty matrices");
    }
    const QMatrix d = x - z;
    const double meansq = (fro_norm(d) * fro_norm(d)) / count;

    QualityReport rep;
    rep.mse = std::sqrt(meansq);
    rep.res = fro_norm(d.imag());
    if (rep.mse == 0.0) {
        rep.psnr_db = std::numeric_limits<double>::infinity();
    } else if (form == PsnrForm::as_printed) {
        rep.psnr_db = 20.0 * std::log10(255.0 / rep.mse);
    } else {
        rep.psnr_db = 10.0 * std::log10(255.0 * 255.0 / meansq);
    }
    return rep;
}

ColorImage decode_ppm(const std::vector<std::uint8_t> &bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
        throw parse_error("not a binary PPM: missing P6 magic", 0);
    }
    HeaderReader rd(bytes);
    rd.pos() = 2;
    const std::size_t width_at = rd.pos();
    const unsigned long w = rd.number("width");
    const unsigned long h = rd.number("height");
    const std::size_t maxval_at = rd.pos();
    const unsigned long maxval = rd.number("maxval");
    if (w == 0 || h == 0) {
        throw parse_error("PPM dimensions must be positive", width_at);
    }
    if (maxval == 0 || maxval > 255) {
        throw parse_error("unsupported PPM maxval " + std::to_string(maxval) + " (only 1..255)", maxval_at);
    }
    if (rd.pos() >= bytes.size() || std::isspace(bytes[rd.pos()]) == 0) {
        throw parse_error("PPM header: expected whitespace after maxval", rd.pos());
    }
    const std::size_t data = rd.pos() + 1;
    const std::size_t need = 3 * w * h;
    if (bytes.size() - data < need) {
        throw parse_error("truncated PPM payload: expected " + std::to_string(need) + " bytes, found " +
                              std::to_string(bytes.size() - data),
                          bytes.size());
    }
    const double scale = 255.0 / static_cast<double>(maxval);
    const auto eh = static_cast<Eigen::Index>(h);
    const auto ew = static_cast<Eigen::Index>(w);
    RealMatrix r(eh, ew), g(eh, ew), b(eh, ew);
    std::size_t o = data;
    for (Eigen::Index y = 0; y < eh; ++y) {
        for (Eigen::Index x = 0; x < ew; ++x) {
            r(y, x) = bytes[o++] * scale;
            g(y, x) = bytes[o++] * scale;
            b(y, x) = bytes[o++] * scale;
        }
    }
    return {std::move(r), std::move(g), std::move(b)};
}

std::vector<std::uint8_t> encode_ppm(const ColorImage &img) {
    const std::string header =
        "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + 3 * img.width() * img.height());
    auto byte = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); };
    for (Eigen::Index y = 0; y < img.height(); ++y) {
        for (Eigen::Index x = 0; x < img.width(); ++x) {
            out.push_back(byte(img.r()(y, x)));
            out.push_back(byte(img.g()(y, x)));
            out.push_back(byte(img.b()(y, x)));
        }
    }
    return out;
}

std::vector<std::uint8_t> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot write " + path);
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw io_error("write failed for " + path);
    }
}

bool png_supported() noexcept {
#ifdef QUATFACT_HAVE_PNG
    return true;
#else
    return false;
#endif
}

ColorImage load_image(const std::string &path) {
    if (ends_with_ci(path, ".png")) {
#ifdef QUATFACT_HAVE_PNG
        return load_png(path);
#else
        throw io_error("PNG support not built in: " + path);
#endif
    }
    return decode_ppm(read_file(path));
}

void save_image(const ColorImage &img, const std::string &path) {
    if (ends_with_ci(path, ".png")) {
#ifdef QUATFACT_HAVE_PNG
        save_png(img, path);
        return;
#else
        throw io_error("PNG support not built in: " + path);
#endif
    }
    write_file(path, encode_ppm(img));
}

ColorImage downscale_nearest(const ColorImage &img, Eigen::Index height, Eigen::Index width) {
    if (height <= 0 || width <= 0) {
        throw dimension_error("downscale_nearest: target size must be positive");
    }
    RealMatrix r(height, width), g(height, width), b(height, width);
    for (Eigen::Index y = 0; y < height; ++y) {
        const Eigen::Index sy = std::min(img.height() - 1, y * img.height() / height);
        for (Eigen::Index x = 0; x < width; ++x) {
            const Eigen::Index sx = std::min(img.width() - 1, x * img.width() / width);
            r(y, x) = img.r()(sy, sx);
            g(y, x) = img.g()(sy, sx);
            b(y, x) = img.b()(sy, sx);
        }
    }
    return {std::move(r), std::move(g), std::move(b)};
}

ColorImage synthetic_color_image(std::uint64_t seed, Eigen::Index height, Eigen::Index width) {
    Rng rng(seed);
    std::array<RealMatrix, 3> ch;
    std::array<double, 3> base{};
    std::array<double, 3> gx{};
    std::array<double, 3> gy{};
    for (int c = 0; c < 3; ++c) {
        base[c] = rng.uniform(40.0, 120.0);
        gx[c] = rng.uniform(-60.0, 60.0);
        gy[c] = rng.uniform(-60.0, 60.0);
        ch[c] = RealMatrix(height, width);
    }
    struct Blob {
        double cy, cx, radius;
        std::array<double, 3> color;
    };
    std::vector<Blob> blobs(6);
    for (auto &bl : blobs) {
        bl.cy = rng.uniform(0.0, static_cast<double>(height));
        bl.cx = rng.uniform(0.0, static_cast<double>(width));
        bl.radius = rng.uniform(0.08, 0.3) * static_cast<double>(std::min(height, width));
        for (double &v : bl.color) {
            v = rng.uniform(-80.0, 120.0);
        }
    }
    for (Eigen::Index x = 0; x < width; ++x) {
        for (Eigen::Index y = 0; y < height; ++y) {
            const double u = static_cast<double>(x) / std::max<Eigen::Index>(1, width - 1);
            const double v = static_cast<double>(y) / std::max<Eigen::Index>(1, height - 1);
            for (int c = 0; c < 3; ++c) {
                double val = base[c] + gx[c] * u + gy[c] * v;
                for (const auto &bl : blobs) {
                    const double dy = (static_cast<double>(y) - bl.cy) / bl.radius;
                    const double dx = (static_cast<double>(x) - bl.cx) / bl.radius;
                    val += bl.color[c] * std::exp(-(dx * dx + dy * dy));
                }
                ch[c](y, x) = std::round(std::clamp(val, 0.0, 255.0));
            }
        }
    }
    return {std::move(ch[0]), std::move(ch[1]), std::move(ch[2])};
}

}  // namespace quatfact
