#pragma once

#include "quatfact/baselines.hpp"
#include "quatfact/hpd_solve.hpp"
#include "quatfact/imaging.hpp"
#include "quatfact/qmatrix.hpp"
#include "quatfact/solvers/admm.hpp"
#include "quatfact/solvers/pg.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace quatfact {

/// Face images as column vectors (height*width x 1, column-major pixel order)
/// with identity labels parallel to them.
struct FaceSet {
    std::vector<QMatrix> images;
    std::vector<std::int64_t> labels;

    [[nodiscard]] std::size_t size() const noexcept { return images.size(); }
};

/// Column-major vectorization of a color image as a pure quaternion column.
QMatrix vectorize(const ColorImage &img);
/// Stacks the images of a set as the columns of one matrix.
QMatrix stack_columns(const std::vector<QMatrix> &cols);

enum class FactorMethod { admm, pg };

struct TrainConfig {
    FactorMethod method = FactorMethod::admm;
    Eigen::Index l = 15;
    int iters = 4;
    std::uint64_t seed = 0;
    PGConfig pg;
    double alpha = 0.01;
    double beta = 0.01;
    /// Added to the diagonal of the encoding Gram matrix.
    double ridge = 0.0;
};

struct Match {
    std::size_t index{0};  ///< training column
    double score{0.0};
};

/// Trained basis and encodings. Immutable once built, so classification may
/// run concurrently on one model.
class RecognitionModel {
  public:
    RecognitionModel(QMatrix w, QMatrix h, std::vector<std::int64_t> labels, double ridge = 0.0);

    [[nodiscard]] const QMatrix &W() const noexcept { return w_; }
    [[nodiscard]] const QMatrix &H() const noexcept { return h_; }
    [[nodiscard]] const std::vector<std::int64_t> &labels() const noexcept { return labels_; }
    [[nodiscard]] double ridge() const noexcept { return ridge_; }
    [[nodiscard]] const HpdFactorization &gram() const noexcept { return *gram_; }

  private:
    QMatrix w_;
    QMatrix h_;
    std::vector<std::int64_t> labels_;
    double ridge_;
    std::shared_ptr<const HpdFactorization> gram_;
};

/// Factorizes the stacked training images and caches the Gram factorization.
RecognitionModel train(const FaceSet &train_set, const TrainConfig &cfg);

/// (W*W + ridge I)^-1 W* G.
QMatrix encode_probe(const RecognitionModel &model, const QMatrix &g);

/// Re<h, c> / (||h|| ||c||). Throws domain_error on a zero argument.
double similarity_q(const QMatrix &h, const QMatrix &c);

/// Best training column by similarity_q; a zero encoding scores -inf, ties go
/// to the smallest index.
Match classify(const RecognitionModel &model, const QMatrix &g);

/// Real counterpart for one channel or the gray level.
class RealModel {
  public:
    RealModel(RealMatrix w, RealMatrix h, double ridge = 0.0);

    [[nodiscard]] const RealMatrix &W() const noexcept { return w_; }
    [[nodiscard]] const RealMatrix &H() const noexcept { return h_; }
    [[nodiscard]] RealMatrix encode(const RealMatrix &g) const;

  private:
    RealMatrix w_;
    RealMatrix h_;
    Eigen::LLT<RealMatrix> gram_;
};

double similarity_real(const RealMatrix &h, const RealMatrix &c);

struct ChannelModels {
    std::array<RealModel, 3> channels;
    std::vector<std::int64_t> labels;
};

struct GrayModel {
    RealModel model;
    std::vector<std::int64_t> labels;
};

/// Per-channel real NMF of the R, G, B training matrices.
ChannelModels train_channels(const FaceSet &train_set, const TrainConfig &cfg);
/// Real NMF of the Rec. 601 gray training matrix.
GrayModel train_gray(const FaceSet &train_set, const TrainConfig &cfg);

/// Score = sum over channels of the real cosine similarity; a channel whose
/// probe or training encoding is zero contributes 0.
Match classify_channels(const ChannelModels &models, const QMatrix &g);
/// Real cosine on gray encodings; zero encoding scores -inf.
Match classify_gray(const GrayModel &model, const QMatrix &g);

/// Gray column of a vectorized pure-quaternion image.
RealMatrix gray_column(const QMatrix &g);

/// Fraction of equal entries.
double accuracy(const std::vector<std::int64_t> &predicted, const std::vector<std::int64_t> &truth);

/// Binary model container, little-endian:
///   "QNQM" | u32 version=1 | u64 rows | u64 l | u64 mu | f64 ridge
///   | W planes 0..3 column-major | H planes 0..3 column-major
///   | u64 label count | i64 labels
void save_model(const RecognitionModel &model, const std::string &path);
RecognitionModel load_model(const std::string &path);

}  // namespace quatfact
