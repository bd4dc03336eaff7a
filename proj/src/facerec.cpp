#include "quatfact/facerec.hpp"

#include "quatfact/errors.hpp"
#include "quatfact/init.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace quatfact {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_train_shape(const FaceSet &set, Eigen::Index l) {
    if (set.images.empty()) {
        throw config_error("train: empty training set");
    }
    if (set.labels.size() != set.images.size()) {
        throw dimension_error("train: labels and images differ in count");
    }
    const Eigen::Index mn = set.images.front().rows();
    const auto mu = static_cast<Eigen::Index>(set.images.size());
    // l == mu is admitted so that the identity encoding W = X, H = I is representable
    if (l <= 0 || l >= mn || l > mu) {
        throw config_error("train: rank l=" + std::to_string(l) + " out of range for " + std::to_string(mn) + "x" +
                           std::to_string(mu));
    }
}

ChannelTriple channel_matrices(const QMatrix &x) { return {x.plane(Part::i), x.plane(Part::j), x.plane(Part::k)}; }

RealFactorPair run_real(const RealMatrix &x, const InitBundle &b, int c, const TrainConfig &cfg) {
    const std::array<const RealMatrix *, 3> ls{&b.L1, &b.L2, &b.L3};
    const std::array<const RealMatrix *, 3> ss{&b.S1, &b.S2, &b.S3};
    if (cfg.method == FactorMethod::pg) {
        PGConfig pg = cfg.pg;
        pg.max_iters = cfg.iters;
        return nmf_pg(x, {*ls[c], *ss[c]}, pg).factors;
    }
    RealAdmmState s;
    s.W = s.U = s.Lambda = *ls[c];
    s.H = s.V = s.Pi = *ss[c];
    s.alpha = cfg.alpha;
    s.beta = cfg.beta;
    AdmmConfig ac;
    ac.max_iters = cfg.iters;
    return nmf_admm(x, s, ac).factors;
}

template <class T>
void put(std::vector<std::uint8_t> &out, T v) {
    std::array<std::uint8_t, sizeof(T)> buf{};
    std::memcpy(buf.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(buf.begin(), buf.end());
    }
    out.insert(out.end(), buf.begin(), buf.end());
}

class Cursor {
  public:
    explicit Cursor(const std::vector<std::uint8_t> &b) : b_(b) {}

    template <class T>
    T get(const char *what) {
        if (b_.size() - pos_ < sizeof(T)) {
            throw parse_error(std::string("model file truncated reading ") + what, pos_);
        }
        std::array<std::uint8_t, sizeof(T)> buf{};
        std::memcpy(buf.data(), b_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            std::reverse(buf.begin(), buf.end());
        }
        T v;
        std::memcpy(&v, buf.data(), sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    [[nodiscard]] std::size_t pos() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return b_.size() - pos_; }

  private:
    const std::vector<std::uint8_t> &b_;
    std::size_t pos_{0};
};

void put_planes(std::vector<std::uint8_t> &out, const QMatrix &m) {
    for (int p = 0; p < 4; ++p) {
        const RealMatrix &a = m.plane(p);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            put<double>(out, a.data()[i]);
        }
    }
}

QMatrix get_planes(Cursor &cur, Eigen::Index rows, Eigen::Index cols) {
    QMatrix m(rows, cols);
    for (int p = 0; p < 4; ++p) {
        RealMatrix &a = m.plane(p);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a.data()[i] = cur.get<double>("plane data");
        }
    }
    return m;
}

}  // namespace

QMatrix vectorize(const ColorImage &img) {
    const Eigen::Index n = img.height() * img.width();
    return QMatrix::pure(img.r().reshaped(n, 1), img.g().reshaped(n, 1), img.b().reshaped(n, 1));
}

QMatrix stack_columns(const std::vector<QMatrix> &cols) {
    if (cols.empty()) {
        throw dimension_error("stack_columns: no columns");
    }
    const Eigen::Index rows = cols.front().rows();
    QMatrix x(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t t = 0; t < cols.size(); ++t) {
        if (cols[t].rows() != rows || cols[t].cols() != 1) {
            throw dimension_error("stack_columns: column " + std::to_string(t) + " is " + shape_string(cols[t]));
        }
        for (int p = 0; p < 4; ++p) {
            x.plane(p).col(static_cast<Eigen::Index>(t)) = cols[t].plane(p);
        }
    }
    return x;
}

RecognitionModel::RecognitionModel(QMatrix w, QMatrix h, std::vector<std::int64_t> labels, double ridge)
    : w_(std::move(w)), h_(std::move(h)), labels_(std::move(labels)), ridge_(ridge) {
    require_conformable(w_, h_, "RecognitionModel");
    if (static_cast<Eigen::Index>(labels_.size()) != h_.cols()) {
        throw dimension_error("RecognitionModel: one label per column of H required");
    }
    if (ridge_ < 0.0) {
        throw config_error("RecognitionModel: ridge must be >= 0");
    }
    QMatrix g = mul_adjoint_left(w_, w_);
    g.plane(Part::real).diagonal().array() += ridge_;
    gram_ = std::make_shared<const HpdFactorization>(g);
}

RecognitionModel train(const FaceSet &train_set, const TrainConfig &cfg) {
    require_train_shape(train_set, cfg.l);
    const QMatrix x = stack_columns(train_set.images);
    const InitBundle b = make_init_bundle(cfg.seed, x.rows(), x.cols(), cfg.l);
    FactorPair f;
    if (cfg.method == FactorMethod::pg) {
        PGConfig pg = cfg.pg;
        pg.max_iters = cfg.iters;
        f = qipg_run(x, pg_init(b), pg, PgVariant::alg2).factors;
    } else {
        AdmmConfig ac;
        ac.max_iters = cfg.iters;
        f = qadmm_run(x, admm_init(b, cfg.alpha, cfg.beta), ac).factors;
    }
    return {std::move(f.W), std::move(f.H), train_set.labels, cfg.ridge};
}

QMatrix encode_probe(const RecognitionModel &model, const QMatrix &g) {
    if (g.rows() != model.W().rows() || g.cols() != 1) {
        throw dimension_error("encode_probe: probe is " + shape_string(g) + ", model expects " +
                              std::to_string(model.W().rows()) + "x1");
    }
    return model.gram().solve_left(mul_adjoint_left(model.W(), g));
}

double similarity_q(const QMatrix &h, const QMatrix &c) {
    require_same_shape(h, c, "similarity_q");
    const double nh = fro_norm(h);
    const double nc = fro_norm(c);
    if (nh == 0.0 || nc == 0.0) {
        throw domain_error("similarity_q: zero vector");
    }
    return std::clamp(re_inner(h, c) / (nh * nc), -1.0, 1.0);
}

Match classify(const RecognitionModel &model, const QMatrix &g) {
    const QMatrix h = encode_probe(model, g);
    const bool zero_probe = fro_norm(h) == 0.0;
    Match best{0, kNegInf};
    bool first = true;
    for (Eigen::Index t = 0; t < model.H().cols(); ++t) {
        const QMatrix c = model.H().col(t);
        const double s = (zero_probe || fro_norm(c) == 0.0) ? kNegInf : similarity_q(h, c);
        if (first || s > best.score) {
            best = {static_cast<std::size_t>(t), s};
            first = false;
        }
    }
    return best;
}

RealModel::RealModel(RealMatrix w, RealMatrix h, double ridge) : w_(std::move(w)), h_(std::move(h)) {
    if (w_.cols() != h_.rows()) {
        throw dimension_error("RealModel: W and H do not conform");
    }
    RealMatrix g = w_.transpose() * w_;
    g.diagonal().array() += ridge;
    gram_.compute(g);
    if (gram_.info() != Eigen::Success) {
        throw singular_error("RealModel: Gram matrix is not positive definite (try a ridge)");
    }
}

RealMatrix RealModel::encode(const RealMatrix &g) const {
    if (g.rows() != w_.rows() || g.cols() != 1) {
        throw dimension_error("RealModel::encode: probe has wrong shape");
    }
    return gram_.solve(w_.transpose() * g);
}

double similarity_real(const RealMatrix &h, const RealMatrix &c) {
    const double nh = h.norm();
    const double nc = c.norm();
    if (nh == 0.0 || nc == 0.0) {
        throw domain_error("similarity_real: zero vector");
    }
    return std::clamp(h.cwiseProduct(c).sum() / (nh * nc), -1.0, 1.0);
}

ChannelModels train_channels(const FaceSet &train_set, const TrainConfig &cfg) {
    require_train_shape(train_set, cfg.l);
    const ChannelTriple x = channel_matrices(stack_columns(train_set.images));
    const InitBundle b = make_init_bundle(cfg.seed, x.r.rows(), x.r.cols(), cfg.l);
    std::array<RealFactorPair, 3> f;
    for (int c = 0; c < 3; ++c) {
        f[c] = run_real(x[c], b, c, cfg);
    }
    return {{RealModel(f[0].W, f[0].H, cfg.ridge), RealModel(f[1].W, f[1].H, cfg.ridge),
             RealModel(f[2].W, f[2].H, cfg.ridge)},
            train_set.labels};
}

RealMatrix gray_column(const QMatrix &g) {
    return 0.299 * g.plane(Part::i) + 0.587 * g.plane(Part::j) + 0.114 * g.plane(Part::k);
}

GrayModel train_gray(const FaceSet &train_set, const TrainConfig &cfg) {
    require_train_shape(train_set, cfg.l);
    const RealMatrix x = gray_column(stack_columns(train_set.images));
    const InitBundle b = make_init_bundle(cfg.seed, x.rows(), x.cols(), cfg.l);
    RealFactorPair f = run_real(x, b, 0, cfg);
    return {RealModel(std::move(f.W), std::move(f.H), cfg.ridge), train_set.labels};
}

Match classify_channels(const ChannelModels &models, const QMatrix &g) {
    const ChannelTriple probe = channel_matrices(g);
    std::array<RealMatrix, 3> h;
    for (int c = 0; c < 3; ++c) {
        h[c] = models.channels[c].encode(probe[c]);
    }
    const Eigen::Index mu = models.channels[0].H().cols();
    Match best{0, kNegInf};
    for (Eigen::Index t = 0; t < mu; ++t) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
            const RealMatrix col = models.channels[c].H().col(t);
            if (h[c].norm() != 0.0 && col.norm() != 0.0) {
                s += similarity_real(h[c], col);
            }
        }
        if (t == 0 || s > best.score) {
            best = {static_cast<std::size_t>(t), s};
        }
    }
    return best;
}

Match classify_gray(const GrayModel &model, const QMatrix &g) {
    const RealMatrix h = model.model.encode(gray_column(g));
    const bool zero_probe = h.norm() == 0.0;
    Match best{0, kNegInf};
    for (Eigen::Index t = 0; t < model.model.H().cols(); ++t) {
        const RealMatrix col = model.model.H().col(t);
        const double s = (zero_probe || col.norm() == 0.0) ? kNegInf : similarity_real(h, col);
        if (t == 0 || s > best.score) {
            best = {static_cast<std::size_t>(t), s};
        }
    }
    return best;
}

double accuracy(const std::vector<std::int64_t> &predicted, const std::vector<std::int64_t> &truth) {
    if (predicted.size() != truth.size()) {
        throw dimension_error("accuracy: prediction and truth lengths differ");
    }
    if (truth.empty()) {
        throw domain_error("accuracy: empty test set");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        hits += predicted[i] == truth[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

void save_model(const RecognitionModel &model, const std::string &path) {
    std::vector<std::uint8_t> out{'Q', 'N', 'Q', 'M'};
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(model.W().rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(model.W().cols()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(model.H().cols()));
    put<double>(out, model.ridge());
    put_planes(out, model.W());
    put_planes(out, model.H());
    put<std::uint64_t>(out, model.labels().size());
    for (std::int64_t v : model.labels()) {
        put<std::int64_t>(out, v);
    }
    write_file(path, out);
}

RecognitionModel load_model(const std::string &path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "QNQM", 4) != 0) {
        throw parse_error("not a model file: bad magic", 0);
    }
    Cursor cur(bytes);
    cur.get<std::uint32_t>("magic");
    const std::size_t version_at = cur.pos();
    const auto version = cur.get<std::uint32_t>("version");
    if (version != 1) {
        throw parse_error("unsupported model version " + std::to_string(version), version_at);
    }
    const auto rows = cur.get<std::uint64_t>("rows");
    const auto l = cur.get<std::uint64_t>("rank");
    const auto mu = cur.get<std::uint64_t>("column count");
    const double ridge = cur.get<double>("ridge");
    const std::uint64_t doubles_needed = 4 * (rows * l + l * mu);
    if (rows == 0 || l == 0 || mu == 0 || cur.remaining() / 8 < doubles_needed) {
        throw parse_error("model dimensions inconsistent with file size", cur.pos());
    }
    QMatrix w = get_planes(cur, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(l));
    QMatrix h = get_planes(cur, static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(mu));
    const std::size_t count_at = cur.pos();
    const auto count = cur.get<std::uint64_t>("label count");
    if (count != mu) {
        throw parse_error("label count does not match column count", count_at);
    }
    std::vector<std::int64_t> labels(count);
    for (auto &v : labels) {
        v = cur.get<std::int64_t>("labels");
    }
    return {std::move(w), std::move(h), std::move(labels), ridge};
}

}  // namespace quatfact
