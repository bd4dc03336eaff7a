// quatfact command-line front end: factorize, recognize, check, gen-corpus.

#include "quatfact/baselines.hpp"
#include "quatfact/checks.hpp"
#include "quatfact/corpus.hpp"
#include "quatfact/errors.hpp"
#include "quatfact/facerec.hpp"
#include "quatfact/imaging.hpp"
#include "quatfact/init.hpp"
#include "quatfact/kernels.hpp"
#include "quatfact/solvers/admm.hpp"
#include "quatfact/solvers/pg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace qf = quatfact;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit : int { ok = 0, failed = 1, usage = 2, io = 3, solver = 4 };

struct SolverFlags {
    double rho = 0.01;
    double sigma = 0.001;
    double alpha = 0.01;
    double beta = 0.01;
    std::string variant = "alg2";
    CLI::Option *rho_opt{};
    CLI::Option *sigma_opt{};
    CLI::Option *alpha_opt{};
    CLI::Option *beta_opt{};
    CLI::Option *variant_opt{};

    void attach(CLI::App *cmd) {
        rho_opt = cmd->add_option("--rho", rho, "Backtracking ratio (PG methods)")->capture_default_str();
        sigma_opt = cmd->add_option("--sigma", sigma, "Sufficient-decrease constant (PG methods)")->capture_default_str();
        alpha_opt = cmd->add_option("--alpha", alpha, "Penalty on W = U (ADMM methods)")->capture_default_str();
        beta_opt = cmd->add_option("--beta", beta, "Penalty on H = V (ADMM methods)")->capture_default_str();
        variant_opt = cmd->add_option("--variant", variant, "Line-search start: alg1 (fresh) or alg2 (warm)")
                          ->check(CLI::IsMember({"alg1", "alg2"}))
                          ->capture_default_str();
    }

    /// Rejects flags that do not belong to the chosen family.
    void validate(bool is_pg, const std::string &method) const {
        const auto reject = [&](CLI::Option *o, const char *name) {
            if (o->count() > 0) {
                throw qf::config_error(std::string(name) + " does not apply to method " + method);
            }
        };
        if (is_pg) {
            reject(alpha_opt, "--alpha");
            reject(beta_opt, "--beta");
        } else {
            reject(rho_opt, "--rho");
            reject(sigma_opt, "--sigma");
            reject(variant_opt, "--variant");
        }
    }

    [[nodiscard]] qf::PGConfig pg(int iters) const {
        qf::PGConfig c;
        c.rho = rho;
        c.sigma = sigma;
        c.max_iters = iters;
        return c;
    }
};

ojson json_real(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

void write_json(const std::string &path, const ojson &j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw qf::io_error("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- factorize

struct FactorizeArgs {
    std::string input;
    std::string method = "qadmm";
    long long l = 20;
    int iters = 50;
    std::uint64_t seed = 0;
    std::string trace_path = "trace.csv";
    std::string report_path = "report.json";
    std::string output;
    bool timing = false;
    bool conventional_psnr = false;
    SolverFlags flags;
};

int cmd_factorize(const FactorizeArgs &a) {
    const bool is_pg = a.method == "qipgm" || a.method == "ripgm";
    a.flags.validate(is_pg, a.method);
    if (a.iters < 0) {
        throw qf::config_error("--iters must be >= 0");
    }

    const qf::ColorImage img = qf::load_image(a.input);
    const qf::QMatrix x = qf::to_quaternion(img);
    const Eigen::Index m = x.rows();
    const Eigen::Index n = x.cols();
    if (a.l <= 0 || a.l >= std::min(m, n)) {
        throw qf::config_error("--l must satisfy 0 < l < min(height, width) = " + std::to_string(std::min(m, n)));
    }
    const qf::InitBundle bundle = qf::make_init_bundle(a.seed, m, n, a.l);
    const qf::PgVariant variant = a.flags.variant == "alg1" ? qf::PgVariant::alg1 : qf::PgVariant::alg2;

    const qf::Stopwatch clock;
    qf::Trace trace;
    qf::QMatrix z;
    if (a.method == "qipgm") {
        auto res = qf::qipg_run(x, qf::pg_init(bundle), a.flags.pg(a.iters), variant);
        z = qf::qmat_mul(res.factors.W, res.factors.H);
        trace = std::move(res.trace);
        if (res.linesearch_warnings) {
            std::cerr << "warning: a line search exhausted its budget\n";
        }
    } else if (a.method == "qadmm") {
        qf::AdmmConfig cfg;
        cfg.max_iters = a.iters;
        auto res = qf::qadmm_run(x, qf::admm_init(bundle, a.flags.alpha, a.flags.beta), cfg);
        // metrics follow the trace, which is evaluated at (W, H)
        z = qf::qmat_mul(res.state.W, res.state.H);
        trace = std::move(res.trace);
    } else {
        qf::ChannelConfig cfg;
        cfg.pg = a.flags.pg(a.iters);
        cfg.pg_variant = variant;
        cfg.admm.max_iters = a.iters;
        const qf::ChannelTriple xc{img.r(), img.g(), img.b()};
        const auto method = a.method == "ripgm" ? qf::ChannelMethod::pg : qf::ChannelMethod::admm;
        auto res = qf::channel_factorize(xc, method, cfg, qf::channel_init(bundle, a.flags.alpha, a.flags.beta));
        z = qf::QMatrix::pure(res.factors[0].W * res.factors[0].H, res.factors[1].W * res.factors[1].H,
                              res.factors[2].W * res.factors[2].H);
        trace = std::move(res.trace);
    }
    const double elapsed = clock.elapsed_ms();

    const qf::QualityReport q =
        qf::psnr(x, z, a.conventional_psnr ? qf::PsnrForm::conventional : qf::PsnrForm::as_printed);
    qf::write_trace_csv(a.trace_path, trace, a.timing);
    ojson rep;
    rep["method"] = a.method;
    rep["l"] = a.l;
    rep["iters"] = a.iters;
    rep["seed"] = a.seed;
    rep["psnr_db"] = json_real(q.psnr_db);
    rep["res_final"] = json_real(q.res);
    rep["objective_final"] = json_real(trace.empty() ? 0.5 * qf::fro_norm(x - z) * qf::fro_norm(x - z)
                                                     : trace.back().objective);
    rep["elapsed_ms"] = a.timing ? json_real(elapsed) : ojson(nullptr);
    write_json(a.report_path, rep);
    if (!a.output.empty()) {
        qf::save_image(qf::from_quaternion(z), a.output);
    }
    std::cout << a.method << ": psnr " << qf::format_real(q.psnr_db) << " dB, res " << qf::format_real(q.res)
              << " after " << trace.size() << " iterations\n";
    return ok;
}

// ---------------------------------------------------------------- recognize

struct RecognizeArgs {
    std::string manifest;
    std::string method = "qadmm-color";
    long long l = 15;
    int iters = 4;
    std::uint64_t seed = 0;
    std::size_t train_per_identity = 3;
    double ridge = 0.0;
    std::string predictions_path = "predictions.csv";
    std::string report_path = "report.json";
    std::string model_path;
    bool timing = false;
    SolverFlags flags;
};

int cmd_recognize(const RecognizeArgs &a) {
    std::string family = a.method;
    std::string mode = "color";
    if (const auto dash = a.method.find('-'); dash != std::string::npos) {
        family = a.method.substr(0, dash);
        mode = a.method.substr(dash + 1);
    }
    const bool quaternion = family == "qadmm" || family == "qipgm";
    const bool real = family == "radmm" || family == "ripgm";
    if ((!quaternion && !real) || (mode != "color" && mode != "gray") || (quaternion && mode == "gray")) {
        throw qf::config_error("unknown recognition method '" + a.method +
                               "'; use qadmm, qipgm, radmm-color, ripgm-color, radmm-gray or ripgm-gray");
    }
    const bool is_pg = family == "qipgm" || family == "ripgm";
    a.flags.validate(is_pg, a.method);

    auto entries = qf::read_manifest(a.manifest);
    if (entries.empty()) {
        throw qf::config_error("manifest lists no images");
    }
    const bool needs_split =
        std::any_of(entries.begin(), entries.end(), [](const qf::ManifestEntry &e) { return !e.split; });
    if (needs_split) {
        qf::assign_seeded_split(entries, a.train_per_identity, a.seed);
    }
    const qf::Corpus corpus = qf::load_corpus(entries);
    if (corpus.test.size() == 0) {
        throw qf::config_error("test split is empty");
    }

    qf::TrainConfig tc;
    tc.method = is_pg ? qf::FactorMethod::pg : qf::FactorMethod::admm;
    tc.l = a.l;
    tc.iters = a.iters;
    tc.seed = a.seed;
    tc.pg = a.flags.pg(a.iters);
    tc.alpha = a.flags.alpha;
    tc.beta = a.flags.beta;
    tc.ridge = a.ridge;

    const qf::Stopwatch clock;
    std::vector<qf::Match> matches;
    std::vector<std::int64_t> train_labels = corpus.train.labels;
    if (quaternion) {
        const qf::RecognitionModel model = qf::train(corpus.train, tc);
        for (const auto &g : corpus.test.images) {
            matches.push_back(qf::classify(model, g));
        }
        if (!a.model_path.empty()) {
            qf::save_model(model, a.model_path);
        }
    } else if (mode == "color") {
        const qf::ChannelModels models = qf::train_channels(corpus.train, tc);
        for (const auto &g : corpus.test.images) {
            matches.push_back(qf::classify_channels(models, g));
        }
    } else {
        const qf::GrayModel model = qf::train_gray(corpus.train, tc);
        for (const auto &g : corpus.test.images) {
            matches.push_back(qf::classify_gray(model, g));
        }
    }
    const double elapsed = clock.elapsed_ms();

    std::vector<std::int64_t> predicted;
    std::ofstream pred(a.predictions_path, std::ios::binary);
    if (!pred) {
        throw qf::io_error("cannot write " + a.predictions_path);
    }
    pred << "probe_path,predicted_label,true_label,score\n";
    for (std::size_t i = 0; i < matches.size(); ++i) {
        const std::int64_t p = train_labels[matches[i].index];
        predicted.push_back(p);
        pred << corpus.test_paths[i] << ',' << corpus.label_names[p] << ','
             << corpus.label_names[corpus.test.labels[i]] << ',' << qf::format_real(matches[i].score) << '\n';
    }
    const double acc = qf::accuracy(predicted, corpus.test.labels);

    ojson rep;
    rep["method"] = a.method;
    rep["l"] = a.l;
    rep["iters"] = a.iters;
    rep["seed"] = a.seed;
    rep["accuracy"] = acc;
    rep["n_train"] = corpus.train.size();
    rep["n_test"] = corpus.test.size();
    rep["elapsed_ms"] = a.timing ? json_real(elapsed) : ojson(nullptr);
    write_json(a.report_path, rep);
    std::cout << a.method << ": accuracy " << qf::format_real(acc) << " (" << corpus.test.size() << " probes)\n";
    return ok;
}

// ---------------------------------------------------------------- gen-corpus

struct GenArgs {
    std::string out;
    std::uint64_t seed = 0;
    qf::SyntheticFaceConfig cfg;
    std::size_t train_per_identity = 3;
};

int cmd_gen_corpus(const GenArgs &a) {
    const auto faces = qf::synthetic_faces(a.seed, a.cfg);
    qf::write_corpus(faces, a.out, a.train_per_identity);
    std::cout << "wrote " << faces.size() << " images and manifest.csv to " << a.out << '\n';
    return ok;
}

int cmd_check(const std::string &suite, std::uint64_t seed) {
    const auto rep = qf::checks::run_suite(suite, seed);
    std::cout << qf::checks::format_report(rep);
    return rep.passed() ? ok : failed;
}

}  // namespace

int main(int argc, char **argv) {
    qf::kernels::apply_thread_env();

    CLI::App app{"Quasi non-negative quaternion matrix factorization toolkit"};
    app.require_subcommand(1);

    FactorizeArgs fa;
    auto *fac = app.add_subcommand("factorize", "Low-rank reconstruction of a color image");
    fac->add_option("input", fa.input, "Input image (.ppm, or .png when supported)")->required();
    fac->add_option("--method", fa.method, "qipgm | qadmm | ripgm | radmm")
        ->check(CLI::IsMember({"qipgm", "qadmm", "ripgm", "radmm"}))
        ->capture_default_str();
    fac->add_option("--l", fa.l, "Inner rank")->capture_default_str();
    fac->add_option("--iters", fa.iters, "Iterations")->capture_default_str();
    fac->add_option("--seed", fa.seed, "Seed of the initial matrices")->capture_default_str();
    fac->add_option("--trace", fa.trace_path, "Trace CSV path")->capture_default_str();
    fac->add_option("--report", fa.report_path, "Report JSON path")->capture_default_str();
    fac->add_option("--output", fa.output, "Reconstructed image path");
    fac->add_flag("--timing", fa.timing, "Record wall-clock times (outputs are then not reproducible)");
    fac->add_flag("--conventional-psnr", fa.conventional_psnr, "Report 10 log10(255^2 / mean squared error)");
    fa.flags.attach(fac);

    RecognizeArgs ra;
    auto *rec = app.add_subcommand("recognize", "Train on a face corpus and classify its test split");
    rec->add_option("--manifest", ra.manifest, "manifest.csv with path,label[,split]")->required();
    rec->add_option("--method", ra.method, "qadmm | qipgm | radmm-color | ripgm-color | radmm-gray | ripgm-gray")
        ->capture_default_str();
    rec->add_option("--l", ra.l, "Inner rank")->capture_default_str();
    rec->add_option("--iters", ra.iters, "Solver iterations")->capture_default_str();
    rec->add_option("--seed", ra.seed, "Seed of the initial matrices and of the split")->capture_default_str();
    rec->add_option("--train-per-identity", ra.train_per_identity,
                    "Training images per identity when the manifest has no split column")
        ->capture_default_str();
    rec->add_option("--ridge", ra.ridge, "Ridge added to the encoding Gram matrix")->capture_default_str();
    rec->add_option("--predictions", ra.predictions_path, "Per-probe predictions CSV")->capture_default_str();
    rec->add_option("--report", ra.report_path, "Report JSON path")->capture_default_str();
    rec->add_option("--model", ra.model_path, "Save the trained quaternion model here");
    rec->add_flag("--timing", ra.timing, "Record wall-clock time");
    ra.flags.attach(rec);

    std::string suite;
    std::uint64_t check_seed = 1;
    auto *chk = app.add_subcommand("check", "Run a property suite");
    std::string suites;
    for (const auto &s : qf::checks::suite_names()) {
        suites += (suites.empty() ? "" : " | ") + s;
    }
    chk->add_option("suite", suite, suites)->required();
    chk->add_option("--seed", check_seed, "Seed")->capture_default_str();

    GenArgs ga;
    auto *gen = app.add_subcommand("gen-corpus", "Write a synthetic face corpus");
    gen->add_option("--out", ga.out, "Output directory")->required();
    gen->add_option("--seed", ga.seed, "Seed")->capture_default_str();
    gen->add_option("--identities", ga.cfg.identities, "Number of identities")->capture_default_str();
    gen->add_option("--per-identity", ga.cfg.per_identity, "Images per identity")->capture_default_str();
    gen->add_option("--height", ga.cfg.height, "Image height")->capture_default_str();
    gen->add_option("--width", ga.cfg.width, "Image width")->capture_default_str();
    gen->add_option("--train-per-identity", ga.train_per_identity, "Images per identity marked train")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    try {
        if (fac->parsed()) {
            return cmd_factorize(fa);
        }
        if (rec->parsed()) {
            return cmd_recognize(ra);
        }
        if (chk->parsed()) {
            return cmd_check(suite, check_seed);
        }
        return cmd_gen_corpus(ga);
    } catch (const qf::config_error &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return usage;
    } catch (const qf::parse_error &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return io;
    } catch (const qf::io_error &e) {
        std::cerr << "io error: " << e.what() << '\n';
        return io;
    } catch (const qf::error &e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    }
}
