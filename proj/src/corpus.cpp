#include "quatfact/corpus.hpp"

#include "quatfact/errors.hpp"
#include "quatfact/init.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace quatfact {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const std::string &text, const std::string &base_dir) {
    std::size_t line_start = 0;
    std::vector<std::string> lines;
    std::vector<std::size_t> starts;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        starts.push_back(line_start);
        line_start += line.size() + 1;
        lines.push_back(line);
    }
    if (lines.empty() || trim(lines[0]).empty()) {
        throw parse_error("manifest is empty; expected header path,label[,split]", 0);
    }
    const std::vector<std::string> header = split_csv(lines[0]);
    auto find_col = [&](const char *name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto path_col = find_col("path");
    const auto label_col = find_col("label");
    const auto split_col = find_col("split");
    if (!path_col) {
        throw parse_error("manifest header is missing column 'path'", 0);
    }
    if (!label_col) {
        throw parse_error("manifest header is missing column 'label'", 0);
    }

    std::vector<ManifestEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_csv(lines[i]);
        if (cells.size() < header.size()) {
            throw parse_error("manifest line " + std::to_string(i + 1) + " has " + std::to_string(cells.size()) +
                                  " fields, header has " + std::to_string(header.size()),
                              starts[i]);
        }
        ManifestEntry e;
        e.path = cells[*path_col];
        if (!base_dir.empty() && std::filesystem::path(e.path).is_relative()) {
            e.path = (std::filesystem::path(base_dir) / e.path).string();
        }
        e.label = cells[*label_col];
        if (e.label.empty()) {
            throw parse_error("manifest line " + std::to_string(i + 1) + " has an empty label", starts[i]);
        }
        if (split_col) {
            const std::string &v = cells[*split_col];
            if (v == "train") {
                e.split = Split::train;
            } else if (v == "test") {
                e.split = Split::test;
            } else if (!v.empty()) {
                throw parse_error("manifest line " + std::to_string(i + 1) + ": split must be train or test, got '" +
                                      v + "'",
                                  starts[i]);
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ManifestEntry> read_manifest(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open manifest " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), std::filesystem::path(path).parent_path().string());
}

void assign_seeded_split(std::vector<ManifestEntry> &entries, std::size_t per_identity_train, std::uint64_t seed) {
    std::map<std::string, std::vector<std::size_t>> groups;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto [it, inserted] = groups.try_emplace(entries[i].label);
        if (inserted) {
            order.push_back(entries[i].label);
        }
        it->second.push_back(i);
    }
    Rng rng(seed);
    for (const std::string &label : order) {
        std::vector<std::size_t> &idx = groups[label];
        // Fisher-Yates with the portable generator
        for (std::size_t k = idx.size(); k > 1; --k) {
            std::swap(idx[k - 1], idx[rng.below(k)]);
        }
        const std::size_t take = idx.size() > per_identity_train ? per_identity_train : idx.size() - 1;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            entries[idx[k]].split = k < std::max<std::size_t>(take, 1) ? Split::train : Split::test;
        }
    }
}

Corpus load_corpus(const std::vector<ManifestEntry> &entries) {
    Corpus c;
    std::map<std::string, std::int64_t> ids;
    Eigen::Index h = -1;
    Eigen::Index w = -1;
    for (const auto &e : entries) {
        if (!e.split) {
            throw config_error("load_corpus: entry " + e.path + " has no split assigned");
        }
        const ColorImage img = load_image(e.path);
        if (h < 0) {
            h = img.height();
            w = img.width();
        } else if (img.height() != h || img.width() != w) {
            throw dimension_error("load_corpus: " + e.path + " is " + std::to_string(img.width()) + "x" +
                                  std::to_string(img.height()) + ", expected " + std::to_string(w) + "x" +
                                  std::to_string(h));
        }
        auto [it, inserted] = ids.try_emplace(e.label, static_cast<std::int64_t>(c.label_names.size()));
        if (inserted) {
            c.label_names.push_back(e.label);
        }
        FaceSet &dst = *e.split == Split::train ? c.train : c.test;
        dst.images.push_back(vectorize(img));
        dst.labels.push_back(it->second);
        if (*e.split == Split::test) {
            c.test_paths.push_back(e.path);
        }
    }
    return c;
}

std::vector<SyntheticFace> synthetic_faces(std::uint64_t seed, const SyntheticFaceConfig &cfg) {
    if (cfg.identities <= 0 || cfg.per_identity <= 0 || cfg.height <= 0 || cfg.width <= 0) {
        throw config_error("synthetic_faces: counts and sizes must be positive");
    }
    Rng rng(seed);
    const Eigen::Index hh = cfg.height;
    const Eigen::Index ww = cfg.width;
    auto gauss = [&](double cy, double cx, double sy, double sx) {
        RealMatrix m(hh, ww);
        for (Eigen::Index x = 0; x < ww; ++x) {
            for (Eigen::Index y = 0; y < hh; ++y) {
                const double dy = (static_cast<double>(y) / hh - cy) / sy;
                const double dx = (static_cast<double>(x) / ww - cx) / sx;
                m(y, x) = std::exp(-0.5 * (dx * dx + dy * dy));
            }
        }
        return m;
    };

    std::vector<SyntheticFace> out;
    for (int id = 0; id < cfg.identities; ++id) {
        std::array<double, 3> skin{rng.uniform(150, 230), rng.uniform(100, 180), rng.uniform(70, 150)};
        const RealMatrix oval = gauss(0.5, 0.5, rng.uniform(0.25, 0.38), rng.uniform(0.2, 0.32));
        const double eye_y = rng.uniform(0.32, 0.45);
        const double eye_dx = rng.uniform(0.14, 0.24);
        const RealMatrix eyes = gauss(eye_y, 0.5 - eye_dx, 0.05, 0.06) + gauss(eye_y, 0.5 + eye_dx, 0.05, 0.06);
        const RealMatrix mouth = gauss(rng.uniform(0.68, 0.78), 0.5, 0.04, rng.uniform(0.1, 0.18));
        const RealMatrix hair = gauss(0.05, 0.5, rng.uniform(0.1, 0.2), 0.5);
        std::array<double, 3> hair_c{rng.uniform(10, 120), rng.uniform(10, 90), rng.uniform(10, 70)};
        std::array<RealMatrix, 3> base;
        std::array<RealMatrix, 3> expr;
        for (int c = 0; c < 3; ++c) {
            base[c] = skin[c] * oval + hair_c[c] * hair + 20.0 * eyes;
            expr[c] = (0.6 * skin[c]) * mouth + (0.3 * skin[c]) * eyes;
        }
        for (int k = 0; k < cfg.per_identity; ++k) {
            const double a = rng.uniform(0.0, cfg.expression);
            const double gain = rng.uniform(1.0 - cfg.illumination, 1.0 + cfg.illumination);
            // scale keeps the brightest pixel below 255 so clamping never breaks the two-term structure
            const double peak = std::max({(base[0] + a * expr[0]).maxCoeff(), (base[1] + a * expr[1]).maxCoeff(),
                                          (base[2] + a * expr[2]).maxCoeff()});
            const double s = std::min(gain, 250.0 / peak);
            out.push_back({ColorImage(s * (base[0] + a * expr[0]), s * (base[1] + a * expr[1]),
                                      s * (base[2] + a * expr[2])),
                           id});
        }
    }
    return out;
}

void write_corpus(const std::vector<SyntheticFace> &faces, const std::string &dir, std::size_t per_identity_train) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(std::filesystem::path(dir) / "manifest.csv", std::ios::binary);
    if (!manifest) {
        throw io_error("cannot write manifest in " + dir);
    }
    manifest << "path,label,split\n";
    std::map<std::int64_t, std::size_t> seen;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const std::size_t k = seen[faces[i].label]++;
        char name[64];
        std::snprintf(name, sizeof name, "id%03lld_%03zu.ppm", static_cast<long long>(faces[i].label), k);
        save_image(faces[i].image, (std::filesystem::path(dir) / name).string());
        manifest << name << ",id" << faces[i].label << ',' << (k < per_identity_train ? "train" : "test") << '\n';
    }
}

}  // namespace quatfact
