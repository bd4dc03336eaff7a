#pragma once

#include "quatfact/facerec.hpp"
#include "quatfact/imaging.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace quatfact {

enum class Split { train, test };

struct ManifestEntry {
    std::string path;  ///< resolved against the manifest's directory
    std::string label;
    std::optional<Split> split;
};

/// Reads `manifest.csv` with header columns path,label and optionally split
/// (values train|test). Column order is free; a missing required column is a
/// parse_error naming it.
std::vector<ManifestEntry> read_manifest(const std::string &path);
std::vector<ManifestEntry> parse_manifest(const std::string &text, const std::string &base_dir = "");

/// Per identity, draws `per_identity_train` entries for training (seeded
/// shuffle); the rest become test entries. Identities with fewer entries put
/// all but one into training.
void assign_seeded_split(std::vector<ManifestEntry> &entries, std::size_t per_identity_train, std::uint64_t seed);

/// Loaded corpus with labels mapped to dense identity indices in order of first appearance.
struct Corpus {
    FaceSet train;
    FaceSet test;
    std::vector<std::string> test_paths;
    std::vector<std::string> label_names;
};

/// Loads every image (all must share one size) and splits by the entries' split field.
Corpus load_corpus(const std::vector<ManifestEntry> &entries);

struct SyntheticFaceConfig {
    int identities = 10;
    int per_identity = 5;
    Eigen::Index height = 24;
    Eigen::Index width = 20;
    /// Amplitude of the per-image expression pattern relative to the identity pattern.
    double expression = 0.25;
    /// Illumination gain is drawn from [1 - illumination, 1 + illumination].
    double illumination = 0.2;
};

struct SyntheticFace {
    ColorImage image;
    std::int64_t label;
};

/// Face-like images: each identity owns a smooth non-negative base pattern
/// (oval skin tone, eyes, mouth) and an expression pattern; every image is
/// gain * (base + a * expression) with a and gain drawn per image. Images of
/// one identity therefore span at most two dimensions per channel, and the
/// values are not rounded.
std::vector<SyntheticFace> synthetic_faces(std::uint64_t seed, const SyntheticFaceConfig &cfg);

/// Writes the faces as PPM files plus manifest.csv (path,label,split) with
/// the first `per_identity_train` images of each identity marked train.
void write_corpus(const std::vector<SyntheticFace> &faces, const std::string &dir, std::size_t per_identity_train);

}  // namespace quatfact
