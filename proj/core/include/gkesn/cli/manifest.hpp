#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace gkesn::cli {

/// Resolved run configuration. Precedence is defaults < manifest file < CLI
/// flags; this struct holds the final values the commands consume.
struct RunManifest {
    // domain / dataset (consumed by simulate; downstream commands read the
    // domain back from the dataset they are given)
    double length = 22.0;
    double gamma = 0.0;
    std::uint64_t nx = 256;
    double dt = 1e-3;
    double dt_sample = 0.25;
    std::uint64_t n_traj = 30;
    std::uint64_t n_train = 20;
    double lyapunov_times = 1000.0;  // recorded window per trajectory
    double transient = 100.0;        // discarded start-up window (time units)

    // reservoir
    std::uint64_t reservoir_size = 5000;
    double beta1 = 0.01;
    double beta2 = 0.1;
    double density = 0.02;
    double mu = 5e-6;
    std::uint64_t washout = 100;
    bool quadratic_features = true;

    // prediction
    std::uint64_t spinup = 100;          // teacher-forced snapshots
    double predict_lyapunov_times = 0.0; // 0 = predict as far as truth allows
    double threshold = 0.5;              // horizon error threshold

    // transfer
    double alpha = 0.005;
    double tl_level = 10.0;  // percent of the target training split

    // compare
    std::uint64_t band_lo = 1;
    std::uint64_t band_hi = 8;

    // plumbing
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "out";
    std::string dataset;       // directory holding dataset.idx
    std::string model;         // directory holding reservoir.gka + readout.gka
    std::string source_model;  // transfer: directory of the source model

    /// Set one field from its manifest key. Throws ValidationError for
    /// unknown keys or unparsable values.
    void apply(const std::string& key, const std::string& value);
};

/// A parsed key = value file (# starts a comment, blank lines ignored).
struct KeyValueFile {
    std::map<std::string, std::string> entries;
    std::string raw;  // exact file bytes, for content digests
};

KeyValueFile read_key_value_file(const std::filesystem::path& path);

/// Defaults overlaid with the manifest file at path.
RunManifest load_manifest(const std::filesystem::path& path);

}  // namespace gkesn::cli
