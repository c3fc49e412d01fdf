#include "gkesn/cli/manifest.hpp"

#include <fstream>
#include <sstream>

#include "gkesn/errors.hpp"
#include "gkesn/store/text.hpp"

namespace gkesn::cli {

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw ValidationError("manifest key '" + key + "': expected 0/1/true/false, got '" +
                          value + "'");
}

}  // namespace

void RunManifest::apply(const std::string& key, const std::string& value) {
    using store::parse_double;
    using store::parse_u64;
    try {
        if (key == "L") {
            length = parse_double(value);
        } else if (key == "gamma") {
            gamma = parse_double(value);
        } else if (key == "nx") {
            nx = parse_u64(value);
        } else if (key == "dt") {
            dt = parse_double(value);
        } else if (key == "dt_sample") {
            dt_sample = parse_double(value);
        } else if (key == "n_traj") {
            n_traj = parse_u64(value);
        } else if (key == "n_train") {
            n_train = parse_u64(value);
        } else if (key == "lyapunov_times") {
            lyapunov_times = parse_double(value);
        } else if (key == "transient") {
            transient = parse_double(value);
        } else if (key == "reservoir_size") {
            reservoir_size = parse_u64(value);
        } else if (key == "beta1") {
            beta1 = parse_double(value);
        } else if (key == "beta2") {
            beta2 = parse_double(value);
        } else if (key == "density") {
            density = parse_double(value);
        } else if (key == "mu") {
            mu = parse_double(value);
        } else if (key == "washout") {
            washout = parse_u64(value);
        } else if (key == "quadratic_features") {
            quadratic_features = parse_bool(key, value);
        } else if (key == "spinup") {
            spinup = parse_u64(value);
        } else if (key == "predict_lyapunov_times") {
            predict_lyapunov_times = parse_double(value);
        } else if (key == "threshold") {
            threshold = parse_double(value);
        } else if (key == "alpha") {
            alpha = parse_double(value);
        } else if (key == "tl_level") {
            tl_level = parse_double(value);
        } else if (key == "band_lo") {
            band_lo = parse_u64(value);
        } else if (key == "band_hi") {
            band_hi = parse_u64(value);
        } else if (key == "seed") {
            seed = parse_u64(value);
        } else if (key == "threads") {
            threads = static_cast<int>(parse_u64(value));
        } else if (key == "out") {
            out = value;
        } else if (key == "dataset") {
            dataset = value;
        } else if (key == "model") {
            model = value;
        } else if (key == "source_model") {
            source_model = value;
        } else {
            throw ValidationError("unknown manifest key '" + key + "'");
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError("manifest key '" + key + "': " + e.what());
    }
}

KeyValueFile read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");

    KeyValueFile file;
    file.raw = buf.str();

    std::istringstream lines(file.raw);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed(store::trim(line));
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("'" + path.string() + "' line " + std::to_string(line_no) +
                                  ": expected key = value");
        }
        const std::string key(store::trim(std::string_view(trimmed).substr(0, eq)));
        const std::string value(store::trim(std::string_view(trimmed).substr(eq + 1)));
        if (key.empty()) {
            throw ValidationError("'" + path.string() + "' line " + std::to_string(line_no) +
                                  ": empty key");
        }
        if (!file.entries.emplace(key, value).second) {
            throw ValidationError("'" + path.string() + "' line " + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'");
        }
    }
    return file;
}

RunManifest load_manifest(const std::filesystem::path& path) {
    const KeyValueFile file = read_key_value_file(path);
    RunManifest manifest;
    for (const auto& [key, value] : file.entries) manifest.apply(key, value);
    return manifest;
}

}  // namespace gkesn::cli
