#include "gkesn/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "gkesn/errors.hpp"
#include "gkesn/esn/predict.hpp"
#include "gkesn/esn/reservoir.hpp"
#include "gkesn/esn/training.hpp"
#include "gkesn/esn/transfer.hpp"
#include "gkesn/gks/domain.hpp"
#include "gkesn/gks/solver.hpp"
#include "gkesn/numerics/parallel.hpp"
#include "gkesn/numerics/rng.hpp"
#include "gkesn/stats/horizon.hpp"
#include "gkesn/stats/spectrum.hpp"
#include "gkesn/stats/stability.hpp"
#include "gkesn/store/artifact.hpp"
#include "gkesn/store/csv.hpp"
#include "gkesn/store/text.hpp"

namespace gkesn::cli {

namespace fs = std::filesystem;

namespace {

using store::digest_hex;
using store::format_double;
using store::format_u64;

// ---- small file helpers -----------------------------------------------------

fs::path ensure_out_dir(const std::string& out) {
    if (out.empty()) throw ValidationError("output directory must not be empty");
    const fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return buf.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string traj_name(std::uint64_t i) {
    std::string digits = std::to_string(i);
    if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
    return "traj_" + digits;
}

std::string bool_text(bool b) { return b ? "1" : "0"; }

// ---- dataset index ------------------------------------------------------------

/// Parsed dataset.idx: the generation parameters plus the trajectory files,
/// identified by the content digest of the index itself.
struct DatasetIndex {
    gks::DomainConfig config;
    std::uint64_t n_traj = 0;
    std::uint64_t n_train = 0;
    double lyapunov_times = 0.0;
    double transient = 0.0;
    double t_record = 0.0;
    std::string manifest_digest;
    std::vector<fs::path> files;
    std::string digest;

    std::uint64_t expected_snapshots() const {
        return static_cast<std::uint64_t>(std::floor(t_record / config.dt_sample)) + 1;
    }
};

std::string simulate_op(const RunManifest& m) {
    return "op=simulate;L=" + format_double(m.length) + ";gamma=" + format_double(m.gamma) +
           ";nx=" + format_u64(m.nx) + ";dt=" + format_double(m.dt) +
           ";dt_sample=" + format_double(m.dt_sample) + ";seed=" + format_u64(m.seed) +
           ";n_traj=" + format_u64(m.n_traj) + ";n_train=" + format_u64(m.n_train) +
           ";lyapunov_times=" + format_double(m.lyapunov_times) +
           ";transient=" + format_double(m.transient);
}

std::string dataset_index_text(const RunManifest& m, double t_record,
                               const std::string& manifest_digest) {
    std::ostringstream out;
    out << "# trajectory dataset index\n";
    out << "op = simulate\n";
    out << "manifest_digest = " << manifest_digest << "\n";
    out << "L = " << format_double(m.length) << "\n";
    out << "gamma = " << format_double(m.gamma) << "\n";
    out << "nx = " << format_u64(m.nx) << "\n";
    out << "dt = " << format_double(m.dt) << "\n";
    out << "dt_sample = " << format_double(m.dt_sample) << "\n";
    out << "seed = " << format_u64(m.seed) << "\n";
    out << "n_traj = " << format_u64(m.n_traj) << "\n";
    out << "n_train = " << format_u64(m.n_train) << "\n";
    out << "lyapunov_times = " << format_double(m.lyapunov_times) << "\n";
    out << "transient = " << format_double(m.transient) << "\n";
    out << "t_record = " << format_double(t_record) << "\n";
    for (std::uint64_t i = 0; i < m.n_traj; ++i) {
        out << traj_name(i) << " = " << traj_name(i) << ".gka\n";
    }
    return out.str();
}

DatasetIndex load_dataset_index(const std::string& dataset_dir) {
    if (dataset_dir.empty()) throw ValidationError("a dataset directory is required (dataset=...)");
    const fs::path dir(dataset_dir);
    const fs::path index_path = dir / "dataset.idx";

    KeyValueFile file;
    try {
        file = read_key_value_file(index_path);
    } catch (const ValidationError& e) {
        throw IoError(std::string("dataset index: ") + e.what());
    }

    auto required = [&](const std::string& key) -> const std::string& {
        auto it = file.entries.find(key);
        if (it == file.entries.end()) {
            throw IoError("dataset index '" + index_path.string() + "': missing key '" + key +
                          "'");
        }
        return it->second;
    };

    DatasetIndex ds;
    try {
        if (required("op") != "simulate") {
            throw IoError("dataset index '" + index_path.string() +
                          "': op is not 'simulate'");
        }
        ds.manifest_digest = required("manifest_digest");
        ds.config.length = store::parse_double(required("L"));
        ds.config.gamma = store::parse_double(required("gamma"));
        ds.config.nx = store::parse_u64(required("nx"));
        ds.config.dt = store::parse_double(required("dt"));
        ds.config.dt_sample = store::parse_double(required("dt_sample"));
        ds.config.seed = store::parse_u64(required("seed"));
        ds.n_traj = store::parse_u64(required("n_traj"));
        ds.n_train = store::parse_u64(required("n_train"));
        ds.lyapunov_times = store::parse_double(required("lyapunov_times"));
        ds.transient = store::parse_double(required("transient"));
        ds.t_record = store::parse_double(required("t_record"));
        ds.config.validate();
    } catch (const ValidationError& e) {
        throw IoError("dataset index '" + index_path.string() + "': " + e.what());
    }
    if (ds.n_traj == 0 || ds.n_train == 0 || ds.n_train > ds.n_traj) {
        throw IoError("dataset index '" + index_path.string() + "': invalid split n_train=" +
                      format_u64(ds.n_train) + ", n_traj=" + format_u64(ds.n_traj));
    }
    for (std::uint64_t i = 0; i < ds.n_traj; ++i) {
        ds.files.push_back(dir / required(traj_name(i)));
    }
    ds.digest = digest_hex(file.raw);
    return ds;
}

/// Exact-match check of a loaded trajectory against the dataset index it was
/// listed in (all values round-trip losslessly, so equality is exact).
void check_trajectory(const DatasetIndex& ds, const gks::Trajectory& traj,
                      std::uint64_t index) {
    const auto& c = traj.config;
    const bool config_ok = c.length == ds.config.length && c.gamma == ds.config.gamma &&
                           c.nx == ds.config.nx && c.dt == ds.config.dt &&
                           c.dt_sample == ds.config.dt_sample;
    if (!config_ok) {
        throw IoError("trajectory '" + ds.files[index].string() +
                      "' does not match its dataset index (domain parameters differ)");
    }
    if (traj.snapshots.cols() != ds.expected_snapshots()) {
        throw IoError("trajectory '" + ds.files[index].string() + "' holds " +
                      format_u64(traj.snapshots.cols()) + " snapshots, index expects " +
                      format_u64(ds.expected_snapshots()));
    }
}

// ---- model loading ------------------------------------------------------------

struct LoadedModel {
    esn::Reservoir reservoir;
    esn::ReadoutModel readout;
    std::string digest;  // content digest of reservoir.gka + readout.gka
    fs::path reservoir_path;
    fs::path readout_path;
};

std::string model_digest(const fs::path& reservoir_path, const fs::path& readout_path) {
    return digest_hex(read_file_bytes(reservoir_path) + read_file_bytes(readout_path));
}

LoadedModel load_model(const std::string& dir_str, const char* which) {
    if (dir_str.empty()) {
        throw ValidationError(std::string("a ") + which + " directory is required");
    }
    const fs::path dir(dir_str);
    const fs::path rpath = dir / "reservoir.gka";
    const fs::path opath = dir / "readout.gka";
    esn::Reservoir reservoir = store::load_reservoir(rpath);
    esn::ReadoutModel readout = store::load_readout(opath);
    if (readout.w_out.cols() != reservoir.size() || readout.w_out.rows() != reservoir.n_in()) {
        throw IoError("model in '" + dir.string() + "': readout is " +
                      format_u64(readout.w_out.rows()) + " x " +
                      format_u64(readout.w_out.cols()) + " but the reservoir has D = " +
                      format_u64(reservoir.size()) + ", inputs = " +
                      format_u64(reservoir.n_in()));
    }
    std::string digest = model_digest(rpath, opath);
    return {std::move(reservoir), std::move(readout), std::move(digest), rpath, opath};
}

// ---- shared training/accumulation ----------------------------------------------

/// Fold trajectories [first, first+count) of ds into one statistics
/// accumulator. Work is parallel per trajectory; partial accumulators are
/// merged in index order, so the result is identical for every thread count.
esn::TrainingAccumulator accumulate_split(const esn::Reservoir& reservoir,
                                          const DatasetIndex& ds, std::uint64_t first,
                                          std::uint64_t count, int workers) {
    esn::TrainingAccumulator master(reservoir.size(), reservoir.n_in());
    const auto batch = static_cast<std::uint64_t>(std::max(workers, 1));
    for (std::uint64_t start = 0; start < count; start += batch) {
        const std::uint64_t b = std::min(batch, count - start);
        std::vector<std::unique_ptr<esn::TrainingAccumulator>> partial(b);
        numerics::parallel_for(static_cast<std::size_t>(b), workers, [&](std::size_t i) {
            const std::uint64_t t = first + start + i;
            const gks::Trajectory traj = store::load_trajectory(ds.files[t]);
            check_trajectory(ds, traj, t);
            esn::Reservoir worker(reservoir);
            partial[i] =
                std::make_unique<esn::TrainingAccumulator>(reservoir.size(), reservoir.n_in());
            esn::accumulate_trajectory(worker, *partial[i], traj);
        });
        for (auto& p : partial) master.merge(*p);
    }
    return master;
}

// ---- shared closed-loop prediction ----------------------------------------------

struct PredictionRun {
    stats::Spectrum reference;            // truth spectrum over the compared window
    stats::Spectrum model;                // model spectrum over the same window
    std::vector<std::uint64_t> traj_indices;
    std::vector<double> horizons;         // per trajectory, Lyapunov times
    std::uint64_t n_steps = 0;            // compared columns per trajectory
    bool degenerate = false;              // spin-up-only fallback (n_steps == 0)
};

numerics::DenseMatrix slice_columns(const numerics::DenseMatrix& m, std::size_t first,
                                    std::size_t count) {
    numerics::DenseMatrix out(m.rows(), count);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < count; ++j) out(i, j) = m(i, first + j);
    }
    return out;
}

PredictionRun run_closed_loop(const esn::Reservoir& reservoir, const esn::ReadoutModel& readout,
                              const DatasetIndex& ds, const RunManifest& m, double lambda,
                              int workers) {
    if (m.spinup == 0) throw ValidationError("spinup must be at least 1 snapshot");
    if (!(m.threshold > 0.0) || !std::isfinite(m.threshold)) {
        throw ValidationError("threshold must be a positive finite number");
    }
    if (ds.n_train >= ds.n_traj) {
        throw ValidationError("dataset has no held-out trajectories (n_train = n_traj = " +
                              format_u64(ds.n_traj) + ")");
    }
    const std::uint64_t expected = ds.expected_snapshots();
    if (expected < m.spinup) {
        throw ValidationError("trajectories hold " + format_u64(expected) +
                              " snapshots but spin-up asks for " + format_u64(m.spinup));
    }

    const std::uint64_t available = expected - m.spinup;
    std::uint64_t n_steps = available;
    if (m.predict_lyapunov_times > 0.0) {
        if (!std::isfinite(m.predict_lyapunov_times)) {
            throw ValidationError("predict_lyapunov_times must be finite");
        }
        const double steps_f = m.predict_lyapunov_times / (lambda * ds.config.dt_sample);
        n_steps = std::min(available, static_cast<std::uint64_t>(std::floor(steps_f)));
    }

    const auto n_predict = static_cast<std::size_t>(ds.n_traj - ds.n_train);
    std::vector<stats::SpectrumAccumulator> ref_acc;
    std::vector<stats::SpectrumAccumulator> model_acc;
    ref_acc.reserve(n_predict);
    model_acc.reserve(n_predict);
    for (std::size_t i = 0; i < n_predict; ++i) {
        ref_acc.emplace_back(ds.config.nx);
        model_acc.emplace_back(ds.config.nx);
    }
    std::vector<double> horizons(n_predict, 0.0);

    numerics::parallel_for(n_predict, workers, [&](std::size_t i) {
        const std::uint64_t t = ds.n_train + i;
        const gks::Trajectory traj = store::load_trajectory(ds.files[t]);
        check_trajectory(ds, traj, t);
        const auto spin =
            slice_columns(traj.snapshots, 0, static_cast<std::size_t>(m.spinup));
        if (n_steps == 0) {
            // Nothing to predict: fall back to the spin-up window so the
            // spectra are still defined, and mark the run degenerate.
            ref_acc[i].add_snapshots(spin);
            model_acc[i].add_snapshots(spin);
            return;
        }
        const auto truth = slice_columns(traj.snapshots, static_cast<std::size_t>(m.spinup),
                                         static_cast<std::size_t>(n_steps));
        esn::Reservoir worker(reservoir);
        const numerics::DenseMatrix pred =
            esn::predict(worker, readout, spin, static_cast<std::size_t>(n_steps));
        ref_acc[i].add_snapshots(truth);
        model_acc[i].add_snapshots(pred);
        horizons[i] =
            stats::nrmse_horizon(pred, truth, ds.config.dt_sample, lambda, m.threshold);
    });

    stats::SpectrumAccumulator ref_total(ds.config.nx);
    stats::SpectrumAccumulator model_total(ds.config.nx);
    for (std::size_t i = 0; i < n_predict; ++i) {
        ref_total.merge(ref_acc[i]);
        model_total.merge(model_acc[i]);
    }

    PredictionRun run;
    run.reference = ref_total.finalize();
    run.model = model_total.finalize();
    run.n_steps = n_steps;
    run.degenerate = (n_steps == 0);
    for (std::size_t i = 0; i < n_predict; ++i) {
        run.traj_indices.push_back(ds.n_train + i);
    }
    if (!run.degenerate) run.horizons = std::move(horizons);
    return run;
}

// ---- provenance strings ---------------------------------------------------------

std::string predict_op(const DatasetIndex& ds, const std::string& model_digest_hex,
                       std::uint64_t spinup, const PredictionRun& run) {
    std::string op = "op=predict;dataset=" + ds.digest + ";model=" + model_digest_hex +
                     ";spinup=" + format_u64(spinup) + ";steps=" + format_u64(run.n_steps);
    if (run.degenerate) op += ";degenerate=spinup_only";
    return op;
}

std::string reference_op(const DatasetIndex& ds, std::uint64_t spinup,
                         const PredictionRun& run) {
    std::string op = "op=reference_spectrum;dataset=" + ds.digest +
                     ";spinup=" + format_u64(spinup) + ";steps=" + format_u64(run.n_steps);
    if (run.degenerate) op += ";degenerate=spinup_only";
    return op;
}

// ---- spectrum/horizon output ------------------------------------------------------

void write_spectrum_outputs(const fs::path& dir, const std::string& stem,
                            const stats::Spectrum& s, const std::string& op,
                            const std::string& source_tag, const DatasetIndex& ds,
                            bool degenerate, std::ostream& log) {
    store::MetaMap meta{{"provenance", op},
                       {"source", source_tag},
                       {"L", format_double(ds.config.length)},
                       {"gamma", format_double(ds.config.gamma)},
                       {"dt_sample", format_double(ds.config.dt_sample)}};
    if (degenerate) meta.emplace("degenerate", "spinup_only");
    store::save_spectrum(dir / (stem + ".gka"), s, meta);

    std::vector<std::string> lines{op, "source = " + source_tag,
                                   "L = " + format_double(ds.config.length) +
                                       "; gamma = " + format_double(ds.config.gamma),
                                   "samples = " + format_u64(s.n_samples)};
    if (degenerate) lines.push_back("degenerate = spinup_only");
    store::export_spectrum_csv(dir / (stem + ".csv"), s, lines);
    log << "wrote " << (dir / (stem + ".gka")).string() << " (+ .csv)\n";
}

void write_horizons_csv(const fs::path& path, const std::string& op, double lambda,
                        const DatasetIndex& ds, double threshold, const PredictionRun& run,
                        std::ostream& log) {
    std::ostringstream text;
    text << "# " << op << "\n";
    text << "# lambda_max = " << format_double(lambda)
         << "; dt_sample = " << format_double(ds.config.dt_sample)
         << "; threshold = " << format_double(threshold)
         << "; window_steps = " << format_u64(run.n_steps) << "\n";
    if (run.degenerate) text << "# no prediction steps; horizons unavailable\n";
    text << "trajectory,horizon_lyapunov\n";
    for (std::size_t i = 0; i < run.horizons.size(); ++i) {
        text << format_u64(run.traj_indices[i]) << "," << format_double(run.horizons[i])
             << "\n";
    }
    write_text_file(path, text.str());
    log << "wrote " << path.string() << "\n";
}

// ---- spectrum discrepancy helpers --------------------------------------------------

void validate_band(std::uint64_t lo, std::uint64_t hi, std::uint64_t nx) {
    const std::uint64_t k_max = nx / 2;
    if (lo < 1 || hi < lo || hi > k_max) {
        throw ValidationError("band " + format_u64(lo) + ".." + format_u64(hi) +
                              " is not inside 1.." + format_u64(k_max));
    }
}

/// Mean |log10 e_k(a) - log10 e_k(b)| over k in [lo, hi]; empty when any bin
/// in the band is nonpositive (the logarithm is undefined there).
std::optional<double> band_mean_abs_log10(const stats::Spectrum& a, const stats::Spectrum& b,
                                          std::uint64_t lo, std::uint64_t hi) {
    double sum = 0.0;
    for (std::uint64_t k = lo; k <= hi; ++k) {
        const double ea = a.e[static_cast<std::size_t>(k)];
        const double eb = b.e[static_cast<std::size_t>(k)];
        if (!(ea > 0.0) || !(eb > 0.0)) return std::nullopt;
        sum += std::abs(std::log10(ea) - std::log10(eb));
    }
    return sum / static_cast<double>(hi - lo + 1);
}

std::string optional_text(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("n/a");
}

std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

/// One comparison row of a prediction run against its reference spectrum.
struct RunScore {
    double energy_error = 0.0;
    std::optional<double> band_error;
    std::optional<double> horizon_mean;
};

RunScore score_run(const PredictionRun& run, const RunManifest& m) {
    RunScore s;
    s.energy_error = stats::relative_energy_error(run.model, run.reference);
    s.band_error = band_mean_abs_log10(run.model, run.reference, m.band_lo, m.band_hi);
    s.horizon_mean = mean_of(run.horizons);
    return s;
}

}  // namespace

// ---- simulate ---------------------------------------------------------------------

void cmd_simulate(const RunManifest& m, std::ostream& log) {
    gks::DomainConfig config{.length = m.length,
                             .gamma = m.gamma,
                             .nx = m.nx,
                             .dt = m.dt,
                             .dt_sample = m.dt_sample,
                             .seed = m.seed};
    config.validate();
    if (m.n_traj == 0) throw ValidationError("n_traj must be at least 1");
    if (m.n_train == 0 || m.n_train > m.n_traj) {
        throw ValidationError("n_train must lie in 1..n_traj (got " + format_u64(m.n_train) +
                              " of " + format_u64(m.n_traj) + ")");
    }
    if (!(m.lyapunov_times > 0.0) || !std::isfinite(m.lyapunov_times)) {
        throw ValidationError("lyapunov_times must be a positive finite number");
    }
    if (!(m.transient >= 0.0) || !std::isfinite(m.transient)) {
        throw ValidationError("transient must be a non-negative finite number");
    }

    const stats::StabilitySummary stab = stats::stability_summary(m.length);
    const double t_record = m.lyapunov_times / stab.lyapunov_max;
    const std::string op = simulate_op(m);
    const std::string digest = digest_hex(op);
    const fs::path dir = ensure_out_dir(m.out);
    const int workers = numerics::resolve_threads(m.threads);

    const auto n_snap = static_cast<std::uint64_t>(std::floor(t_record / m.dt_sample)) + 1;
    log << "domain: L = " << format_double(m.length) << ", gamma = " << format_double(m.gamma)
        << ", nx = " << format_u64(m.nx) << "\n";
    log << "leading Lyapunov exponent " << format_double(stab.lyapunov_max) << " -> recording "
        << format_double(t_record) << " time units (" << format_double(m.lyapunov_times)
        << " Lyapunov times, " << format_u64(n_snap) << " snapshots) per trajectory\n";
    log << "trajectories: " << format_u64(m.n_traj) << " (training split "
        << format_u64(m.n_train) << "), transient " << format_double(m.transient)
        << " time units, seed " << format_u64(m.seed) << "\n";

    numerics::parallel_for(static_cast<std::size_t>(m.n_traj), workers, [&](std::size_t i) {
        // Mirrors generate_dataset exactly; saving inside the worker keeps
        // only `workers` trajectories in memory at a time.
        const std::uint64_t traj_seed = numerics::sub_seed(config.seed, i);
        numerics::Rng rng(traj_seed);
        gks::IcParams ic;
        const std::vector<double> u0 = gks::sample_initial_condition(config, rng, &ic);
        gks::Trajectory traj = gks::simulate(config, u0, m.transient, t_record);
        traj.ic = ic;
        traj.seed = traj_seed;
        store::save_trajectory(dir / (traj_name(i) + ".gka"), traj,
                               {{"manifest_digest", digest},
                                {"traj_index", format_u64(i)},
                                {"t_record", format_double(t_record)}});
    });

    write_text_file(dir / "dataset.idx", dataset_index_text(m, t_record, digest));
    log << "wrote " << (dir / "dataset.idx").string() << " and " << format_u64(m.n_traj)
        << " trajectory files (run digest " << digest << ")\n";
}

// ---- train ------------------------------------------------------------------------

namespace {

std::string train_op(const RunManifest& m, const DatasetIndex& ds) {
    return "op=train;dataset=" + ds.digest + ";reservoir_size=" + format_u64(m.reservoir_size) +
           ";beta1=" + format_double(m.beta1) + ";beta2=" + format_double(m.beta2) +
           ";density=" + format_double(m.density) + ";mu=" + format_double(m.mu) +
           ";washout=" + format_u64(m.washout) +
           ";quadratic_features=" + bool_text(m.quadratic_features) +
           ";seed=" + format_u64(m.seed);
}

esn::EsnConfig esn_config_from(const RunManifest& m) {
    esn::EsnConfig ec;
    ec.reservoir_size = m.reservoir_size;
    ec.beta1 = m.beta1;
    ec.beta2 = m.beta2;
    ec.density = m.density;
    ec.mu = m.mu;
    ec.seed = m.seed;
    ec.washout = m.washout;
    ec.quadratic_features = m.quadratic_features;
    ec.validate();
    return ec;
}

}  // namespace

void cmd_train(const RunManifest& m, std::ostream& log) {
    const DatasetIndex ds = load_dataset_index(m.dataset);
    const esn::EsnConfig ec = esn_config_from(m);
    const std::string op = train_op(m, ds);
    const std::string digest = digest_hex(op);
    const fs::path dir = ensure_out_dir(m.out);
    const int workers = numerics::resolve_threads(m.threads);

    log << "dataset " << ds.digest << ": " << format_u64(ds.n_traj) << " trajectories, training on "
        << format_u64(ds.n_train) << ", L = " << format_double(ds.config.length)
        << ", gamma = " << format_double(ds.config.gamma) << "\n";
    log << "reservoir: D = " << format_u64(ec.reservoir_size)
        << ", density = " << format_double(ec.density) << ", seed = " << format_u64(ec.seed)
        << "\n";

    esn::Reservoir reservoir = esn::build_reservoir(ec, static_cast<std::size_t>(ds.config.nx));
    esn::TrainingAccumulator acc = accumulate_split(reservoir, ds, 0, ds.n_train, workers);
    log << "accumulated " << format_u64(acc.sample_count()) << " training pairs\n";

    esn::ReadoutModel readout = esn::fit_readout(acc, m.mu);
    readout.provenance = op + ";samples=" + format_u64(acc.sample_count());

    const store::MetaMap extra{{"dataset", ds.digest}, {"manifest_digest", digest}};
    store::save_reservoir(dir / "reservoir.gka", reservoir, extra);
    store::save_readout(dir / "readout.gka", readout, ec.reservoir_size, extra);
    const std::string digest_files = model_digest(dir / "reservoir.gka", dir / "readout.gka");
    log << "wrote " << (dir / "reservoir.gka").string() << " and "
        << (dir / "readout.gka").string() << " (model digest " << digest_files << ")\n";
}

// ---- predict ----------------------------------------------------------------------

void cmd_predict(const RunManifest& m, std::ostream& log) {
    const DatasetIndex ds = load_dataset_index(m.dataset);
    const LoadedModel model = load_model(m.model, "model (model=...)");
    if (model.reservoir.n_in() != ds.config.nx) {
        throw ValidationError("model expects " + format_u64(model.reservoir.n_in()) +
                              " grid points, dataset has " + format_u64(ds.config.nx));
    }
    validate_band(m.band_lo, m.band_hi, ds.config.nx);
    const fs::path dir = ensure_out_dir(m.out);
    const int workers = numerics::resolve_threads(m.threads);
    const double lambda = stats::stability_summary(ds.config.length).lyapunov_max;

    const PredictionRun run =
        run_closed_loop(model.reservoir, model.readout, ds, m, lambda, workers);
    const std::string op = predict_op(ds, model.digest, m.spinup, run);
    const std::string ref_op = reference_op(ds, m.spinup, run);

    log << "dataset " << ds.digest << ": held-out trajectories " << format_u64(ds.n_train)
        << ".." << format_u64(ds.n_traj - 1) << ", L = " << format_double(ds.config.length)
        << ", gamma = " << format_double(ds.config.gamma) << "\n";
    log << "model " << model.digest << ": D = " << format_u64(model.reservoir.size())
        << ", inputs = " << format_u64(model.reservoir.n_in()) << "\n";
    log << "window: spin-up " << format_u64(m.spinup) << " snapshots, "
        << format_u64(run.n_steps) << " prediction steps = "
        << format_double(static_cast<double>(run.n_steps) * ds.config.dt_sample * lambda)
        << " Lyapunov times\n";
    if (run.degenerate) {
        log << "degenerate window: no prediction steps; spectra use the spin-up data only\n";
    }

    const RunScore score = score_run(run, m);
    log << "relative energy error: " << format_double(score.energy_error) << "\n";
    log << "band mean |dlog10 e_k|, k = " << format_u64(m.band_lo) << ".."
        << format_u64(m.band_hi) << ": " << optional_text(score.band_error) << "\n";
    if (!run.horizons.empty()) {
        log << "horizons (Lyapunov times):";
        for (double h : run.horizons) log << " " << format_double(h);
        log << " (mean " << optional_text(score.horizon_mean) << ")\n";
    }

    write_spectrum_outputs(dir, "spectrum_dns", run.reference, ref_op, "reference", ds,
                           run.degenerate, log);
    write_spectrum_outputs(dir, "spectrum_esn", run.model, op, "model", ds, run.degenerate,
                           log);
    write_horizons_csv(dir / "horizons.csv", op, lambda, ds, m.threshold, run, log);
}

// ---- transfer ---------------------------------------------------------------------

namespace {

std::string transfer_op(const RunManifest& m, const DatasetIndex& ds,
                        const std::string& source_digest, std::uint64_t tl_traj) {
    return "op=transfer;dataset=" + ds.digest + ";source=" + source_digest +
           ";alpha=" + format_double(m.alpha) + ";tl_level=" + format_double(m.tl_level) +
           ";tl_traj=" + format_u64(tl_traj) + ";mu=" + format_double(m.mu);
}

}  // namespace

void cmd_transfer(const RunManifest& m, std::ostream& log) {
    const DatasetIndex ds = load_dataset_index(m.dataset);
    const LoadedModel source = load_model(m.source_model, "source model (source_model=...)");
    if (source.reservoir.n_in() != ds.config.nx) {
        throw ValidationError("source model expects " + format_u64(source.reservoir.n_in()) +
                              " grid points, target dataset has " + format_u64(ds.config.nx));
    }
    if (!(m.tl_level >= 0.0) || !(m.tl_level <= 100.0)) {
        throw ValidationError("tl_level must lie in 0..100 (percent of the training split)");
    }
    if (!(m.alpha >= 0.0) || !std::isfinite(m.alpha)) {
        throw ValidationError("alpha must be a non-negative finite number");
    }
    validate_band(m.band_lo, m.band_hi, ds.config.nx);

    const fs::path dir = ensure_out_dir(m.out);
    const int workers = numerics::resolve_threads(m.threads);
    const double lambda = stats::stability_summary(ds.config.length).lyapunov_max;
    const auto tl_traj = static_cast<std::uint64_t>(
        std::llround(m.tl_level / 100.0 * static_cast<double>(ds.n_train)));
    const std::string op = transfer_op(m, ds, source.digest, tl_traj);
    const std::string digest = digest_hex(op);

    log << "source model " << source.digest << ": D = " << format_u64(source.reservoir.size())
        << ", inputs = " << format_u64(source.reservoir.n_in()) << "\n";
    log << "target dataset " << ds.digest << ": L = " << format_double(ds.config.length)
        << ", gamma = " << format_double(ds.config.gamma) << ", " << format_u64(ds.n_traj)
        << " trajectories (train " << format_u64(ds.n_train) << ", held out "
        << format_u64(ds.n_traj - ds.n_train) << ")\n";
    log << "transfer level " << format_double(m.tl_level) << "% -> " << format_u64(tl_traj)
        << " trajectories, alpha = " << format_double(m.alpha) << "\n";

    // Transfer statistics (empty at level 0).
    std::optional<esn::TrainingAccumulator> tl_acc;
    if (tl_traj > 0) {
        tl_acc.emplace(accumulate_split(source.reservoir, ds, 0, tl_traj, workers));
        log << "accumulated " << format_u64(tl_acc->sample_count()) << " transfer pairs\n";
    }

    // Transferred model; at level 0 the correction is identically zero and
    // the transfer is the identity: readout_tl.gka is the source readout
    // byte-for-byte, so every downstream artifact matches a plain predict
    // with the source model.
    const store::MetaMap extra{{"dataset", ds.digest},
                              {"source_model", source.digest},
                              {"tl_level", format_double(m.tl_level)},
                              {"tl_trajectories", format_u64(tl_traj)},
                              {"alpha", format_double(m.alpha)},
                              {"manifest_digest", digest}};
    esn::ReadoutModel tl_model = source.readout;
    if (tl_traj > 0) {
        tl_model = esn::transfer_update(source.readout, *tl_acc, m.alpha);
        tl_model.provenance += " | " + op + ";samples=" + format_u64(tl_acc->sample_count());
        store::save_readout(dir / "readout_tl.gka", tl_model, source.reservoir.size(), extra);
    } else {
        write_text_file(dir / "readout_tl.gka", read_file_bytes(source.readout_path));
    }
    const std::string tl_digest = digest_hex(read_file_bytes(source.reservoir_path) +
                                             read_file_bytes(dir / "readout_tl.gka"));
    log << "wrote " << (dir / "readout_tl.gka").string() << " (model digest " << tl_digest
        << ")\n";

    // Control: a readout fitted on the transfer data alone (same reservoir,
    // standard ridge fit). Only defined when there is transfer data.
    std::optional<esn::ReadoutModel> star;
    std::string star_digest;
    if (tl_traj > 0) {
        star = esn::fit_readout(*tl_acc, m.mu);
        star->provenance = "op=control_refit;dataset=" + ds.digest +
                           ";tl_traj=" + format_u64(tl_traj) + ";mu=" + format_double(m.mu) +
                           ";samples=" + format_u64(tl_acc->sample_count());
        store::MetaMap star_extra = extra;
        star_extra.emplace("control", "refit_on_transfer_data");
        store::save_readout(dir / "readout_star.gka", *star, source.reservoir.size(),
                            star_extra);
        star_digest = digest_hex(read_file_bytes(source.reservoir_path) +
                                 read_file_bytes(dir / "readout_star.gka"));
        log << "wrote " << (dir / "readout_star.gka").string() << " (model digest "
            << star_digest << ")\n";
    } else {
        log << "level 0: transferred readout equals the source readout; refit control skipped\n";
    }

    // Closed-loop runs: transferred model, frozen source model, refit control.
    const PredictionRun run_tl =
        run_closed_loop(source.reservoir, tl_model, ds, m, lambda, workers);
    const PredictionRun run_src =
        run_closed_loop(source.reservoir, source.readout, ds, m, lambda, workers);
    std::optional<PredictionRun> run_star;
    if (star) run_star = run_closed_loop(source.reservoir, *star, ds, m, lambda, workers);

    const RunScore s_tl = score_run(run_tl, m);
    const RunScore s_src = score_run(run_src, m);
    std::optional<RunScore> s_star;
    if (run_star) s_star = score_run(*run_star, m);

    log << "window: spin-up " << format_u64(m.spinup) << " snapshots, "
        << format_u64(run_tl.n_steps) << " prediction steps = "
        << format_double(static_cast<double>(run_tl.n_steps) * ds.config.dt_sample * lambda)
        << " Lyapunov times\n";
    if (run_tl.degenerate) {
        log << "degenerate window: no prediction steps; spectra use the spin-up data only\n";
    }
    auto row = [&](const char* name, const RunScore& s) {
        log << std::left << std::setw(18) << name << " energy_err " << std::setw(12)
            << format_double(s.energy_error) << " band |dlog10| " << std::setw(12)
            << optional_text(s.band_error) << " mean horizon " << optional_text(s.horizon_mean)
            << "\n";
    };
    row("transferred", s_tl);
    row("source(frozen)", s_src);
    if (s_star) row("refit(control)", *s_star);

    write_spectrum_outputs(dir, "spectrum_dns", run_tl.reference,
                           reference_op(ds, m.spinup, run_tl), "reference", ds,
                           run_tl.degenerate, log);
    write_spectrum_outputs(dir, "spectrum_esn_tl", run_tl.model,
                           predict_op(ds, tl_digest, m.spinup, run_tl), "model", ds,
                           run_tl.degenerate, log);
    write_spectrum_outputs(dir, "spectrum_source", run_src.model,
                           predict_op(ds, source.digest, m.spinup, run_src), "model", ds,
                           run_src.degenerate, log);
    if (run_star) {
        write_spectrum_outputs(dir, "spectrum_esn_star", run_star->model,
                               predict_op(ds, star_digest, m.spinup, *run_star), "model", ds,
                               run_star->degenerate, log);
    }

    write_horizons_csv(dir / "horizons_esn_tl.csv",
                       predict_op(ds, tl_digest, m.spinup, run_tl), lambda, ds, m.threshold,
                       run_tl, log);
    write_horizons_csv(dir / "horizons_source.csv",
                       predict_op(ds, source.digest, m.spinup, run_src), lambda, ds,
                       m.threshold, run_src, log);
    if (run_star) {
        write_horizons_csv(dir / "horizons_esn_star.csv",
                           predict_op(ds, star_digest, m.spinup, *run_star), lambda, ds,
                           m.threshold, *run_star, log);
    }
}

// ---- compare ----------------------------------------------------------------------

void cmd_compare(const RunManifest& m, const std::vector<std::string>& spectrum_paths,
                 std::ostream& log) {
    if (spectrum_paths.size() < 2) {
        throw ValidationError("compare needs at least two spectrum files (reference first)");
    }

    struct Entry {
        fs::path path;
        std::string name;
        stats::Spectrum spectrum;
        store::MetaMap meta;
    };
    std::vector<Entry> entries;
    for (const std::string& p : spectrum_paths) {
        Entry e;
        e.path = fs::path(p);
        e.spectrum = store::load_spectrum(e.path, &e.meta);
        e.name = e.path.stem().string();
        entries.push_back(std::move(e));
    }
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].spectrum.nx != entries[0].spectrum.nx) {
            throw ValidationError("'" + entries[i].path.string() + "' has nx = " +
                                  format_u64(entries[i].spectrum.nx) + ", reference has nx = " +
                                  format_u64(entries[0].spectrum.nx));
        }
        // Joined columns need distinct names.
        for (std::size_t j = 0; j < i; ++j) {
            if (entries[j].name == entries[i].name) {
                entries[i].name += "_" + std::to_string(i + 1);
                break;
            }
        }
    }
    validate_band(m.band_lo, m.band_hi, entries[0].spectrum.nx);

    const fs::path dir = ensure_out_dir(m.out);

    // Joined table.
    std::ostringstream joined;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        joined << "# " << i << ": " << entries[i].path.string();
        auto it = entries[i].meta.find("provenance");
        if (it != entries[i].meta.end()) joined << " (" << it->second << ")";
        joined << "\n";
    }
    joined << "k";
    for (const Entry& e : entries) joined << "," << e.name;
    joined << "\n";
    const std::size_t bins = entries[0].spectrum.e.size();
    for (std::size_t k = 0; k < bins; ++k) {
        joined << k;
        for (const Entry& e : entries) joined << "," << format_double(e.spectrum.e[k]);
        joined << "\n";
    }
    write_text_file(dir / "compare.csv", joined.str());
    log << "wrote " << (dir / "compare.csv").string() << "\n";

    // Pairwise summary against the first (reference) input.
    auto band_or_throw = [&](const Entry& a, const Entry& b) {
        const auto v = band_mean_abs_log10(a.spectrum, b.spectrum, m.band_lo, m.band_hi);
        if (!v) {
            throw ValidationError("band " + format_u64(m.band_lo) + ".." +
                                  format_u64(m.band_hi) +
                                  " contains a nonpositive bin in '" + a.path.string() +
                                  "' or '" + b.path.string() + "'");
        }
        return *v;
    };

    std::ostringstream summary;
    summary << "# reference: " << entries[0].path.string() << "\n";
    summary << "# band: k = " << format_u64(m.band_lo) << ".." << format_u64(m.band_hi)
            << "\n";
    summary << "file,total_energy,relative_energy_error,band_mean_abs_log10\n";
    log << "reference: " << entries[0].name << " (total energy "
        << format_double(stats::total_energy(entries[0].spectrum)) << ")\n";
    for (const Entry& e : entries) {
        const double energy = stats::total_energy(e.spectrum);
        const double rel = stats::relative_energy_error(e.spectrum, entries[0].spectrum);
        const double band = band_or_throw(e, entries[0]);
        summary << e.path.string() << "," << format_double(energy) << ","
                << format_double(rel) << "," << format_double(band) << "\n";
        if (&e != &entries[0]) {
            log << "  " << std::left << std::setw(24) << e.name << " energy_err "
                << std::setw(12) << format_double(rel) << " band |dlog10| "
                << format_double(band) << "\n";
        }
    }
    write_text_file(dir / "compare_summary.csv", summary.str());
    log << "wrote " << (dir / "compare_summary.csv").string() << "\n";
}

// ---- info -------------------------------------------------------------------------

void cmd_info(const RunManifest& m, std::ostream& log) {
    gks::DomainConfig config{.length = m.length,
                             .gamma = m.gamma,
                             .nx = m.nx,
                             .dt = m.dt,
                             .dt_sample = m.dt_sample,
                             .seed = m.seed};
    config.validate();
    const stats::StabilitySummary stab = stats::stability_summary(m.length);
    const double lyap_time = 1.0 / stab.lyapunov_max;
    const double t_record = m.lyapunov_times / stab.lyapunov_max;
    const auto n_snap = static_cast<std::uint64_t>(std::floor(t_record / m.dt_sample)) + 1;

    log << "domain: L = " << format_double(m.length) << ", gamma = " << format_double(m.gamma)
        << ", nx = " << format_u64(m.nx) << "\n";
    log << "linearly unstable modes: " << format_u64(stab.n_unstable) << "\n";
    log << "fastest-growing mode index: " << format_double(stab.marginal_mode) << "\n";
    log << "leading Lyapunov exponent: " << format_double(stab.lyapunov_max) << "\n";
    log << "Lyapunov time: " << format_double(lyap_time) << " time units = "
        << format_double(lyap_time / m.dt_sample) << " snapshots at dt_sample = "
        << format_double(m.dt_sample) << "\n";
    log << "next exponents from the spectrum fit: lambda_1 = "
        << format_double(stats::lyapunov_exponent(1.0, m.length)) << ", lambda_2 = "
        << format_double(stats::lyapunov_exponent(2.0, m.length)) << ", lambda_3 = "
        << format_double(stats::lyapunov_exponent(3.0, m.length)) << "\n";
    log << "window for " << format_double(m.lyapunov_times) << " Lyapunov times: "
        << format_double(t_record) << " time units = " << format_u64(n_snap)
        << " snapshots\n";
}

// ---- dispatch -----------------------------------------------------------------------

int dispatch(const std::string& command, const RunManifest& m,
             const std::vector<std::string>& args, std::ostream& log, std::ostream& err) {
    try {
        if (command != "compare" && !args.empty()) {
            throw ValidationError("command '" + command + "' takes no positional arguments (got '" +
                                  args.front() + "')");
        }
        if (command == "simulate") {
            cmd_simulate(m, log);
        } else if (command == "train") {
            cmd_train(m, log);
        } else if (command == "predict") {
            cmd_predict(m, log);
        } else if (command == "transfer") {
            cmd_transfer(m, log);
        } else if (command == "compare") {
            cmd_compare(m, args, log);
        } else if (command == "info") {
            cmd_info(m, log);
        } else {
            throw ValidationError("unknown command '" + command + "'");
        }
        return 0;
    } catch (const ValidationError& e) {
        err << "error (validation): " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "error (numerical): " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        err << "error (io): " << e.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& e) {
        err << "error (io): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gkesn::cli
