#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gkesn/cli/commands.hpp"
#include "gkesn/cli/manifest.hpp"
#include "gkesn/errors.hpp"

int main(int argc, char** argv) {
    using namespace gkesn;
    cli::RunManifest m;

    // The manifest file is applied before the flag values so that explicit
    // flags override it (defaults < manifest < flags).
    std::string manifest_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const std::string prefix = "--manifest=";
        if (arg == "--manifest" && i + 1 < argc) {
            manifest_path = argv[i + 1];
        } else if (arg.rfind(prefix, 0) == 0) {
            manifest_path = arg.substr(prefix.size());
        }
    }
    try {
        if (!manifest_path.empty()) m = cli::load_manifest(manifest_path);
    } catch (const ValidationError& e) {
        std::cerr << "error (validation): " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return 4;
    }

    CLI::App app{
        "Semi-implicit simulation of a dispersive fourth-order PDE on a periodic domain,\n"
        "reservoir-computing forecasts of its long-term statistics, and closed-form\n"
        "transfer of a trained model across domain regimes."};
    app.fallthrough();
    app.set_version_flag("--version", "gkesn 0.1.0");

    std::string manifest_opt;
    app.add_option("--manifest", manifest_opt, "key = value settings file (flags override it)");
    app.add_option("--seed", m.seed, "master seed for every random draw");
    app.add_option("--threads", m.threads, "worker threads, 0 = hardware concurrency");
    app.add_option("--out", m.out, "output directory");

    app.add_option("--L", m.length, "domain length");
    app.add_option("--gamma", m.gamma, "dispersion coefficient");
    app.add_option("--nx", m.nx, "grid points");
    app.add_option("--dt", m.dt, "integration step");
    app.add_option("--dt-sample", m.dt_sample, "snapshot cadence");
    app.add_option("--n-traj", m.n_traj, "trajectories to simulate");
    app.add_option("--n-train", m.n_train, "leading trajectories reserved for training");
    app.add_option("--lyapunov-times", m.lyapunov_times, "recorded window per trajectory");
    app.add_option("--transient", m.transient, "discarded start-up window (time units)");

    app.add_option("--reservoir-size", m.reservoir_size, "reservoir dimension D");
    app.add_option("--beta1", m.beta1, "input weight scale");
    app.add_option("--beta2", m.beta2, "recurrent spectral radius");
    app.add_option("--density", m.density, "recurrent nonzero fraction");
    app.add_option("--mu", m.mu, "ridge regularisation for readout fits");
    app.add_option("--washout", m.washout, "reservoir steps discarded before regression");
    app.add_option("--quadratic-features", m.quadratic_features,
                   "square even-position reservoir components (1/0)");

    app.add_option("--spinup", m.spinup, "teacher-forced snapshots before closed loop");
    app.add_option("--predict-lyapunov-times", m.predict_lyapunov_times,
                   "prediction window; 0 = as far as the data allows");
    app.add_option("--threshold", m.threshold, "normalised error defining the horizon");

    app.add_option("--alpha", m.alpha, "regularisation of the transfer correction");
    app.add_option("--tl-level", m.tl_level, "transfer data amount, percent of the training split");

    app.add_option("--band-lo", m.band_lo, "first wavenumber of the comparison band");
    app.add_option("--band-hi", m.band_hi, "last wavenumber of the comparison band");

    app.add_option("--dataset", m.dataset, "dataset directory (holds dataset.idx)");
    app.add_option("--model", m.model, "model directory (reservoir.gka + readout.gka)");
    app.add_option("--source-model", m.source_model, "source model directory for transfer");

    app.add_subcommand("simulate", "generate a trajectory dataset");
    app.add_subcommand("train", "build a reservoir and fit its readout");
    app.add_subcommand("predict", "closed-loop prediction on the held-out split");
    app.add_subcommand("transfer", "move a trained readout to a new regime");
    app.add_subcommand("info", "print domain stability landmarks");
    auto* cmp = app.add_subcommand("compare", "tabulate and score saved spectra");
    std::vector<std::string> files;
    cmp->add_option("files", files, "spectrum artifacts; the first is the reference");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    return cli::dispatch(command, m, files, std::cout, std::cerr);
}
