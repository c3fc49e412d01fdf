#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gkesn/cli/manifest.hpp"

namespace gkesn::cli {

/// Generate a trajectory dataset: traj_NNNN.gka files plus a dataset.idx
/// text index under manifest.out. The recorded window per trajectory is
/// lyapunov_times divided by the leading Lyapunov exponent of the domain.
void cmd_simulate(const RunManifest& m, std::ostream& log);

/// Build a reservoir and fit its readout on the training split of
/// manifest.dataset; writes reservoir.gka + readout.gka under manifest.out.
void cmd_train(const RunManifest& m, std::ostream& log);

/// Closed-loop prediction over the held-out split of manifest.dataset with
/// the model in manifest.model. Writes reference and model spectra
/// (.gka + .csv) and a per-trajectory horizon table under manifest.out.
void cmd_predict(const RunManifest& m, std::ostream& log);

/// Output-layer transfer of the model in manifest.source_model onto the
/// target regime of manifest.dataset, plus two controls: the untouched
/// source model and a readout fitted on the transfer data alone. Writes the
/// transferred readout, all spectra and horizon tables under manifest.out.
void cmd_transfer(const RunManifest& m, std::ostream& log);

/// Join two or more saved spectra into one table and summarise pairwise
/// discrepancies against the first (reference) input.
void cmd_compare(const RunManifest& m, const std::vector<std::string>& spectrum_paths,
                 std::ostream& log);

/// Print linear-stability landmarks and window bookkeeping for the domain
/// described by the manifest.
void cmd_info(const RunManifest& m, std::ostream& log);

/// Run one subcommand and map exceptions to process exit codes:
/// 0 success, 2 validation, 3 numerical failure, 4 I/O, 1 unexpected.
/// Positional arguments beyond the subcommand are only meaningful for
/// compare (the spectrum files).
int dispatch(const std::string& command, const RunManifest& m,
             const std::vector<std::string>& args, std::ostream& log, std::ostream& err);

}  // namespace gkesn::cli
