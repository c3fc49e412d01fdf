#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gkesn/cli/commands.hpp"
#include "gkesn/cli/manifest.hpp"
#include "gkesn/errors.hpp"
#include "gkesn/store/artifact.hpp"

using namespace gkesn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("gkesn_cli_test_" + std::to_string(++counter) + "_" +
                std::to_string(static_cast<unsigned long>(::getpid())));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << text;
}

/// Small-but-real run configuration: a few short trajectories on a coarse
/// grid with a small reservoir, sized so the whole pipeline finishes in
/// seconds.
cli::RunManifest tiny_manifest(const fs::path& out) {
    cli::RunManifest m;
    m.length = 22.0;
    m.nx = 32;
    m.dt = 2e-3;
    m.dt_sample = 0.1;
    m.n_traj = 3;
    m.n_train = 2;
    m.lyapunov_times = 1.0;
    m.transient = 0.5;
    m.reservoir_size = 60;
    m.density = 0.1;
    m.mu = 1e-5;
    m.washout = 5;
    m.spinup = 6;
    m.threshold = 0.5;
    m.alpha = 1e-4;
    m.band_lo = 1;
    m.band_hi = 8;
    m.seed = 11;
    m.threads = 1;
    m.out = out.string();
    return m;
}

int run(const std::string& command, const cli::RunManifest& m,
        const std::vector<std::string>& args = {}) {
    std::ostringstream log, err;
    const int code = cli::dispatch(command, m, args, log, err);
    if (code != 0) INFO("stderr: ", err.str());
    return code;
}

}  // namespace

// ---- manifest ---------------------------------------------------------------------------

TEST_CASE("manifest keys set their fields and reject junk") {
    cli::RunManifest m;
    m.apply("L", "35");
    m.apply("gamma", "-0.25");
    m.apply("nx", "128");
    m.apply("quadratic_features", "false");
    m.apply("tl_level", "62.5");
    m.apply("out", "results/run1");
    CHECK(m.length == 35.0);
    CHECK(m.gamma == -0.25);
    CHECK(m.nx == 128);
    CHECK(m.quadratic_features == false);
    CHECK(m.tl_level == 62.5);
    CHECK(m.out == "results/run1");

    m.apply("quadratic_features", "1");
    CHECK(m.quadratic_features == true);
    m.apply("quadratic_features", "0");
    CHECK(m.quadratic_features == false);

    CHECK_THROWS_AS(m.apply("no_such_key", "1"), ValidationError);
    CHECK_THROWS_AS(m.apply("L", "twenty"), ValidationError);
    CHECK_THROWS_AS(m.apply("nx", "-4"), ValidationError);
    CHECK_THROWS_AS(m.apply("quadratic_features", "maybe"), ValidationError);
}

TEST_CASE("manifest files overlay the defaults") {
    TempDir dir;
    const fs::path p = dir.path / "run.manifest";
    spit(p,
         "# comment line\n"
         "\n"
         "L = 35   # trailing comment\n"
         "  seed=42\n"
         "dataset = data/ks35\n");
    const auto m = cli::load_manifest(p);
    CHECK(m.length == 35.0);
    CHECK(m.seed == 42);
    CHECK(m.dataset == "data/ks35");
    CHECK(m.nx == 256);       // untouched default
    CHECK(m.dt_sample == 0.25);

    spit(p, "L = 22\nL = 29\n");
    CHECK_THROWS_AS(cli::load_manifest(p), ValidationError);
    spit(p, "just some words\n");
    CHECK_THROWS_AS(cli::load_manifest(p), ValidationError);
    spit(p, "= 3\n");
    CHECK_THROWS_AS(cli::load_manifest(p), ValidationError);
    spit(p, "bogus_key = 3\n");
    CHECK_THROWS_AS(cli::load_manifest(p), ValidationError);
    CHECK_THROWS_AS(cli::load_manifest(dir.path / "absent.manifest"), IoError);

    // raw bytes are preserved for digests
    spit(p, "L = 29\n");
    const auto kv = cli::read_key_value_file(p);
    CHECK(kv.raw == "L = 29\n");
    CHECK(kv.entries.at("L") == "29");
}

// ---- dispatch ---------------------------------------------------------------------------

TEST_CASE("dispatch maps failures to exit codes") {
    TempDir dir;
    auto m = tiny_manifest(dir.path / "out");

    std::ostringstream log, err;
    auto bad = m;
    bad.nx = 0;
    CHECK(cli::dispatch("simulate", bad, {}, log, err) == 2);
    CHECK(err.str().find("error (validation)") != std::string::npos);

    std::ostringstream log2, err2;
    auto missing = m;
    missing.dataset = (dir.path / "nowhere").string();
    CHECK(cli::dispatch("train", missing, {}, log2, err2) == 4);
    CHECK(err2.str().find("error (io)") != std::string::npos);

    // positional arguments are only valid for compare
    std::ostringstream log3, err3;
    CHECK(cli::dispatch("info", m, {"stray"}, log3, err3) == 2);

    std::ostringstream log4, err4;
    CHECK(cli::dispatch("compare", m, {"only_one.gka"}, log4, err4) == 2);
}

TEST_CASE("info summarises the domain") {
    TempDir dir;
    auto m = tiny_manifest(dir.path / "out");
    std::ostringstream log, err;
    CHECK(cli::dispatch("info", m, {}, log, err) == 0);
    CHECK(log.str().find("unstable") != std::string::npos);
    CHECK(err.str().empty());
}

// ---- pipeline ---------------------------------------------------------------------------

TEST_CASE("the full pipeline runs at toy scale and is reproducible") {
    TempDir dir;
    const fs::path data = dir.path / "data";
    auto m = tiny_manifest(data);

    // simulate -------------------------------------------------------------
    REQUIRE(run("simulate", m) == 0);
    REQUIRE(fs::exists(data / "dataset.idx"));
    for (const char* name : {"traj_0000.gka", "traj_0001.gka", "traj_0002.gka"}) {
        REQUIRE(fs::exists(data / name));
    }
    const auto traj = store::load_trajectory(data / "traj_0001.gka");
    CHECK(traj.config.nx == 32);
    CHECK(traj.snapshots.cols() == 92);  // floor((1/0.1097)/0.1) + 1

    // byte-for-byte reproducibility of every artifact
    const fs::path data2 = dir.path / "data_repeat";
    auto m2 = m;
    m2.out = data2.string();
    REQUIRE(run("simulate", m2) == 0);
    CHECK(slurp(data / "dataset.idx") == slurp(data2 / "dataset.idx"));
    for (const char* name : {"traj_0000.gka", "traj_0001.gka", "traj_0002.gka"}) {
        CHECK(slurp(data / name) == slurp(data2 / name));
    }

    // train ----------------------------------------------------------------
    const fs::path model = dir.path / "model";
    m.dataset = data.string();
    m.out = model.string();
    REQUIRE(run("train", m) == 0);
    REQUIRE(fs::exists(model / "reservoir.gka"));
    REQUIRE(fs::exists(model / "readout.gka"));
    const auto readout = store::load_readout(model / "readout.gka");
    CHECK(readout.w_out.rows() == 32);
    CHECK(readout.w_out.cols() == 60);
    CHECK(readout.mu == 1e-5);
    CHECK(readout.provenance.find("op=train") != std::string::npos);

    // predict ----------------------------------------------------------------
    const fs::path pred = dir.path / "pred";
    m.model = model.string();
    m.out = pred.string();
    REQUIRE(run("predict", m) == 0);
    for (const char* name : {"spectrum_dns.gka", "spectrum_esn.gka", "spectrum_dns.csv",
                             "spectrum_esn.csv", "horizons.csv"}) {
        REQUIRE(fs::exists(pred / name));
    }
    store::MetaMap meta;
    const auto dns = store::load_spectrum(pred / "spectrum_dns.gka", &meta);
    CHECK(dns.nx == 32);
    CHECK(meta.at("source") == "reference");
    const auto esn_spec = store::load_spectrum(pred / "spectrum_esn.gka");
    CHECK(esn_spec.nx == 32);
    // one held-out trajectory -> header + one row
    const auto horizon_lines = slurp(pred / "horizons.csv");
    CHECK(std::count(horizon_lines.begin(), horizon_lines.end(), '\n') >= 2);
    CHECK(horizon_lines.find("trajectory,horizon_lyapunov") != std::string::npos);

    // transfer, identity level ------------------------------------------------
    const fs::path tl0 = dir.path / "tl0";
    auto mt = m;
    mt.source_model = model.string();
    mt.model.clear();
    mt.tl_level = 0.0;
    mt.out = tl0.string();
    REQUIRE(run("transfer", mt) == 0);
    CHECK(slurp(tl0 / "readout_tl.gka") == slurp(model / "readout.gka"));
    CHECK(slurp(tl0 / "spectrum_esn_tl.gka") == slurp(pred / "spectrum_esn.gka"));
    CHECK(slurp(tl0 / "spectrum_dns.gka") == slurp(pred / "spectrum_dns.gka"));
    CHECK(!fs::exists(tl0 / "readout_star.gka"));  // no data, no refit control

    // transfer with data -------------------------------------------------------
    const fs::path tl = dir.path / "tl";
    mt.tl_level = 50.0;  // 1 of the 2 training trajectories
    mt.out = tl.string();
    REQUIRE(run("transfer", mt) == 0);
    for (const char* name :
         {"readout_tl.gka", "readout_star.gka", "spectrum_esn_tl.gka", "spectrum_source.gka",
          "spectrum_esn_star.gka", "spectrum_dns.gka", "horizons_esn_tl.csv",
          "horizons_source.csv", "horizons_esn_star.csv"}) {
        REQUIRE(fs::exists(tl / name));
    }
    CHECK(slurp(tl / "readout_tl.gka") != slurp(model / "readout.gka"));
    // the frozen-source control is exactly the plain prediction
    CHECK(slurp(tl / "spectrum_source.gka") == slurp(pred / "spectrum_esn.gka"));
    CHECK(slurp(tl / "spectrum_dns.gka") == slurp(pred / "spectrum_dns.gka"));
    const auto tl_readout = store::load_readout(tl / "readout_tl.gka");
    CHECK(tl_readout.provenance.find("op=transfer") != std::string::npos);

    // compare -------------------------------------------------------------------
    const fs::path cmp = dir.path / "cmp";
    auto mc = tiny_manifest(cmp);
    REQUIRE(run("compare", mc,
                {(pred / "spectrum_dns.gka").string(), (pred / "spectrum_esn.gka").string(),
                 (tl / "spectrum_esn_tl.gka").string()}) == 0);
    const auto joined = slurp(cmp / "compare.csv");
    CHECK(joined.find("k,spectrum_dns,spectrum_esn,spectrum_esn_tl") != std::string::npos);
    const auto summary = slurp(cmp / "compare_summary.csv");
    CHECK(summary.find("file,total_energy,relative_energy_error,band_mean_abs_log10") !=
          std::string::npos);
    // reference row + three shown rows (reference compares to itself as zero)
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 2 + 1 + 3);

    // name deduplication: the same stem twice stays distinguishable
    const fs::path cmp2 = dir.path / "cmp2";
    auto mc2 = tiny_manifest(cmp2);
    REQUIRE(run("compare", mc2,
                {(pred / "spectrum_esn.gka").string(),
                 (tl0 / "spectrum_esn_tl.gka").string(),
                 (tl / "spectrum_esn_tl.gka").string()}) == 0);
    const auto joined2 = slurp(cmp2 / "compare.csv");
    CHECK(joined2.find("k,spectrum_esn,spectrum_esn_tl,spectrum_esn_tl_3") !=
          std::string::npos);

    // grid mismatch is a validation failure
    const fs::path other = dir.path / "other";
    stats::Spectrum tiny;
    tiny.nx = 8;
    tiny.n_samples = 1;
    tiny.e = {1.0, 1.0, 1.0, 1.0, 1.0};
    fs::create_directories(other);
    store::save_spectrum(other / "tiny.gka", tiny);
    auto mc3 = tiny_manifest(dir.path / "cmp3");
    CHECK(run("compare", mc3,
              {(pred / "spectrum_dns.gka").string(), (other / "tiny.gka").string()}) == 2);
}

TEST_CASE("training honours the dataset split recorded in the index") {
    TempDir dir;
    const fs::path data = dir.path / "data";
    auto m = tiny_manifest(data);
    REQUIRE(run("simulate", m) == 0);

    // n_train in a downstream manifest is ignored; the index rules
    auto mt = m;
    mt.dataset = data.string();
    mt.n_train = 9999;
    mt.out = (dir.path / "model").string();
    CHECK(run("train", mt) == 0);

    // a dataset with no held-out trajectories cannot be predicted against
    const fs::path data_all = dir.path / "data_all";
    auto ma = tiny_manifest(data_all);
    ma.n_traj = 2;
    ma.n_train = 2;
    REQUIRE(run("simulate", ma) == 0);
    auto mp = ma;
    mp.dataset = data_all.string();
    mp.model = (dir.path / "model").string();
    mp.out = (dir.path / "pred_none").string();
    CHECK(run("predict", mp) == 2);
}
