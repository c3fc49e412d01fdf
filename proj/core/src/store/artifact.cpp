#include "gkesn/store/artifact.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "gkesn/errors.hpp"
#include "gkesn/numerics/linalg.hpp"
#include "gkesn/store/text.hpp"

namespace gkesn::store {

const std::string kTrajectoryKind = "TRAJ";
const std::string kReservoirKind = "RESV";
const std::string kReadoutKind = "RDOT";
const std::string kSpectrumKind = "SPEC";

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr char kMagicPrefix[4] = {'G', 'K', 'S', 'N'};

// ---- little-endian primitives (explicit shifts, host-endianness agnostic) --

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

void put_sized_string(std::string& buf, const std::string& s) {
    put_u32(buf, static_cast<std::uint32_t>(s.size()));
    buf.append(s);
}

class Cursor {
public:
    Cursor(const std::string& data, const std::filesystem::path& path)
        : data_(data), path_(path) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string bytes(std::size_t n) {
        need(n);
        std::string out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t remaining() const { return data_.size() - pos_; }

    [[noreturn]] void fail(const std::string& why) const {
        throw IoError("artifact " + path_.string() + ": " + why);
    }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) fail("truncated file");
    }

    const std::string& data_;
    const std::filesystem::path& path_;
    std::size_t pos_ = 0;
};

std::uint64_t checked_element_count(const std::vector<std::uint64_t>& dims, Cursor& cur) {
    std::uint64_t count = 1;
    for (const std::uint64_t d : dims) {
        if (d != 0 && count > UINT64_MAX / d) cur.fail("block dimensions overflow");
        count *= d;
    }
    return count;
}

MetaMap merge_meta(MetaMap base, const MetaMap& extra) {
    for (const auto& [k, v] : extra) base[k] = v;
    return base;
}

double meta_double(const Artifact& a, const std::string& key) {
    return parse_double(a.meta_value(key));
}

std::uint64_t meta_u64(const Artifact& a, const std::string& key) {
    return parse_u64(a.meta_value(key));
}

/// Typed loads re-run the object validations, which throw ValidationError /
/// NumericalError; at this boundary those mean "the file is bad", so they are
/// rewrapped as IoError naming the path.
template <typename Fn>
auto as_io_error(const std::filesystem::path& path, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw IoError("artifact " + path.string() + ": " + e.what());
    }
}

}  // namespace

std::uint64_t ArtifactBlock::element_count() const {
    std::uint64_t count = 1;
    for (const std::uint64_t d : dims) count *= d;
    return count;
}

const ArtifactBlock& Artifact::block(const std::string& name) const {
    for (const ArtifactBlock& b : blocks) {
        if (b.name == name) return b;
    }
    throw IoError("artifact is missing block '" + name + "'");
}

const std::string& Artifact::meta_value(const std::string& key) const {
    const auto it = meta.find(key);
    if (it == meta.end()) throw IoError("artifact is missing metadata key '" + key + "'");
    return it->second;
}

void write_artifact(const std::filesystem::path& path, const Artifact& artifact) {
    if (artifact.kind.size() != 4) {
        throw ValidationError("write_artifact: kind tag must be exactly 4 characters, got '" +
                              artifact.kind + "'");
    }

    std::string buf;
    buf.append(kMagicPrefix, 4);
    buf.append(artifact.kind);
    put_u32(buf, kFormatVersion);

    put_u32(buf, static_cast<std::uint32_t>(artifact.meta.size()));
    for (const auto& [key, value] : artifact.meta) {  // std::map: sorted, deterministic
        put_sized_string(buf, key);
        put_sized_string(buf, value);
    }

    put_u32(buf, static_cast<std::uint32_t>(artifact.blocks.size()));
    for (const ArtifactBlock& b : artifact.blocks) {
        const std::uint64_t count = b.element_count();
        const std::size_t stored = b.dtype == 0 ? b.f64.size() : b.i64.size();
        if (stored != count) {
            throw ValidationError("write_artifact: block '" + b.name + "' declares " +
                                  format_u64(count) + " elements but holds " +
                                  format_u64(stored));
        }
        put_sized_string(buf, b.name);
        buf.push_back(static_cast<char>(b.dtype));
        buf.push_back(static_cast<char>(b.dims.size()));
        for (const std::uint64_t d : b.dims) put_u64(buf, d);
        if (b.dtype == 0) {
            for (const double v : b.f64) put_f64(buf, v);
        } else {
            for (const std::int64_t v : b.i64) put_u64(buf, static_cast<std::uint64_t>(v));
        }
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

Artifact read_artifact(const std::filesystem::path& path, const std::string& expected_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading " + path.string());

    Cursor cur(data, path);
    const std::string magic = cur.bytes(4);
    if (std::memcmp(magic.data(), kMagicPrefix, 4) != 0) {
        cur.fail("bad magic — not an artifact file");
    }
    Artifact artifact;
    artifact.kind = cur.bytes(4);
    if (artifact.kind != expected_kind) {
        cur.fail("kind is '" + artifact.kind + "', expected '" + expected_kind + "'");
    }
    const std::uint32_t version = cur.u32();
    if (version != kFormatVersion) {
        cur.fail("unsupported format version " + format_u64(version) + " (supported: " +
                 format_u64(kFormatVersion) + ")");
    }

    const std::uint32_t meta_count = cur.u32();
    for (std::uint32_t i = 0; i < meta_count; ++i) {
        std::string key = cur.bytes(cur.u32());
        std::string value = cur.bytes(cur.u32());
        if (!artifact.meta.emplace(std::move(key), std::move(value)).second) {
            cur.fail("duplicate metadata key");
        }
    }

    const std::uint32_t block_count = cur.u32();
    for (std::uint32_t i = 0; i < block_count; ++i) {
        ArtifactBlock b;
        b.name = cur.bytes(cur.u32());
        b.dtype = cur.u8();
        if (b.dtype > 1) cur.fail("block '" + b.name + "' has unknown dtype");
        const std::uint8_t ndim = cur.u8();
        b.dims.resize(ndim);
        for (std::uint8_t d = 0; d < ndim; ++d) b.dims[d] = cur.u64();
        const std::uint64_t count = checked_element_count(b.dims, cur);
        if (count * 8 > cur.remaining()) {
            cur.fail("block '" + b.name + "' declares more payload than the file holds");
        }
        if (b.dtype == 0) {
            b.f64.resize(count);
            for (std::uint64_t e = 0; e < count; ++e) b.f64[e] = cur.f64();
        } else {
            b.i64.resize(count);
            for (std::uint64_t e = 0; e < count; ++e) {
                b.i64[e] = static_cast<std::int64_t>(cur.u64());
            }
        }
        artifact.blocks.push_back(std::move(b));
    }

    if (cur.remaining() != 0) {
        cur.fail(format_u64(cur.remaining()) + " trailing bytes after the last block");
    }
    return artifact;
}

// ---- trajectories -----------------------------------------------------------

void save_trajectory(const std::filesystem::path& path, const gks::Trajectory& traj,
                     const MetaMap& extra) {
    traj.config.validate();
    Artifact a;
    a.kind = kTrajectoryKind;
    a.meta = merge_meta(
        {
            {"length", format_double(traj.config.length)},
            {"gamma", format_double(traj.config.gamma)},
            {"nx", format_u64(traj.config.nx)},
            {"dt", format_double(traj.config.dt)},
            {"dt_sample", format_double(traj.config.dt_sample)},
            {"seed", format_u64(traj.config.seed)},
            {"traj_seed", format_u64(traj.seed)},
            {"t_start", format_double(traj.t_start)},
            {"ic_c1", format_double(traj.ic.c1)},
            {"ic_c2", format_double(traj.ic.c2)},
            {"ic_p1", format_u64(static_cast<std::uint64_t>(traj.ic.p1))},
            {"ic_p2", format_u64(static_cast<std::uint64_t>(traj.ic.p2))},
        },
        extra);
    ArtifactBlock snaps;
    snaps.name = "snapshots";
    snaps.dtype = 0;
    snaps.dims = {traj.snapshots.rows(), traj.snapshots.cols()};
    snaps.f64 = traj.snapshots.values();
    a.blocks.push_back(std::move(snaps));
    write_artifact(path, a);
}

gks::Trajectory load_trajectory(const std::filesystem::path& path, MetaMap* meta) {
    const Artifact a = read_artifact(path, kTrajectoryKind);
    return as_io_error(path, [&] {
        gks::Trajectory traj;
        traj.config.length = meta_double(a, "length");
        traj.config.gamma = meta_double(a, "gamma");
        traj.config.nx = meta_u64(a, "nx");
        traj.config.dt = meta_double(a, "dt");
        traj.config.dt_sample = meta_double(a, "dt_sample");
        traj.config.seed = meta_u64(a, "seed");
        traj.config.validate();
        traj.seed = meta_u64(a, "traj_seed");
        traj.t_start = meta_double(a, "t_start");
        traj.ic.c1 = meta_double(a, "ic_c1");
        traj.ic.c2 = meta_double(a, "ic_c2");
        traj.ic.p1 = static_cast<int>(meta_u64(a, "ic_p1"));
        traj.ic.p2 = static_cast<int>(meta_u64(a, "ic_p2"));

        const ArtifactBlock& b = a.block("snapshots");
        if (b.dtype != 0 || b.dims.size() != 2 || b.dims[0] != traj.config.nx) {
            throw IoError("artifact " + path.string() +
                          ": snapshots block does not match the grid");
        }
        traj.snapshots = numerics::DenseMatrix::from_values(
            b.dims[0], b.dims[1], b.f64);
        if (meta != nullptr) *meta = a.meta;
        return traj;
    });
}

// ---- reservoirs -------------------------------------------------------------

void save_reservoir(const std::filesystem::path& path, const esn::Reservoir& res,
                    const MetaMap& extra) {
    const esn::EsnConfig& c = res.config();
    Artifact a;
    a.kind = kReservoirKind;
    a.meta = merge_meta(
        {
            {"reservoir_size", format_u64(c.reservoir_size)},
            {"beta1", format_double(c.beta1)},
            {"beta2", format_double(c.beta2)},
            {"density", format_double(c.density)},
            {"mu", format_double(c.mu)},
            {"seed", format_u64(c.seed)},
            {"washout", format_u64(c.washout)},
            {"quadratic_features", c.quadratic_features ? "1" : "0"},
            {"n_in", format_u64(res.n_in())},
        },
        extra);

    const auto& entries = res.a().entries();
    ArtifactBlock rows, cols, values, w_in, state;
    rows.name = "a_rows";
    rows.dtype = 1;
    rows.dims = {entries.size()};
    cols.name = "a_cols";
    cols.dtype = 1;
    cols.dims = {entries.size()};
    values.name = "a_values";
    values.dtype = 0;
    values.dims = {entries.size()};
    for (const auto& e : entries) {
        rows.i64.push_back(static_cast<std::int64_t>(e.row));
        cols.i64.push_back(static_cast<std::int64_t>(e.col));
        values.f64.push_back(e.value);
    }
    w_in.name = "w_in";
    w_in.dtype = 0;
    w_in.dims = {res.w_in().rows(), res.w_in().cols()};
    w_in.f64 = res.w_in().values();
    state.name = "state";
    state.dtype = 0;
    state.dims = {res.state().size()};
    state.f64 = res.state();

    a.blocks.push_back(std::move(rows));
    a.blocks.push_back(std::move(cols));
    a.blocks.push_back(std::move(values));
    a.blocks.push_back(std::move(w_in));
    a.blocks.push_back(std::move(state));
    write_artifact(path, a);
}

esn::Reservoir load_reservoir(const std::filesystem::path& path, MetaMap* meta) {
    const Artifact a = read_artifact(path, kReservoirKind);
    return as_io_error(path, [&] {
        esn::EsnConfig c;
        c.reservoir_size = meta_u64(a, "reservoir_size");
        c.beta1 = meta_double(a, "beta1");
        c.beta2 = meta_double(a, "beta2");
        c.density = meta_double(a, "density");
        c.mu = meta_double(a, "mu");
        c.seed = meta_u64(a, "seed");
        c.washout = meta_u64(a, "washout");
        c.quadratic_features = a.meta_value("quadratic_features") == "1";
        c.validate();
        const std::uint64_t n_in = meta_u64(a, "n_in");

        const ArtifactBlock& rows = a.block("a_rows");
        const ArtifactBlock& cols = a.block("a_cols");
        const ArtifactBlock& values = a.block("a_values");
        if (rows.dtype != 1 || cols.dtype != 1 || values.dtype != 0 ||
            rows.i64.size() != values.f64.size() || cols.i64.size() != values.f64.size()) {
            throw IoError("artifact " + path.string() + ": inconsistent recurrent blocks");
        }
        if (values.f64.size() != c.recurrent_nnz()) {
            throw IoError("artifact " + path.string() + ": recurrent matrix has " +
                          format_u64(values.f64.size()) + " nonzeros, config requires " +
                          format_u64(c.recurrent_nnz()));
        }
        std::vector<numerics::SparseEntry> entries(values.f64.size());
        for (std::size_t k = 0; k < entries.size(); ++k) {
            entries[k] = {static_cast<std::uint64_t>(rows.i64[k]),
                          static_cast<std::uint64_t>(cols.i64[k]), values.f64[k]};
        }
        numerics::SparseMatrix recurrent(c.reservoir_size, c.reservoir_size,
                                         std::move(entries));

        // The defining property of the recurrent matrix; a value edit that
        // slipped past the structural checks fails here.
        const double rho = numerics::spectral_radius(recurrent, 1e-9, 20000);
        if (std::abs(rho - c.beta2) > 1e-6 * std::max(1.0, c.beta2)) {
            throw IoError("artifact " + path.string() + ": recurrent spectral radius " +
                          format_double(rho) + " does not match configured " +
                          format_double(c.beta2));
        }

        const ArtifactBlock& w_in = a.block("w_in");
        if (w_in.dtype != 0 || w_in.dims.size() != 2 || w_in.dims[0] != c.reservoir_size ||
            w_in.dims[1] != n_in) {
            throw IoError("artifact " + path.string() + ": input matrix block mismatch");
        }
        for (const double v : w_in.f64) {
            if (std::abs(v) > c.beta1) {
                throw IoError("artifact " + path.string() +
                              ": input weight outside [-beta1, beta1]");
            }
        }

        esn::Reservoir res(c, n_in, std::move(recurrent),
                           numerics::DenseMatrix::from_values(c.reservoir_size, n_in,
                                                              w_in.f64));
        const ArtifactBlock& state = a.block("state");
        if (state.dtype != 0 || state.f64.size() != c.reservoir_size) {
            throw IoError("artifact " + path.string() + ": state block mismatch");
        }
        res.set_state(state.f64);
        if (meta != nullptr) *meta = a.meta;
        return res;
    });
}

// ---- readouts ---------------------------------------------------------------

void save_readout(const std::filesystem::path& path, const esn::ReadoutModel& model,
                  std::uint64_t reservoir_size, const MetaMap& extra) {
    if (model.w_out.cols() != reservoir_size) {
        throw ValidationError("save_readout: readout has " +
                              std::to_string(model.w_out.cols()) +
                              " feature columns, reservoir size is " +
                              format_u64(reservoir_size));
    }
    Artifact a;
    a.kind = kReadoutKind;
    a.meta = merge_meta(
        {
            {"mu", format_double(model.mu)},
            {"provenance", model.provenance},
            {"n_out", format_u64(model.w_out.rows())},
            {"reservoir_size", format_u64(reservoir_size)},
        },
        extra);
    ArtifactBlock w;
    w.name = "w_out";
    w.dtype = 0;
    w.dims = {model.w_out.rows(), model.w_out.cols()};
    w.f64 = model.w_out.values();
    a.blocks.push_back(std::move(w));
    write_artifact(path, a);
}

esn::ReadoutModel load_readout(const std::filesystem::path& path, MetaMap* meta) {
    const Artifact a = read_artifact(path, kReadoutKind);
    return as_io_error(path, [&] {
        esn::ReadoutModel model;
        model.mu = meta_double(a, "mu");
        model.provenance = a.meta_value("provenance");
        const std::uint64_t n_out = meta_u64(a, "n_out");
        const std::uint64_t d = meta_u64(a, "reservoir_size");
        const ArtifactBlock& w = a.block("w_out");
        if (w.dtype != 0 || w.dims.size() != 2 || w.dims[0] != n_out || w.dims[1] != d) {
            throw IoError("artifact " + path.string() + ": readout block mismatch");
        }
        model.w_out = numerics::DenseMatrix::from_values(n_out, d, w.f64);
        if (meta != nullptr) *meta = a.meta;
        return model;
    });
}

// ---- spectra ------------------------------------------------------------------

void save_spectrum(const std::filesystem::path& path, const stats::Spectrum& spectrum,
                   const MetaMap& extra) {
    Artifact a;
    a.kind = kSpectrumKind;
    a.meta = merge_meta(
        {
            {"nx", format_u64(spectrum.nx)},
            {"n_samples", format_u64(spectrum.n_samples)},
        },
        extra);
    ArtifactBlock e;
    e.name = "e";
    e.dtype = 0;
    e.dims = {spectrum.e.size()};
    e.f64 = spectrum.e;
    a.blocks.push_back(std::move(e));
    write_artifact(path, a);
}

stats::Spectrum load_spectrum(const std::filesystem::path& path, MetaMap* meta) {
    const Artifact a = read_artifact(path, kSpectrumKind);
    return as_io_error(path, [&] {
        stats::Spectrum s;
        s.nx = meta_u64(a, "nx");
        s.n_samples = meta_u64(a, "n_samples");
        const ArtifactBlock& e = a.block("e");
        if (e.dtype != 0 || e.f64.size() != s.nx / 2 + 1) {
            throw IoError("artifact " + path.string() + ": spectrum block has " +
                          format_u64(e.f64.size()) + " bins, expected " +
                          format_u64(s.nx / 2 + 1));
        }
        if (s.n_samples == 0) {
            throw IoError("artifact " + path.string() + ": spectrum averages zero snapshots");
        }
        for (const double v : e.f64) {
            if (!std::isfinite(v) || v < 0.0) {
                throw IoError("artifact " + path.string() + ": spectrum bin is negative or "
                              "non-finite");
            }
        }
        s.e = e.f64;
        if (meta != nullptr) *meta = a.meta;
        return s;
    });
}

}  // namespace gkesn::store
