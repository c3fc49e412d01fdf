#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gkesn/esn/reservoir.hpp"
#include "gkesn/esn/training.hpp"
#include "gkesn/gks/solver.hpp"
#include "gkesn/stats/spectrum.hpp"

namespace gkesn::store {

/// Extra key-value pairs attached to an artifact (provenance strings, digests).
using MetaMap = std::map<std::string, std::string>;

/// One named payload inside an artifact: an n-dimensional array of doubles
/// or signed 64-bit integers.
struct ArtifactBlock {
    std::string name;
    std::uint8_t dtype = 0;  // 0 = f64, 1 = i64
    std::vector<std::uint64_t> dims;
    std::vector<double> f64;
    std::vector<std::int64_t> i64;

    std::uint64_t element_count() const;
};

/// Self-describing binary container. On disk (all integers little-endian):
///
///   bytes 0..7   magic "GKSN" + 4-character kind tag
///   u32          format version (currently 1)
///   u32          metadata entry count, then per entry
///                  u32 key length, key bytes, u32 value length, value bytes
///   u32          block count, then per block
///                  u32 name length, name bytes, u8 dtype, u8 ndim,
///                  u64 dims[ndim], element payload (8 bytes each)
///
/// Metadata keys are written in sorted order and the declared payload sizes
/// must cover the file exactly, so a given artifact value always serialises
/// to identical bytes and any truncation or trailing garbage is detected.
struct Artifact {
    std::string kind;  // exactly 4 characters
    MetaMap meta;
    std::vector<ArtifactBlock> blocks;

    const ArtifactBlock& block(const std::string& name) const;
    const std::string& meta_value(const std::string& key) const;
};

void write_artifact(const std::filesystem::path& path, const Artifact& artifact);

/// Reads and structurally validates an artifact; expected_kind mismatches,
/// bad magic, unknown versions, truncation and trailing bytes all raise
/// IoError naming the path.
Artifact read_artifact(const std::filesystem::path& path, const std::string& expected_kind);

// ---- typed wrappers ---------------------------------------------------------
//
// Each save_* embeds the object's defining fields in metadata plus any extra
// entries the caller supplies; each load_* re-validates the object invariants
// (shapes, finiteness, spectral radius of the recurrent matrix, non-negative
// spectra) and throws IoError when the file fails them.

extern const std::string kTrajectoryKind;  // "TRAJ"
extern const std::string kReservoirKind;   // "RESV"
extern const std::string kReadoutKind;     // "RDOT"
extern const std::string kSpectrumKind;    // "SPEC"

void save_trajectory(const std::filesystem::path& path, const gks::Trajectory& traj,
                     const MetaMap& extra = {});
gks::Trajectory load_trajectory(const std::filesystem::path& path, MetaMap* meta = nullptr);

void save_reservoir(const std::filesystem::path& path, const esn::Reservoir& res,
                    const MetaMap& extra = {});
esn::Reservoir load_reservoir(const std::filesystem::path& path, MetaMap* meta = nullptr);

void save_readout(const std::filesystem::path& path, const esn::ReadoutModel& model,
                  std::uint64_t reservoir_size, const MetaMap& extra = {});
esn::ReadoutModel load_readout(const std::filesystem::path& path, MetaMap* meta = nullptr);

void save_spectrum(const std::filesystem::path& path, const stats::Spectrum& spectrum,
                   const MetaMap& extra = {});
stats::Spectrum load_spectrum(const std::filesystem::path& path, MetaMap* meta = nullptr);

}  // namespace gkesn::store
