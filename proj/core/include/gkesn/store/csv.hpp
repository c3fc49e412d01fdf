#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gkesn/stats/spectrum.hpp"

namespace gkesn::store {

/// Plot-ready spectrum export. Layout:
///
///   # provenance comment lines, one per entry
///   k,e_k,log10_k,log10_e_k
///   0,<e_0>,,<log10 e_0>
///   1,<e_1>,0,<log10 e_1>
///   ...
///
/// The log10 columns are left empty where the logarithm is undefined (k = 0,
/// e_k = 0) — never "-inf" text. One data row per spectrum bin, numbers in
/// shortest round-trip form.
void export_spectrum_csv(const std::filesystem::path& path, const stats::Spectrum& spectrum,
                         const std::vector<std::string>& provenance);

}  // namespace gkesn::store
