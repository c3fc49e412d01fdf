#include "gkesn/store/csv.hpp"

#include <cmath>
#include <fstream>

#include "gkesn/errors.hpp"
#include "gkesn/store/text.hpp"

namespace gkesn::store {

void export_spectrum_csv(const std::filesystem::path& path, const stats::Spectrum& spectrum,
                         const std::vector<std::string>& provenance) {
    if (spectrum.nx == 0 || spectrum.e.size() != spectrum.nx / 2 + 1) {
        throw ValidationError("export_spectrum_csv: malformed spectrum");
    }

    std::string buf;
    for (const std::string& line : provenance) {
        buf += "# " + line + "\n";
    }
    buf += "k,e_k,log10_k,log10_e_k\n";
    for (std::size_t k = 0; k < spectrum.e.size(); ++k) {
        const double e = spectrum.e[k];
        buf += format_u64(k);
        buf += ',';
        buf += format_double(e);
        buf += ',';
        if (k > 0) buf += format_double(std::log10(static_cast<double>(k)));
        buf += ',';
        if (e > 0.0) buf += format_double(std::log10(e));
        buf += '\n';
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace gkesn::store
