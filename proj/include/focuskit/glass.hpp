#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace focuskit {

constexpr double kLineD = 587.56;  ///< nm, helium d line
constexpr double kLineF = 486.13;  ///< nm, hydrogen F line
constexpr double kLineC = 656.27;  ///< nm, hydrogen C line

constexpr double kMinWavelength = 400.0;
constexpr double kMaxWavelength = 750.0;

struct GlassEntry {
    std::string name;
    double n_d = 1.0;
    double v_d = 0.0;
    std::string source;
};

/// Two-term Cauchy model n = A + B / lambda^2 pinned to n_d at the d line and
/// to the Abbe-number dispersion n_F - n_C = (n_d - 1) / v_d.
double refractive_index(const GlassEntry& glass, double wavelength_nm);

/// Glass lookup by name. AIR is implicit (index exactly 1) and matches any
/// capitalisation; glass names are matched case-sensitively first, then
/// case-insensitively.
class GlassCatalog {
public:
    GlassCatalog() = default;

    /// Parses a JSON array of {name, n_d, v_d, source}.
    static GlassCatalog parse(std::string_view json);

    /// The bundled catalog, or the file named by FOCUSKIT_CATALOG when set.
    static const GlassCatalog& standard();

    static bool is_air(std::string_view name);

    bool contains(std::string_view name) const;

    /// Throws InputError for unknown names. AIR yields a synthetic entry.
    const GlassEntry& get(std::string_view name) const;

    /// AIR -> 1 exactly; glass via the Cauchy model.
    double index(std::string_view name, double wavelength_nm) const;

    const std::vector<GlassEntry>& entries() const { return entries_; }

    void add(GlassEntry entry);

private:
    std::vector<GlassEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> by_name_;
};

}  // namespace focuskit
