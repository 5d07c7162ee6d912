#include "focuskit/glass.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "focuskit/errors.hpp"

namespace focuskit {

namespace bundled {
extern const std::string_view glass_catalog_json;
}

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

double number_field(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
    const auto& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        char* end = nullptr;
        const double x = std::strtod(s.c_str(), &end);
        if (!s.empty() && end == s.c_str() + s.size()) return x;
    }
    throw InputError(where + ": field '" + key + "' is not a number");
}

const GlassEntry& air_entry() {
    static const GlassEntry air{"AIR", 1.0, 0.0, "vacuum-normalised air"};
    return air;
}

}  // namespace

double refractive_index(const GlassEntry& glass, double wavelength_nm) {
    if (!(wavelength_nm >= kMinWavelength && wavelength_nm <= kMaxWavelength)) {
        throw InputError("wavelength " + std::to_string(wavelength_nm) +
                         " nm is outside the supported 400-750 nm band");
    }
    if (glass.v_d <= 0.0) return glass.n_d;
    const double dispersion = (glass.n_d - 1.0) / glass.v_d;
    const double b = dispersion / (1.0 / (kLineF * kLineF) - 1.0 / (kLineC * kLineC));
    const double a = glass.n_d - b / (kLineD * kLineD);
    return a + b / (wavelength_nm * wavelength_nm);
}

GlassCatalog GlassCatalog::parse(std::string_view json) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("glass catalog: ") + e.what());
    }
    if (!doc.is_array()) throw InputError("glass catalog: expected a JSON array");
    GlassCatalog cat;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& e = doc[i];
        const std::string where = "glass catalog entry " + std::to_string(i);
        if (!e.contains("name") || !e.at("name").is_string()) throw InputError(where + ": missing name");
        GlassEntry g;
        g.name = e.at("name").get<std::string>();
        g.n_d = number_field(e, "n_d", where);
        g.v_d = number_field(e, "v_d", where);
        if (e.contains("source") && e.at("source").is_string()) g.source = e.at("source").get<std::string>();
        if (!(g.n_d > 1.0)) throw InputError(where + " (" + g.name + "): n_d must exceed 1");
        if (!(g.v_d > 0.0)) throw InputError(where + " (" + g.name + "): v_d must be positive");
        cat.add(std::move(g));
    }
    return cat;
}

const GlassCatalog& GlassCatalog::standard() {
    static const GlassCatalog cat = [] {
        if (const char* path = std::getenv("FOCUSKIT_CATALOG"); path && *path) {
            std::ifstream in(path);
            if (!in) throw InputError(std::string("cannot open glass catalog ") + path);
            std::stringstream ss;
            ss << in.rdbuf();
            return parse(ss.str());
        }
        return parse(bundled::glass_catalog_json);
    }();
    return cat;
}

bool GlassCatalog::is_air(std::string_view name) { return upper(name) == "AIR"; }

void GlassCatalog::add(GlassEntry entry) {
    const std::string key = entry.name;
    if (auto it = by_name_.find(key); it != by_name_.end()) {
        entries_[it->second] = std::move(entry);
        return;
    }
    by_name_.emplace(key, entries_.size());
    entries_.push_back(std::move(entry));
}

bool GlassCatalog::contains(std::string_view name) const {
    if (is_air(name)) return true;
    if (by_name_.find(name) != by_name_.end()) return true;
    const std::string u = upper(name);
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const GlassEntry& g) { return upper(g.name) == u; });
}

const GlassEntry& GlassCatalog::get(std::string_view name) const {
    if (is_air(name)) return air_entry();
    if (auto it = by_name_.find(name); it != by_name_.end()) return entries_[it->second];
    const std::string u = upper(name);
    for (const auto& g : entries_) {
        if (upper(g.name) == u) return g;
    }
    throw InputError("unknown material '" + std::string(name) + "'");
}

double GlassCatalog::index(std::string_view name, double wavelength_nm) const {
    const GlassEntry& g = get(name);
    if (is_air(g.name)) {
        if (!(wavelength_nm >= kMinWavelength && wavelength_nm <= kMaxWavelength)) {
            throw InputError("wavelength outside the supported 400-750 nm band");
        }
        return 1.0;
    }
    return refractive_index(g, wavelength_nm);
}

}  // namespace focuskit
