#include "focuskit/prescription.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "focuskit/errors.hpp"

namespace focuskit {

namespace bundled {
extern const std::string_view mfm30_json;
extern const std::string_view mms45_json;
}

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<const char*, 5> kAsphereKeys{"a4", "a6", "a8", "a10", "a12"};

std::string surface_tag(int number) { return "surface " + std::to_string(number); }

bool is_inf_text(std::string_view s) {
    std::string u(s);
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::tolower(c); });
    return u == "inf" || u == "+inf" || u == "infinity" || u == "+infinity" || u == "-inf" ||
           u == "-infinity";
}

// Strict decimal: [sign] digits [. digits] [e [sign] digits].
std::optional<double> parse_decimal(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    bool digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; digits = true; }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; digits = true; }
    }
    if (!digits) return std::nullopt;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        bool exp_digits = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) { ++i; exp_digits = true; }
        if (!exp_digits) return std::nullopt;
    }
    if (i != s.size()) return std::nullopt;
    return std::strtod(std::string(s).c_str(), nullptr);
}

double read_number(const ojson& obj, const char* key, const std::string& where, bool allow_inf = false,
                   std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key) || obj.at(key).is_null()) {
        if (fallback) return *fallback;
        throw InputError(where + ": missing '" + key + "'");
    }
    const auto& v = obj.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (allow_inf && is_inf_text(s)) return kFlat;
        if (auto x = parse_decimal(s)) return *x;
    }
    throw InputError(where + ": malformed number in '" + key + "'");
}

int read_int(const ojson& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw InputError(where + ": missing '" + key + "'");
    const auto& v = obj.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        int x = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
        if (ec == std::errc() && p == s.data() + s.size()) return x;
    }
    throw InputError(where + ": '" + key + "' must be an integer");
}

std::string decimal_text(double x) {
    if (std::isinf(x)) return "inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::sphere: return "sphere";
        case SurfaceKind::asphere: return "asphere";
        case SurfaceKind::plane: return "plane";
        case SurfaceKind::stop: return "stop";
        case SurfaceKind::image: return "image";
    }
    return "sphere";
}

SurfaceKind surface_kind_from_string(std::string_view s) {
    if (s == "sphere") return SurfaceKind::sphere;
    if (s == "asphere") return SurfaceKind::asphere;
    if (s == "plane") return SurfaceKind::plane;
    if (s == "stop") return SurfaceKind::stop;
    if (s == "image") return SurfaceKind::image;
    throw InputError("unknown surface kind '" + std::string(s) + "'");
}

bool SurfaceDef::has_asphere_terms() const {
    return std::any_of(asph.begin(), asph.end(), [](double a) { return a != 0.0; });
}

const SurfaceDef& Prescription::surface(int number) const {
    if (number < 1 || number > surface_count()) {
        throw InputError("surface number " + std::to_string(number) + " out of range");
    }
    return surfaces[static_cast<std::size_t>(number - 1)];
}

SurfaceDef& Prescription::surface(int number) {
    return const_cast<SurfaceDef&>(std::as_const(*this).surface(number));
}

Prescription parse_prescription(std::string_view json, const GlassCatalog& catalog) {
    ojson doc;
    try {
        doc = ojson::parse(json);
    } catch (const ojson::parse_error& e) {
        throw InputError(std::string("prescription: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("prescription: expected a JSON object");

    Prescription p;
    p.name = doc.value("name", std::string("unnamed"));
    p.description = doc.value("description", std::string());

    if (doc.contains("nominal")) {
        const auto& n = doc.at("nominal");
        p.nominal.efl = read_number(n, "efl_mm", "nominal");
        p.nominal.fno = read_number(n, "fno", "nominal");
        p.nominal.fov = read_number(n, "fov_deg", "nominal", false, 0.0);
    }
    if (doc.contains("sensor")) {
        const auto& s = doc.at("sensor");
        p.sensor.pixel_pitch = read_number(s, "pixel_pitch_um", "sensor") / 1000.0;
        p.sensor.diagonal = read_number(s, "diagonal_mm", "sensor", false, 0.0);
        p.sensor.h_px = read_int(s, "h_px", "sensor");
        p.sensor.v_px = read_int(s, "v_px", "sensor");
    }
    if (doc.contains("array")) {
        const auto& a = doc.at("array");
        p.channel = ChannelGeometry{read_number(a, "cone_angle_deg", "array"),
                                    read_number(a, "mfov_deg", "array")};
    }

    if (!doc.contains("surfaces") || !doc.at("surfaces").is_array() || doc.at("surfaces").empty()) {
        throw InputError("prescription: no surfaces");
    }
    const auto& arr = doc.at("surfaces");
    int expected = 1;
    for (const auto& js : arr) {
        const int number = expected++;
        const std::string where = surface_tag(number);
        if (!js.is_object()) throw InputError(where + ": expected an object");
        if (js.contains("index") && read_int(js, "index", where) != number) {
            throw InputError(where + ": non-monotone surface list (index " +
                             std::to_string(read_int(js, "index", where)) + ")");
        }
        SurfaceDef s;
        if (!js.contains("kind") || !js.at("kind").is_string()) throw InputError(where + ": missing 'kind'");
        try {
            s.kind = surface_kind_from_string(js.at("kind").get<std::string>());
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
        s.radius = read_number(js, "radius_mm", where, true, kFlat);
        if (s.radius == 0.0) throw InputError(where + ": zero radius (use \"inf\" for a plane)");
        s.thickness = read_number(js, "thickness_mm", where, false,
                                  s.kind == SurfaceKind::image ? std::optional(0.0) : std::nullopt);
        s.material = js.value("material", std::string("AIR"));
        if (s.material.empty()) s.material = "AIR";
        if (!catalog.contains(s.material)) {
            throw InputError(where + ": unknown material '" + s.material + "'");
        }
        s.semi_diameter = read_number(js, "semi_diameter_mm", where, false,
                                      s.kind == SurfaceKind::image ? std::optional(0.0) : std::nullopt);
        s.conic = read_number(js, "conic", where, false, 0.0);
        for (std::size_t k = 0; k < kAsphereKeys.size(); ++k) {
            s.asph[k] = read_number(js, kAsphereKeys[k], where, false, 0.0);
        }
        p.surfaces.push_back(std::move(s));
    }

    if (!doc.contains("stop_index")) throw InputError("prescription: missing stop (no 'stop_index')");
    p.stop_index = read_int(doc, "stop_index", "prescription");
    if (p.stop_index < 1 || p.stop_index > p.surface_count()) {
        throw InputError("prescription: stop_index " + std::to_string(p.stop_index) + " out of range");
    }
    if (doc.contains("focusing_group")) {
        const auto& g = doc.at("focusing_group");
        if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() || !g[1].is_number_integer()) {
            throw InputError("prescription: focusing_group must be [first, last]");
        }
        p.focusing_group = {g[0].get<int>(), g[1].get<int>()};
    }
    if (p.surfaces.back().kind != SurfaceKind::image) {
        throw InputError(surface_tag(p.surface_count()) + ": last surface must be the image plane");
    }
    return p;
}

std::string emit_prescription(const Prescription& p) {
    ojson doc;
    doc["name"] = p.name;
    if (!p.description.empty()) doc["description"] = p.description;
    doc["nominal"] = {{"efl_mm", decimal_text(p.nominal.efl)},
                      {"fno", decimal_text(p.nominal.fno)},
                      {"fov_deg", decimal_text(p.nominal.fov)}};
    doc["sensor"] = {{"pixel_pitch_um", decimal_text(p.sensor.pixel_pitch * 1000.0)},
                     {"diagonal_mm", decimal_text(p.sensor.diagonal)},
                     {"h_px", p.sensor.h_px},
                     {"v_px", p.sensor.v_px}};
    if (p.channel) {
        doc["array"] = {{"cone_angle_deg", decimal_text(p.channel->cone_angle)},
                        {"mfov_deg", decimal_text(p.channel->mfov)}};
    }
    doc["stop_index"] = p.stop_index;
    doc["focusing_group"] = {p.focusing_group[0], p.focusing_group[1]};
    ojson surfaces = ojson::array();
    for (const auto& s : p.surfaces) {
        ojson js;
        js["kind"] = std::string(to_string(s.kind));
        js["radius_mm"] = s.is_flat() ? std::string("inf") : decimal_text(s.radius);
        js["thickness_mm"] = decimal_text(s.thickness);
        js["material"] = s.material;
        js["semi_diameter_mm"] = decimal_text(s.semi_diameter);
        js["conic"] = decimal_text(s.conic);
        for (std::size_t k = 0; k < kAsphereKeys.size(); ++k) {
            if (s.asph[k] != 0.0) js[kAsphereKeys[k]] = decimal_text(s.asph[k]);
        }
        surfaces.push_back(std::move(js));
    }
    doc["surfaces"] = std::move(surfaces);
    return doc.dump(2) + "\n";
}

Prescription load_prescription_file(const std::string& path, const GlassCatalog& catalog) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open prescription file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_prescription(ss.str(), catalog);
}

bool ValidationReport::ok() const { return errors().empty(); }

std::vector<ValidationIssue> ValidationReport::errors() const {
    std::vector<ValidationIssue> out;
    std::copy_if(issues.begin(), issues.end(), std::back_inserter(out),
                 [](const auto& i) { return i.severity == ValidationIssue::Severity::error; });
    return out;
}

std::vector<ValidationIssue> ValidationReport::warnings() const {
    std::vector<ValidationIssue> out;
    std::copy_if(issues.begin(), issues.end(), std::back_inserter(out),
                 [](const auto& i) { return i.severity == ValidationIssue::Severity::warning; });
    return out;
}

ValidationReport validate(const Prescription& p, const GlassCatalog& catalog) {
    using Sev = ValidationIssue::Severity;
    ValidationReport r;
    auto err = [&](int s, std::string m) { r.issues.push_back({Sev::error, s, std::move(m)}); };
    auto warn = [&](int s, std::string m) { r.issues.push_back({Sev::warning, s, std::move(m)}); };

    const int n = p.surface_count();
    if (n == 0) {
        err(0, "no surfaces");
        return r;
    }
    for (int i = 1; i <= n; ++i) {
        const auto& s = p.surface(i);
        const bool last = i == n;
        if (s.kind == SurfaceKind::image && !last) err(i, "image plane must be the last surface");
        if (last && s.kind != SurfaceKind::image) err(i, "last surface is not the image plane");
        if (!(s.thickness >= 0.0)) err(i, "negative thickness");
        if (s.kind != SurfaceKind::image && !(s.semi_diameter > 0.0)) err(i, "semi-diameter must be positive");
        if (!catalog.contains(s.material)) err(i, "unknown material '" + s.material + "'");
        if (s.kind == SurfaceKind::asphere && s.is_flat() && s.conic != 0.0) {
            err(i, "conic on a flat base surface is undefined");
        }
        if (s.kind != SurfaceKind::asphere && s.has_asphere_terms()) {
            warn(i, "aspheric coefficients on a surface not marked asphere");
        }
        if (!s.is_flat() && s.semi_diameter > 0.0) {
            const double c = s.curvature();
            if ((1.0 + s.conic) * c * c * s.semi_diameter * s.semi_diameter > 1.0) {
                err(i, "semi-diameter exceeds the conic surface extent");
            }
        }
    }
    if (p.stop_index <= 1 || p.stop_index >= n) {
        err(p.stop_index, "stop must lie strictly between the first surface and the image plane");
    }

    const auto [g0, g1] = p.focusing_group;
    if (g0 != 0 || g1 != 0) {
        if (g0 > g1) err(g0, "focusing group range is reversed");
        if (g0 <= 1 || g1 >= n) err(g0, "focusing group must lie strictly between the first and image surfaces");
        if (g0 <= p.stop_index && p.stop_index <= g1) err(p.stop_index, "stop inside the focusing group");
        if (g0 >= 1 && g1 < n && g0 <= g1) {
            for (int i = g0; i <= g1; ++i) {
                const double dia = 2.0 * p.surface(i).semi_diameter;
                r.max_focusing_group_diameter = std::max(r.max_focusing_group_diameter, dia);
                if (dia > kFocusingGroupMaxDiameter + 1e-12) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf,
                                  "focusing-group clear aperture %.3f mm exceeds the %.1f mm package guideline",
                                  dia, kFocusingGroupMaxDiameter);
                    warn(i, buf);
                }
            }
        }
    }
    return r;
}

double total_track(const Prescription& p) {
    double sum = 0.0;
    for (int i = 1; i < p.surface_count(); ++i) sum += p.surface(i).thickness;
    return sum;
}

Prescription builtin(std::string_view name) {
    if (name == "mfm30") return parse_prescription(bundled::mfm30_json);
    if (name == "mms45") return parse_prescription(bundled::mms45_json);
    throw InputError("unknown built-in prescription '" + std::string(name) + "' (expected mfm30 or mms45)");
}

std::vector<std::string> builtin_names() { return {"mfm30", "mms45"}; }

}  // namespace focuskit
