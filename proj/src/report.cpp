#include "focuskit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "focuskit/errors.hpp"

namespace focuskit::report {

Format parse_format(std::string_view name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "svg") return Format::svg;
    throw InputError("unsupported format '" + std::string(name) + "' (expected json, csv or svg)");
}

std::string_view to_string(Format f) {
    switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::svg: return "svg";
    }
    return "?";
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    // to_chars ignores the C locale.
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
    if (t.rows.empty()) throw InputError("nothing to report: the result has no rows");
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_svg(const Plot& plot) {
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : plot.series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) throw InputError("nothing to plot: no finite points");
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }
    if (plot.equal_aspect) {
        const double half = 0.5 * std::max(x1 - x0, y1 - y0);
        const double cx = 0.5 * (x0 + x1);
        const double cy = 0.5 * (y0 + y1);
        x0 = cx - half; x1 = cx + half;
        y0 = cy - half; y1 = cy + half;
    }

    constexpr double W = 640, H = 480, L = 80, R = 20, T = 40, B = 60;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream o;
    auto n = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << plot.title << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        o << "<text x=\"" << n(px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
          << format_number(xv) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << n(py(yv) + 4) << "\" text-anchor=\"end\">" << format_number(yv)
          << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << plot.x_label
      << "</text>\n";
    o << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\">" << plot.y_label << "</text>\n";
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* colour = colours[k % 5];
        if (s.markers) {
            for (const auto& [x, y] : s.points)
                if (std::isfinite(x) && std::isfinite(y))
                    o << "<circle cx=\"" << n(px(x)) << "\" cy=\"" << n(py(y)) << "\" r=\"1.5\" fill=\"" << colour
                      << "\"/>\n";
        } else if (!s.points.empty()) {
            o << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
            bool first = true;
            for (const auto& [x, y] : s.points) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                if (!first) o << ' ';
                o << n(px(x)) << ',' << n(py(y));
                first = false;
            }
            o << "\"/>\n";
        }
        if (!s.label.empty())
            o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\""
              << colour << "\">" << s.label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json distance_json(ObjectDistance d) {
    if (d.is_infinite()) return "infinity";
    return d.mm();
}

Table family_table(const std::vector<travel::FamilyRow>& rows) {
    Table t;
    t.columns = {"lens", "f_mm", "fno", "l_b_m", "r_um", "r_o_um", "gamma"};
    for (const auto& r : rows)
        t.rows.push_back({static_cast<long long>(r.lens.lens), r.lens.f, r.lens.fno, -r.lens.near_m, r.lens.r_um,
                          r.r_o_um, r.gamma});
    return t;
}

Json family_json(const std::vector<travel::FamilyRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows)
        arr.push_back({{"lens", r.lens.lens},
                       {"f_mm", r.lens.f},
                       {"fno", r.lens.fno},
                       {"l_b_m", -r.lens.near_m},
                       {"r_um", r.lens.r_um},
                       {"r_o_um", r.r_o_um},
                       {"gamma", r.gamma},
                       {"gamma_tabulated", r.lens.gamma}});
    return Json{{"rows", arr}};
}

Table gamma_table(const std::vector<std::vector<travel::GammaPoint>>& segments) {
    Table t;
    t.columns = {"alpha", "gamma"};
    for (const auto& seg : segments)
        for (const auto& p : seg) t.rows.push_back({p.alpha, p.gamma});
    return t;
}

Json gamma_json(const std::vector<std::vector<travel::GammaPoint>>& segments) {
    Json segs = Json::array();
    for (const auto& seg : segments) {
        Json pts = Json::array();
        for (const auto& p : seg) pts.push_back({{"alpha", p.alpha}, {"gamma", p.gamma}});
        segs.push_back(pts);
    }
    return Json{{"segments", segs}};
}

Plot gamma_plot(const std::vector<std::vector<travel::GammaPoint>>& segments) {
    Plot plot;
    plot.title = "Focusing-group travel ratio";
    plot.x_label = "alpha = f1 / f (dimensionless)";
    plot.y_label = "gamma = R / R_o (dimensionless)";
    for (const auto& seg : segments) {
        Series s;
        for (const auto& p : seg) s.points.emplace_back(p.alpha, p.gamma);
        plot.series.push_back(std::move(s));
    }
    return plot;
}

Table sweep_table(const focus::TravelSweep& sweep) {
    Table t;
    t.columns = {"object_distance_mm", "best_shift_um", "rms_um"};
    for (const auto& e : sweep.entries) {
        Cell d = e.object_distance.is_infinite() ? Cell(std::string("inf")) : Cell(e.object_distance.mm());
        t.rows.push_back({d, e.best_shift * 1000.0, e.rms});
    }
    return t;
}

Json sweep_json(const focus::TravelSweep& sweep) {
    if (sweep.entries.empty()) throw InputError("nothing to report: the sweep is empty");
    Json entries = Json::array();
    for (const auto& e : sweep.entries)
        entries.push_back({{"object_distance_mm", distance_json(e.object_distance)},
                           {"best_shift_um", e.best_shift * 1000.0},
                           {"rms_um", e.rms}});
    Json j;
    j["entries"] = entries;
    j["travel_range_um"] = sweep.travel_range;
    j["gamma_measured"] = sweep.gamma_measured ? Json(*sweep.gamma_measured) : Json(nullptr);
    return j;
}

Json spot_json(const focus::SpotReport& s) {
    return Json{{"field_angle_deg", s.field_angle},
                {"object_distance_mm", distance_json(s.object_distance)},
                {"focus_shift_mm", s.focus_shift},
                {"rms_radius_um", s.rms_radius},
                {"centroid_mm", {s.centroid_x, s.centroid_y}},
                {"n_traced", s.n_traced},
                {"n_vignetted", s.n_vignetted}};
}

Json array_json(const array::ArrayPlan& plan) {
    return Json{{"overlap_deg", plan.overlap},
                {"channels_per_axis", plan.channels_per_axis},
                {"ifov_urad", plan.ifov},
                {"eq_fl_diagonal_mm", plan.eq_fl_diagonal},
                {"eq_fl_ifov_mm", plan.eq_fl_ifov},
                {"ref_pixel_um", plan.ref_pixel},
                {"zoom_ratio", plan.zoom_ratio},
                {"display_px", plan.display_px},
                {"lateral_clearance_mm", plan.lateral_clearance},
                {"clearance_distance_mm", plan.clearance_distance}};
}

Table array_table(const array::ArrayPlan& plan) {
    Table t;
    t.columns = {"quantity", "value", "unit"};
    t.rows = {{std::string("overlap"), plan.overlap, std::string("deg")},
              {std::string("channels_per_axis"), static_cast<long long>(plan.channels_per_axis), std::string("")},
              {std::string("ifov"), plan.ifov, std::string("urad")},
              {std::string("eq_fl_diagonal"), plan.eq_fl_diagonal, std::string("mm")},
              {std::string("eq_fl_ifov"), plan.eq_fl_ifov, std::string("mm")},
              {std::string("zoom_ratio"), plan.zoom_ratio, std::string("")},
              {std::string("lateral_clearance"), plan.lateral_clearance, std::string("mm")}};
    return t;
}

Json validation_json(const Prescription& p, const ValidationReport& r) {
    Json issues = Json::array();
    for (const auto& i : r.issues)
        issues.push_back({{"severity", i.severity == ValidationIssue::Severity::error ? "error" : "warning"},
                          {"surface", i.surface},
                          {"message", i.message}});
    return Json{{"name", p.name},
                {"surfaces", static_cast<int>(p.surfaces.size())},
                {"total_track_mm", total_track(p)},
                {"max_focusing_group_diameter_mm", r.max_focusing_group_diameter},
                {"ok", r.ok()},
                {"issues", issues}};
}

}  // namespace focuskit::report
