#include "focuskit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "focuskit/array.hpp"
#include "focuskit/errors.hpp"
#include "focuskit/focus.hpp"
#include "focuskit/gaussian.hpp"
#include "focuskit/prescription.hpp"
#include "focuskit/raytrace.hpp"
#include "focuskit/report.hpp"
#include "focuskit/travel.hpp"

namespace focuskit::cli {

namespace {

using report::Format;
using report::Json;

struct Common {
    std::string lens;
    std::string input;
    std::string output;
    std::string format = "json";
};

void add_common(CLI::App* sub, Common& c, bool needs_lens, const std::string& formats, bool show_default = true) {
    if (needs_lens) {
        sub->add_option("--lens", c.lens, "Built-in design (mfm30, mms45) or prescription JSON path");
        sub->add_option("--input", c.input, "Prescription JSON path");
    }
    sub->add_option("--output,-o", c.output, "Write the report to this file instead of stdout");
    auto* opt = sub->add_option("--format,-f", c.format, "Report format: " + formats);
    if (show_default) opt->capture_default_str();
}

Prescription load_lens(const Common& c, const std::string& fallback) {
    if (!c.lens.empty() && !c.input.empty()) throw InputError("give either --lens or --input, not both");
    const std::string& src = !c.input.empty() ? c.input : (!c.lens.empty() ? c.lens : fallback);
    if (src.empty()) throw InputError("no lens given (use --lens or --input)");
    const auto names = builtin_names();
    if (c.input.empty() && std::find(names.begin(), names.end(), src) != names.end()) return builtin(src);
    return load_prescription_file(src);
}

Format checked_format(const Common& c, std::initializer_list<Format> allowed, const std::string& verb) {
    const Format f = report::parse_format(c.format);
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
        throw InputError("format '" + c.format + "' is not available for " + verb);
    return f;
}

ObjectDistance object_from_mm(std::optional<double> mm) {
    if (!mm) return ObjectDistance::infinity();
    if (*mm == 0.0) throw InputError("object distance must be nonzero");
    // Magnitudes on the command line; objects sit to the left (negative).
    return ObjectDistance::at(-std::abs(*mm));
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"focuskit: first-order optics, focus travel and sequential ray tracing.\n"
                 "Lengths in mm, travel and spot sizes in um, angles in degrees.",
                 "focuskit"};
    app.require_subcommand(1);
    app.fallthrough(false);

    Common common;

    // first-order
    auto* fo = app.add_subcommand("first-order", "Two-group first-order model: EFL, apertures, travel ratio, focus budget");
    double f1 = 17.49, f2 = -5.43, sep = 15.23, fno = 3.0, fov = 6.2, near = 2000.0;
    std::optional<double> ds, d1_max, d2_max;
    double coc_um = 4.0, pixels = 2616.0 * 1964.0, budget_um = travel::kDefaultTravelBudgetUm;
    fo->add_option("--f1", f1, "Front group focal length [mm]")->capture_default_str();
    fo->add_option("--f2", f2, "Focusing group focal length [mm]")->capture_default_str();
    fo->add_option("--d", sep, "Group separation [mm]")->capture_default_str();
    fo->add_option("--ds", ds, "Stop distance behind the front group [mm]; enables the aperture model");
    fo->add_option("--fno", fno, "F-number")->capture_default_str();
    fo->add_option("--fov", fov, "Full field of view [deg]")->capture_default_str();
    fo->add_option("--near", near, "Near object distance [mm]")->capture_default_str();
    fo->add_option("--d1-max", d1_max, "Front clear aperture budget [mm]; with --d2-max solves the stop position");
    fo->add_option("--d2-max", d2_max, "Back clear aperture budget [mm]");
    fo->add_option("--coc", coc_um, "Circle of confusion [um]")->capture_default_str();
    fo->add_option("--pixels", pixels, "Sensor pixel count")->capture_default_str();
    fo->add_option("--budget", budget_um, "Actuator travel budget [um]")->capture_default_str();
    add_common(fo, common, false, "json");

    // gamma-curve
    auto* gc = app.add_subcommand("gamma-curve", "Travel ratio gamma = |alpha^2/(1-alpha^2)| against alpha = f1/f");
    double a_from = 0.1, a_to = 0.95;
    int a_n = 100;
    gc->add_option("--from", a_from, "First alpha (dimensionless)")->capture_default_str();
    gc->add_option("--to", a_to, "Last alpha (dimensionless)")->capture_default_str();
    gc->add_option("--n", a_n, "Number of samples")->capture_default_str();
    add_common(gc, common, false, "json, csv, svg");

    // table2
    auto* t2 = app.add_subcommand("table2", "Universal focusing family: recomputed whole-lens travel R_o [um] and gamma");
    add_common(t2, common, false, "json, csv");

    // trace
    auto* tr = app.add_subcommand("trace", "Trace a ray fan and report the spot [um] at the image plane");
    double field = 0.0, shift = 0.0;
    std::optional<double> object_mm;
    int rings = 8, arms = 16;
    tr->add_option("--field", field, "Field angle [deg]")->capture_default_str();
    tr->add_option("--object", object_mm, "Object distance [mm]; infinity when omitted");
    tr->add_option("--shift", shift, "Focusing group shift from the tabulated position [mm]")->capture_default_str();
    tr->add_option("--rings", rings, "Pupil rings including the centre ray")->capture_default_str();
    tr->add_option("--arms", arms, "Rays per ring")->capture_default_str();
    add_common(tr, common, true, "json, csv, svg");

    // focus-sweep
    auto* fs = app.add_subcommand("focus-sweep", "Best-focus group shift [um] against object distance and travel range [um]");
    std::vector<double> nears;
    fs->add_option("--near", nears, "Object distance(s) [mm], swept together with infinity")->required();
    fs->add_option("--rings", rings, "Pupil rings including the centre ray")->capture_default_str();
    fs->add_option("--arms", arms, "Rays per ring")->capture_default_str();
    add_common(fs, common, true, "json, csv");

    // tolerance
    auto* tl = app.add_subcommand("tolerance", "On-axis spot growth [um] for a decentered or tilted focusing group");
    double decenter = 0.0, tilt = 0.0;
    tl->add_option("--decenter", decenter, "Decenter along y [mm], at most 0.2")->capture_default_str();
    tl->add_option("--tilt", tilt, "Tilt about x [deg], at most 1")->capture_default_str();
    add_common(tl, common, true, "json");

    // array-plan
    auto* ap = app.add_subcommand("array-plan", "Array tiling: overlap [deg], channels, ifov [urad], equivalent focal lengths [mm], zoom");
    std::optional<double> cone, mfov, pitch, efl, diag;
    double total = 100.0, ref_pixel = array::kReferencePixel;
    int display = array::kDefaultDisplayPx;
    ap->add_option("--cone", cone, "Channel cone angle [deg]; default from the lens");
    ap->add_option("--mfov", mfov, "Channel full field [deg]; default from the lens");
    ap->add_option("--total", total, "Coverage target [deg]")->capture_default_str();
    ap->add_option("--pitch", pitch, "Pixel pitch [um]; default from the lens");
    ap->add_option("--efl", efl, "Channel focal length [mm]; default from the lens");
    ap->add_option("--diagonal", diag, "Sensor diagonal [mm]; default from the lens");
    ap->add_option("--ref-pixel", ref_pixel, "Full-frame reference pixel [um]")->capture_default_str();
    ap->add_option("--display", display, "Display width [px]")->capture_default_str();
    add_common(ap, common, true, "json, csv");

    // validate
    auto* va = app.add_subcommand("validate", "Check a prescription and print its total track [mm]");
    add_common(va, common, true, "text (default), json", false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, d;
        const int code = app.exit(e, o, d);
        out << o.str();
        err << d.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string text;
    try {
        if (fo->parsed()) {
            checked_format(common, {Format::json}, "first-order");
            const double f = gaussian::two_group_efl(f1, f2, sep);
            const auto near_obj = object_from_mm(near);
            const auto tr2 = travel::travel_two_group(f1, f2, sep, near_obj);
            const auto bud = travel::focus_positions(f, fno, coc_um * 1e-3, std::abs(near), pixels, budget_um);
            Json j;
            j["f1_mm"] = f1;
            j["f2_mm"] = f2;
            j["d_mm"] = sep;
            j["efl_mm"] = f;
            j["alpha"] = f1 / f;
            j["beta"] = sep / f;
            j["back_working_distance_mm"] = gaussian::back_working_distance(f1, f2, sep);
            if (ds) {
                const auto spec = gaussian::TwoGroupSpec::from_groups(f1, f2, sep, *ds, fno, fov);
                const auto a = gaussian::aperture_model(spec);
                j["aperture"] = {{"d_s_mm", *ds}, {"d1_mm", a.d1}, {"d2_mm", a.d2}, {"l2_prime_mm", a.l2_prime}};
            }
            if (d1_max && d2_max) {
                const auto spec = gaussian::TwoGroupSpec::from_groups(f1, f2, sep, 0.0, fno, fov);
                const auto iv = gaussian::solve_stop_position(spec, *d1_max, *d2_max);
                j["stop_interval_mm"] = iv ? Json{{"lo", iv->lo}, {"hi", iv->hi}} : Json(nullptr);
            }
            j["travel"] = {{"near_mm", near_obj.mm()},
                           {"r_o_um", tr2.r_o},
                           {"delta_l1_um", tr2.delta_l1},
                           {"l2_mm", tr2.l2_conj},
                           {"r_um", tr2.r},
                           {"gamma", optional_json(tr2.gamma)},
                           {"gamma_closed", travel::gamma_closed(f1 / f)}};
            j["focus_budget"] = {{"hyperfocal_mm", bud.hyperfocal},
                                 {"coc_um", bud.coc * 1e3},
                                 {"positions", bud.positions},
                                 {"total_pixels", bud.total_pixels},
                                 {"travel_budget_um", bud.travel_budget},
                                 {"within_budget", tr2.r <= bud.travel_budget}};
            text = report::dump(j);
        } else if (gc->parsed()) {
            const Format fmt = checked_format(common, {Format::json, Format::csv, Format::svg}, "gamma-curve");
            const auto segs = travel::gamma_curve(a_from, a_to, a_n);
            if (fmt == Format::json) text = report::dump(report::gamma_json(segs));
            else if (fmt == Format::csv) text = report::to_csv(report::gamma_table(segs));
            else text = report::to_svg(report::gamma_plot(segs));
        } else if (t2->parsed()) {
            const Format fmt = checked_format(common, {Format::json, Format::csv}, "table2");
            const auto rows = travel::reproduce_family_table();
            text = fmt == Format::json ? report::dump(report::family_json(rows))
                                       : report::to_csv(report::family_table(rows));
        } else if (tr->parsed()) {
            const Format fmt = checked_format(common, {Format::json, Format::csv, Format::svg}, "trace");
            const auto p = load_lens(common, "");
            const auto obj = object_from_mm(object_mm);
            const raytrace::Layout layout(p, shift);
            const auto para = raytrace::paraxial_trace(p, kLineD, shift, obj);
            const auto rays = raytrace::ray_fan(para.entrance_pupil,
                                                raytrace::launch_plane(p, para.entrance_pupil), field, obj, rings,
                                                arms, kLineD);
            std::vector<raytrace::TraceResult> results;
            results.reserve(rays.size());
            for (const auto& r : rays) results.push_back(raytrace::trace_ray(layout, r, false));
            const auto spot = focus::spot_rms(p, layout, obj, field, {rings, arms, kLineD});
            if (fmt == Format::json) {
                Json j;
                j["lens"] = p.name;
                j["paraxial"] = {{"efl_mm", para.efl},
                                 {"bfl_mm", para.bfl},
                                 {"defocus_mm", para.defocus},
                                 {"entrance_pupil_z_mm", para.entrance_pupil.position},
                                 {"entrance_pupil_diameter_mm", para.entrance_pupil.diameter},
                                 {"working_fno", para.working_fno}};
                j["spot"] = report::spot_json(spot);
                text = report::dump(j);
            } else if (fmt == Format::csv) {
                report::Table t;
                t.columns = {"ray", "status", "failed_surface", "x_um", "y_um"};
                for (std::size_t i = 0; i < results.size(); ++i) {
                    const auto& r = results[i];
                    t.rows.push_back({static_cast<long long>(i), std::string(raytrace::to_string(r.status)),
                                      static_cast<long long>(r.failed_surface), (r.image_x - spot.centroid_x) * 1e3, (r.image_y - spot.centroid_y) * 1e3});
                }
                text = report::to_csv(t);
            } else {
                report::Plot plot;
                plot.title = p.name + " spot, field " + report::format_number(field) + " deg, rms " +
                             fixed(spot.rms_radius, 2) + " um";
                plot.x_label = "x - centroid [um]";
                plot.y_label = "y - centroid [um]";
                plot.equal_aspect = true;
                report::Series s;
                s.markers = true;
                for (const auto& r : results)
                    if (r.ok()) s.points.emplace_back((r.image_x - spot.centroid_x) * 1e3,
                                                      (r.image_y - spot.centroid_y) * 1e3);
                plot.series.push_back(std::move(s));
                text = report::to_svg(plot);
            }
        } else if (fs->parsed()) {
            const Format fmt = checked_format(common, {Format::json, Format::csv}, "focus-sweep");
            const auto p = load_lens(common, "");
            std::vector<ObjectDistance> ds_list{ObjectDistance::infinity()};
            for (double n : nears) ds_list.push_back(object_from_mm(n));
            const auto sweep = focus::travel_sweep(p, ds_list, {rings, arms, kLineD});
            if (fmt == Format::json) {
                Json j;
                j["lens"] = p.name;
                auto body = report::sweep_json(sweep);
                for (auto& [k, v] : body.items()) j[k] = v;
                text = report::dump(j);
            } else {
                text = report::to_csv(report::sweep_table(sweep));
            }
        } else if (tl->parsed()) {
            checked_format(common, {Format::json}, "tolerance");
            const auto p = load_lens(common, "");
            const auto d = focus::perturb_focus_group(p, decenter, tilt);
            Json j;
            j["lens"] = p.name;
            j["decenter_mm"] = decenter;
            j["tilt_deg"] = tilt;
            j["nominal"] = report::spot_json(d.nominal);
            j["perturbed"] = report::spot_json(d.perturbed);
            j["rms_growth_um"] = d.rms_growth;
            j["centroid_shift_um"] = {d.centroid_shift_x * 1e3, d.centroid_shift_y * 1e3};
            text = report::dump(j);
        } else if (ap->parsed()) {
            const Format fmt = checked_format(common, {Format::json, Format::csv}, "array-plan");
            array::ArraySpec spec;
            spec.total_fov = total;
            const bool need_lens = !cone || !mfov || !pitch || !efl || !diag;
            if (need_lens) {
                const auto p = load_lens(common, "mms45");
                if (!p.channel && (!cone || !mfov))
                    throw InputError("lens '" + p.name + "' has no array geometry; pass --cone and --mfov");
                spec.cone_angle = cone.value_or(p.channel ? p.channel->cone_angle : 0.0);
                spec.mfov = mfov.value_or(p.channel ? p.channel->mfov : 0.0);
                spec.pixel_pitch = pitch.value_or(p.sensor.pixel_pitch * 1e3);
                spec.efl = efl.value_or(p.nominal.efl);
                spec.sensor_diagonal = diag.value_or(p.sensor.diagonal);
                spec.h_px = p.sensor.h_px;
                spec.v_px = p.sensor.v_px;
            } else {
                spec.cone_angle = *cone;
                spec.mfov = *mfov;
                spec.pixel_pitch = *pitch;
                spec.efl = *efl;
                spec.sensor_diagonal = *diag;
            }
            const auto plan = array::plan(spec, display, ref_pixel);
            text = fmt == Format::json ? report::dump(report::array_json(plan))
                                       : report::to_csv(report::array_table(plan));
        } else if (va->parsed()) {
            // Plain text unless a format is asked for.
            const std::string vfmt = va->get_option("--format")->count() ? common.format : "text";
            if (vfmt != "text" && vfmt != "json")
                throw InputError("format '" + vfmt + "' is not available for validate");
            const auto p = load_lens(common, "");
            const auto rep = validate(p);
            if (vfmt == "json") {
                text = report::dump(report::validation_json(p, rep));
            } else {
                std::ostringstream o;
                o << "lens: " << p.name << "\n";
                o << "surfaces: " << p.surfaces.size() << "\n";
                o << "stop: surface " << p.stop_index << "\n";
                o << "focusing group: surfaces " << p.focusing_group[0] << "-" << p.focusing_group[1] << "\n";
                o << "total track: " << fixed(total_track(p), 3) << " mm\n";
                o << "max focusing group diameter: " << fixed(rep.max_focusing_group_diameter, 3) << " mm\n";
                for (const auto& i : rep.issues) {
                    o << (i.severity == ValidationIssue::Severity::error ? "error" : "warning");
                    if (i.surface) o << " (surface " << i.surface << ")";
                    o << ": " << i.message << "\n";
                }
                o << (rep.ok() ? "status: ok\n" : "status: invalid\n");
                text = o.str();
            }
            if (!rep.ok()) {
                out << text;
                err << "focuskit: prescription '" << p.name << "' failed validation\n";
                return kExitInput;
            }
        }
    } catch (const InputError& e) {
        err << "focuskit: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericError& e) {
        err << "focuskit: numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }

    if (common.output.empty()) {
        out << text;
    } else {
        std::ofstream f(common.output, std::ios::binary);
        if (!f || !(f << text)) {
            err << "focuskit: cannot write " << common.output << "\n";
            return kExitInput;
        }
    }
    return kExitOk;
}

}  // namespace focuskit::cli
