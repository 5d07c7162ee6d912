#pragma once

// Serialisation of analysis results: CSV tables, ordered JSON documents and
// small SVG plots. Output is byte-deterministic for identical inputs.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "focuskit/array.hpp"
#include "focuskit/focus.hpp"
#include "focuskit/gaussian.hpp"
#include "focuskit/prescription.hpp"
#include "focuskit/travel.hpp"

namespace focuskit::report {

using Json = nlohmann::ordered_json;

enum class Format { json, csv, svg };

/// Throws InputError for anything but json, csv or svg.
Format parse_format(std::string_view name);
std::string_view to_string(Format f);

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Header line plus one line per row; doubles at 6 significant digits.
/// Throws InputError for a table without rows.
std::string to_csv(const Table& t);

/// "%.6g" with '.' as the decimal separator regardless of locale.
std::string format_number(double v);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool markers = false;  ///< scatter instead of polyline
};

struct Plot {
    std::string title;
    std::string x_label;  ///< include units
    std::string y_label;
    std::vector<Series> series;
    bool equal_aspect = false;
};

/// Throws InputError when no series has points.
std::string to_svg(const Plot& plot);

/// JSON text with two-space indent and a trailing newline.
std::string dump(const Json& j);

/// JSON value for an object distance: a number in mm or the string "infinity".
Json distance_json(ObjectDistance d);

Table family_table(const std::vector<travel::FamilyRow>& rows);
Json family_json(const std::vector<travel::FamilyRow>& rows);

Table gamma_table(const std::vector<std::vector<travel::GammaPoint>>& segments);
Json gamma_json(const std::vector<std::vector<travel::GammaPoint>>& segments);
Plot gamma_plot(const std::vector<std::vector<travel::GammaPoint>>& segments);

Table sweep_table(const focus::TravelSweep& sweep);
Json sweep_json(const focus::TravelSweep& sweep);

Json spot_json(const focus::SpotReport& s);
Json array_json(const array::ArrayPlan& plan);
Table array_table(const array::ArrayPlan& plan);

Json validation_json(const Prescription& p, const ValidationReport& r);

}  // namespace focuskit::report
