#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knotcert/curve.hpp"

namespace knotcert {

// Decimal with 17 significant digits; round-trips binary64 exactly.
// Infinities print as "inf" / "-inf".
std::string format_real(double v);

struct CurveFile {
    CompositeBezier curve;
    std::optional<double> radius;  // explicit pipe radius override
};

// Curve grammar, one item per line, '#' starts a comment:
//   knotcert-curve 1
//   radius <r>            (optional, before the first segment)
//   segment <degree>
//   <x> <y> <z>           (degree + 1 rows)
//   segment <degree>
//   ...
// Throws ParseError with line and column on malformed input.
CurveFile parse_curve(std::string_view text);
CurveFile read_curve_file(const std::filesystem::path& path);

void write_curve(std::ostream& out, const CompositeBezier& curve,
                 std::optional<double> radius = std::nullopt);
void write_curve_file(const std::filesystem::path& path, const CompositeBezier& curve,
                      std::optional<double> radius = std::nullopt);

// CSV: header "x,y,z", then one vertex per line.
void write_points_csv(std::ostream& out, const std::vector<Point3>& points);
// OBJ: one "v" line per vertex and a single "l" polyline element.
void write_points_obj(std::ostream& out, const std::vector<Point3>& points);

// Reads CSV (optional header) or OBJ ("v" lines), chosen by extension.
std::vector<Point3> read_points_file(const std::filesystem::path& path);
std::vector<Point3> parse_points_csv(std::string_view text);
std::vector<Point3> parse_points_obj(std::string_view text);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace knotcert
