#include "knotcert/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "knotcert/errors.hpp"

namespace knotcert {

namespace {

struct Token {
    std::string_view text;
    int column = 0;  // 1-based
};

struct Line {
    int number = 0;
    std::vector<Token> tokens;
};

std::vector<Token> tokenize(std::string_view line, char separator_extra = '\0') {
    std::vector<Token> tokens;
    std::size_t i = 0;
    auto is_space = [&](char c) {
        return c == ' ' || c == '\t' || c == '\r' || (separator_extra != '\0' && c == separator_extra);
    };
    while (i < line.size()) {
        if (line[i] == '#') {
            break;
        }
        if (is_space(line[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !is_space(line[i]) && line[i] != '#') {
            ++i;
        }
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

std::vector<Line> split_lines(std::string_view text, char separator_extra = '\0') {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        ++number;
        auto tokens = tokenize(raw, separator_extra);
        if (!tokens.empty()) {
            lines.push_back({number, std::move(tokens)});
        }
        if (end == std::string_view::npos) {
            break;
        }
        pos = end + 1;
    }
    return lines;
}

double parse_real(const Token& tok, int line) {
    double value = 0.0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("expected a real number, got '" + std::string(tok.text) + "'", line,
                         tok.column);
    }
    if (!std::isfinite(value)) {
        throw ParseError("number must be finite", line, tok.column);
    }
    return value;
}

int parse_int(const Token& tok, int line) {
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
        throw ParseError("expected an integer, got '" + std::string(tok.text) + "'", line,
                         tok.column);
    }
    return value;
}

void expect_arity(const Line& line, std::size_t count, const std::string& what) {
    if (line.tokens.size() != count) {
        const Token& tok = line.tokens.size() > count ? line.tokens[count] : line.tokens.back();
        throw ParseError(what + " expects " + std::to_string(count - 1) + " value(s)", line.number,
                         tok.column);
    }
}

Point3 parse_row(const Line& line) {
    if (line.tokens.size() != 3) {
        const Token& tok = line.tokens.size() > 3 ? line.tokens[3] : line.tokens.back();
        throw ParseError("control point row needs 3 coordinates, got " +
                             std::to_string(line.tokens.size()),
                         line.number, tok.column);
    }
    return {parse_real(line.tokens[0], line.number), parse_real(line.tokens[1], line.number),
            parse_real(line.tokens[2], line.number)};
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

std::string format_real(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CurveFile parse_curve(std::string_view text) {
    const std::vector<Line> lines = split_lines(text);
    if (lines.empty()) {
        throw ParseError("empty curve document", 1, 1);
    }
    const Line& header = lines.front();
    if (header.tokens.front().text != "knotcert-curve") {
        throw ParseError("expected 'knotcert-curve' header", header.number,
                         header.tokens.front().column);
    }
    expect_arity(header, 2, "knotcert-curve");
    if (parse_int(header.tokens[1], header.number) != 1) {
        throw ParseError("unsupported format version", header.number, header.tokens[1].column);
    }

    std::optional<double> radius;
    std::vector<BezierSegment> segments;
    struct Pending {
        int degree = 0;
        int line = 0;
        int column = 0;
        std::vector<Point3> points;
    };
    std::optional<Pending> pending;

    auto close_segment = [&](int line, int column) {
        if (!pending) {
            return;
        }
        const std::size_t want = static_cast<std::size_t>(pending->degree) + 1;
        if (pending->points.size() != want) {
            throw ParseError("segment " + std::to_string(segments.size()) + " declares degree " +
                                 std::to_string(pending->degree) + " but has " +
                                 std::to_string(pending->points.size()) + " control points",
                             line, column);
        }
        segments.emplace_back(std::move(pending->points));
        pending.reset();
    };

    for (std::size_t k = 1; k < lines.size(); ++k) {
        const Line& line = lines[k];
        const Token& head = line.tokens.front();
        if (head.text == "radius") {
            expect_arity(line, 2, "radius");
            if (radius || !segments.empty() || pending) {
                throw ParseError("radius must appear once, before the first segment", line.number,
                                 head.column);
            }
            const double r = parse_real(line.tokens[1], line.number);
            if (!(r > 0.0)) {
                throw ParseError("radius must be positive", line.number, line.tokens[1].column);
            }
            radius = r;
        } else if (head.text == "segment") {
            expect_arity(line, 2, "segment");
            close_segment(line.number, head.column);
            const int degree = parse_int(line.tokens[1], line.number);
            if (degree < 1) {
                throw ParseError("segment degree must be >= 1", line.number,
                                 line.tokens[1].column);
            }
            pending = Pending{degree, line.number, head.column, {}};
        } else {
            if (!pending) {
                throw ParseError("control point row outside a segment", line.number, head.column);
            }
            pending->points.push_back(parse_row(line));
        }
    }
    const int end_line = lines.back().number + 1;
    close_segment(end_line, 1);
    if (segments.empty()) {
        throw ParseError("curve has no segments", end_line, 1);
    }
    return CurveFile{CompositeBezier(std::move(segments)), radius};
}

CurveFile read_curve_file(const std::filesystem::path& path) { return parse_curve(read_all(path)); }

void write_curve(std::ostream& out, const CompositeBezier& curve, std::optional<double> radius) {
    out << "knotcert-curve 1\n";
    if (radius) {
        out << "radius " << format_real(*radius) << '\n';
    }
    for (const auto& seg : curve.segments()) {
        out << "segment " << seg.degree() << '\n';
        for (const auto& p : seg.control_points()) {
            out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z) << '\n';
        }
    }
}

void write_curve_file(const std::filesystem::path& path, const CompositeBezier& curve,
                      std::optional<double> radius) {
    std::ostringstream out;
    write_curve(out, curve, radius);
    write_text_file(path, out.str());
}

void write_points_csv(std::ostream& out, const std::vector<Point3>& points) {
    out << "x,y,z\n";
    for (const auto& p : points) {
        out << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(p.z) << '\n';
    }
}

void write_points_obj(std::ostream& out, const std::vector<Point3>& points) {
    for (const auto& p : points) {
        out << "v " << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z)
            << '\n';
    }
    if (points.size() >= 2) {
        out << 'l';
        for (std::size_t j = 1; j <= points.size(); ++j) {
            out << ' ' << j;
        }
        out << '\n';
    }
}

std::vector<Point3> parse_points_csv(std::string_view text) {
    std::vector<Point3> points;
    for (const Line& line : split_lines(text, ',')) {
        if (points.empty() && line.tokens.front().text == "x") {
            continue;
        }
        points.push_back(parse_row(line));
    }
    return points;
}

std::vector<Point3> parse_points_obj(std::string_view text) {
    std::vector<Point3> points;
    for (const Line& line : split_lines(text)) {
        if (line.tokens.front().text != "v") {
            continue;
        }
        if (line.tokens.size() < 4) {
            throw ParseError("vertex needs 3 coordinates", line.number,
                             line.tokens.back().column);
        }
        points.push_back({parse_real(line.tokens[1], line.number),
                          parse_real(line.tokens[2], line.number),
                          parse_real(line.tokens[3], line.number)});
    }
    return points;
}

std::vector<Point3> read_points_file(const std::filesystem::path& path) {
    const std::string text = read_all(path);
    return path.extension() == ".obj" ? parse_points_obj(text) : parse_points_csv(text);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write " + path.string());
    }
    out << content;
}

}  // namespace knotcert
