#include "knotcert/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include "knotcert/certificate.hpp"
#include "knotcert/errors.hpp"
#include "knotcert/io.hpp"
#include "knotcert/isotopy.hpp"
#include "knotcert/pipeline.hpp"

namespace knotcert {

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const RegularityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const SelfIntersectionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const BoundInfeasibleError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

std::optional<double> explicit_radius(const CommandOptions& options, const CurveFile& file) {
    return options.radius ? options.radius : file.radius;
}

PipeOptions pipe_options(const CommandOptions& options) {
    PipeOptions p;
    p.radius_scale = options.radius_scale;
    if (!(p.radius_scale > 0.0)) {
        throw DomainError("radius scale must be positive");
    }
    return p;
}

VerifyOptions verify_options(const CommandOptions& options) {
    VerifyOptions v;
    if (options.grid < 2) {
        throw DomainError("grid must be at least 2");
    }
    v.grid = options.grid;
    return v;
}

std::string points_csv(const std::vector<Point3>& points) {
    std::ostringstream s;
    write_points_csv(s, points);
    return s.str();
}

std::string points_obj(const std::vector<Point3>& points) {
    std::ostringstream s;
    write_points_obj(s, points);
    return s.str();
}

void write_certificate(const std::filesystem::path& dir, const std::string& text,
                       const std::string& json) {
    write_text_file(dir / "certificate.txt", text);
    write_text_file(dir / "certificate.json", json);
    write_text_file(dir / "certificate.meta.json", certificate_meta_json());
}

}  // namespace

int cmd_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const CurveFile file = read_curve_file(options.curve);
        const PipeSpec pipe = analyze(file.curve, pipe_options(options));
        const std::string report = pipe_report_text(pipe);
        write_text_file(options.out / "analysis.txt", report);
        out << report;
        return kExitPass;
    });
}

int cmd_bound(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const CurveFile file = read_curve_file(options.curve);
        double r = 0.0;
        if (const auto given = explicit_radius(options, file)) {
            r = *given;
        } else {
            r = analyze(file.curve, pipe_options(options)).r;
        }
        if (!std::isfinite(r) || !(r > 0.0)) {
            throw DomainError("pipe radius is unbounded for this curve; pass --radius");
        }
        const std::string report = bound_report_text(segment_bounds(file.curve, r), r);
        write_text_file(options.out / "bounds.txt", report);
        out << report;
        return kExitPass;
    });
}

int cmd_approximate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const CurveFile file = read_curve_file(options.curve);
        ApproximateOptions a;
        a.pipe = pipe_options(options);
        a.radius = explicit_radius(options, file);
        a.iterations = options.iterations;
        a.retry_cap = options.retry_cap;
        a.verify = verify_options(options);
        a.seed = options.seed;
        const Approximation result = approximate(file.curve, a);
        const std::vector<Point3> poly = result.polyline();
        write_text_file(options.out / "polyline.csv", points_csv(poly));
        write_text_file(options.out / "polyline.obj", points_obj(poly));
        write_certificate(options.out, certificate_text(file.curve, result),
                          certificate_json(file.curve, result));
        out << "verdict " << (result.pass() ? "PASS" : "FAIL") << '\n'
            << "r " << format_real(result.r) << '\n'
            << "attempts " << result.attempts << '\n'
            << "vertices " << poly.size() << '\n';
        for (std::size_t k = 0; k < result.iterations.size(); ++k) {
            out << "segment " << k << " iterations " << result.iterations[k] << " (start "
                << result.start_iterations[k] << ")\n";
        }
        return result.pass() ? kExitPass : kExitFail;
    });
}

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const CurveFile file = read_curve_file(options.curve);
        double r = 0.0;
        if (const auto given = explicit_radius(options, file)) {
            r = *given;
        } else {
            r = analyze(file.curve, pipe_options(options)).r;
        }
        if (!std::isfinite(r) || !(r > 0.0)) {
            throw DomainError("pipe radius is unbounded for this curve; pass --radius");
        }
        const std::vector<Point3> poly = read_points_file(options.polyline);
        const ExternalVerification result =
            verify_external(file.curve, poly, r, verify_options(options));
        write_certificate(options.out, certificate_text(file.curve, result),
                          certificate_json(file.curve, result));
        out << "verdict " << (result.verification.pass ? "PASS" : "FAIL") << '\n'
            << "r " << format_real(r) << '\n'
            << "sub_pairs " << result.verification.pairs.size() << '\n'
            << "failed_pairs " << result.verification.failed_pairs << '\n';
        return result.verification.pass ? kExitPass : kExitFail;
    });
}

int cmd_animate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (options.steps < 2) {
            throw DomainError("steps must be at least 2");
        }
        if (options.samples < 2) {
            throw DomainError("samples must be at least 2");
        }
        const CurveFile file = read_curve_file(options.curve);
        ApproximateOptions a;
        a.pipe = pipe_options(options);
        a.radius = explicit_radius(options, file);
        a.iterations = options.iterations;
        a.retry_cap = options.retry_cap;
        a.verify = verify_options(options);
        a.seed = options.seed;
        a.spot_checks = 0;
        const Approximation result = approximate(file.curve, a);
        if (!result.pass()) {
            err << "error: approximation did not verify; no isotopy to animate\n";
            return kExitFail;
        }
        const CompositeIsotopy isotopy = build_isotopy(result.subdivisions, result.verification);
        const auto frames = sample_frames(isotopy, file.curve, options.steps, options.samples);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%03zu", i);
            write_text_file(options.out / (std::string(name) + ".csv"), points_csv(frames[i]));
            write_text_file(options.out / (std::string(name) + ".obj"), points_obj(frames[i]));
        }
        out << "frames " << frames.size() << '\n' << "samples " << options.samples << '\n';
        return kExitPass;
    });
}

}  // namespace knotcert
