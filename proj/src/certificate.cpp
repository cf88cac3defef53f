#include "knotcert/certificate.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "json.hpp"
#include "knotcert/io.hpp"

namespace knotcert {

namespace {

using Json = nlohmann::ordered_json;

// Non-finite reals are stored as strings; JSON has no infinity.
Json real(double v) { return std::isfinite(v) ? Json(v) : Json(format_real(v)); }

std::string scalar_text(const Json& v) {
    if (v.is_number_float()) {
        return format_real(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

std::string inline_text(const Json& v) {
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) {
            out += (out.empty() ? "" : " ") + inline_text(item);
        }
        return out;
    }
    if (v.is_object()) {
        std::string out;
        for (const auto& [key, item] : v.items()) {
            out += (out.empty() ? "" : " ") + key + "=" + inline_text(item);
        }
        return out;
    }
    return scalar_text(v);
}

bool is_object_array(const Json& v) {
    return v.is_array() && !v.empty() && v.front().is_object();
}

void render_section(std::ostringstream& out, const std::string& name, const Json& body) {
    out << '[' << name << "]\n";
    for (const auto& [key, v] : body.items()) {
        if (!v.is_object() && !is_object_array(v)) {
            out << key << " = " << inline_text(v) << '\n';
        }
    }
    for (const auto& [key, v] : body.items()) {
        if (!is_object_array(v)) {
            continue;
        }
        // One compact line per row.
        out << '[' << name << '.' << key << "]\n";
        for (std::size_t j = 0; j < v.size(); ++j) {
            out << j << " = " << inline_text(v[j]) << '\n';
        }
    }
    for (const auto& [key, v] : body.items()) {
        if (v.is_object()) {
            render_section(out, name + "." + key, v);
        }
    }
}

std::string render_text(const Json& doc) {
    std::ostringstream out;
    for (const auto& [name, body] : doc.items()) {
        if (body.is_object()) {
            render_section(out, name, body);
        } else if (is_object_array(body)) {
            for (std::size_t j = 0; j < body.size(); ++j) {
                render_section(out, name + "." + std::to_string(j), body[j]);
            }
        }
    }
    return out.str();
}

Json header(const std::string& kind, bool pass) {
    return Json{{"format", 1},
                {"tool_version", kToolVersion},
                {"kind", kind},
                {"verdict", pass ? "PASS" : "FAIL"}};
}

Json curve_json(const CompositeBezier& curve) {
    Json degrees = Json::array();
    for (const auto& seg : curve.segments()) {
        degrees.push_back(seg.degree());
    }
    return Json{{"segments", curve.segment_count()}, {"degrees", degrees}};
}

Json pipe_json(const PipeSpec& pipe) {
    return Json{{"r", real(pipe.r)},
                {"kappa_max", real(pipe.kappa_max)},
                {"kappa_max_raw", real(pipe.kappa_max_raw)},
                {"kappa_safety", real(pipe.kappa_safety)},
                {"d_min", real(pipe.d_min)},
                {"d_min_s", real(pipe.separation.s)},
                {"d_min_t", real(pipe.separation.t)},
                {"separation_grid", pipe.separation.grid},
                {"exclusion_arc", real(pipe.separation.exclusion_arc)},
                {"r_end", real(pipe.r_end)},
                {"radius_scale", real(pipe.radius_scale)},
                {"radius_rule", "radius_scale * min(1 / kappa_max, d_min, r_end)"},
                {"kappa_rule", "sampled maximum (1024 samples, golden refinement) times kappa_safety"}};
}

Json decisions_json(const VerifyOptions& options) {
    return Json{{"log_base", 2},
                {"m_const", "max norm of hodograph control points"},
                {"n_infinity", "floor(k/2) ceil(k/2) / (2k)"},
                {"n1_rounding", "ceil(N1) clamped at 0 before evaluating B'_dist"},
                {"condition2_threshold", "1 - cos(theta) <= 1/2"},
                {"sigma", "hodograph hull distance to the origin under subdivision"},
                {"sub_pipe_radius", "common radius r for every sub-curve"},
                {"junction_discs", "shared; both adjacent fields are the identity there"},
                {"tol_orth", "1e-7 * (1 + |q|)"},
                {"tol_margin", real(kMarginTolerance)},
                {"projection",
                 std::to_string(options.coarse_samples) +
                     " coarse samples + safeguarded Newton on (C - q) . C'"},
                {"condition1_samples", "all vertices + " + std::to_string(options.samples_per_edge) +
                                           " per edge, polyline ends exempt"}};
}

Json bound_json(const SegmentBound& b, std::size_t k) {
    Json j{{"segment", k}};
    if (!b.report) {
        j["infeasible"] = b.infeasible;
        return j;
    }
    const BoundReport& r = *b.report;
    const BoundInputs& in = r.inputs;
    j["degree"] = in.n;
    j["n_inf_hodo"] = real(in.n_inf_hodo);
    j["n_inf_curve"] = real(in.n_inf_curve);
    j["d2p_prime"] = real(in.d2p_prime);
    j["d2p"] = real(in.d2p);
    j["sigma"] = real(in.sigma);
    j["m_const"] = real(in.m_const);
    j["nu"] = real(r.nu);
    j["n1"] = real(r.angle.n1);
    j["n1_rounded"] = r.angle.n1_rounded;
    j["b_prime_dist"] = real(r.angle.b_dist);
    j["f"] = real(r.angle.f);
    j["N_of_nu"] = r.N_of_nu;
    j["angle_branch"] = r.condition2.angle_branch;
    j["derivative_branch"] = r.condition2.derivative_branch;
    j["N_prime"] = r.N_prime;
    j["N_star"] = r.N_star;
    j["old_bound"] = r.old_bound;
    return j;
}

Json pair_json(const SubPairReport& p) {
    const auto& c1 = p.conditions.condition1;
    const auto& c2 = p.conditions.condition2;
    Json j{{"id", std::to_string(p.segment) + "." + std::to_string(p.index)},
           {"lo", real(p.conditions.sub_interval.lo)},
           {"hi", real(p.conditions.sub_interval.hi)},
           {"pass", p.pass()},
           {"c1", c1.pass},
           {"clearance", real(c1.clearance)},
           {"max_tangential", real(c1.max_tangential)},
           {"c2", c2.pass},
           {"value", real(c2.value)},
           {"margin", real(c2.margin)}};
    if (p.uniqueness) {
        j["unique"] = std::to_string(std::min(p.uniqueness->unique_polyline,
                                              p.uniqueness->unique_curve)) +
                      "/" + std::to_string(p.uniqueness->grid_size);
        j["monotone"] = p.correspondence_monotone;
        j["max_offset"] = real(p.max_offset);
    } else {
        j["unique"] = "skipped";
    }
    return j;
}

Json verification_json(const CompositeVerification& v) {
    std::size_t checked = 0;
    for (const auto& p : v.pairs) {
        checked += p.uniqueness.has_value();
    }
    return Json{{"r", real(v.r)},
                {"grid", v.options.grid},
                {"samples_per_edge", v.options.samples_per_edge},
                {"coarse_samples", v.options.coarse_samples},
                {"curve_disc_samples", v.options.curve_disc_samples},
                {"pairs", v.pairs.size()},
                {"failed_pairs", v.failed_pairs},
                {"uniqueness_checked", checked},
                {"worst_clearance", real(v.worst_clearance)},
                {"worst_condition2_margin", real(v.worst_condition2_margin)}};
}

Json sub_pairs_json(const CompositeVerification& v) {
    Json rows = Json::array();
    for (const auto& p : v.pairs) {
        rows.push_back(pair_json(p));
    }
    return rows;
}

Json approximation_doc(const CompositeBezier& curve, const Approximation& result) {
    Json doc;
    doc["knotcert"] = header("approximate", result.pass());
    doc["curve"] = curve_json(curve);
    Json pipe = pipe_json(result.pipe);
    pipe["r_used"] = real(result.r);
    pipe["r_source"] = result.radius_override ? "explicit" : "computed";
    doc["pipe"] = pipe;
    doc["decisions"] = decisions_json(result.verification.options);
    Json bounds = Json::array();
    for (std::size_t k = 0; k < result.bounds.size(); ++k) {
        bounds.push_back(bound_json(result.bounds[k], k));
    }
    doc["bounds"] = bounds;
    Json ver = verification_json(result.verification);
    ver["attempts"] = result.attempts;
    ver["retry_cap"] = result.retry_cap;
    ver["start_iterations"] = result.start_iterations;
    ver["iterations"] = result.iterations;
    ver["extra_iterations"] = result.extra_iterations();
    doc["verification"] = ver;
    Json iso{{"junction_convention", "shared endpoint discs act as the identity"}};
    if (result.spot_check) {
        const auto& s = *result.spot_check;
        iso["seed"] = s.seed;
        iso["spot_points"] = s.points;
        iso["identity_max"] = real(s.identity_max);
        iso["exterior_max"] = real(s.exterior_max);
        iso["endpoint_max"] = real(s.endpoint_max);
        iso["errors"] = s.errors;
        iso["spot_pass"] = s.pass;
    } else {
        iso["spot_points"] = 0;
    }
    doc["isotopy"] = iso;
    doc["sub_pairs"] = Json{{"rows", sub_pairs_json(result.verification)}};
    return doc;
}

Json external_doc(const CompositeBezier& curve, const ExternalVerification& result) {
    Json doc;
    doc["knotcert"] = header("verify", result.verification.pass);
    doc["curve"] = curve_json(curve);
    doc["decisions"] = decisions_json(result.verification.options);
    doc["verification"] = verification_json(result.verification);
    doc["sub_pairs"] = Json{{"rows", sub_pairs_json(result.verification)}};
    return doc;
}

}  // namespace

std::string certificate_text(const CompositeBezier& curve, const Approximation& result) {
    return render_text(approximation_doc(curve, result));
}

std::string certificate_json(const CompositeBezier& curve, const Approximation& result) {
    return approximation_doc(curve, result).dump(2) + "\n";
}

std::string certificate_text(const CompositeBezier& curve, const ExternalVerification& result) {
    return render_text(external_doc(curve, result));
}

std::string certificate_json(const CompositeBezier& curve, const ExternalVerification& result) {
    return external_doc(curve, result).dump(2) + "\n";
}

std::string certificate_meta_json() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return Json{{"tool_version", kToolVersion}, {"generated_at", buf}}.dump(2) + "\n";
}

std::string pipe_report_text(const PipeSpec& pipe) {
    Json doc;
    doc["pipe"] = pipe_json(pipe);
    return render_text(doc);
}

std::string bound_report_text(const std::vector<SegmentBound>& bounds, double r) {
    Json doc;
    doc["radius"] = Json{{"r", real(r)}};
    Json rows = Json::array();
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        rows.push_back(bound_json(bounds[k], k));
    }
    doc["bounds"] = rows;
    return render_text(doc);
}

}  // namespace knotcert
