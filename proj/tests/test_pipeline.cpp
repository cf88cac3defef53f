#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "corpus.hpp"
#include "knotcert/certificate.hpp"
#include "knotcert/commands.hpp"
#include "knotcert/errors.hpp"
#include "knotcert/io.hpp"
#include "knotcert/pipeline.hpp"

using namespace knotcert;

namespace fs = std::filesystem;

namespace {

const CompositeBezier kQuadratic({corpus::quadratic()});
const CompositeBezier kLine({BezierSegment({{0, 0, 0}, {1, 0, 0}}),
                             BezierSegment({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}})});

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("knotcert_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_cli(const std::string& args) {
    const std::string command = std::string(KNOTCERT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(approximate, quadratic_passes_at_predicted_count) {
    const Approximation a = approximate(kQuadratic);
    EXPECT_TRUE(a.pass());
    EXPECT_NEAR(a.r, 1.0 / 1.02, 1e-9);
    ASSERT_EQ(a.start_iterations.size(), 1u);
    ASSERT_TRUE(a.bounds[0].report.has_value());
    EXPECT_EQ(a.start_iterations[0], a.bounds[0].report->N_star);
    EXPECT_EQ(a.extra_iterations(), 0);
    EXPECT_EQ(a.attempts, 1);
    ASSERT_TRUE(a.spot_check.has_value());
    EXPECT_TRUE(a.spot_check->pass);
    const auto poly = a.polyline();
    EXPECT_EQ(poly.size(), (std::size_t{1} << a.iterations[0]) * 2 + 1);
    EXPECT_EQ(poly.front(), (Point3{0, 0, 0}));
    EXPECT_EQ(poly.back(), (Point3{2, 0, 0}));
}

TEST(approximate, retries_failing_segments) {
    ApproximateOptions opts;
    opts.iterations = 0;
    const Approximation a = approximate(kQuadratic, opts);
    EXPECT_TRUE(a.pass());
    EXPECT_GT(a.attempts, 1);
    EXPECT_EQ(a.extra_iterations(), a.iterations[0]);

    opts.retry_cap = 0;
    const Approximation failed = approximate(kQuadratic, opts);
    EXPECT_FALSE(failed.pass());
    EXPECT_EQ(failed.attempts, 1);
    EXPECT_FALSE(failed.spot_check.has_value());
}

TEST(approximate, straight_line_needs_explicit_radius) {
    EXPECT_THROW(approximate(kLine), DomainError);
    ApproximateOptions opts;
    opts.radius = 0.5;
    const Approximation a = approximate(kLine, opts);
    EXPECT_TRUE(a.pass());
    EXPECT_TRUE(a.radius_override);
    // The degree-2 segment still gets the a-priori count, which is not zero.
    ASSERT_TRUE(a.bounds[1].report.has_value());
    const int n = a.bounds[1].report->N_star;
    EXPECT_EQ(a.iterations, (std::vector<int>{0, n}));
    EXPECT_EQ(a.extra_iterations(), 0);
    EXPECT_EQ(a.polyline().size(), 2 + (std::size_t{2} << n));
}

TEST(approximate, segment_cap_is_enforced) {
    ApproximateOptions opts;
    opts.iterations = 30;
    opts.segment_cap = 1 << 10;
    EXPECT_THROW(approximate(kQuadratic, opts), ResourceError);
}

TEST(verify_external, accepts_approximate_output) {
    const auto corpus = corpus::composite_corpus(2, 99);
    for (const auto& curve : corpus) {
        const Approximation a = approximate(curve);
        ASSERT_TRUE(a.pass());
        const ExternalVerification ext = verify_external(curve, a.polyline(), a.r);
        EXPECT_TRUE(ext.verification.pass);
        EXPECT_EQ(ext.verification.pairs.size(), a.verification.pairs.size());
        for (std::size_t k = 0; k < ext.sub_curves.size(); ++k) {
            EXPECT_EQ(ext.sub_polylines[k].front(), ext.sub_curves[k].control_points().front());
        }
    }
}

TEST(verify_external, rejects_bad_polylines) {
    // Misses the far endpoint.
    EXPECT_THROW(verify_external(kQuadratic, {{0, 0, 0}, {1, 1, 0}, {2, 0.1, 0}}, 0.5), DomainError);
    // Too coarse: the single control polygon fails Condition 2.
    const ExternalVerification coarse =
        verify_external(kQuadratic, {{0, 0, 0}, {1, 1, 0}, {2, 0, 0}}, 1.0 / 1.02);
    EXPECT_FALSE(coarse.verification.pass);
}

TEST(dyadic_piece, matches_subdivide_iter) {
    const BezierSegment seg = corpus::quadratic();
    const SubdivisionResult sub = subdivide_iter(seg, 3);
    for (std::size_t k = 0; k < 8; ++k) {
        const BezierSegment piece = dyadic_piece(seg, 3, k);
        const auto a = piece.control_points();
        const auto b = sub.sub_segments[k].control_points();
        for (std::size_t j = 0; j < a.size(); ++j) {
            EXPECT_EQ(a[j], b[j]);
        }
    }
}

TEST(certificate, deterministic_bytes) {
    const Approximation a = approximate(kQuadratic);
    const Approximation b = approximate(kQuadratic);
    EXPECT_EQ(certificate_text(kQuadratic, a), certificate_text(kQuadratic, b));
    EXPECT_EQ(certificate_json(kQuadratic, a), certificate_json(kQuadratic, b));
    const std::string text = certificate_text(kQuadratic, a);
    EXPECT_NE(text.find("verdict = PASS"), std::string::npos);
    EXPECT_NE(text.find("[verification]"), std::string::npos);
}

TEST(commands, approximate_writes_outputs) {
    const fs::path dir = scratch("commands");
    write_curve_file(dir / "q.curve", kQuadratic);
    CommandOptions opts;
    opts.curve = dir / "q.curve";
    opts.out = dir / "out";
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cmd_approximate(opts, out, err), kExitPass) << err.str();
    for (const char* name : {"polyline.csv", "polyline.obj", "certificate.txt", "certificate.json",
                             "certificate.meta.json"}) {
        EXPECT_TRUE(fs::exists(opts.out / name)) << name;
    }
    const std::string first = slurp(opts.out / "certificate.txt");
    EXPECT_EQ(cmd_approximate(opts, out, err), kExitPass);
    EXPECT_EQ(slurp(opts.out / "certificate.txt"), first);

    opts.polyline = opts.out / "polyline.csv";
    opts.out = dir / "verified";
    EXPECT_EQ(cmd_verify(opts, out, err), kExitPass) << err.str();

    opts.out = dir / "frames";
    opts.steps = 3;
    opts.samples = 9;
    EXPECT_EQ(cmd_animate(opts, out, err), kExitPass) << err.str();
    EXPECT_TRUE(fs::exists(opts.out / "frame_000.csv"));
    EXPECT_TRUE(fs::exists(opts.out / "frame_002.obj"));
    fs::remove_all(dir);
}

TEST(cli, exit_codes) {
    const fs::path dir = scratch("cli");
    write_curve_file(dir / "q.curve", kQuadratic);
    write_curve_file(dir / "line.curve", kLine);
    write_text_file(dir / "bad.curve", "knotcert-curve 1\nsegment 2\n0 0 0\n");
    const std::string out = " --out " + (dir / "out").string();
    const std::string q = (dir / "q.curve").string();

    EXPECT_EQ(run_cli("analyze " + q + out), 0);
    EXPECT_EQ(run_cli("bound " + q + out), 0);
    EXPECT_EQ(run_cli("approximate " + q + out), 0);
    EXPECT_EQ(run_cli("approximate " + q + " --iterations 0 --retry-cap 0" + out), 2);
    EXPECT_EQ(run_cli("approximate " + (dir / "bad.curve").string() + out), 3);
    EXPECT_EQ(run_cli("approximate " + (dir / "missing.curve").string() + out), 3);
    EXPECT_EQ(run_cli("approximate " + (dir / "line.curve").string() + out), 3);
    EXPECT_EQ(run_cli("approximate " + (dir / "line.curve").string() + " --radius 0.5" + out), 0);
    EXPECT_EQ(run_cli("approximate " + q + " --iterations 40" + out), 4);
    EXPECT_EQ(run_cli("approximate " + q + " --radius -1" + out), 3);
    EXPECT_EQ(run_cli("frobnicate " + q), 3);
    fs::remove_all(dir);
}
