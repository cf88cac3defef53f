#include <iostream>

#include "CLI11.hpp"
#include "knotcert/commands.hpp"

int main(int argc, char** argv) {
    using namespace knotcert;
    CLI::App app{"Certified piecewise-linear approximation of composite Bezier curves"};
    app.require_subcommand(1);

    CommandOptions opts;
    double radius = 0.0;
    int iterations = 0;
    std::string out_dir = ".";
    std::string curve_path;
    std::string polyline_path;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("curve", curve_path, "curve file")->required();
        cmd->add_option("--radius", radius, "explicit pipe radius")->check(CLI::PositiveNumber);
        cmd->add_option("--radius-scale", opts.radius_scale, "multiplier on the computed radius")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--grid", opts.grid, "parameter grid size")->check(CLI::Range(2, 1 << 20));
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", opts.seed, "seed for isotopy spot checks");
    };
    auto iterative = [&](CLI::App* cmd) {
        cmd->add_option("--iterations", iterations, "subdivision count override")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--retry-cap", opts.retry_cap, "extra subdivisions allowed on failure")
            ->check(CLI::NonNegativeNumber);
    };

    auto* analyze = app.add_subcommand("analyze", "pipe radius and its ingredients");
    common(analyze);
    auto* bound = app.add_subcommand("bound", "a-priori subdivision counts");
    common(bound);
    auto* approximate = app.add_subcommand("approximate", "subdivide, verify, write certificate");
    common(approximate);
    iterative(approximate);
    auto* verify = app.add_subcommand("verify", "verify an external polyline");
    common(verify);
    verify->add_option("polyline", polyline_path, "polyline file (.csv or .obj)")->required();
    auto* animate = app.add_subcommand("animate", "write isotopy frames");
    common(animate);
    iterative(animate);
    animate->add_option("--steps", opts.steps, "number of frames")->check(CLI::Range(2, 100000));
    animate->add_option("--samples", opts.samples, "curve samples per frame")
        ->check(CLI::Range(2, 10000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    opts.curve = curve_path;
    opts.polyline = polyline_path;
    opts.out = out_dir;
    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--radius") > 0) {
        opts.radius = radius;
    }
    if (cmd->get_option_no_throw("--iterations") && cmd->count("--iterations") > 0) {
        opts.iterations = iterations;
    }

    if (cmd == analyze) {
        return cmd_analyze(opts, std::cout, std::cerr);
    }
    if (cmd == bound) {
        return cmd_bound(opts, std::cout, std::cerr);
    }
    if (cmd == approximate) {
        return cmd_approximate(opts, std::cout, std::cerr);
    }
    if (cmd == verify) {
        return cmd_verify(opts, std::cout, std::cerr);
    }
    return cmd_animate(opts, std::cout, std::cerr);
}
