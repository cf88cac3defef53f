#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace knotcert {

enum ExitCode : int {
    kExitPass = 0,
    kExitFail = 2,
    kExitInput = 3,
    kExitResource = 4,
};

struct CommandOptions {
    std::filesystem::path curve;
    std::filesystem::path polyline;   // verify only
    std::optional<double> radius;
    double radius_scale = 1.0;
    int grid = 257;
    std::optional<int> iterations;
    int retry_cap = 3;
    std::filesystem::path out = ".";
    std::uint64_t seed = 1;
    int steps = 11;
    int samples = 257;
};

// Each command prints a summary to `out`, writes its files under options.out
// and returns an exit code. Errors are reported on `err` and mapped to codes.
int cmd_analyze(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_bound(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_approximate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_animate(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace knotcert
