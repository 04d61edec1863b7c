#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroml/automl.hpp"
#include "zeroml/bytecode.hpp"

namespace zeroml {

/// Called by `deploy(m, "api", "host:port")` after the artifact is written.
using ServeHook = std::function<void(std::shared_ptr<const TrainedModel> model, const std::filesystem::path& artifact,
                                     const std::string& host, int port)>;

struct RuntimeEnv {
    /// Used by automl when the program does not pass seed= itself.
    std::int64_t seed = 42;
    int threads = 1;
    std::filesystem::path workdir = ".";
    std::ostream* out = nullptr;  // defaults to std::cout
    /// Zeroes wall-clock fields in reports and artifacts for byte-stable output.
    bool test_mode = false;
    /// When set, every automl call writes its report JSON here.
    std::optional<std::filesystem::path> report_out;
    /// Defaults to a blocking HTTP server.
    ServeHook serve_api;
    /// Search tuning hooks (roster replacement, padded fits).
    std::optional<std::vector<Candidate>> roster;
    std::chrono::milliseconds fit_padding{0};
};

class RuntimeError : public std::runtime_error {
public:
    enum class Kind { Builtin, Arithmetic, TypeFault };
    RuntimeError(int line, Kind kind, const std::string& message)
        : std::runtime_error(message), line_(line), kind_(kind) {}
    int line() const { return line_; }
    Kind kind() const { return kind_; }
private:
    int line_;
    Kind kind_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCompile = 2;
inline constexpr int kExitRuntime = 3;

/// Runs to HALT and returns kExitOk. Throws RuntimeError.
int execute(const Bytecode& bc, RuntimeEnv& env);

}  // namespace zeroml
