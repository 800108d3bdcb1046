#pragma once

#include "jtri/matrix.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace jtri::cli {

enum class Command { gtd, gmd, gsv, joint, multicast, rates, sdr_region, fig4, lemma1 };
enum class Format { json, csv };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInvariant = 4;

struct RunConfig {
    Command command = Command::gmd;
    std::optional<std::string> input_path;
    /// Matrix text used instead of reading `input_path`.
    std::optional<std::string> input_text;
    std::uint64_t seed = 0;
    Format format = Format::json;
    std::size_t gamma_points = 201;
    double power = 1.0;
    double tol_recon = 1e-9;
    /// Diagonal (gtd) or ratio (joint) target; otherwise taken from the input.
    std::optional<RealVector> target;
    /// alpha1, beta1, alpha2, beta2 for fig4.
    std::array<double, 4> gains{1.0, 10.0, 2.0, 2.0};
    /// Monte Carlo symbols for `rates` (0 disables the simulation).
    std::size_t symbols = 0;
    /// Random trials for `lemma1` without input.
    std::size_t trials = 1000;
};

struct RunResult {
    int exit_code = kExitOk;
    std::string output;
    std::string diagnostic;
};

/// Executes one command. Output depends only on the configuration.
RunResult run(const RunConfig& config);

} // namespace jtri::cli
