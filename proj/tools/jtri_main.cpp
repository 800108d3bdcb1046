#include "jtri/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <algorithm>
#include <string>
#include <vector>

namespace {

int fail(const std::string& msg) {
    std::cerr << "error: " << msg << '\n';
    return jtri::cli::kExitParse;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint triangularization of matrix pairs and its MIMO applications"};

    std::string cmd;
    std::string in;
    std::string out;
    std::string format = "json";
    jtri::cli::RunConfig cfg;
    std::vector<double> target;
    std::vector<double> gains;

    app.add_option("--cmd", cmd, "gtd|gmd|gsv|joint|multicast|rates|sdr-region|fig4|lemma1")->required();
    app.add_option("--in", in, "input matrix file");
    app.add_option("--out", out, "output file (default stdout)");
    app.add_option("--format", format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--gamma-points", cfg.gamma_points, "points in the power-split sweep");
    app.add_option("--power", cfg.power, "transmit power");
    app.add_option("--tol-recon", cfg.tol_recon, "reconstruction tolerance");
    app.add_option("--target", target, "target diagonal or ratio")->delimiter(',');
    app.add_option("--gains", gains, "alpha1,beta1,alpha2,beta2 for fig4")->delimiter(',');
    app.add_option("--symbols", cfg.symbols, "Monte Carlo symbols for rates");
    app.add_option("--trials", cfg.trials, "random trials for lemma1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return jtri::cli::kExitParse;
    }

    const auto command = jtri::cli::parse_command(cmd);
    if (!command) {
        return fail("unknown command '" + cmd + "'");
    }
    cfg.command = *command;
    cfg.format = format == "csv" ? jtri::cli::Format::csv : jtri::cli::Format::json;
    if (!in.empty()) {
        cfg.input_path = in;
    }
    if (!target.empty()) {
        cfg.target = target;
    }
    if (!gains.empty()) {
        if (gains.size() != 4) {
            return fail("--gains needs four values");
        }
        std::copy(gains.begin(), gains.end(), cfg.gains.begin());
    }

    const jtri::cli::RunResult res = jtri::cli::run(cfg);
    if (!res.output.empty()) {
        if (out.empty()) {
            std::cout << res.output;
        } else {
            std::ofstream f(out, std::ios::binary);
            f << res.output;
            if (!f) {
                return fail("cannot write '" + out + "'");
            }
        }
    }
    if (!res.diagnostic.empty()) {
        std::cerr << res.diagnostic << '\n';
    }
    return res.exit_code;
}
