// phasedamp: CP-diagram toolkit for two-qubit random-unitary phase damping.
//
// Subcommands:
//   trajectory  sweep a one-parameter channel family, write a CP trajectory CSV
//   bounds      tabulate CP-diagram boundary curves
//   robust      robustness scan under pure two-qubit dephasing
//   verify      Monte Carlo cross-check of the analytic channel matrix
//
// Exit codes: 0 success, 1 validation error, 2 verification failure.

#include <CLI11.hpp>

#include "phasedamp/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Entanglement and purity of two qubits under random-unitary phase damping:\n"
        "trajectories, CP-diagram bounds, robustness scans, Monte Carlo verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, grid_text, corrupt_text;
    std::vector<std::string> kinds;
    std::vector<double> c0_list{0.2, 0.4, 0.6, 0.8, 1.0};
    double theta1 = 0.0, theta2 = 0.0;
    long long samples = 100000;
    std::uint64_t seed = 1;

    CLI::App* trajectory = app.add_subcommand("trajectory", "sweep a channel family to CSV");
    trajectory->add_option("--config", config_path, "sweep configuration file")->required();
    trajectory->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* bounds = app.add_subcommand("bounds", "tabulate CP-diagram boundary curves");
    bounds
        ->add_option("--kinds", kinds,
                     "curves: C2, C3, C4, Werner, Pure2QSep:za:zb, Surface:z")
        ->required()
        ->delimiter(',');
    bounds->add_option("--grid", grid_text, "purity grid START:STOP:COUNT")
        ->default_val("0.25:1:76");
    bounds->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* robust = app.add_subcommand("robust", "robust-entanglement scan");
    robust
        ->add_option("--theta1", theta1,
                     "x-rotation angle of qubit A (radians, exp(-i theta sigma_x))")
        ->required();
    robust->add_option("--theta2", theta2, "x-rotation angle of qubit B (radians)")->required();
    robust->add_option("--grid", grid_text, "q grid START:STOP:COUNT")->default_val("0:0.5:51");
    robust->add_option("--c0", c0_list, "initial concurrences")->delimiter(',');
    robust->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* verify = app.add_subcommand("verify", "Monte Carlo channel verification");
    verify->add_option("--config", config_path, "sweep configuration file")->required();
    verify->add_option("--samples", samples, "Monte Carlo sample count")->default_val(100000);
    verify->add_option("--seed", seed, "random seed")->default_val(1);
    verify->add_option("--out", out_path, "output JSON path (default: stdout)");
    verify->add_option("--corrupt-entry", corrupt_text, "test hook: offset analytic entry m:n")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (trajectory->parsed()) return phasedamp::cmd_trajectory(config_path, out_path);
        if (bounds->parsed())
            return phasedamp::cmd_bounds(kinds, phasedamp::GridSpec::parse(grid_text), out_path);
        if (robust->parsed())
            return phasedamp::cmd_robust(theta1, theta2, phasedamp::GridSpec::parse(grid_text),
                                         c0_list, out_path);
        if (verify->parsed()) {
            std::optional<std::pair<int, int>> corrupt;
            if (!corrupt_text.empty()) {
                const auto colon = corrupt_text.find(':');
                if (colon == std::string::npos) {
                    std::cerr << "error: --corrupt-entry expects m:n\n";
                    return 1;
                }
                corrupt = std::pair<int, int>(std::stoi(corrupt_text.substr(0, colon)),
                                              std::stoi(corrupt_text.substr(colon + 1)));
            }
            return phasedamp::cmd_verify(config_path, samples, seed, out_path, std::cout,
                                         std::cerr, corrupt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
