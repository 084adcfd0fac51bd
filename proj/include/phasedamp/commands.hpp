#pragma once

// Command implementations behind the CLI front end. Each command returns the
// process exit code: 0 on success, 1 on validation errors, 2 when a
// verification check fails. All floating-point output uses the shortest
// representation that round-trips to the same double.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasedamp/bounds.hpp"
#include "phasedamp/config.hpp"
#include "phasedamp/measures.hpp"
#include "phasedamp/montecarlo.hpp"

namespace phasedamp {

/// Shortest round-trip decimal representation of a double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

struct CsvWriter {
    std::ofstream file;
    std::string path;

    explicit CsvWriter(const std::string& out_path) : file(out_path), path(out_path) {
        if (!file) throw ConfigError("out", "cannot open '" + out_path + "' for writing");
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) file << ',';
            file << cells[i];
        }
        file << '\n';
    }
};

inline int fail_validation(std::ostream& err, const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
}

}  // namespace detail

/// Sweep a one-parameter channel family over its t-grid and write one CSV row
/// per grid point: t, numeric concurrence/purity through the channel + oracle
/// path, closed-form columns where a law applies, and the Monte Carlo standard
/// error when verification is enabled.
inline int cmd_trajectory(const std::string& config_path, const std::string& out_path,
                          std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    SweepConfig cfg;
    try {
        cfg = load_sweep_config(config_path);
    } catch (const std::exception& e) {
        return detail::fail_validation(err, e);
    }

    try {
        const StateVector4 psi0 = cfg.initial_state();
        const TwoQubitState rho0 = density_matrix(psi0);
        const ZExpectations z0 = z_expectations(psi0);
        const double c0 = pure_concurrence(psi0);
        const bool gaussian = cfg.family == SweepConfig::Family::Gaussian;

        // Validate the whole grid up front so a bad tail fails before output.
        for (int i = 0; i < cfg.grid.count; ++i) {
            const double t = cfg.grid.at(i);
            if (gaussian) {
                try {
                    cfg.spec_at(t).validate();
                } catch (const std::exception&) {
                    throw ConfigError("covariance",
                                      "Sigma(t) not positive semidefinite at t = " + format_double(t));
                }
            } else {
                const double q = cfg.q_at(t);
                if (!(q >= 0.0 && q <= 1.0))
                    throw ConfigError("channel.q",
                                      "q(t) outside [0, 1] at t = " + format_double(t));
            }
        }

        detail::CsvWriter csv(out_path);
        std::vector<std::string> header{"t", "C_numeric", "P_numeric", "C_analytic", "P_analytic"};
        if (cfg.mc_verify) header.push_back("stderr");
        csv.row(header);

        double min_purity = 1.0;
        double final_concurrence = 0.0;
        int mc_failures = 0;
        for (int i = 0; i < cfg.grid.count; ++i) {
            const double t = cfg.grid.at(i);
            double c_num = 0.0, p_num = 0.0;
            std::string c_ana, p_ana, mc_err;

            if (gaussian) {
                const GaussianFieldSpec spec = cfg.spec_at(t);
                const PhaseDampingChannel ch = damping_matrix(spec);
                const TwoQubitState rho1 = apply_channel(ch, rho0);
                c_num = concurrence_wootters(rho1);
                p_num = purity(rho1);
                if (spec.is_diagonal()) {
                    const NoiseProbs p = noise_probabilities(spec);
                    p_ana = format_double(purity_analytic(p, z0));
                    const double mu3 = spec.mean[2];
                    if (cfg.separable && mu3 >= 0.0 && mu3 <= std::numbers::pi) {
                        const SeparableParams sep(cfg.alpha1, cfg.beta1, cfg.alpha2, cfg.beta2);
                        c_ana = format_double(concurrence_separable_analytic(sep, p, mu3));
                    } else if (!cfg.separable && std::abs(spec.mean[0]) <= kSymTol &&
                               std::abs(spec.mean[1]) <= kSymTol && std::abs(spec.mean[2]) <= kSymTol) {
                        c_ana = format_double(concurrence_general_noise(psi0, p));
                    }
                }
                if (cfg.mc_verify) {
                    MCConfig mc = cfg.mc;
                    mc.seed = cfg.mc.seed + static_cast<std::uint64_t>(i);
                    const MCEstimate est = ensemble_average(spec, rho0, mc);
                    mc_err = format_double(est.stderr_max);
                    const double dev = max_abs_diff(est.mean, rho1.rho);
                    if (dev > std::max(4.0 * est.stderr_max, 1e-12)) ++mc_failures;
                }
            } else {
                const double q = cfg.q_at(t);
                const RluChannel rlu = cfg.family == SweepConfig::Family::SingleSided
                                           ? single_sided_channel(q)
                                           : two_qubit_dephasing_channel(q);
                const TwoQubitState rho1 = apply_channel(rlu.channel, rho0);
                c_num = concurrence_wootters(rho1);
                p_num = purity(rho1);
                const CPPoint pt = cfg.family == SweepConfig::Family::SingleSided
                                       ? single_sided_law(c0, q, z0.za)
                                       : two_qubit_dephasing_law(psi0, q);
                c_ana = format_double(pt.concurrence);
                p_ana = format_double(pt.purity);
            }

            min_purity = std::min(min_purity, p_num);
            final_concurrence = c_num;
            std::vector<std::string> cells{format_double(t), format_double(c_num),
                                           format_double(p_num), c_ana, p_ana};
            if (cfg.mc_verify) cells.push_back(mc_err);
            csv.row(cells);
        }

        out << "trajectory: " << cfg.grid.count << " rows -> " << out_path
            << "  min_purity=" << format_double(min_purity)
            << "  final_concurrence=" << format_double(final_concurrence) << "\n";
        if (mc_failures > 0) {
            err << "error: Monte Carlo verification failed at " << mc_failures
                << " grid point(s) (|rho_mc - rho_channel| > 4 stderr)\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        return detail::fail_validation(err, e);
    }
}

/// Parse a bound-curve token: C2 | C3 | C4 | Werner | Pure2QSep:za:zb |
/// Surface:z.
inline BoundCurve parse_bound_kind(const std::string& token) {
    std::vector<std::string> parts;
    std::istringstream in(token);
    std::string p;
    while (std::getline(in, p, ':')) parts.push_back(p);
    if (parts.empty()) throw ConfigError("kinds", "empty curve name");

    auto number = [&](std::size_t i) {
        try {
            return std::stod(parts.at(i));
        } catch (const std::exception&) {
            throw ConfigError("kinds", "bad parameter in '" + token + "'");
        }
    };

    BoundCurve curve{};
    if (parts[0] == "C2" && parts.size() == 1) {
        curve.kind = BoundCurve::Kind::BellRank2;
    } else if (parts[0] == "C3" && parts.size() == 1) {
        curve.kind = BoundCurve::Kind::BellRank3;
    } else if (parts[0] == "C4" && parts.size() == 1) {
        curve.kind = BoundCurve::Kind::BellRank4;
    } else if (parts[0] == "Werner" && parts.size() == 1) {
        curve.kind = BoundCurve::Kind::Werner;
    } else if (parts[0] == "Pure2QSep" && parts.size() == 3) {
        curve.kind = BoundCurve::Kind::Pure2QSeparable;
        curve.za = number(1);
        curve.zb = number(2);
    } else if (parts[0] == "Surface" && parts.size() == 2) {
        curve.kind = BoundCurve::Kind::Surface;
        curve.z = number(1);
    } else {
        throw ConfigError("kinds", "unknown curve kind '" + token + "'");
    }
    return curve;
}

/// Tabulate the requested CP-diagram boundary curves over a purity grid.
/// Each curve's domain edge P_min is inserted into the grid exactly; cells
/// below a curve's domain are left empty.
inline int cmd_bounds(const std::vector<std::string>& kinds, const GridSpec& grid,
                      const std::string& out_path, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    try {
        if (kinds.empty()) throw ConfigError("kinds", "no curves requested");
        std::vector<BoundCurve> curves;
        for (const std::string& k : kinds) curves.push_back(parse_bound_kind(k));
        grid.validate();

        std::vector<double> ps;
        for (int i = 0; i < grid.count; ++i) ps.push_back(grid.at(i));
        for (const BoundCurve& c : curves)
            if (c.p_min() >= grid.start && c.p_min() <= grid.stop) ps.push_back(c.p_min());
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

        detail::CsvWriter csv(out_path);
        std::vector<std::string> header{"P"};
        for (const BoundCurve& c : curves) header.push_back(c.label());
        csv.row(header);
        for (double p : ps) {
            std::vector<std::string> cells{format_double(p)};
            for (const BoundCurve& c : curves)
                cells.push_back(p >= c.p_min() ? format_double(c.value(p)) : std::string{});
            csv.row(cells);
        }

        out << "bounds: " << ps.size() << " rows, " << curves.size() << " curve(s) -> "
            << out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        return detail::fail_validation(err, e);
    }
}

/// Robustness scan under pure two-qubit dephasing. theta1, theta2 are the
/// x-rotation angles of the initial-state family (full-angle convention, as
/// in robust_threshold); the report lists the robustness threshold C_> and,
/// per requested initial concurrence, the (C, P) trajectory over the q-grid.
inline int cmd_robust(double theta1, double theta2, const GridSpec& q_grid,
                      const std::vector<double>& c0_list, const std::string& out_path,
                      std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        q_grid.validate();
        if (!(q_grid.start >= 0.0 && q_grid.stop <= 1.0))
            throw ConfigError("grid", "q must stay within [0, 1]");
        if (c0_list.empty()) throw ConfigError("c0", "no initial concurrences requested");
        for (double c0 : c0_list)
            if (!(c0 >= 0.0 && c0 <= 1.0)) throw ConfigError("c0", "C0 outside [0, 1]");

        const double threshold = robust_threshold(theta1, theta2);

        std::vector<StateVector4> states;
        for (double c0 : c0_list) {
            const double a = 0.5 * (1.0 - std::sqrt(std::max(1.0 - c0 * c0, 0.0)));
            states.push_back(make_general_pure(PureStateParams(a, 0.0, 2.0 * theta1, 2.0 * theta2)));
        }

        detail::CsvWriter csv(out_path);
        csv.file << "# C_threshold = " << format_double(threshold) << "\n";
        std::vector<std::string> header{"q"};
        for (double c0 : c0_list) {
            header.push_back("C_" + format_double(c0));
            header.push_back("P_" + format_double(c0));
        }
        csv.row(header);
        for (int i = 0; i < q_grid.count; ++i) {
            const double q = q_grid.at(i);
            std::vector<std::string> cells{format_double(q)};
            for (const StateVector4& psi : states) {
                const CPPoint pt = two_qubit_dephasing_law(psi, q);
                cells.push_back(format_double(pt.concurrence));
                cells.push_back(format_double(pt.purity));
            }
            csv.row(cells);
        }

        out << "robust: C_threshold = " << format_double(threshold) << "  (" << c0_list.size()
            << " trajectories x " << q_grid.count << " points) -> " << out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        return detail::fail_validation(err, e);
    }
}

/// Monte Carlo cross-check of the analytic damping matrix at one sweep
/// position (grid.t, defaulting to grid.stop). Writes a JSON report with the
/// per-coherence deviations and returns 2 when any entry deviates by more
/// than 4 standard errors. `corrupt_entry` deliberately offsets one analytic
/// coherence; it exists as a negative-control hook for the test harness.
inline int cmd_verify(const std::string& config_path, long long samples, std::uint64_t seed,
                      const std::string& out_path = "", std::ostream& out = std::cout,
                      std::ostream& err = std::cerr,
                      std::optional<std::pair<int, int>> corrupt_entry = std::nullopt) {
    SweepConfig cfg;
    GaussianFieldSpec spec;
    try {
        cfg = load_sweep_config(config_path);
        if (cfg.family != SweepConfig::Family::Gaussian)
            throw ConfigError("channel.family", "verify requires the gaussian family");
        if (samples < 1) throw ConfigError("samples", "must be >= 1");
        const double t = cfg.verify_t.value_or(cfg.grid.stop);
        spec = cfg.spec_at(t);
        spec.validate();
        if (corrupt_entry) {
            const auto [m, n] = *corrupt_entry;
            if (m < 0 || m > 3 || n < 0 || n > 3 || m >= n)
                throw ConfigError("corrupt-entry", "expected indices with 0 <= m < n <= 3");
        }
    } catch (const std::exception& e) {
        return detail::fail_validation(err, e);
    }

    CMat4 analytic = damping_matrix(spec).damping;
    if (corrupt_entry)
        analytic(corrupt_entry->first, corrupt_entry->second) += 0.05;

    const ChannelEstimate est = channel_estimate_detailed(spec, MCConfig{samples, seed, false});

    nlohmann::json report;
    report["spec"]["mean"] = spec.mean;
    report["spec"]["covariance"] = spec.covariance;
    report["samples"] = samples;
    report["seed"] = seed;
    report["entries"] = nlohmann::json::array();
    bool all_pass = true;
    double max_dev = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = m + 1; n < 4; ++n) {
            const double dev = std::abs(est.mean(m, n) - analytic(m, n));
            const double se = est.stderr[m][n];
            const bool pass = dev <= std::max(4.0 * se, 1e-12);
            all_pass = all_pass && pass;
            max_dev = std::max(max_dev, dev);
            report["entries"].push_back({{"m", m},
                                         {"n", n},
                                         {"analytic_re", analytic(m, n).real()},
                                         {"analytic_im", analytic(m, n).imag()},
                                         {"mc_re", est.mean(m, n).real()},
                                         {"mc_im", est.mean(m, n).imag()},
                                         {"stderr", se},
                                         {"pass", pass}});
            if (!pass)
                err << "verify: entry (" << m << "," << n << ") deviates by " << format_double(dev)
                    << " (stderr " << format_double(se) << ")\n";
        }
    report["max_deviation"] = max_dev;
    report["pass"] = all_pass;

    if (out_path.empty()) {
        out << report.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) return detail::fail_validation(err, ConfigError("out", "cannot open '" + out_path + "'"));
        f << report.dump(2) << "\n";
        out << "verify: " << (all_pass ? "pass" : "FAIL") << "  max_deviation="
            << format_double(max_dev) << " -> " << out_path << "\n";
    }
    return all_pass ? 0 : 2;
}

}  // namespace phasedamp
