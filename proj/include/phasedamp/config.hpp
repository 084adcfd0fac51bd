#pragma once

// Sweep configuration: flat key-value text with sections. A config describes
// an initial pure state, a one-parameter channel family (Gaussian field
// polynomials in the sweep parameter t, or one of the named RLU families),
// the t-grid, and optional Monte Carlo verification settings.
//
//   [state]
//   kind = pure                 # pure | separable
//   a = 0.5                     # pure: Schmidt weight, phase, x-rotations
//   chi = 0.0
//   theta1 = 0.0
//   theta2 = 0.0
//   # separable instead: alpha1 = re im, beta1 = re im, alpha2, beta2
//
//   [channel]
//   family = gaussian           # gaussian | single_sided | two_qubit_dephasing
//   # q = 0.0 0.5               # named families: q(t) coefficients, low order first
//
//   [mean]                      # gaussian family: mu_k(t) polynomial coefficients
//   mu3 = 1.5707963267948966
//
//   [covariance]                # Sigma_ij(t) coefficients; omitted entries are 0
//   sigma11 = 0.0 0.0 2.0
//
//   [grid]
//   start = 0.0
//   stop = 1.0
//   count = 51
//   # t = 0.7                   # channel-verification position (verify command)
//
//   [mc]
//   verify = false
//   samples = 100000
//   seed = 1
//   antithetic = false

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasedamp/channels.hpp"
#include "phasedamp/montecarlo.hpp"
#include "phasedamp/states.hpp"

namespace phasedamp {

/// Configuration or input validation failure; carries the offending field.
struct ConfigError : std::runtime_error {
    std::string field;

    ConfigError(std::string field_, const std::string& message)
        : std::runtime_error(field_.empty() ? message : field_ + ": " + message),
          field(std::move(field_)) {}
};

/// Real polynomial, lowest-order coefficient first.
struct Polynomial {
    std::vector<double> coeffs;

    double operator()(double t) const {
        double v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
        return v;
    }

    bool is_zero() const {
        for (double c : coeffs)
            if (c != 0.0) return false;
        return true;
    }
};

/// Uniform grid start..stop with count points (count >= 2).
struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    int count = 51;

    void validate() const {
        if (count < 2) throw ConfigError("grid.count", "must be >= 2");
        if (!(stop >= start)) throw ConfigError("grid.stop", "must be >= grid.start");
    }

    double at(int i) const {
        return start + (stop - start) * static_cast<double>(i) / (count - 1);
    }

    /// Parse "start:stop:count".
    static GridSpec parse(const std::string& text) {
        GridSpec g;
        std::istringstream in(text);
        std::string a, b, c;
        if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
            throw ConfigError("grid", "expected START:STOP:COUNT, got '" + text + "'");
        try {
            g.start = std::stod(a);
            g.stop = std::stod(b);
            g.count = std::stoi(c);
        } catch (const std::exception&) {
            throw ConfigError("grid", "expected START:STOP:COUNT, got '" + text + "'");
        }
        g.validate();
        return g;
    }
};

namespace detail {

struct KeyValueFile {
    // section -> key -> raw value
    std::map<std::string, std::map<std::string, std::string>> sections;

    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    static KeyValueFile parse(std::istream& in) {
        KeyValueFile f;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno), "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                f.sections[section];
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (section.empty())
                throw ConfigError(key, "key outside of any [section]");
            if (!f.sections[section].emplace(key, value).second)
                throw ConfigError(section + "." + key, "duplicate key");
        }
        return f;
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = sections.find(section);
        return s != sections.end() && s->second.count(key) > 0;
    }

    std::string get(const std::string& section, const std::string& key) const {
        const auto s = sections.find(section);
        if (s == sections.end()) throw ConfigError(section, "missing section");
        const auto k = s->second.find(key);
        if (k == s->second.end()) throw ConfigError(section + "." + key, "missing key");
        return k->second;
    }
};

inline std::vector<double> parse_numbers(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError(field, "expected a number, got '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError(field, "expected at least one number");
    return out;
}

inline double parse_one_number(const std::string& field, const std::string& text) {
    const auto v = parse_numbers(field, text);
    if (v.size() != 1) throw ConfigError(field, "expected exactly one number");
    return v[0];
}

inline bool parse_bool(const std::string& field, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(field, "expected true/false, got '" + text + "'");
}

inline cxd parse_complex(const std::string& field, const std::string& text) {
    const auto v = parse_numbers(field, text);
    if (v.size() == 1) return cxd(v[0], 0.0);
    if (v.size() == 2) return cxd(v[0], v[1]);
    throw ConfigError(field, "expected 're' or 're im'");
}

}  // namespace detail

/// One-parameter sweep over a family of phase-damping channels applied to a
/// fixed pure initial state.
struct SweepConfig {
    enum class Family { Gaussian, SingleSided, TwoQubitDephasing };

    // initial state
    bool separable = false;
    double a = 0.5, chi = 0.0, theta1 = 0.0, theta2 = 0.0;       // pure
    cxd alpha1{1.0}, beta1{0.0}, alpha2{1.0}, beta2{0.0};        // separable

    Family family = Family::Gaussian;
    std::array<Polynomial, 3> mean_poly{};   // mu1(t), mu2(t), mu3(t)
    std::array<Polynomial, 6> cov_poly{};    // s11, s22, s33, s12, s13, s23
    Polynomial q_poly{};                     // named families

    GridSpec grid{};
    std::optional<double> verify_t;          // channel position for `verify`

    bool mc_verify = false;
    MCConfig mc{};

    StateVector4 initial_state() const {
        if (separable) return make_separable(SeparableParams(alpha1, beta1, alpha2, beta2));
        return make_general_pure(PureStateParams(a, chi, theta1, theta2));
    }

    GaussianFieldSpec spec_at(double t) const {
        GaussianFieldSpec s;
        for (int k = 0; k < 3; ++k) s.mean[k] = mean_poly[k](t);
        s.covariance[0][0] = cov_poly[0](t);
        s.covariance[1][1] = cov_poly[1](t);
        s.covariance[2][2] = cov_poly[2](t);
        s.covariance[0][1] = s.covariance[1][0] = cov_poly[3](t);
        s.covariance[0][2] = s.covariance[2][0] = cov_poly[4](t);
        s.covariance[1][2] = s.covariance[2][1] = cov_poly[5](t);
        return s;
    }

    double q_at(double t) const { return q_poly(t); }
};

inline SweepConfig parse_sweep_config(std::istream& in) {
    const auto file = detail::KeyValueFile::parse(in);
    SweepConfig cfg;

    const std::string kind = file.has("state", "kind") ? file.get("state", "kind") : "pure";
    if (kind == "pure") {
        cfg.separable = false;
        if (file.has("state", "a")) cfg.a = detail::parse_one_number("state.a", file.get("state", "a"));
        if (file.has("state", "chi"))
            cfg.chi = detail::parse_one_number("state.chi", file.get("state", "chi"));
        if (file.has("state", "theta1"))
            cfg.theta1 = detail::parse_one_number("state.theta1", file.get("state", "theta1"));
        if (file.has("state", "theta2"))
            cfg.theta2 = detail::parse_one_number("state.theta2", file.get("state", "theta2"));
        if (!(cfg.a >= 0.0 && cfg.a <= 1.0))
            throw ConfigError("state.a", "Schmidt weight must be in [0, 1]");
    } else if (kind == "separable") {
        cfg.separable = true;
        cfg.alpha1 = detail::parse_complex("state.alpha1", file.get("state", "alpha1"));
        cfg.beta1 = detail::parse_complex("state.beta1", file.get("state", "beta1"));
        cfg.alpha2 = detail::parse_complex("state.alpha2", file.get("state", "alpha2"));
        cfg.beta2 = detail::parse_complex("state.beta2", file.get("state", "beta2"));
        if (std::abs(std::norm(cfg.alpha1) + std::norm(cfg.beta1) - 1.0) > kSymTol)
            throw ConfigError("state.alpha1", "qubit-A amplitudes are not normalized");
        if (std::abs(std::norm(cfg.alpha2) + std::norm(cfg.beta2) - 1.0) > kSymTol)
            throw ConfigError("state.alpha2", "qubit-B amplitudes are not normalized");
    } else {
        throw ConfigError("state.kind", "expected 'pure' or 'separable', got '" + kind + "'");
    }

    const std::string family =
        file.has("channel", "family") ? file.get("channel", "family") : "gaussian";
    if (family == "gaussian") {
        cfg.family = SweepConfig::Family::Gaussian;
    } else if (family == "single_sided") {
        cfg.family = SweepConfig::Family::SingleSided;
    } else if (family == "two_qubit_dephasing") {
        cfg.family = SweepConfig::Family::TwoQubitDephasing;
    } else {
        throw ConfigError("channel.family", "unknown family '" + family + "'");
    }

    if (cfg.family == SweepConfig::Family::Gaussian) {
        if (file.has("channel", "q"))
            throw ConfigError("channel.q", "only meaningful for the named RLU families");
        const std::array<std::string, 3> mu_keys{"mu1", "mu2", "mu3"};
        for (int k = 0; k < 3; ++k) {
            cfg.mean_poly[k].coeffs = {0.0};
            if (file.has("mean", mu_keys[k]))
                cfg.mean_poly[k].coeffs =
                    detail::parse_numbers("mean." + mu_keys[k], file.get("mean", mu_keys[k]));
        }
        const std::array<std::string, 6> cov_keys{"sigma11", "sigma22", "sigma33",
                                                  "sigma12", "sigma13", "sigma23"};
        for (int k = 0; k < 6; ++k) {
            cfg.cov_poly[k].coeffs = {0.0};
            if (file.has("covariance", cov_keys[k]))
                cfg.cov_poly[k].coeffs = detail::parse_numbers("covariance." + cov_keys[k],
                                                               file.get("covariance", cov_keys[k]));
        }
    } else {
        if (!file.has("channel", "q"))
            throw ConfigError("channel.q", "named RLU families require q(t) coefficients");
        cfg.q_poly.coeffs = detail::parse_numbers("channel.q", file.get("channel", "q"));
    }

    if (file.has("grid", "start"))
        cfg.grid.start = detail::parse_one_number("grid.start", file.get("grid", "start"));
    if (file.has("grid", "stop"))
        cfg.grid.stop = detail::parse_one_number("grid.stop", file.get("grid", "stop"));
    if (file.has("grid", "count")) {
        const double c = detail::parse_one_number("grid.count", file.get("grid", "count"));
        cfg.grid.count = static_cast<int>(c);
        if (static_cast<double>(cfg.grid.count) != c)
            throw ConfigError("grid.count", "must be an integer");
    }
    cfg.grid.validate();
    if (file.has("grid", "t"))
        cfg.verify_t = detail::parse_one_number("grid.t", file.get("grid", "t"));

    if (file.has("mc", "verify"))
        cfg.mc_verify = detail::parse_bool("mc.verify", file.get("mc", "verify"));
    if (file.has("mc", "samples")) {
        cfg.mc.samples =
            static_cast<long long>(detail::parse_one_number("mc.samples", file.get("mc", "samples")));
        if (cfg.mc.samples < 1) throw ConfigError("mc.samples", "must be >= 1");
    }
    if (file.has("mc", "seed"))
        cfg.mc.seed =
            static_cast<std::uint64_t>(detail::parse_one_number("mc.seed", file.get("mc", "seed")));
    if (file.has("mc", "antithetic"))
        cfg.mc.antithetic = detail::parse_bool("mc.antithetic", file.get("mc", "antithetic"));

    if (cfg.mc_verify && cfg.family != SweepConfig::Family::Gaussian)
        throw ConfigError("mc.verify", "Monte Carlo verification requires the gaussian family");

    return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_sweep_config(in);
}

}  // namespace phasedamp
