#pragma once

// Key-value experiment configuration. Lines are `key = value`; `#` starts a
// comment; lists are comma-separated. The five equation coefficients accept
// exact rationals as "p/q", which also enables the integer-exact phase
// identity path.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "t3nls/analytic.hpp"
#include "t3nls/errors.hpp"
#include "t3nls/initial_data.hpp"
#include "t3nls/io.hpp"
#include "t3nls/rational.hpp"
#include "t3nls/spectral.hpp"

namespace t3nls {

struct ExperimentConfig {
    EquationParams params{1.0, 0.4, 1.0, 1.0, 1.0};
    std::optional<Rational> alpha1_exact, alpha2_exact, gamma1_exact, gamma2_exact, Gamma_exact;

    int n = 32;
    double dt = 0.0;  // 0: use the default step heuristic
    double big_t = 1.0;

    std::string family = "gaussian";  // gaussian | lacunary | inflation_psi | perturbation_phi | spectrum_file | zero
    double s0 = 2.0;
    double s = 1.0;
    double eps = 0.1;
    int k0 = 8;
    double lambda = 0.5;
    double delta = 1.0;  // amplitude scale applied to the generated data
    std::string data_file;

    std::vector<int> probes;
    std::vector<double> hs_orders{1.0};
    int store_stride = 1;
    unsigned seed = 12345;
    std::string out_dir = ".";
    bool emit_spectra = false;

    // analytic solver
    double r = 0.5;
    double c = 1.0 / 64.0;
    int grid_points = 65;
    double tol = 1e-12;
    int max_iter = 100;
    std::vector<double> lambdas{0.1, 0.2, 0.4, 0.8};

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

inline bool is_integer_text(const std::string& text) {
    if (text.empty()) return false;
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) return false;
    for (; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9') return false;
    return true;
}

// Coefficients may be decimals or exact "p/q" strings; plain integers count
// as exact rationals.
inline void set_coeff(double& value, std::optional<Rational>& exact, const std::string& text) {
    if (text.find('/') != std::string::npos || is_integer_text(text)) {
        Rational q = parse_rational(text);
        exact = q;
        value = q.value();
    } else {
        exact.reset();
        value = std::stod(text);
    }
}

} // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        try {
            if (key == "alpha1") detail::set_coeff(cfg.params.alpha1, cfg.alpha1_exact, val);
            else if (key == "alpha2") detail::set_coeff(cfg.params.alpha2, cfg.alpha2_exact, val);
            else if (key == "gamma1") detail::set_coeff(cfg.params.gamma1, cfg.gamma1_exact, val);
            else if (key == "gamma2") detail::set_coeff(cfg.params.gamma2, cfg.gamma2_exact, val);
            else if (key == "Gamma") detail::set_coeff(cfg.params.Gamma, cfg.Gamma_exact, val);
            else if (key == "N") cfg.n = std::stoi(val);
            else if (key == "dt") cfg.dt = std::stod(val);
            else if (key == "T") cfg.big_t = std::stod(val);
            else if (key == "family") cfg.family = val;
            else if (key == "s0") cfg.s0 = std::stod(val);
            else if (key == "s") cfg.s = std::stod(val);
            else if (key == "eps") cfg.eps = std::stod(val);
            else if (key == "k0") cfg.k0 = std::stoi(val);
            else if (key == "lambda") cfg.lambda = std::stod(val);
            else if (key == "delta") cfg.delta = std::stod(val);
            else if (key == "data_file") cfg.data_file = val;
            else if (key == "probes") {
                cfg.probes.clear();
                for (const std::string& t : detail::split_list(val)) cfg.probes.push_back(std::stoi(t));
            } else if (key == "hs_orders") {
                cfg.hs_orders.clear();
                for (const std::string& t : detail::split_list(val)) cfg.hs_orders.push_back(std::stod(t));
            } else if (key == "store_stride") cfg.store_stride = std::stoi(val);
            else if (key == "seed") cfg.seed = static_cast<unsigned>(std::stoul(val));
            else if (key == "out_dir") cfg.out_dir = val;
            else if (key == "emit_spectra") cfg.emit_spectra = (val == "1" || val == "true");
            else if (key == "r") cfg.r = std::stod(val);
            else if (key == "c") cfg.c = std::stod(val);
            else if (key == "grid_points") cfg.grid_points = std::stoi(val);
            else if (key == "tol") cfg.tol = std::stod(val);
            else if (key == "max_iter") cfg.max_iter = std::stoi(val);
            else if (key == "lambdas") {
                cfg.lambdas.clear();
                for (const std::string& t : detail::split_list(val)) cfg.lambdas.push_back(std::stod(t));
            } else throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const config_error&) {
            throw;
        } catch (const std::exception& e) {
            throw config_error("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config: " + path);
    return parse_config(f);
}

namespace detail {

inline std::string coeff_text(double value, const std::optional<Rational>& exact) {
    if (exact) return to_string(*exact);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    std::string out = buf;
    if (out.find_first_of(".eE") == std::string::npos) out += ".0";  // keep inexact on re-parse
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_same_v<T, int>) out += std::to_string(v[i]);
        else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v[i]));
            out += buf;
        }
    }
    return out;
}

} // namespace detail

inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    char buf[40];
    auto num = [&buf](double v) { std::snprintf(buf, sizeof buf, "%.17g", v); return std::string(buf); };

    kv("alpha1", detail::coeff_text(cfg.params.alpha1, cfg.alpha1_exact));
    kv("alpha2", detail::coeff_text(cfg.params.alpha2, cfg.alpha2_exact));
    kv("gamma1", detail::coeff_text(cfg.params.gamma1, cfg.gamma1_exact));
    kv("gamma2", detail::coeff_text(cfg.params.gamma2, cfg.gamma2_exact));
    kv("Gamma", detail::coeff_text(cfg.params.Gamma, cfg.Gamma_exact));
    kv("N", std::to_string(cfg.n));
    kv("dt", num(cfg.dt));
    kv("T", num(cfg.big_t));
    kv("family", cfg.family);
    kv("s0", num(cfg.s0));
    kv("s", num(cfg.s));
    kv("eps", num(cfg.eps));
    kv("k0", std::to_string(cfg.k0));
    kv("lambda", num(cfg.lambda));
    kv("delta", num(cfg.delta));
    if (!cfg.data_file.empty()) kv("data_file", cfg.data_file);
    if (!cfg.probes.empty()) kv("probes", detail::join(cfg.probes));
    kv("hs_orders", detail::join(cfg.hs_orders));
    kv("store_stride", std::to_string(cfg.store_stride));
    kv("seed", std::to_string(cfg.seed));
    kv("out_dir", cfg.out_dir);
    kv("emit_spectra", cfg.emit_spectra ? "1" : "0");
    kv("r", num(cfg.r));
    kv("c", num(cfg.c));
    kv("grid_points", std::to_string(cfg.grid_points));
    kv("tol", num(cfg.tol));
    kv("max_iter", std::to_string(cfg.max_iter));
    kv("lambdas", detail::join(cfg.lambdas));
    return out;
}

// Builds the configured initial datum, scaled by delta.
inline SpectralState make_initial_data(const ExperimentConfig& cfg) {
    SpectralState u0(cfg.n);
    if (cfg.family == "zero") {
        // keep zeros
    } else if (cfg.family == "gaussian") {
        u0 = gaussian_data(cfg.lambda, cfg.n);
    } else if (cfg.family == "lacunary") {
        u0 = lacunary_data(cfg.s0, cfg.n);
    } else if (cfg.family == "inflation_psi") {
        u0 = inflation_psi(cfg.s, cfg.eps, cfg.k0, cfg.n);
    } else if (cfg.family == "perturbation_phi") {
        u0 = perturbation_phi(cfg.s, cfg.eps, cfg.k0, cfg.n);
    } else if (cfg.family == "spectrum_file") {
        if (cfg.data_file.empty()) throw config_error("family=spectrum_file requires data_file");
        u0 = read_spectrum(cfg.data_file);
    } else {
        throw config_error("unknown data family: " + cfg.family);
    }
    if (cfg.delta != 1.0) u0 = cplx(cfg.delta, 0.0) * u0;
    return u0;
}

inline double config_default_dt(const ExperimentConfig& cfg, const SpectralState& u0) {
    if (cfg.dt > 0.0) return cfg.dt;
    double h1 = hs_norm(u0, 1.0);
    return std::min(1e-3, 0.5 / (1.0 + h1 * h1));
}

} // namespace t3nls
