#pragma once

// File formats: spectra files (one `k,re,im` line per mode, ascending k,
// header `# N=<N> time=<t>`), diagnostics CSV, and the experiment tables.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "t3nls/analytic.hpp"
#include "t3nls/growth.hpp"
#include "t3nls/integrator.hpp"
#include "t3nls/spectral.hpp"

namespace t3nls {

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline std::string spectrum_to_string(const SpectralState& s) {
    std::string out = "# N=" + std::to_string(s.trunc) + " time=" + detail::fmt_double(s.time) + "\n";
    for (int k = -s.trunc; k <= s.trunc; ++k) {
        out += std::to_string(k);
        out += ',';
        out += detail::fmt_double(s.at(k).real());
        out += ',';
        out += detail::fmt_double(s.at(k).imag());
        out += '\n';
    }
    return out;
}

inline void write_spectrum(const std::string& path, const SpectralState& s) {
    std::ofstream f(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!f) throw config_error("cannot open for writing: " + path);
    f << spectrum_to_string(s);
}

inline SpectralState parse_spectrum(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# N=", 0) != 0)
        throw config_error("spectrum file: missing '# N=' header");
    std::size_t time_pos = header.find(" time=");
    if (time_pos == std::string::npos) throw config_error("spectrum file: missing time field");
    int n = std::stoi(header.substr(4, time_pos - 4));
    double t = std::stod(header.substr(time_pos + 6));

    SpectralState s(n, t);
    std::string line;
    int expected = -n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        int k = std::stoi(tok);
        if (k != expected) throw config_error("spectrum file: modes out of order");
        std::getline(ls, tok, ',');
        double re = std::stod(tok);
        std::getline(ls, tok, ',');
        double im = std::stod(tok);
        s.at(k) = cplx(re, im);
        ++expected;
    }
    if (expected != n + 1) throw config_error("spectrum file: wrong number of modes");
    return s;
}

inline SpectralState read_spectrum(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for reading: " + path);
    return parse_spectrum(f);
}

// Columns: t,l2,momentum,h<s>...,abs_k<probe>...
inline void write_diagnostics_csv(const std::string& path, const DiagnosticsRecord& rec) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for writing: " + path);
    f << "t,l2,momentum";
    for (double s : rec.hs_orders) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "h%g", s);
        f << ',' << buf;
    }
    for (int k : rec.probe_modes) f << ",abs_k" << k;
    f << '\n';
    for (const DiagnosticsRow& row : rec.rows) {
        f << detail::fmt_double(row.t) << ',' << detail::fmt_double(row.l2) << ','
          << detail::fmt_double(row.mom);
        for (double v : row.hs) f << ',' << detail::fmt_double(v);
        for (double v : row.mode_abs) f << ',' << detail::fmt_double(v);
        f << '\n';
    }
}

inline void write_growth_csv(const std::string& path, const std::vector<GrowthRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for writing: " + path);
    f << "k,fitted_rate,predicted_rate,rel_gap,window_t0,window_t1,window_ok,fit_residual\n";
    for (const GrowthRow& r : rows) {
        f << r.k << ',' << detail::fmt_double(r.fitted_rate) << ','
          << detail::fmt_double(r.predicted_rate) << ',' << detail::fmt_double(r.rel_gap) << ','
          << detail::fmt_double(r.window_t0) << ',' << detail::fmt_double(r.window_t1) << ','
          << (r.window_ok ? 1 : 0) << ',' << detail::fmt_double(r.fit_residual) << '\n';
    }
}

inline void write_tlambda_csv(const std::string& path, const std::vector<TlambdaRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open for writing: " + path);
    f << "lambda,ar_norm,T_certified,N,c_used,dispersion_length\n";
    for (const TlambdaRow& r : rows) {
        f << detail::fmt_double(r.lambda) << ',' << detail::fmt_double(r.ar) << ','
          << detail::fmt_double(r.t_certified) << ',' << r.trunc << ','
          << detail::fmt_double(r.c_used) << ',' << detail::fmt_double(r.dispersion_length) << '\n';
    }
}

} // namespace t3nls
