#include "qsld/model.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qsld {

namespace {
constexpr double kSeriesThreshold = 1e-4; // w/2T below this uses the Laurent series

double parse_number(const std::string& text, const std::string& spec) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad temperature spec '" + spec + "'");
    }
    return v;
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}
} // namespace

const char* to_string(Coupling c) {
    switch (c) {
    case Coupling::sub_ohmic: return "sub_ohmic";
    case Coupling::ohmic: return "ohmic";
    case Coupling::super_ohmic: return "super_ohmic";
    }
    return "?";
}

OhmicSpectralDensity::OhmicSpectralDensity(double s, double omega_c, double coupling)
    : s_(s), omega_c_(omega_c), coupling_(coupling) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::domain_error("Ohmicity s must be positive");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw std::domain_error("cutoff omega_c must be positive");
    if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw std::domain_error("coupling must be nonnegative");
}

double OhmicSpectralDensity::operator()(double omega) const {
    if (!(omega >= 0.0)) throw std::domain_error("spectral_density: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    const double x = omega / omega_c_;
    return coupling_ * omega_c_ * std::pow(x, s_) * std::exp(-x);
}

double spectral_density(const OhmicSpectralDensity& sd, double omega) { return sd(omega); }

Coupling classify_coupling(double s) {
    if (!(s > 0.0)) throw std::domain_error("classify_coupling: s must be positive");
    if (std::abs(s - 1.0) <= 1e-12) return Coupling::ohmic;
    return s < 1.0 ? Coupling::sub_ohmic : Coupling::super_ohmic;
}

ThermalEnvironment ThermalEnvironment::zero() { return ThermalEnvironment(Regime::zero, 0.0, 0.0); }

ThermalEnvironment ThermalEnvironment::finite(double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw std::domain_error("finite regime requires T > 0");
    }
    return ThermalEnvironment(Regime::finite, temperature, 0.0);
}

ThermalEnvironment ThermalEnvironment::high_t_limit(double omega_T) {
    if (!(omega_T > 0.0) || !std::isfinite(omega_T)) {
        throw std::domain_error("high-temperature limit requires omega_T > 0");
    }
    return ThermalEnvironment(Regime::high_t_limit, 0.0, omega_T);
}

ThermalEnvironment ThermalEnvironment::parse(const std::string& spec) {
    if (spec == "zero") return zero();
    if (spec.rfind("t:", 0) == 0) return finite(parse_number(spec.substr(2), spec));
    if (spec.rfind("hight:", 0) == 0) return high_t_limit(parse_number(spec.substr(6), spec));
    throw std::invalid_argument("bad temperature spec '" + spec + "' (expected zero, t:<T> or hight:<omega_T>)");
}

std::string ThermalEnvironment::spec() const {
    switch (regime_) {
    case Regime::zero: return "zero";
    case Regime::finite: return "t:" + format_g(temperature_);
    case Regime::high_t_limit: return "hight:" + format_g(omega_T_);
    }
    return "?";
}

double ThermalEnvironment::nominal_temperature() const {
    switch (regime_) {
    case Regime::zero: return 0.0;
    case Regime::finite: return temperature_;
    case Regime::high_t_limit: return omega_T_;
    }
    return 0.0;
}

double thermal_kernel(double omega, const ThermalEnvironment& env) {
    if (!(omega > 0.0)) throw std::domain_error("thermal_kernel: omega must be positive");
    switch (env.regime()) {
    case Regime::zero: return 1.0;
    case Regime::high_t_limit: return 2.0 * env.omega_T() / omega;
    case Regime::finite: {
        const double x = omega / (2.0 * env.temperature());
        if (x < kSeriesThreshold) return 1.0 / x + x / 3.0;
        if (x > 20.0) return 1.0 + 2.0 * std::exp(-2.0 * x);
        return 1.0 / std::tanh(x);
    }
    }
    return 1.0;
}

DephasingModel::DephasingModel(OhmicSpectralDensity sd, ThermalEnvironment env, double omega0)
    : spectral(sd), environment(env), omega_0(omega0) {
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) throw std::domain_error("omega_0 must be >= 0");
}

} // namespace qsld
