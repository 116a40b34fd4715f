// model.hpp: bath spectral density, thermal environment and the dephasing-model handle
//
// Units: hbar = k_B = 1. Frequencies and temperatures are measured in units of the
// cutoff omega_c, times in units of 1/omega_c. omega_c itself defaults to 1.

#pragma once

#include <string>

namespace qsld {

enum class Coupling { sub_ohmic, ohmic, super_ohmic };

const char* to_string(Coupling c);

// J(w) = coupling * w^s / omega_c^(s-1) * exp(-w / omega_c)
class OhmicSpectralDensity {
public:
    explicit OhmicSpectralDensity(double s, double omega_c = 1.0, double coupling = 1.0);

    double s() const { return s_; }
    double omega_c() const { return omega_c_; }
    // Dimensionless prefactor; 0 switches the bath off (unitary limit).
    double coupling() const { return coupling_; }

    double operator()(double omega) const;

private:
    double s_;
    double omega_c_;
    double coupling_;
};

double spectral_density(const OhmicSpectralDensity& sd, double omega);

Coupling classify_coupling(double s);

enum class Regime { zero, finite, high_t_limit };

class ThermalEnvironment {
public:
    static ThermalEnvironment zero();
    static ThermalEnvironment finite(double temperature);
    static ThermalEnvironment high_t_limit(double omega_T);

    // Parses "zero", "t:<T>" or "hight:<omega_T>".
    static ThermalEnvironment parse(const std::string& spec);

    Regime regime() const { return regime_; }
    double temperature() const { return temperature_; }
    double omega_T() const { return omega_T_; }

    // Canonical spec string, round-trips through parse().
    std::string spec() const;
    // Temperature value used on plot axes: 0, T, or omega_T.
    double nominal_temperature() const;

private:
    ThermalEnvironment(Regime r, double temperature, double omega_T)
        : regime_(r), temperature_(temperature), omega_T_(omega_T) {}

    Regime regime_;
    double temperature_;
    double omega_T_;
};

// coth(w / 2T) and its zero- and high-temperature replacements.
double thermal_kernel(double omega, const ThermalEnvironment& env);

struct DephasingModel {
    DephasingModel(OhmicSpectralDensity sd, ThermalEnvironment env, double omega_0 = 1.0);

    OhmicSpectralDensity spectral;
    ThermalEnvironment environment;
    double omega_0;
};

} // namespace qsld
