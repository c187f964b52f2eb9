#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rng.hpp"
#include "sample.hpp"

namespace cpd {

enum class CopulaFamily { Clayton, GumbelHougaard, Frank, Normal, Student };

CopulaFamily copula_family_from_string(const std::string& name);
std::string to_string(CopulaFamily family);

/// Exchangeable one-parameter copula. parameter is theta for the
/// Archimedean families and the equicorrelation rho for Normal/Student;
/// df is the Student degrees of freedom.
struct CopulaSpec {
    CopulaFamily family = CopulaFamily::Normal;
    int d = 2;
    double parameter = 0.0;
    double df = 4.0;
};

void validate(const CopulaSpec& spec);

/// count i.i.d. rows from the copula, row-major count x d, entries in (0,1).
/// Archimedean families use their frailty (Marshall-Olkin) constructions;
/// Normal/Student draw from the equicorrelation factor model and map the
/// margins through the matching c.d.f.
std::vector<double> sample_copula(const CopulaSpec& spec, int count, RngStream& rng);

/// Copula parameter with the prescribed bivariate Kendall's tau.
double tau_to_parameter(CopulaFamily family, double tau);

/// Kendall's tau of the bivariate margin at the given parameter.
double parameter_to_tau(CopulaFamily family, double parameter);

/// Copula parameter with the prescribed bivariate Spearman's rho. For the
/// Student family this inverts a Monte Carlo estimate of Spearman's rho by
/// bisection (tolerance 0.005), seeded deterministically.
double spearman_to_parameter(CopulaFamily family, double rho_s, double df = 4.0);

struct GarchParams {
    double omega = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
};

/// GARCH(1,1) constants estimated from SP500 and DAX daily logreturns,
/// used by the bivariate GARCH experiments.
std::vector<GarchParams> default_garch_params();

enum class FilterKind { Ar1, Garch };

struct DgpSpec {
    int n = 0;
    int d = 2;
    FilterKind filter = FilterKind::Ar1;
    double gamma = 0.0;               // AR(1) coefficient
    std::vector<GarchParams> garch;   // per component, Garch only
    CopulaSpec c1;
    CopulaSpec c2;
    std::optional<double> t;          // change location in (0,1); none = no change
    int burn_in = 100;
};

/// Throws on hard errors (invalid gamma, copula parameters, ...) and
/// returns warnings for questionable but runnable settings (nonstationary
/// GARCH).
std::vector<std::string> validate(const DgpSpec& spec);

/// Copula-driven innovations (probit-transformed) filtered through the
/// AR(1) or GARCH recursion, started burn_in steps before time 1. Rows
/// 1..floor(n t) of the innovation stream draw from c1 (as does the whole
/// burn-in), later rows from c2.
Sample generate(const DgpSpec& spec, RngStream& rng);

/// Sample dependence estimators, used by oracle tests and the Spearman
/// parameter inversion.
double sample_kendall_tau(std::span<const double> x, std::span<const double> y);
double sample_spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace cpd
