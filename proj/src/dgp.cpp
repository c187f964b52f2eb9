#include "dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "numerics.hpp"

namespace cpd {

CopulaFamily copula_family_from_string(const std::string& name) {
    if (name == "clayton") return CopulaFamily::Clayton;
    if (name == "gumbel") return CopulaFamily::GumbelHougaard;
    if (name == "frank") return CopulaFamily::Frank;
    if (name == "normal") return CopulaFamily::Normal;
    if (name == "student") return CopulaFamily::Student;
    throw std::invalid_argument("unknown copula family '" + name +
                                "' (expected clayton|gumbel|frank|normal|student)");
}

std::string to_string(CopulaFamily family) {
    switch (family) {
        case CopulaFamily::Clayton: return "clayton";
        case CopulaFamily::GumbelHougaard: return "gumbel";
        case CopulaFamily::Frank: return "frank";
        case CopulaFamily::Normal: return "normal";
        case CopulaFamily::Student: return "student";
    }
    return "?";
}

void validate(const CopulaSpec& spec) {
    if (spec.d < 2) throw std::invalid_argument("copula: d must be >= 2");
    switch (spec.family) {
        case CopulaFamily::Clayton:
            if (!(spec.parameter > 0.0)) {
                throw std::invalid_argument("Clayton copula requires theta > 0");
            }
            break;
        case CopulaFamily::GumbelHougaard:
            if (!(spec.parameter >= 1.0)) {
                throw std::invalid_argument("Gumbel-Hougaard copula requires theta >= 1");
            }
            break;
        case CopulaFamily::Frank:
            if (spec.parameter == 0.0) {
                throw std::invalid_argument("Frank copula requires theta != 0");
            }
            if (spec.parameter < 0.0 && spec.d > 2) {
                throw std::invalid_argument("Frank copula with theta < 0 exists only for d = 2");
            }
            break;
        case CopulaFamily::Normal:
        case CopulaFamily::Student: {
            const double lower = -1.0 / (spec.d - 1);  // positive definite equicorrelation
            if (!(spec.parameter > lower && spec.parameter < 1.0)) {
                throw std::invalid_argument(
                    "equicorrelation rho must lie in (" + std::to_string(lower) + ", 1)");
            }
            if (spec.family == CopulaFamily::Student && !(spec.df >= 1.0)) {
                throw std::invalid_argument("Student copula requires df >= 1");
            }
            break;
        }
    }
}

namespace {

// Positive alpha-stable draw (Laplace transform exp(-t^alpha)), alpha in
// (0, 1]; Chambers-Mallows-Stuck form for the one-sided case.
double positive_stable(double alpha, RngStream& rng) {
    if (alpha >= 1.0) return 1.0;
    const double pi = std::acos(-1.0);
    const double w = pi * rng.uniform();
    const double e = rng.exponential();
    const double a = std::sin(alpha * w) / std::pow(std::sin(w), 1.0 / alpha);
    const double b = std::pow(std::sin((1.0 - alpha) * w) / e, (1.0 - alpha) / alpha);
    return a * b;
}

// Logarithmic-series draw with parameter p in (0,1); Kemp's accelerated
// algorithm.
double logarithmic_series(double p, RngStream& rng) {
    const double u1 = rng.uniform();
    if (u1 > p) return 1.0;
    const double q = 1.0 - std::exp(u1 * std::log1p(-p));
    const double u2 = rng.uniform();
    if (u2 < q * q) {
        return std::floor(1.0 + std::log(u2) / std::log(q));
    }
    return u2 > q ? 1.0 : 2.0;
}

// Gamma(shape, 1) via std::gamma_distribution on the stream's engine.
double gamma_draw(double shape, RngStream& rng) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(rng.engine());
}

// Lower-triangular Cholesky factor of the d x d equicorrelation matrix.
std::vector<double> equicorrelation_cholesky(int d, double rho) {
    std::vector<double> a(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            a[static_cast<std::size_t>(i) * d + j] = i == j ? 1.0 : rho;
        }
    }
    std::vector<double> l(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double acc = a[static_cast<std::size_t>(i) * d + j];
            for (int k = 0; k < j; ++k) {
                acc -= l[static_cast<std::size_t>(i) * d + k] *
                       l[static_cast<std::size_t>(j) * d + k];
            }
            if (i == j) {
                if (acc <= 0.0) throw std::invalid_argument("equicorrelation not positive definite");
                l[static_cast<std::size_t>(i) * d + j] = std::sqrt(acc);
            } else {
                l[static_cast<std::size_t>(i) * d + j] =
                    acc / l[static_cast<std::size_t>(j) * d + j];
            }
        }
    }
    return l;
}

void sample_elliptical(const CopulaSpec& spec, int count, RngStream& rng,
                       std::vector<double>& out) {
    const int d = spec.d;
    const std::vector<double> chol = equicorrelation_cholesky(d, spec.parameter);
    std::vector<double> g(d), z(d);
    const bool student = spec.family == CopulaFamily::Student;
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < d; ++j) g[j] = rng.normal();
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int k = 0; k <= j; ++k) acc += chol[static_cast<std::size_t>(j) * d + k] * g[k];
            z[j] = acc;
        }
        double scale = 1.0;
        if (student) {
            const double chi2 = 2.0 * gamma_draw(spec.df / 2.0, rng);  // chi-square_df
            scale = std::sqrt(spec.df / chi2);
        }
        for (int j = 0; j < d; ++j) {
            const double x = z[j] * scale;
            out[static_cast<std::size_t>(i) * d + j] =
                student ? student_t_cdf(x, spec.df) : normal_cdf(x);
        }
    }
}

void sample_archimedean(const CopulaSpec& spec, int count, RngStream& rng,
                        std::vector<double>& out) {
    const int d = spec.d;
    const double theta = spec.parameter;

    if (spec.family == CopulaFamily::Frank && theta < 0.0) {
        // Negative dependence exists only for d = 2; conditional inversion.
        for (int i = 0; i < count; ++i) {
            const double u = rng.uniform();
            const double p = rng.uniform();
            const double a = std::exp(-theta * u);
            const double num = p * std::expm1(-theta);
            const double den = a - p * (a - 1.0);
            const double v = -std::log1p(num / den) / theta;
            out[static_cast<std::size_t>(i) * d] = u;
            out[static_cast<std::size_t>(i) * d + 1] = std::clamp(v, 1e-15, 1.0 - 1e-15);
        }
        return;
    }

    for (int i = 0; i < count; ++i) {
        double frailty = 1.0;
        switch (spec.family) {
            case CopulaFamily::Clayton:
                frailty = gamma_draw(1.0 / theta, rng);
                break;
            case CopulaFamily::GumbelHougaard:
                frailty = positive_stable(1.0 / theta, rng);
                break;
            case CopulaFamily::Frank:
                frailty = logarithmic_series(-std::expm1(-theta), rng);
                break;
            default:
                break;
        }
        for (int j = 0; j < d; ++j) {
            const double e = rng.exponential();
            const double t = e / frailty;
            double u;
            switch (spec.family) {
                case CopulaFamily::Clayton:
                    u = std::pow(1.0 + t, -1.0 / theta);
                    break;
                case CopulaFamily::GumbelHougaard:
                    u = std::exp(-std::pow(t, 1.0 / theta));
                    break;
                case CopulaFamily::Frank:
                    // psi(t) = -log(1 + e^{-t}(e^{-theta} - 1)) / theta
                    u = -std::log1p(std::exp(-t) * std::expm1(-theta)) / theta;
                    break;
                default:
                    u = 0.5;
                    break;
            }
            out[static_cast<std::size_t>(i) * d + j] = std::clamp(u, 1e-15, 1.0 - 1e-15);
        }
    }
}

}  // namespace

std::vector<double> sample_copula(const CopulaSpec& spec, int count, RngStream& rng) {
    validate(spec);
    if (count < 1) throw std::invalid_argument("sample_copula: count must be positive");
    std::vector<double> out(static_cast<std::size_t>(count) * spec.d);
    switch (spec.family) {
        case CopulaFamily::Normal:
        case CopulaFamily::Student:
            sample_elliptical(spec, count, rng, out);
            break;
        default:
            sample_archimedean(spec, count, rng, out);
            break;
    }
    return out;
}

namespace {

// Debye function D_1(x) = (1/x) int_0^x t / (e^t - 1) dt.
double debye1(double x) {
    if (x == 0.0) return 1.0;
    const double integral = adaptive_simpson(
        [](double t) { return std::abs(t) < 1e-8 ? 1.0 - t / 2.0 : t / std::expm1(t); }, 0.0, x,
        1e-12);
    return integral / x;
}

double frank_tau(double theta) {
    // tau(theta) = 1 - (4/theta)(1 - D_1(theta)); odd in theta.
    return 1.0 - 4.0 / theta * (1.0 - debye1(theta));
}

double frank_parameter_from_tau(double tau) {
    const double target = std::abs(tau);
    double lo = 1e-9, hi = 1.0;
    while (frank_tau(hi) < target) {
        hi *= 2.0;
        if (hi > 1e6) throw std::invalid_argument("Frank tau too close to 1");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (frank_tau(mid) < target ? lo : hi) = mid;
    }
    const double theta = 0.5 * (lo + hi);
    return tau >= 0.0 ? theta : -theta;
}

}  // namespace

double tau_to_parameter(CopulaFamily family, double tau) {
    const double pi = std::acos(-1.0);
    switch (family) {
        case CopulaFamily::Clayton:
            if (!(tau > 0.0 && tau < 1.0)) {
                throw std::invalid_argument("Clayton requires tau in (0, 1)");
            }
            return 2.0 * tau / (1.0 - tau);
        case CopulaFamily::GumbelHougaard:
            if (!(tau >= 0.0 && tau < 1.0)) {
                throw std::invalid_argument("Gumbel requires tau in [0, 1)");
            }
            return 1.0 / (1.0 - tau);
        case CopulaFamily::Normal:
        case CopulaFamily::Student:
            if (!(tau > -1.0 && tau < 1.0)) {
                throw std::invalid_argument("elliptical families require |tau| < 1");
            }
            return std::sin(pi * tau / 2.0);
        case CopulaFamily::Frank:
            if (!(tau != 0.0 && std::abs(tau) < 1.0)) {
                throw std::invalid_argument("Frank requires 0 < |tau| < 1");
            }
            return frank_parameter_from_tau(tau);
    }
    throw std::invalid_argument("tau_to_parameter: unknown family");
}

double parameter_to_tau(CopulaFamily family, double parameter) {
    const double pi = std::acos(-1.0);
    switch (family) {
        case CopulaFamily::Clayton: return parameter / (parameter + 2.0);
        case CopulaFamily::GumbelHougaard: return 1.0 - 1.0 / parameter;
        case CopulaFamily::Normal:
        case CopulaFamily::Student: return 2.0 / pi * std::asin(parameter);
        case CopulaFamily::Frank: return frank_tau(parameter);
    }
    throw std::invalid_argument("parameter_to_tau: unknown family");
}

double spearman_to_parameter(CopulaFamily family, double rho_s, double df) {
    const double pi = std::acos(-1.0);
    switch (family) {
        case CopulaFamily::Normal:
            if (!(rho_s > -1.0 && rho_s < 1.0)) {
                throw std::invalid_argument("Spearman rho must lie in (-1, 1)");
            }
            return 2.0 * std::sin(pi * rho_s / 6.0);
        case CopulaFamily::Student: {
            if (!(rho_s > -0.99 && rho_s < 0.99)) {
                throw std::invalid_argument("Spearman rho must lie in (-0.99, 0.99)");
            }
            // Normal-copula relation as pilot, refined by Monte Carlo
            // bisection with common random numbers.
            const int draws = 60000;
            auto estimate = [&](double rho) {
                CopulaSpec spec{CopulaFamily::Student, 2, rho, df};
                RngStream rng(0x5345ull, 97);
                const std::vector<double> u = sample_copula(spec, draws, rng);
                std::vector<double> x(draws), y(draws);
                for (int i = 0; i < draws; ++i) {
                    x[i] = u[2 * static_cast<std::size_t>(i)];
                    y[i] = u[2 * static_cast<std::size_t>(i) + 1];
                }
                return sample_spearman_rho(x, y);
            };
            const double pilot = 2.0 * std::sin(pi * rho_s / 6.0);
            double lo = std::max(pilot - 0.2, -0.999);
            double hi = std::min(pilot + 0.2, 0.999);
            while (estimate(lo) > rho_s && lo > -0.999) lo = std::max(lo - 0.2, -0.999);
            while (estimate(hi) < rho_s && hi < 0.999) hi = std::min(hi + 0.2, 0.999);
            double mid = pilot;
            for (int it = 0; it < 40; ++it) {
                mid = 0.5 * (lo + hi);
                const double est = estimate(mid);
                if (std::abs(est - rho_s) <= 0.005) break;
                (est < rho_s ? lo : hi) = mid;
            }
            return mid;
        }
        default:
            throw std::invalid_argument(
                "spearman_to_parameter supports the normal and student families");
    }
}

std::vector<GarchParams> default_garch_params() {
    return {GarchParams{0.012, 0.919, 0.072}, GarchParams{0.037, 0.868, 0.115}};
}

std::vector<std::string> validate(const DgpSpec& spec) {
    std::vector<std::string> warnings;
    if (spec.n < 2) throw std::invalid_argument("dgp: n must be >= 2");
    if (spec.d < 2) throw std::invalid_argument("dgp: d must be >= 2");
    if (spec.burn_in < 0) throw std::invalid_argument("dgp: burn-in must be nonnegative");
    if (spec.c1.d != spec.d || spec.c2.d != spec.d) {
        throw std::invalid_argument("dgp: copula dimension must match d");
    }
    validate(spec.c1);
    if (spec.t.has_value()) {
        if (!(*spec.t > 0.0 && *spec.t < 1.0)) {
            throw std::invalid_argument("dgp: change location t must lie in (0, 1)");
        }
        validate(spec.c2);
    }
    if (spec.filter == FilterKind::Ar1) {
        if (!(std::abs(spec.gamma) < 1.0)) {
            throw std::invalid_argument("dgp: AR(1) coefficient must satisfy |gamma| < 1");
        }
    } else {
        const auto params =
            spec.garch.empty() && spec.d == 2 ? default_garch_params() : spec.garch;
        if (static_cast<int>(params.size()) != spec.d) {
            throw std::invalid_argument("dgp: GARCH needs one (omega, beta, alpha) per component");
        }
        for (std::size_t j = 0; j < params.size(); ++j) {
            if (!(params[j].omega > 0.0) || params[j].beta < 0.0 || params[j].alpha < 0.0) {
                throw std::invalid_argument("dgp: GARCH parameters must be positive");
            }
            if (params[j].beta + params[j].alpha >= 1.0) {
                warnings.push_back("GARCH component " + std::to_string(j + 1) +
                                   " is nonstationary (beta + alpha >= 1)");
            }
        }
    }
    return warnings;
}

Sample generate(const DgpSpec& spec, RngStream& rng) {
    validate(spec);
    const int n = spec.n;
    const int d = spec.d;
    const int burn = spec.burn_in;
    const int total = burn + 1 + n;  // indices -burn..0..n

    const int change_row = spec.t.has_value() ? static_cast<int>(std::floor(n * *spec.t)) : n;

    // Innovation stream: burn-in and rows 1..floor(nt) from c1, rest from c2.
    const int from_c1 = burn + 1 + std::min(change_row, n);
    const int from_c2 = total - from_c1;
    std::vector<double> uniforms(static_cast<std::size_t>(total) * d);
    {
        std::vector<double> head = sample_copula(spec.c1, from_c1, rng);
        std::copy(head.begin(), head.end(), uniforms.begin());
        if (from_c2 > 0) {
            std::vector<double> tail = sample_copula(spec.c2, from_c2, rng);
            std::copy(tail.begin(), tail.end(),
                      uniforms.begin() + static_cast<std::size_t>(from_c1) * d);
        }
    }
    std::vector<double> eps(uniforms.size());
    for (std::size_t t = 0; t < uniforms.size(); ++t) eps[t] = normal_quantile(uniforms[t]);

    std::vector<double> x(static_cast<std::size_t>(total) * d, 0.0);
    if (spec.filter == FilterKind::Ar1) {
        for (int j = 0; j < d; ++j) x[j] = eps[j];
        for (int i = 1; i < total; ++i) {
            for (int j = 0; j < d; ++j) {
                x[static_cast<std::size_t>(i) * d + j] =
                    spec.gamma * x[static_cast<std::size_t>(i - 1) * d + j] +
                    eps[static_cast<std::size_t>(i) * d + j];
            }
        }
    } else {
        const auto params =
            spec.garch.empty() && spec.d == 2 ? default_garch_params() : spec.garch;
        std::vector<double> sigma2(d);
        for (int j = 0; j < d; ++j) {
            const double persistence = params[j].beta + params[j].alpha;
            // Stationary variance when it exists, else a plain omega start;
            // the burn-in absorbs the initialization either way.
            sigma2[j] = persistence < 1.0 ? params[j].omega / (1.0 - persistence)
                                          : params[j].omega;
            x[j] = eps[j];
        }
        for (int i = 1; i < total; ++i) {
            for (int j = 0; j < d; ++j) {
                const double prev_eps = eps[static_cast<std::size_t>(i - 1) * d + j];
                sigma2[j] = params[j].omega + params[j].beta * sigma2[j] +
                            params[j].alpha * prev_eps * prev_eps;
                x[static_cast<std::size_t>(i) * d + j] =
                    std::sqrt(sigma2[j]) * eps[static_cast<std::size_t>(i) * d + j];
            }
        }
    }

    std::vector<double> rows(static_cast<std::size_t>(n) * d);
    std::copy(x.begin() + static_cast<std::size_t>(burn + 1) * d, x.end(), rows.begin());
    return Sample(std::move(rows), n, d);
}

double sample_kendall_tau(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size()) {
        throw std::invalid_argument("sample_kendall_tau: need two series of equal length >= 2");
    }
    long long concordant = 0, discordant = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double s = (x[i] - x[j]) * (y[i] - y[j]);
            if (s > 0.0) ++concordant;
            else if (s < 0.0) ++discordant;
        }
    }
    return static_cast<double>(concordant - discordant) /
           (static_cast<double>(n) * (n - 1) / 2.0);
}

double sample_spearman_rho(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size()) {
        throw std::invalid_argument("sample_spearman_rho: need two series of equal length >= 2");
    }
    auto ranks = [n](std::span<const double> v) {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        for (int pos = 0; pos < n; ++pos) r[idx[pos]] = pos + 1;
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double mean = (n + 1) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (int i = 0; i < n; ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    return num / std::sqrt(dx * dy);
}

}  // namespace cpd
