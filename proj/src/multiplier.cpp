#include "multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "numerics.hpp"

namespace cpd {

double parzen_kernel(double x) {
    const double a = std::abs(x);
    if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
    if (a <= 1.0) {
        const double t = 1.0 - a;
        return 2.0 * t * t * t;
    }
    return 0.0;
}

double KernelShape::convolution(double y) const {
    const double a = std::abs(y);
    if (a >= 2.0) return 0.0;
    // kappa is supported on [-1, 1], so the overlap is [a - 1, 1].
    return adaptive_simpson([a](double t) { return parzen_kernel(t) * parzen_kernel(a - t); },
                            a - 1.0, 1.0, 1e-12);
}

double KernelShape::phi(double x) const {
    if (x == 0.0) return 1.0;
    if (std::abs(x) >= 1.0) return 0.0;
    return convolution(2.0 * x) / conv_at_0_;
}

KernelShape::KernelShape() {
    conv_at_0_ = convolution(0.0);

    // phi''(0) by symmetric second differences with one Richardson step;
    // phi is even, so the stencil reduces to 2 (phi(h) - 1) / h^2.
    auto second_diff = [this](double h) { return 2.0 * (phi(h) - 1.0) / (h * h); };
    const double h = 0.05;
    const double coarse = second_diff(h);
    const double fine = second_diff(h / 2.0);
    phi2_at_0_ = (4.0 * fine - coarse) / 3.0;

    integral_phi_sq_ = adaptive_simpson([this](double x) { return phi(x) * phi(x); }, -1.0, 1.0,
                                        1e-10);
}

const KernelShape& KernelShape::parzen() {
    static const KernelShape instance;
    return instance;
}

MultiplierSequence iid_multipliers(int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("iid_multipliers: n must be positive");
    MultiplierSequence seq;
    seq.kind = MultiplierKind::Iid;
    seq.xi.resize(n);
    for (double& x : seq.xi) x = rng.normal();
    return seq;
}

std::vector<double> moving_average_weights(int ell) {
    if (ell < 1) throw std::invalid_argument("moving_average_weights: ell must be positive");
    const int b = ell / 2;
    std::vector<double> w(2 * b + 1);
    double sumsq = 0.0;
    for (int j = -b; j <= b; ++j) {
        const double v = parzen_kernel(j / (b + 0.5));
        w[j + b] = v;
        sumsq += v * v;
    }
    const double norm = 1.0 / std::sqrt(sumsq);
    for (double& v : w) v *= norm;
    return w;
}

MultiplierSequence dependent_multipliers(int n, int ell, const KernelShape&, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("dependent_multipliers: n must be positive");
    if (ell < 1) throw std::invalid_argument("dependent_multipliers: ell must be positive");
    if (ell >= n) {
        throw std::invalid_argument("dependent_multipliers: window ell = " + std::to_string(ell) +
                                    " exceeds series length n = " + std::to_string(n));
    }
    const std::vector<double> w = moving_average_weights(ell);
    const int b = static_cast<int>(w.size() / 2);
    std::vector<double> z(static_cast<std::size_t>(n) + 2 * b);
    for (double& v : z) v = rng.normal();

    MultiplierSequence seq;
    seq.kind = MultiplierKind::Dependent;
    seq.ell = ell;
    seq.xi.resize(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 2 * b + 1; ++j) acc += w[j] * z[i + j];
        seq.xi[i] = acc;
    }
    return seq;
}

}  // namespace cpd
