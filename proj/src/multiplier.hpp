#pragma once

#include <vector>

#include "rng.hpp"

namespace cpd {

enum class MultiplierKind { Iid, Dependent };

/// A mean-0 variance-1 weight sequence for the multiplier bootstrap. Iid
/// sequences are plain standard normal draws; Dependent sequences are
/// ell-dependent moving averages of standard normals.
struct MultiplierSequence {
    std::vector<double> xi;
    MultiplierKind kind = MultiplierKind::Iid;
    int ell = 0;  // dependence window, Dependent only
};

/// Parzen kernel: (1 - 6x^2 + 6|x|^3) on |x| <= 1/2, 2(1-|x|)^3 on
/// 1/2 < |x| <= 1, zero outside.
double parzen_kernel(double x);

/// The autocorrelation shape induced by self-convolving the Parzen kernel:
/// phi(x) = (kappa * kappa)(2x) / (kappa * kappa)(0). Symmetric, phi(0) = 1,
/// vanishes outside [-1, 1]. The derived constants phi''(0) and
/// int_{-1}^{1} phi(x)^2 dx are computed numerically once and cached.
class KernelShape {
public:
    static const KernelShape& parzen();

    double phi(double x) const;
    double phi_second_deriv_at_0() const { return phi2_at_0_; }
    double integral_phi_squared() const { return integral_phi_sq_; }

private:
    KernelShape();
    double convolution(double y) const;  // (kappa * kappa)(y)

    double conv_at_0_ = 0.0;
    double phi2_at_0_ = 0.0;
    double integral_phi_sq_ = 0.0;
};

/// n i.i.d. standard normal multipliers.
MultiplierSequence iid_multipliers(int n, RngStream& rng);

/// Moving-average weights for window parameter ell: w_j = kappa_P(j / (b + 0.5))
/// for j = -b..b with b = floor(ell / 2), normalized so sum w_j^2 = 1.
/// Returned as a vector of length 2b + 1.
std::vector<double> moving_average_weights(int ell);

/// ell-dependent multipliers via the moving-average construction:
/// xi_i = sum_j w_j Z_{i+j} over a standard normal driver sequence. The
/// output is 2b-dependent with 2b <= ell and its lag-h autocovariance is
/// sum_j w_j w_{j+h}, approximately phi(h / ell).
MultiplierSequence dependent_multipliers(int n, int ell, const KernelShape& kernel,
                                         RngStream& rng);

}  // namespace cpd
