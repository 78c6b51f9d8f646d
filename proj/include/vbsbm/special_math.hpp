#pragma once

// Log-gamma, digamma and log-beta on the positive real axis.
//
// All functions throw DomainError for non-positive or non-finite input.

namespace vbsbm::special {

/// ln Γ(x), relative error below 1e-12 on [1e-6, 1e8].
double ln_gamma(double x);

/// ψ(x) = d/dx ln Γ(x), absolute error below 1e-10 for x >= 1e-6.
double digamma(double x);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b).
double ln_beta(double a, double b);

} // namespace vbsbm::special
