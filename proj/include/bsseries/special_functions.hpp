#pragma once

#include <complex>

namespace bsseries {

/// A point of the lattice Z/2, stored as twice its value so no rounding of
/// the argument ever happens.
struct HalfIntegerArg {
    int two_x = 0;

    static constexpr HalfIntegerArg from_twice(int twice) { return HalfIntegerArg{twice}; }
    static constexpr HalfIntegerArg integer(int n) { return HalfIntegerArg{2 * n}; }
    /// The point 1/2 + p.
    static constexpr HalfIntegerArg half_plus(int p) { return HalfIntegerArg{2 * p + 1}; }

    constexpr bool is_integer() const { return two_x % 2 == 0; }
    constexpr bool is_pole() const { return is_integer() && two_x <= 0; }
    constexpr double value() const { return 0.5 * two_x; }
};

/// Standard normal CDF. Evaluated through the complementary error function so
/// that the lower tail keeps full relative precision.
double norm_cdf(double x);

/// Standard normal density.
double norm_pdf(double x);

/// Gamma at a strict half-integer or a positive integer. Half-integers use
///   Gamma(1/2 + p) = (2p)! / (4^p p!) sqrt(pi)            p >= 0
///   Gamma(1/2 + p) = (-4)^|p| |p|! / (2|p|)! sqrt(pi)     p < 0
/// with the rational factor built as a running product. Throws PoleError on
/// nonpositive integers.
double gamma_half_integer(HalfIntegerArg arg);

/// 1 / Gamma on Z/2, exactly 0 at the poles.
double rgamma_lattice(HalfIntegerArg arg);

/// log|Gamma(arg)| and its sign for lattice points that are not poles.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
};
SignedLog log_gamma_lattice(HalfIntegerArg arg);

/// ln(n!). Table for n <= 256, lgamma beyond.
double log_factorial(int n);

/// n! as binary64 (inf for n > 170).
double factorial(int n);

/// log Gamma for complex arguments (Lanczos, reflection on the left
/// half-plane). The imaginary part is not reduced to the principal branch;
/// exp(result) is accurate to ~1e-13 relative for |Im| <= 200.
std::complex<double> log_gamma(std::complex<double> x);

/// log sin(pi x), stable for large |Im x|. Branch not reduced.
std::complex<double> log_sin_pi(std::complex<double> x);

} // namespace bsseries
