#include "bsseries/special_functions.hpp"

#include "bsseries/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace bsseries {

namespace {

constexpr long double kSqrtPiL = 1.772453850905516027298167483341145182798L;
constexpr double kLogSqrtPi = 0.57236494292470008707171367567652935582;

constexpr int kLogFactorialTableSize = 257;

const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
    static const auto table = [] {
        std::array<double, kLogFactorialTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int i = 1; i < kLogFactorialTableSize; ++i) {
            acc += std::log(static_cast<long double>(i));
            t[i] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

// prod_{i=1..p} (i - 1/2) == (2p)! / (4^p p!)
long double half_integer_rising(int p) {
    long double prod = 1.0L;
    for (int i = 1; i <= p; ++i) {
        prod *= static_cast<long double>(i) - 0.5L;
    }
    return prod;
}

} // namespace

double norm_cdf(double x) {
    // u = -x / sqrt(2) carried as hi + lo; the tail is too sensitive to round u once
    constexpr long double inv_sqrt2 = 0.7071067811865475244008443621048490393L;
    constexpr double c_hi = static_cast<double>(inv_sqrt2);
    constexpr double c_lo = static_cast<double>(inv_sqrt2 - c_hi);
    const double hi = -x * c_hi;
    const double lo = std::fma(-x, c_hi, -hi) + -x * c_lo;
    const double slope = std::numbers::inv_sqrtpi * 2.0 * std::exp(-hi * hi);
    return 0.5 * (std::erfc(hi) - lo * slope);
}

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double gamma_half_integer(HalfIntegerArg arg) {
    if (arg.is_pole()) {
        throw PoleError("Gamma has a pole at " + std::to_string(arg.value()));
    }
    if (arg.is_integer()) {
        return factorial(arg.two_x / 2 - 1);
    }
    // two_x = 2p + 1
    const int p = (arg.two_x - 1) / 2;
    if (p >= 0) {
        return static_cast<double>(kSqrtPiL * half_integer_rising(p));
    }
    const int q = -p;
    const long double value = kSqrtPiL / half_integer_rising(q);
    return static_cast<double>(q % 2 == 0 ? value : -value);
}

double rgamma_lattice(HalfIntegerArg arg) {
    if (arg.is_pole()) {
        return 0.0;
    }
    return 1.0 / gamma_half_integer(arg);
}

SignedLog log_gamma_lattice(HalfIntegerArg arg) {
    if (arg.is_pole()) {
        throw PoleError("log Gamma has a pole at " + std::to_string(arg.value()));
    }
    if (arg.is_integer()) {
        return {log_factorial(arg.two_x / 2 - 1), 1};
    }
    const int p = (arg.two_x - 1) / 2;
    const double log4 = 2.0 * std::numbers::ln2;
    if (p >= 0) {
        return {log_factorial(2 * p) - p * log4 - log_factorial(p) + kLogSqrtPi, 1};
    }
    const int q = -p;
    return {q * log4 + log_factorial(q) - log_factorial(2 * q) + kLogSqrtPi, q % 2 == 0 ? 1 : -1};
}

double log_factorial(int n) {
    if (n < 0) {
        throw InvalidInput("log_factorial of negative integer " + std::to_string(n));
    }
    if (n < kLogFactorialTableSize) {
        return log_factorial_table()[static_cast<std::size_t>(n)];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double factorial(int n) {
    if (n < 0) {
        throw InvalidInput("factorial of negative integer " + std::to_string(n));
    }
    long double prod = 1.0L;
    for (int i = 2; i <= n; ++i) {
        prod *= i;
    }
    return static_cast<double>(prod);
}

namespace {

// Godfrey's g = 7, n = 9 Lanczos coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551354,
    12.507343278686904814458936853,
    -0.13857109526572011689554707,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7,
};

std::complex<double> log_gamma_right(std::complex<double> x) {
    // x - 1 = w, Gamma(x) = Gamma(w + 1)
    const std::complex<double> w = x - 1.0;
    std::complex<double> series = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) {
        series += kLanczos[i] / (w + static_cast<double>(i));
    }
    const std::complex<double> t = w + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (w + 0.5) * std::log(t) - t + std::log(series);
}

} // namespace

std::complex<double> log_gamma(std::complex<double> x) {
    if (x.real() < 0.5) {
        return std::log(std::numbers::pi) - log_sin_pi(x) - log_gamma_right(1.0 - x);
    }
    return log_gamma_right(x);
}

std::complex<double> log_sin_pi(std::complex<double> x) {
    using namespace std::complex_literals;
    // shift by an even integer: sin(pi x) is 2-periodic
    const double shift = 2.0 * std::round(0.5 * x.real());
    x -= shift;
    const double pi = std::numbers::pi;
    if (std::abs(x.imag()) < 1.0) {
        return std::log(std::sin(pi * x));
    }
    if (x.imag() > 0.0) {
        // sin(pi x) = (i/2) e^{-i pi x} (1 - e^{2 i pi x})
        return std::log(0.5i) - 1i * pi * x + std::log(1.0 - std::exp(2i * pi * x));
    }
    return std::conj(log_sin_pi(std::conj(x)));
}

} // namespace bsseries
