#include "bsseries/series.hpp"

#include "bsseries/compensated_sum.hpp"
#include "bsseries/errors.hpp"
#include "bsseries/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bsseries {

namespace {

constexpr int kTailLines = 64;
constexpr double kCancellationLimit = 1e12;

void require_positive_vol(double Z, const char* where) {
    if (!(Z > 0.0)) {
        throw DegenerateVolatility(std::string(where) + ": normalized volatility is zero");
    }
}

void require_index(TermIndex index) {
    if (index.j < 0 || index.n < 0 || index.n > 2 * index.j) {
        throw InvalidInput("term index (j=" + std::to_string(index.j) + ", n=" +
                           std::to_string(index.n) + ") outside 0 <= n <= 2j");
    }
}

double moneyness_base(const DerivedQuantities& d) {
    const double Z = d.normalized_vol;
    return 1.0 - d.log_moneyness / (Z * Z);
}

double tail_majorant(int j_used, double a, double Z) {
    CompensatedSum tail;
    for (int j = j_used + 1; j <= j_used + kTailLines; ++j) {
        // a line holds 2j + 1 terms
        tail.add(std::max(bound_term(j, a, Z), (2 * j + 1) * line_majorant(j, a, Z)));
    }
    return tail.value();
}

SeriesResult sum_diagonal(const DerivedQuantities& d, double lead, const TruncationConfig& cfg) {
    if (std::holds_alternative<FixedRect>(cfg)) {
        throw InvalidInput("rectangular truncation passed to the diagonal series");
    }
    const double Z = d.normalized_vol;
    const double half_F = 0.5 * d.forward_strike;
    const double a = alpha(d);

    int j_used = 0;
    bool capped = false;
    try {
        j_used = detail::resolve_diagonal_lines(cfg, a, Z, 1.0);
    } catch (const TruncationCapExceeded& e) {
        j_used = e.j_cap();
        capped = true;
    }

    CompensatedSum acc;
    acc.add(lead);
    for (int j = 0; j <= j_used; ++j) {
        for (int n = 0; n <= 2 * j; ++n) {
            acc.add(term({j, n}, d));
        }
    }

    SeriesResult result;
    result.price = acc.value();
    result.j_used = j_used;
    result.terms_evaluated = (j_used + 1) * (j_used + 1);
    result.tail_bound = half_F * tail_majorant(j_used, a, Z);
    result.precision_loss = acc.mass() > kCancellationLimit * std::abs(result.price);
    result.converged = !result.precision_loss;
    if (const auto* adaptive = std::get_if<Adaptive>(&cfg)) {
        result.converged = result.converged && result.tail_bound <= adaptive->epsilon * half_F;
    }
    if (capped) {
        throw TruncationCapExceeded("no line below epsilon within j_cap = " + std::to_string(j_used),
                                    j_used, result.price, result.tail_bound);
    }
    return result;
}

// 1 / Gamma(two_x / 2) in extended precision
long double rgamma_half_integer_l(int two_x, long double sqrt_pi) {
    if (two_x % 2 == 0) {
        const int n = two_x / 2;
        if (n <= 0) {
            return 0.0L;
        }
        long double f = 1.0L;
        for (int i = 2; i < n; ++i) {
            f *= i;
        }
        return 1.0L / f;
    }
    const int p = (two_x - 1) / 2;
    long double prod = 1.0L;
    for (int i = 1; i <= std::abs(p); ++i) {
        prod *= static_cast<long double>(i) - 0.5L;
    }
    if (p >= 0) {
        return 1.0L / (sqrt_pi * prod);
    }
    return (p % 2 == 0 ? prod : -prod) / sqrt_pi;
}

SeriesResult intrinsic_result(double value) {
    SeriesResult result;
    result.price = value;
    result.j_used = 0;
    result.terms_evaluated = 1;
    result.tail_bound = 0.0;
    result.converged = true;
    return result;
}

} // namespace

namespace detail {

LogCoefficient log_line_coefficient(int j, int n) {
    // Gamma(3/2 + j - n) is never at a pole
    const SignedLog g = log_gamma_lattice(HalfIntegerArg::half_plus(j - n + 1));
    const int parity = n % 2 == 0 ? 1 : -1;
    return {-g.log_abs - log_factorial(n), parity * g.sign};
}

double line_coefficient(int j, int n) {
    const double r = rgamma_lattice(HalfIntegerArg::half_plus(j - n + 1)) / factorial(n);
    return n % 2 == 0 ? r : -r;
}

double power_term(int j, double coeff, const LogCoefficient& log_coeff,
                  double Z, int z_exp, double w, int w_exp) {
    if (w_exp > 0 && w == 0.0) {
        return 0.0;
    }
    if (j <= kDirectLineLimit) {
        const double pz = std::pow(Z, z_exp);
        const double pw = std::pow(w, w_exp);
        const double direct = coeff * pz * pw;
        // fall through to log space on any overflow or underflow in the factors
        if (std::isfinite(direct) && std::isnormal(pz) && std::isnormal(pw)) {
            return direct;
        }
    }
    int sign = log_coeff.sign;
    double log_abs = log_coeff.log_abs + z_exp * std::log(Z);
    if (w_exp != 0) {
        log_abs += w_exp * std::log(std::abs(w));
        if (w < 0.0 && w_exp % 2 != 0) {
            sign = -sign;
        }
    }
    return sign * std::exp(log_abs);
}

int resolve_diagonal_lines(const TruncationConfig& cfg, double a, double Z, double epsilon_scale) {
    if (const auto* fixed = std::get_if<FixedDiagonal>(&cfg)) {
        if (fixed->j_max < 0) {
            throw InvalidInput("j_max must be >= 0");
        }
        return fixed->j_max;
    }
    if (const auto* adaptive = std::get_if<Adaptive>(&cfg)) {
        if (!(adaptive->epsilon > 0.0) || !std::isfinite(adaptive->epsilon)) {
            throw InvalidInput("adaptive epsilon must be finite and > 0");
        }
        if (adaptive->j_cap < 1) {
            throw InvalidInput("adaptive j_cap must be >= 1");
        }
        return select_truncation(adaptive->epsilon * epsilon_scale, a, Z, adaptive->j_cap);
    }
    throw InvalidInput("rectangular truncation has no diagonal line count");
}

} // namespace detail

double alpha(const DerivedQuantities& d) {
    require_positive_vol(d.normalized_vol, "alpha");
    return std::max(1.0, std::abs(moneyness_base(d)));
}

double term(TermIndex index, const DerivedQuantities& d) {
    require_index(index);
    const double Z = d.normalized_vol;
    require_positive_vol(Z, "term");
    const int j = index.j;
    const int n = index.n;
    const double coeff = j <= detail::kDirectLineLimit ? detail::line_coefficient(j, n) : 0.0;
    const auto log_coeff = detail::log_line_coefficient(j, n);
    return 0.5 * d.forward_strike *
           detail::power_term(j, coeff, log_coeff, Z, 2 * j + 1, moneyness_base(d), n);
}

double call_series_rect(const DerivedQuantities& d, int n_max, int m_max) {
    const double Z = d.normalized_vol;
    require_positive_vol(Z, "call_series_rect");
    if (n_max < 0 || m_max < 1) {
        throw InvalidInput("rectangular truncation needs n_max >= 0 and m_max >= 1");
    }
    // (Z^2 - k)^n Z^{m-n} == (Z w)^n Z^m keeps every factor bounded
    const double zw = Z * moneyness_base(d);
    CompensatedSum acc;
    for (int n = 0; n <= n_max; ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const double lead = sign * std::pow(zw, n) / factorial(n);
        for (int m = 1; m <= m_max; ++m) {
            const double rg = rgamma_lattice(HalfIntegerArg::from_twice(2 + m - n));
            if (rg == 0.0) {
                continue;
            }
            acc.add(lead * rg * std::pow(Z, m));
        }
    }
    return 0.5 * d.forward_strike * acc.value();
}

double phi(int J, double x) {
    if (J < 1) {
        throw InvalidInput("phi needs J >= 1");
    }
    const long double base = 1.0L - static_cast<long double>(x);
    constexpr long double sqrt_pi = 1.772453850905516027298167483341145182798L;
    long double power = 1.0L;
    long double factorial_n = 1.0L;
    long double sum = 0.0L;
    long double compensation = 0.0L;
    for (int n = 0; n <= J - 1; ++n) {
        if (n > 0) {
            power *= base;
            factorial_n *= n;
        }
        const long double rg = rgamma_half_integer_l(2 + J - 2 * n, sqrt_pi);
        if (rg == 0.0L) {
            continue;
        }
        const long double t = (n % 2 == 0 ? 1.0L : -1.0L) * power * rg / factorial_n;
        const long double s = sum + t;
        compensation += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
    }
    return static_cast<double>(sum + compensation);
}

SeriesResult call_series_diagonal(const DerivedQuantities& d, double spot, const TruncationConfig& cfg) {
    const double F = d.forward_strike;
    if (d.normalized_vol == 0.0) {
        return intrinsic_result(std::max(spot - F, 0.0));
    }
    return sum_diagonal(d, 0.5 * (spot - F), cfg);
}

SeriesResult put_series(const DerivedQuantities& d, double spot, const TruncationConfig& cfg) {
    const double F = d.forward_strike;
    if (d.normalized_vol == 0.0) {
        return intrinsic_result(std::max(F - spot, 0.0));
    }
    return sum_diagonal(d, 0.5 * (F - spot), cfg);
}

double bound_term(int j, double a, double Z) {
    if (j < 0 || !(a >= 1.0) || !(Z > 0.0)) {
        throw InvalidInput("bound_term needs j >= 0, alpha >= 1, Z > 0");
    }
    const double log_bound = std::log(Z) - 0.5 * std::log(std::numbers::pi) +
                             2.0 * j * std::log(a * Z) - log_factorial(j / 2 + 1);
    return std::exp(log_bound);
}

double line_majorant(int j, double a, double Z) {
    if (j < 0 || !(a >= 1.0) || !(Z > 0.0)) {
        throw InvalidInput("line_majorant needs j >= 0, alpha >= 1, Z > 0");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= 2 * j; ++n) {
        best = std::max(best, detail::log_line_coefficient(j, n).log_abs);
    }
    return std::exp(best + (2 * j + 1) * std::log(Z) + 2.0 * j * std::log(a));
}

int select_truncation(double epsilon, double a, double Z, int j_cap) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidInput("epsilon must be finite and > 0");
    }
    if (j_cap < 0) {
        throw InvalidInput("j_cap must be >= 0");
    }
    for (int j = 0; j <= j_cap; ++j) {
        if (bound_term(j, a, Z) < epsilon) {
            return j;
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    throw TruncationCapExceeded("bound stays above epsilon up to j_cap = " + std::to_string(j_cap),
                                j_cap, nan, nan);
}

} // namespace bsseries
