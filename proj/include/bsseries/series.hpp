#pragma once

#include "bsseries/market.hpp"

#include <variant>

namespace bsseries {

/// Truncate the rectangular (n, m) series at n <= n_max, 1 <= m <= m_max.
struct FixedRect {
    int n_max = 0;
    int m_max = 1;
};

/// Keep diagonal lines j = 0..j_max of the Z-ordered series.
struct FixedDiagonal {
    int j_max = 0;
};

/// Pick j as the first line whose per-term bound drops below epsilon.
/// epsilon is measured on the bracketed series, i.e. before the F/2 factor.
struct Adaptive {
    double epsilon = 1e-10;
    int j_cap = 64;
};

using TruncationConfig = std::variant<FixedRect, FixedDiagonal, Adaptive>;

struct SeriesResult {
    double price = 0.0;
    int j_used = 0;
    int terms_evaluated = 0;
    /// F/2 times a 64-line majorant of the neglected lines.
    double tail_bound = 0.0;
    bool converged = true;
    /// Set when the summed |term| mass exceeds 1e12 times the result.
    bool precision_loss = false;
};

/// Position in the triangular summation domain: j >= 0, 0 <= n <= 2j.
struct TermIndex {
    int j = 0;
    int n = 0;
};

/// max(1, |1 - k/Z^2|). Throws DegenerateVolatility when Z = 0.
double alpha(const DerivedQuantities& d);

/// F/2 Z^{2j+1} (-1)^n / (n! Gamma(3/2 + j - n)) (1 - k/Z^2)^n.
double term(TermIndex index, const DerivedQuantities& d);

/// Rectangular residue series
///   F/2 sum_{n<=n_max, 1<=m<=m_max} (-1)^n / (n! Gamma(1 + (m-n)/2)) (Z^2 - k)^n Z^{m-n}.
double call_series_rect(const DerivedQuantities& d, int n_max, int m_max);

/// phi_J(x) = sum_{n=0}^{J-1} (-1)^n / (n! Gamma(1 + J/2 - n)) (1 - x)^n.
double phi(int J, double x);

/// (S - F)/2 plus the diagonal lines j = 0..j_used. FixedRect is rejected.
/// Z = 0 returns the intrinsic value.
SeriesResult call_series_diagonal(const DerivedQuantities& d, double spot, const TruncationConfig& cfg);

/// Same lines with leading term (F - S)/2.
SeriesResult put_series(const DerivedQuantities& d, double spot, const TruncationConfig& cfg);

/// Per-term bound (Z/sqrt(pi)) (alpha Z)^{2j} / (floor(j/2) + 1)!, in log space.
double bound_term(int j, double alpha, double Z);

/// Z^{2j+1} alpha^{2j} max_n |(-1)^n / (n! Gamma(3/2 + j - n))|. A true bound on
/// every term of line j (bound_term is not, for j <= 4).
double line_majorant(int j, double alpha, double Z);

/// Smallest j with bound_term(j) < epsilon. Throws TruncationCapExceeded when
/// it lies beyond j_cap.
int select_truncation(double epsilon, double alpha, double Z, int j_cap);

namespace detail {

/// Signed R_{j,n} = (-1)^n / (n! Gamma(3/2 + j - n)) in log form.
struct LogCoefficient {
    double log_abs = 0.0;
    int sign = 1;
};
LogCoefficient log_line_coefficient(int j, int n);

/// R_{j,n} as a plain double.
double line_coefficient(int j, int n);

/// coeff * Z^z_exp * w^w_exp with w^0 == 1 for any w, switching to log space
/// above kDirectLineLimit.
double power_term(int j, double coeff, const LogCoefficient& log_coeff,
                  double Z, int z_exp, double w, int w_exp);

inline constexpr int kDirectLineLimit = 30;

/// Resolve a diagonal truncation to a line count. Adaptive uses epsilon_scale * epsilon.
int resolve_diagonal_lines(const TruncationConfig& cfg, double alpha, double Z, double epsilon_scale);

} // namespace detail

} // namespace bsseries
