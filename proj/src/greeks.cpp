#include "bsseries/greeks.hpp"

#include "bsseries/compensated_sum.hpp"
#include "bsseries/errors.hpp"

#include <cmath>
#include <string>

namespace bsseries {

namespace {

constexpr double kGreeksEpsilonScale = 0.1;
constexpr double kCancellationLimit = 1e12;

// Differentiating C = (S - F)/2 + F/2 sum R_{j,n} Z^{2j+1} w^n, w = 1 - k/Z^2,
// produces w^{n-1} factors. Every one of them is paired with an explicit n
// (or with (Z^2 - k) = Z^2 w, folded back into w^n), so no negative power of
// w is ever formed.
GreeksResult evaluate(const DerivedQuantities& d, double spot, double rate, double tau,
                      const TruncationConfig& cfg) {
    const double Z = d.normalized_vol;
    if (!(Z > 0.0)) {
        throw DegenerateVolatility("Greeks series need a positive normalized volatility");
    }
    if (!(tau > 0.0)) {
        throw DegenerateVolatility("Greeks series need tau > 0");
    }
    if (std::holds_alternative<FixedRect>(cfg)) {
        throw InvalidInput("rectangular truncation passed to the Greeks series");
    }
    const double k = d.log_moneyness;
    const double F = d.forward_strike;
    const double w = 1.0 - k / (Z * Z);
    const double a = std::max(1.0, std::abs(w));
    const int j_used = detail::resolve_diagonal_lines(cfg, a, Z, kGreeksEpsilonScale);
    const double r_tau = rate * tau;

    CompensatedSum delta_sum;
    CompensatedSum rho_sum;
    CompensatedSum vega_sum;
    CompensatedSum theta_sum;

    for (int j = 0; j <= j_used; ++j) {
        const bool direct = j <= detail::kDirectLineLimit;
        for (int n = 0; n <= 2 * j; ++n) {
            const double coeff = direct ? detail::line_coefficient(j, n) : 0.0;
            const auto log_coeff = detail::log_line_coefficient(j, n);
            const double zw = detail::power_term(j, coeff, log_coeff, Z, 2 * j + 1, w, n);
            const double zw_lower = n > 0
                ? n * detail::power_term(j, coeff, log_coeff, Z, 2 * j - 1, w, n - 1)
                : 0.0;

            rho_sum.add(zw + zw_lower);
            vega_sum.add((2 * j + 1) * detail::power_term(j, coeff, log_coeff, Z, 2 * j, w, n) +
                         (n > 0 ? 2.0 * k * n * detail::power_term(j, coeff, log_coeff, Z, 2 * j - 2, w, n - 1)
                                : 0.0));
            theta_sum.add((1.0 + 2.0 * j - 2.0 * r_tau) * zw + 2.0 * (k - r_tau) * zw_lower);
        }
        if (j >= 1) {
            // dC/dS line j: (-1)^{n+1} / (n! Gamma(1/2 + j - n)) = -R_{j-1,n}
            for (int n = 0; n <= 2 * j - 1; ++n) {
                const double coeff = direct ? -detail::line_coefficient(j - 1, n) : 0.0;
                auto log_coeff = detail::log_line_coefficient(j - 1, n);
                log_coeff.sign = -log_coeff.sign;
                delta_sum.add(detail::power_term(j, coeff, log_coeff, Z, 2 * j - 1, w, n));
            }
        }
    }

    GreeksResult g;
    g.delta = 0.5 - 0.5 * (F / spot) * delta_sum.value();
    g.rho = 0.5 * tau * F * (1.0 - rho_sum.value());
    g.vega = 0.5 * F * std::sqrt(0.5 * tau) * vega_sum.value();
    g.theta_tau = 0.5 * rate * F + F / (4.0 * tau) * theta_sum.value();
    g.j_used = j_used;

    const auto lossy = [](const CompensatedSum& s) {
        return s.mass() > kCancellationLimit * std::abs(s.value());
    };
    g.converged = !(lossy(delta_sum) || lossy(rho_sum) || lossy(vega_sum) || lossy(theta_sum));
    return g;
}

} // namespace

double delta_series(const DerivedQuantities& d, double spot, const TruncationConfig& cfg) {
    // delta does not depend on tau or r beyond d; any positive tau passes the guard
    return evaluate(d, spot, 0.0, 1.0, cfg).delta;
}

double rho_series(const DerivedQuantities& d, double spot, double tau, const TruncationConfig& cfg) {
    if (tau == 0.0) {
        return 0.0;
    }
    return evaluate(d, spot, 0.0, tau, cfg).rho;
}

double vega_series(const DerivedQuantities& d, double spot, double tau, const TruncationConfig& cfg) {
    return evaluate(d, spot, 0.0, tau, cfg).vega;
}

double theta_series(const DerivedQuantities& d, double spot, double rate, double tau,
                    const TruncationConfig& cfg) {
    return evaluate(d, spot, rate, tau, cfg).theta_tau;
}

GreeksResult greeks_bundle(const MarketParams& params, const TruncationConfig& cfg) {
    const DerivedQuantities d = derive(params);
    return evaluate(d, params.spot, params.rate, params.tau, cfg);
}

} // namespace bsseries
