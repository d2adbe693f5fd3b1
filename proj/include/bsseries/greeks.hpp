#pragma once

#include "bsseries/market.hpp"
#include "bsseries/series.hpp"

namespace bsseries {

/// Sensitivities of the call from the term-wise differentiated series.
///
/// theta_tau is dC/dtau, the derivative with respect to time to expiry. The
/// calendar-time theta dC/dt is its negative.
struct GreeksResult {
    double delta = 0.0;      // dC/dS
    double rho = 0.0;        // dC/dr
    double vega = 0.0;       // dC/dsigma
    double theta_tau = 0.0;  // dC/dtau
    int j_used = 0;
    bool converged = true;
};

// The individual operations below throw DegenerateVolatility when Z = 0.
// Adaptive truncation tightens epsilon by a factor 10 before selecting j.

double delta_series(const DerivedQuantities& d, double spot, const TruncationConfig& cfg);
double rho_series(const DerivedQuantities& d, double spot, double tau, const TruncationConfig& cfg);
double vega_series(const DerivedQuantities& d, double spot, double tau, const TruncationConfig& cfg);
/// Also throws DegenerateVolatility when tau = 0.
double theta_series(const DerivedQuantities& d, double spot, double rate, double tau,
                    const TruncationConfig& cfg);

GreeksResult greeks_bundle(const MarketParams& params, const TruncationConfig& cfg);

} // namespace bsseries
