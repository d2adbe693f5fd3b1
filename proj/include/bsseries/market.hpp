#pragma once

namespace bsseries {

/// Contract and market inputs for a European option on a non-dividend asset.
struct MarketParams {
    double spot = 0.0;    // S > 0
    double strike = 0.0;  // K > 0
    double rate = 0.0;    // r, continuously compounded, any sign
    double vol = 0.0;     // sigma >= 0, per sqrt(year)
    double tau = 0.0;     // time to expiry >= 0, years
};

/// Reduced variables every pricer works in.
///
/// total_vol       z = sigma * sqrt(tau)
/// normalized_vol  Z = z / sqrt(2)
/// forward_strike  F = K * exp(-r tau)
/// log_moneyness   k = ln(S / F) = ln(S / K) + r tau
struct DerivedQuantities {
    double total_vol = 0.0;
    double normalized_vol = 0.0;
    double forward_strike = 0.0;
    double log_moneyness = 0.0;
};

/// Throws InvalidInput when a field is non-finite or out of range.
void validate(const MarketParams& params);

DerivedQuantities derive(const MarketParams& params);

/// Put price from a call price through C - P = S - F.
double put_from_call(double call_price, const DerivedQuantities& d, double spot);

} // namespace bsseries
