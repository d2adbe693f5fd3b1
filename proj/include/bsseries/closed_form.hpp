#pragma once

#include "bsseries/market.hpp"

namespace bsseries {

/// C = S N(k/z + z/2) - F N(k/z - z/2); max(S - F, 0) when z = 0.
double call_closed_form(const MarketParams& params);

/// Put through parity; max(F - S, 0) when z = 0.
double put_closed_form(const MarketParams& params);

enum class AtmApproximation {
    ExactLeading,  // S sigma sqrt(tau) / sqrt(2 pi)
    Brenner04,     // 0.4 S sigma sqrt(tau)
};

/// Leading at-the-money-forward term. Ignores k.
double atm_forward_approx(const MarketParams& params, AtmApproximation mode);

} // namespace bsseries
