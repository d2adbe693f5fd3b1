#include "bsseries/closed_form.hpp"

#include "bsseries/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bsseries {

double call_closed_form(const MarketParams& params) {
    const DerivedQuantities d = derive(params);
    const double S = params.spot;
    const double F = d.forward_strike;
    const double z = d.total_vol;
    if (z == 0.0) {
        return std::max(S - F, 0.0);
    }
    const double x = d.log_moneyness / z;
    return S * norm_cdf(x + 0.5 * z) - F * norm_cdf(x - 0.5 * z);
}

double put_closed_form(const MarketParams& params) {
    const DerivedQuantities d = derive(params);
    if (d.total_vol == 0.0) {
        return std::max(d.forward_strike - params.spot, 0.0);
    }
    return put_from_call(call_closed_form(params), d, params.spot);
}

double atm_forward_approx(const MarketParams& params, AtmApproximation mode) {
    validate(params);
    const double z = params.vol * std::sqrt(params.tau);
    switch (mode) {
    case AtmApproximation::ExactLeading:
        return params.spot * z * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
    case AtmApproximation::Brenner04:
        return 0.4 * params.spot * z;
    }
    return 0.0;
}

} // namespace bsseries
