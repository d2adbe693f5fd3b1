#include "bsseries/market.hpp"

#include "bsseries/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bsseries {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::DegenerateVolatility: return "DegenerateVolatility";
    case ErrorKind::TruncationCapExceeded: return "TruncationCapExceeded";
    case ErrorKind::BranchDomain: return "BranchDomain";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::QuadratureUnresolved: return "QuadratureUnresolved";
    }
    return "Unknown";
}

namespace {

void require(bool ok, const char* field, double value, const char* rule) {
    if (!ok) {
        throw InvalidInput(std::string(field) + " = " + std::to_string(value) + " violates " + rule);
    }
}

} // namespace

void validate(const MarketParams& p) {
    require(std::isfinite(p.spot) && p.spot > 0.0, "spot", p.spot, "finite and > 0");
    require(std::isfinite(p.strike) && p.strike > 0.0, "strike", p.strike, "finite and > 0");
    require(std::isfinite(p.rate), "rate", p.rate, "finite");
    require(std::isfinite(p.vol) && p.vol >= 0.0, "vol", p.vol, "finite and >= 0");
    require(std::isfinite(p.tau) && p.tau >= 0.0, "tau", p.tau, "finite and >= 0");
}

DerivedQuantities derive(const MarketParams& p) {
    validate(p);
    DerivedQuantities d;
    d.total_vol = p.vol * std::sqrt(p.tau);
    d.normalized_vol = d.total_vol / std::numbers::sqrt2;
    d.forward_strike = p.strike * std::exp(-p.rate * p.tau);
    d.log_moneyness = std::log(p.spot / p.strike) + p.rate * p.tau;
    return d;
}

double put_from_call(double call_price, const DerivedQuantities& d, double spot) {
    if (!std::isfinite(call_price) || !std::isfinite(spot)) {
        throw InvalidInput("put_from_call: non-finite input");
    }
    return call_price - (spot - d.forward_strike);
}

} // namespace bsseries
