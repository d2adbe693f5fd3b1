#include "bsseries/closed_form.hpp"
#include "bsseries/errors.hpp"
#include "bsseries/greeks.hpp"
#include "bsseries/special_functions.hpp"
#include "draws.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

using namespace bsseries;
using testing_support::draw_market;

namespace {

const double kForward = 4000.0 * std::exp(-0.01);
const MarketParams kAtm{kForward, 4000.0, 0.01, 0.2, 1.0};
const MarketParams kItm{4200.0, 4000.0, 0.01, 0.2, 1.0};
const double kSqrtPi = std::sqrt(std::numbers::pi);

struct ClosedGreeks {
    double delta, rho, vega, theta_tau;
};

ClosedGreeks closed_greeks(const MarketParams& p) {
    const DerivedQuantities d = derive(p);
    const double z = d.total_vol;
    const double d1 = d.log_moneyness / z + z / 2;
    const double d2 = d1 - z;
    const double F = d.forward_strike;
    return {norm_cdf(d1), p.tau * F * norm_cdf(d2), p.spot * std::sqrt(p.tau) * norm_pdf(d1),
            p.spot * norm_pdf(d1) * p.vol / (2.0 * std::sqrt(p.tau)) + p.rate * F * norm_cdf(d2)};
}

double rel(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

using Pricer = std::function<double(const MarketParams&)>;

ClosedGreeks finite_differences(const MarketParams& p, const Pricer& price) {
    const auto bump = [&](auto field, double h) {
        MarketParams up = p, down = p;
        up.*field += h;
        down.*field -= h;
        return (price(up) - price(down)) / (2.0 * h);
    };
    return {bump(&MarketParams::spot, p.spot * 1e-6), bump(&MarketParams::rate, 1e-7),
            bump(&MarketParams::vol, 1e-7), bump(&MarketParams::tau, 1e-6)};
}

// Unsimplified summands with the (1 - k/Z^2)^{n-1} factor, for w != 0.
ClosedGreeks literal_series(const MarketParams& p, int j_max) {
    const DerivedQuantities d = derive(p);
    const double Z = d.normalized_vol, k = d.log_moneyness, F = d.forward_strike;
    const double w = 1.0 - k / (Z * Z);
    const double rt = p.rate * p.tau;
    double delta = 0.0, rho = 0.0, vega = 0.0, theta = 0.0;
    for (int j = 0; j <= j_max; ++j) {
        for (int n = 0; n <= 2 * j; ++n) {
            const double R = (n % 2 == 0 ? 1.0 : -1.0) * rgamma_lattice(HalfIntegerArg::half_plus(j - n + 1)) /
                             std::tgamma(n + 1.0);
            const double wn1 = std::pow(w, n - 1);
            rho += std::pow(Z, 2 * j - 1) * (Z * Z - k + n) * R * wn1;
            const double P = (Z * Z - k) * (1 + 2 * j) + 2 * n * k;
            vega += std::pow(Z, 2 * (j - 1)) * R * P * wn1;
            const double Q = ((1 + 2 * j - 2 * rt) * (Z * Z - k) + 2 * n * (k - rt)) / 8.0;
            theta += std::pow(Z, 2 * j - 3) * R * Q * wn1;
        }
        if (j >= 1) {
            for (int n = 0; n <= 2 * j - 1; ++n) {
                const double c = (n % 2 == 0 ? -1.0 : 1.0) * rgamma_lattice(HalfIntegerArg::half_plus(j - n)) /
                                 std::tgamma(n + 1.0);
                delta += std::pow(Z, 2 * j - 1) * c * std::pow(w, n);
            }
        }
    }
    return {0.5 - F / (2.0 * p.spot) * delta, 0.5 * p.tau * F * (1.0 - rho),
            0.5 * F * std::sqrt(0.5 * p.tau) * vega, 0.5 * p.rate * F + p.vol * p.vol * F * theta};
}

} // namespace

TEST_CASE("delta at the money forward") {
    const DerivedQuantities d = derive(kAtm);
    const double Z = d.normalized_vol;
    const double leading = 0.5 + Z / (2.0 * kSqrtPi);
    CHECK(leading == doctest::Approx(0.53989422804).epsilon(1e-10));
    CHECK(delta_series(d, kForward, FixedDiagonal{1}) == doctest::Approx(leading).epsilon(1e-14));
    CHECK(delta_series(d, kForward, Adaptive{1e-10}) == doctest::Approx(0.5398278372770290).epsilon(1e-12));
}

TEST_CASE("delta tends to one as Z -> 0 in the money" * doctest::test_suite("known_red")) {
    // k = 0.0588 from the S = 4200 market, Z = 1e-3
    const MarketParams p{4200.0, 4000.0, 0.01, 1e-3 * std::numbers::sqrt2, 1.0};
    try {
        CHECK(std::abs(delta_series(derive(p), p.spot, Adaptive{}) - 1.0) <= 1e-6);
    } catch (const Error& e) {
        FAIL_CHECK(to_string(e.kind()) << ": " << e.what());
    }
}

TEST_CASE("rho at the money forward") {
    const DerivedQuantities d = derive(kAtm);
    const double Z = d.normalized_vol;
    const double leading = 0.5 * kForward * (1.0 - Z / kSqrtPi);
    CHECK(std::abs(leading - 1822.1) < 0.05);
    const double full = rho_series(d, kForward, 1.0, Adaptive{1e-10});
    CHECK(rel(full, closed_greeks(kAtm).rho) <= 1e-6);
    CHECK(std::abs(full - leading) <= 0.5 * kForward * Z * Z);
    CHECK(rho_series(derive({kForward, 4000.0, 0.01, 0.2, 0.0}), kForward, 0.0, Adaptive{}) == 0.0);
}

TEST_CASE("vega at the money forward") {
    const DerivedQuantities d = derive(kAtm);
    const double leading = kForward * std::sqrt(0.5) / kSqrtPi;
    CHECK(std::abs(leading - 1579.9) < 0.1);
    CHECK(rel(vega_series(d, kForward, 1.0, Adaptive{1e-10}), closed_greeks(kAtm).vega) <= 1e-6);
    CHECK(vega_series(d, kForward, 1.0, FixedDiagonal{0}) ==
          doctest::Approx(0.5 * kForward * std::sqrt(0.5) * 2.0 / kSqrtPi).epsilon(1e-15));
}

TEST_CASE("theta at the money forward") {
    const DerivedQuantities d = derive(kAtm);
    const double Z = d.normalized_vol;
    const double r = 0.01, s = 0.2, tau = 1.0;
    const double leading = r * kForward / 2.0 + s * s * kForward * (1.0 - r * tau) / (4.0 * kSqrtPi * Z);
    const double full = theta_series(d, kForward, r, tau, Adaptive{1e-10});
    CHECK(rel(full, leading) <= Z * Z);

    const auto price = [](const MarketParams& p) { return call_closed_form(p); };
    const double h = 1e-5;
    const double fd = (price({kForward, 4000.0, r, s, tau + h}) - price({kForward, 4000.0, r, s, tau - h})) / (2 * h);
    // spot held fixed while tau moves, so k drifts with r tau exactly as in the series
    CHECK(rel(full, fd) <= 1e-5);
    CHECK_THROWS_AS(theta_series(derive({kForward, 4000.0, r, s, 0.0}), kForward, r, 0.0, Adaptive{}),
                    DegenerateVolatility);
}

TEST_CASE("theta with r = 0 and k = 0 matches the literal sum") {
    const MarketParams p{4000.0, 4000.0, 0.0, 0.3, 2.0};
    const DerivedQuantities d = derive(p);
    const double Z = d.normalized_vol;
    // Q_{j,n} = (1 + 2j) Z^2 / 8 and w = 1
    double sum = 0.0;
    for (int j = 0; j <= 12; ++j) {
        for (int n = 0; n <= 2 * j; ++n) {
            const double R = (n % 2 == 0 ? 1.0 : -1.0) * rgamma_lattice(HalfIntegerArg::half_plus(j - n + 1)) /
                             std::tgamma(n + 1.0);
            sum += std::pow(Z, 2 * j - 3) * R * (1 + 2 * j) * Z * Z / 8.0;
        }
    }
    const double literal = p.vol * p.vol * d.forward_strike * sum;
    CHECK(theta_series(d, p.spot, 0.0, p.tau, FixedDiagonal{12}) == doctest::Approx(literal).epsilon(1e-14));
}

TEST_CASE("restructured summands equal the literal ones") {
    std::mt19937_64 rng(2718);
    for (int i = 0; i < 200; ++i) {
        const MarketParams p = draw_market(rng);
        const DerivedQuantities d = derive(p);
        const double w = 1.0 - d.log_moneyness / (d.normalized_vol * d.normalized_vol);
        if (std::abs(w) < 1e-3) {
            continue;
        }
        const GreeksResult g = greeks_bundle(p, FixedDiagonal{15});
        const ClosedGreeks lit = literal_series(p, 15);
        CAPTURE(p.spot);
        CAPTURE(p.vol);
        REQUIRE(rel(g.delta, lit.delta) <= 1e-11);
        REQUIRE(rel(g.rho, lit.rho) <= 1e-11);
        REQUIRE(rel(g.vega, lit.vega) <= 1e-11);
        REQUIRE(rel(g.theta_tau, lit.theta_tau) <= 1e-11);
    }
}

TEST_CASE("k = Z^2 needs no negative power of w") {
    MarketParams p{1.0, 1.0, 0.0, 0.25, 1.0};
    const double Z2 = p.vol * p.vol / 2.0;
    p.spot = std::exp(Z2);
    const DerivedQuantities d = derive(p);
    CHECK(std::abs(1.0 - d.log_moneyness / (d.normalized_vol * d.normalized_vol)) < 1e-14);
    const GreeksResult g = greeks_bundle(p, Adaptive{1e-10});
    const ClosedGreeks c = closed_greeks(p);
    CHECK(std::isfinite(g.rho));
    CHECK(rel(g.delta, c.delta) <= 1e-8);
    CHECK(rel(g.rho, c.rho) <= 1e-8);
    CHECK(rel(g.vega, c.vega) <= 1e-8);
    CHECK(rel(g.theta_tau, c.theta_tau) <= 1e-8);
}

TEST_CASE("bundle equals the individual operations") {
    const DerivedQuantities d = derive(kAtm);
    const GreeksResult g = greeks_bundle(kAtm, Adaptive{1e-10});
    CHECK(g.delta == delta_series(d, kForward, Adaptive{1e-10}));
    CHECK(g.rho == rho_series(d, kForward, 1.0, Adaptive{1e-10}));
    CHECK(g.vega == vega_series(d, kForward, 1.0, Adaptive{1e-10}));
    CHECK(g.theta_tau == theta_series(d, kForward, 0.01, 1.0, Adaptive{1e-10}));
    CHECK(g.converged);
}

TEST_CASE("ITM delta from the bundle") {
    CHECK(std::abs(greeks_bundle(kItm, Adaptive{}).delta - 0.65319132580079718) <= 1e-6);
}

TEST_CASE("zero volatility is rejected") {
    CHECK_THROWS_AS(greeks_bundle({4200.0, 4000.0, 0.01, 0.0, 1.0}, Adaptive{}), DegenerateVolatility);
    CHECK_THROWS_AS(greeks_bundle({4200.0, 4000.0, 0.01, 0.2, 0.0}, Adaptive{}), DegenerateVolatility);
    const DerivedQuantities flat = derive({4200.0, 4000.0, 0.01, 0.0, 1.0});
    CHECK_THROWS_AS(delta_series(flat, 4200.0, Adaptive{}), DegenerateVolatility);
    CHECK_THROWS_AS(vega_series(flat, 4200.0, 1.0, Adaptive{}), DegenerateVolatility);
    CHECK_THROWS_AS(greeks_bundle(kItm, FixedRect{3, 3}), InvalidInput);
}

TEST_CASE("Greeks against finite differences of the closed form") {
    std::mt19937_64 rng(1618);
    const Pricer closed = [](const MarketParams& p) { return call_closed_form(p); };
    for (int i = 0; i < 200; ++i) {
        const MarketParams p = draw_market(rng, 0.8, 0.02, 0.0);
        const GreeksResult g = greeks_bundle(p, Adaptive{1e-10});
        const ClosedGreeks fd = finite_differences(p, closed);
        CAPTURE(p.spot);
        CAPTURE(p.vol);
        CAPTURE(p.tau);
        REQUIRE(rel(g.delta, fd.delta) <= 1e-5);
        REQUIRE(rel(g.rho, fd.rho) <= 1e-5);
        REQUIRE(rel(g.vega, fd.vega) <= 1e-5);
        REQUIRE(rel(g.theta_tau, fd.theta_tau) <= 1e-5);
    }
}

TEST_CASE("Greeks against finite differences of the series price") {
    std::mt19937_64 rng(1619);
    const TruncationConfig lines = FixedDiagonal{20};
    const Pricer series = [&](const MarketParams& p) {
        return call_series_diagonal(derive(p), p.spot, lines).price;
    };
    for (int i = 0; i < 200; ++i) {
        const MarketParams p = draw_market(rng, 0.8, 0.02, 0.0);
        const GreeksResult g = greeks_bundle(p, lines);
        const ClosedGreeks fd = finite_differences(p, series);
        CAPTURE(p.spot);
        CAPTURE(p.vol);
        CAPTURE(p.tau);
        REQUIRE(rel(g.delta, fd.delta) <= 1e-6);
        REQUIRE(rel(g.rho, fd.rho) <= 1e-6);
        REQUIRE(rel(g.vega, fd.vega) <= 1e-6);
        REQUIRE(rel(g.theta_tau, fd.theta_tau) <= 1e-6);
    }
}

TEST_CASE("ATM delta residual is cubic in Z") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 29; ++i) {
        const double Z = 0.01 * std::pow(30.0, i / 29.0);
        const double vol = Z * std::numbers::sqrt2;
        const MarketParams p{kForward, 4000.0, 0.01, vol, 1.0};
        const double delta = delta_series(derive(p), p.spot, Adaptive{1e-12});
        xs.push_back(std::log(Z));
        ys.push_back(std::log(std::abs(delta - (0.5 + Z / (2.0 * kSqrtPi)))));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    CHECK(sxy / sxx >= 2.9);
}
