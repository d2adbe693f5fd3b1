#include "bsseries/contour.hpp"

#include "bsseries/compensated_sum.hpp"
#include "bsseries/errors.hpp"
#include "bsseries/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace bsseries {

namespace {

using cplx = std::complex<double>;
using namespace std::complex_literals;

constexpr double kPoleGuard = 1e-8;
constexpr double kStepTolerance = 1e-5;

double branch_base(const DerivedQuantities& d) {
    const double z = d.total_vol;
    if (!(z > 0.0)) {
        throw DegenerateVolatility("contour integrand needs z > 0");
    }
    const double base = 0.5 * z * z - d.log_moneyness;
    if (!(base > 0.0)) {
        throw BranchDomain("z^2/2 - k = " + std::to_string(base) + " is not positive");
    }
    return base;
}

// distance from x to the nearest nonpositive integer
double distance_to_nonpositive_integer(cplx x) {
    const double nearest = std::min(0.0, std::round(x.real()));
    return std::abs(x - nearest);
}

struct RowSums {
    cplx fine{};
    cplx coarse{};
};

} // namespace

void validate(const ContourSpec& s) {
    if (!(2.0 * s.c1 + s.c2 > 2.0) || !(s.c2 > 0.0 && s.c2 < 1.0)) {
        throw InvalidInput("contour anchor (" + std::to_string(s.c1) + ", " + std::to_string(s.c2) +
                           ") is outside 2 c1 + c2 > 2, 0 < c2 < 1");
    }
    if (!(s.half_width > 0.0) || !std::isfinite(s.half_width)) {
        throw InvalidInput("contour half_width must be finite and > 0");
    }
    if (!(s.step > 0.0) || s.step > s.half_width / 50.0) {
        throw InvalidInput("contour step must satisfy 0 < step <= half_width / 50");
    }
    if (!(s.bend >= 0.0) || !std::isfinite(s.bend)) {
        throw InvalidInput("contour bend must be finite and >= 0");
    }
}

cplx integrand(cplx t1, cplx t2, const DerivedQuantities& d) {
    const double base = branch_base(d);
    const cplx u1 = -2.0 + 2.0 * t1 + t2;
    const double t2_gap = std::abs(t2 - std::round(t2.real()));
    if (t2_gap < kPoleGuard || distance_to_nonpositive_integer(u1) < kPoleGuard) {
        throw PoleProximity("contour integrand evaluated within 1e-8 of a Gamma pole");
    }
    const double pi = std::numbers::pi;
    const cplx log_value = -1i * pi * t2 + (0.5 - t1) * std::numbers::ln2 + log_gamma(t2) +
                           log_gamma(1.0 - t2) + log_gamma(u1) - log_gamma(t1 + 0.5) +
                           (2.0 - 2.0 * t1 - t2) * std::log(base) +
                           (2.0 * t1 - 1.0) * std::log(d.total_vol);
    return std::exp(log_value);
}

ContourResult price_via_contour(const DerivedQuantities& d, const ContourSpec& spec) {
    validate(spec);
    const double base = branch_base(d);
    const double pi = std::numbers::pi;
    const double log_base = std::log(base);
    const double log_z = std::log(d.total_vol);
    const double ln2 = std::numbers::ln2;
    const double cu = 2.0 * spec.c1 + spec.c2 - 2.0;

    // fine grid: s = i * step / 2, |i| <= 2 * half_count
    const int half_count = std::max(1, static_cast<int>(std::lround(spec.half_width / spec.step)));
    const int fine_half = 2 * half_count;
    const int points = 2 * fine_half + 1;
    const double fine_step = 0.5 * spec.step;

    // Split the log of the 2-form into a u1-only part, a t2-only part and
    // the coupled 1 / Gamma(t1 + 1/2), t1 = (2 + u1 - t2) / 2.
    std::vector<cplx> u1(points), column(points), t2(points), row(points), jacobian(points);
    const cplx normalization = 0.5 / ((2i * pi) * (2i * pi));
    for (int i = 0; i < points; ++i) {
        const double s = (i - fine_half) * fine_step;
        u1[i] = cplx(cu, s);
        column[i] = log_gamma(u1[i]) - 0.5 * (u1[i] + 1.0) * ln2 - u1[i] * log_base + (1.0 + u1[i]) * log_z;
        t2[i] = cplx(spec.c2 - spec.bend * s * s, s);
        row[i] = -1i * pi * t2[i] + std::log(pi) - log_sin_pi(t2[i]) + 0.5 * t2[i] * ln2 - t2[i] * log_z;
        // du1 ^ dt2 = i * t2'(s2) ds1 ds2
        jacobian[i] = normalization * 1i * cplx(-2.0 * spec.bend * s, 1.0);
    }

    const auto edge_weight = [&](int i) {
        return (i == 0 || i == points - 1) ? 0.5 : 1.0;
    };
    const auto coarse_weight = [&](int i) {
        if ((i - fine_half) % 2 != 0) {
            return 0.0;
        }
        return (i == 0 || i == points - 1) ? 0.5 : 1.0;
    };

    std::vector<RowSums> rows(points);
    const auto work = [&](int first, int stride) {
        for (int r = first; r < points; r += stride) {
            cplx fine{};
            cplx coarse{};
            for (int c = 0; c < points; ++c) {
                const cplx t1_half = 0.5 * (3.0 + u1[c] - t2[r]);
                const cplx v = std::exp(column[c] + row[r] - log_gamma(t1_half));
                fine += edge_weight(c) * v;
                coarse += coarse_weight(c) * v;
            }
            rows[r] = {fine * jacobian[r], coarse * jacobian[r]};
        }
    };
    const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(work, t, threads);
        }
    }

    // deterministic reduction in row order
    CompensatedSum fine_re, fine_im, coarse_re, coarse_im;
    for (int r = 0; r < points; ++r) {
        const double wf = edge_weight(r);
        const double wc = coarse_weight(r);
        fine_re.add(wf * rows[r].fine.real());
        fine_im.add(wf * rows[r].fine.imag());
        coarse_re.add(wc * rows[r].coarse.real());
        coarse_im.add(wc * rows[r].coarse.imag());
    }
    const double F = d.forward_strike;
    const cplx coarse_integral = cplx(coarse_re.value(), coarse_im.value()) * (spec.step * spec.step);
    const cplx fine_integral = cplx(fine_re.value(), fine_im.value()) * (fine_step * fine_step);

    ContourResult result;
    result.price = F * coarse_integral.real();
    result.imag_residual = std::abs(coarse_integral.imag()) / std::abs(coarse_integral.real());
    result.halved_step_price = F * fine_integral.real();
    result.step_change = std::abs(result.price - result.halved_step_price) / std::abs(result.halved_step_price);
    if (!(result.step_change <= kStepTolerance)) {
        throw QuadratureUnresolved("halving the contour step changed the price by " +
                                       std::to_string(result.step_change) + " relative",
                                   result.price, result.halved_step_price);
    }
    return result;
}

} // namespace bsseries
