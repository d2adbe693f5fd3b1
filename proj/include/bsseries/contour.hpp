#pragma once

#include "bsseries/market.hpp"

#include <complex>

namespace bsseries {

/// Integration contour for the double Mellin-Barnes representation of the call.
///
/// The anchor (c1, c2) must lie in the convergence polyhedron
/// {2 Re t1 + Re t2 > 2, 0 < Re t2 < 1}. The quadrature runs over
/// (s1, s2) in [-half_width, half_width]^2 with
///
///   u1 = -2 + 2 t1 + t2 = (2 c1 + c2 - 2) + i s1
///   t2 = c2 + i s2 - bend * s2^2
///
/// The straight contour (bend = 0) is not absolutely convergent: along
/// Im t2 = -2 Im t1 the integrand grows like exp(pi |Im t1| / 2). Bending the
/// t2 line into the half-plane Re t2 < c2 leaves the enclosed residues
/// unchanged and gives Gaussian decay.
struct ContourSpec {
    double c1 = 1.25;
    double c2 = 0.5;
    double half_width = 40.0;
    double step = 0.05;
    double bend = 0.1;
};

/// Throws InvalidInput when the anchor is outside the polyhedron or the grid
/// is malformed (half_width > 0, 0 < step <= half_width / 50, bend >= 0).
void validate(const ContourSpec& spec);

/// The integrand of the 2-form, with (-1)^{-t2} taken as exp(-i pi t2):
///   (-1)^{-t2} 2^{1/2 - t1} Gamma(t2) Gamma(1 - t2) Gamma(-2 + 2 t1 + t2) / Gamma(t1 + 1/2)
///     * (z^2/2 - k)^{2 - 2 t1 - t2} z^{2 t1 - 1}
/// Throws BranchDomain if z^2/2 - k <= 0 and PoleProximity within 1e-8 of a
/// Gamma pole.
std::complex<double> integrand(std::complex<double> t1, std::complex<double> t2,
                               const DerivedQuantities& d);

struct ContourResult {
    /// F * Re(integral) at spec.step.
    double price = 0.0;
    /// |Im| / |Re| of the assembled integral.
    double imag_residual = 0.0;
    /// Same quadrature at spec.step / 2.
    double halved_step_price = 0.0;
    /// |price - halved_step_price| / |halved_step_price|.
    double step_change = 0.0;
};

/// Trapezoid quadrature of the 2-form over the bent contour, normalized by
/// (2 i pi)^-2 and scaled by F. Throws BranchDomain, DegenerateVolatility
/// (z = 0), and QuadratureUnresolved when halving the step moves the price by
/// more than 1e-5 relative.
ContourResult price_via_contour(const DerivedQuantities& d, const ContourSpec& spec = {});

} // namespace bsseries
