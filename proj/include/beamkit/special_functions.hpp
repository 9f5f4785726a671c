#pragma once

#include <vector>

#include "beamkit/core.hpp"

namespace beamkit {

/// Spherical Bessel function of the first kind j_n(x), x > 0.
///
/// Upward recurrence from j_0, j_1 when x > n; otherwise Miller's downward
/// recurrence normalized against whichever of j_0, j_1 is larger in magnitude.
double sph_bessel_j(int n, double x);

/// Spherical Bessel function of the second kind y_n(x) by upward recurrence.
double sph_bessel_y(int n, double x);

/// h_n^(2)(x) = j_n(x) - i y_n(x), outgoing under the exp(+j omega t) convention.
Complex sph_hankel2(int n, double x);

double sph_bessel_j_derivative(int n, double x);
double sph_bessel_y_derivative(int n, double x);
Complex sph_hankel2_derivative(int n, double x);

/// j_0(x) .. j_nmax(x).
std::vector<double> sph_bessel_j_all(int nmax, double x);

/// y_0(x) .. y_nmax(x). Entries past overflow are -infinity.
std::vector<double> sph_bessel_y_all(int nmax, double x);

/// Legendre polynomial P_n(x), |x| <= 1, by the three-term recurrence.
double legendre_p(int n, double x);

/// P_0(x) .. P_nmax(x).
std::vector<double> legendre_p_all(int nmax, double x);

}  // namespace beamkit
