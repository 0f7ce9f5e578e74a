#pragma once

#include "gaflux/contour.hpp"
#include "gaflux/grid.hpp"

namespace gaflux::grid {

// d/dx_axis of one component plane: central differences inside, one-sided
// second-order at clamped edges, wraparound on periodic axes. All stencils
// are O(h^2) so convergence-order checks are meaningful.
std::vector<double> partial(const Grid& g, const std::vector<double>& u, int axis);
std::vector<double> second_partial(const Grid& g, const std::vector<double>& u, int axis);

// Dirac derivative: sum_a e^a (d_a f), with the reciprocal basis
// e^a = metric(a) e_a, and its grade-lowering/raising parts.
GridField dirac_op(const GridField& f);
GridField interior_derivative(const GridField& f);
GridField exterior_derivative(const GridField& f);

// Componentwise 3-point Laplacian per axis.
GridField laplacian(const GridField& f);

struct ResidualReport {
  std::vector<double> pointwise;
  FieldSummary summary;  // 2-cell clamped margin excluded
};

// |del f| per node; zero iff f is monogenic.
ResidualReport monogenic_residual(const GridField& f);

// |del f + A f| per node for a grade-1 gauge potential A.
ResidualReport gauge_residual(const GridField& f, const GridField& a);

// Discrete divergence sum_a d_a A^a, the Lorentz-gauge diagnostic.
std::vector<double> lorentz_gauge_divergence(const GridField& a);

// ---------------------------------------------------------------------
// Cauchy reconstruction in the plane: evaluates
//   f(y) = 1/(I S_2) \oint (x-y)/|x-y|^2 f(x)
// by the trapezoid rule over uniform contour samples (S_2 = 2pi). In the
// Cl(2)-even representation this is the classical 1/(2 pi I) \oint
// f(z)/(z-y) dz. Requires f monogenic inside and y strictly interior
// (more than two sample spacings from the contour).
// ---------------------------------------------------------------------

std::complex<double> cauchy_reconstruct(const topo::Contour& c,
                                        const std::vector<std::complex<double>>& boundary_values,
                                        std::complex<double> y);

// The same value as a Cl(2)-even multivector.
ga::Multivector cauchy_reconstruct_mv(const topo::Contour& c,
                                      const std::vector<std::complex<double>>& boundary_values,
                                      std::complex<double> y);

// log2(coarse/fine): the measured order of a residual pair under h -> h/2.
double convergence_order(double coarse, double fine);

}  // namespace gaflux::grid
