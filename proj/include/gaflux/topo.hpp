#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "gaflux/contour.hpp"
#include "gaflux/grid.hpp"

namespace gaflux::topo {

using ComplexSampler = std::function<std::complex<double>(std::complex<double>)>;

std::vector<std::complex<double>> sample_on_contour(const ComplexSampler& f, const Contour& c);

// Bilinear-interpolating sampler over a Cl(2)-even grid field.
ComplexSampler sampler_from(const grid::GridField& f);

struct WindingOptions {
  double zero_tolerance = 1e-9;    // |phi| below this on the contour is an error
  double integer_tolerance = 0.01; // pre-rounding distance from an integer
};

// Principal-branch phase increments summed around the loop. Throws on a
// zero-on-contour sample, an antipodal (jump >= pi) pair, or a sum that
// fails to land on an integer.
int winding_number(const std::vector<std::complex<double>>& values,
                   const WindingOptions& opts = {});
int winding_number(const ComplexSampler& f, const Contour& c, const WindingOptions& opts = {});

// Cumulative unwrapped phases along the contour; result has size()+1
// entries, the last exceeding the first by 2*pi*winding.
std::vector<double> unwrap_phases(const std::vector<std::complex<double>>& values,
                                  const WindingOptions& opts = {});

struct ZeroSearchOptions {
  int scan_resolution = 96;       // interior |phi| scan per axis
  double relative_threshold = 0.05;  // candidate minima below this * max|phi| on C
  int probe_samples = 256;        // samples on the small probe circles
  WindingOptions winding;
};

struct ZeroCountReport {
  int argument_principle = 0;  // boundary phase winding
  int oracle = 0;              // summed probe windings around located minima
  bool oracle_agrees = false;
  std::vector<std::complex<double>> zeros;  // located representatives
};

// Argument-principle zero count with the independent interior search.
// Disagreement is reported in the result, never silently resolved.
ZeroCountReport count_zeros_report(const ComplexSampler& f, const Contour& c,
                                   const ZeroSearchOptions& opts = {});
int count_zeros(const ComplexSampler& f, const Contour& c, const ZeroSearchOptions& opts = {});

// Loop integral of the action gradient. Route (a): finite differences of
// the unwrapped contour phase, summed by the closed-loop trapezoid (S =
// hbar * theta). Route (b): trapezoid line integral of a sampled grade-1
// field along the contour.
double born_sommerfeld_integral(const std::vector<std::complex<double>>& values, double hbar,
                                const WindingOptions& opts = {});
double born_sommerfeld_line_integral(const grid::GridField& grad_s, const Contour& c);

struct DbsOptions {
  ZeroSearchOptions zeros;
  int residual_grid = 64;            // bbox sampling for the monogenicity check
  double monogenic_threshold = 0.05; // rms residual per unit field scale
  double mass = 0.0;                 // constant mass term for the loop diagnostic
};

// The N(rho) = omega(phi) identity assembled in one report, with the
// Born-Sommerfeld loop integral and its n*h check.
struct WindingReport {
  int winding = 0;
  int zero_count = 0;
  double loop_integral = 0.0;
  double hbar = 1.0;
  bool consistent = false;      // N == omega, oracle concurs, integral = omega*2*pi*hbar
  bool oracle_agrees = false;
  bool monogenic_ok = false;
  double monogenic_rms = 0.0;
  double field_scale = 0.0;         // mean |phi| on the contour
  double mass_loop_integral = 0.0;  // |m * closed-loop dz| diagnostic, identically ~0
};

WindingReport verify_dbs(const ComplexSampler& f, const Contour& c, double hbar,
                         const DbsOptions& opts = {});

}  // namespace gaflux::topo
