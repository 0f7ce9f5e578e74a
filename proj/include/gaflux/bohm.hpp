#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "gaflux/grid.hpp"

namespace gaflux::bohm {

// Nodes with amplitude below this carry an undefined phase; they are
// flagged rather than raised, so whole-field diagnostics survive
// wavefunction nodes.
inline constexpr double kRhoTolerance = 1e-12;

// (rho, S) split of a complex field. S is unwrapped from the maximum-rho
// reference node along axis-ordered paths and is defined modulo
// 2*pi*hbar; the flags mark nodes where rho is below tolerance.
struct PolarField {
  grid::Grid grid;
  std::vector<double> rho;
  std::vector<double> action;          // S, action units
  std::vector<std::uint8_t> defined;   // 0 where rho < kRhoTolerance
  double hbar = 1.0;
  std::optional<double> mass;
  std::optional<double> energy;        // E0 for the modified variant
};

PolarField polar_decompose(const grid::Grid& g, const std::vector<std::complex<double>>& psi,
                           double hbar);
PolarField polar_decompose(const grid::GridField& phi, double hbar);

// rho * exp(i S / hbar)
std::vector<std::complex<double>> recompose(const PolarField& pf);

struct ScalarDiagnostic {
  std::vector<double> values;
  std::vector<std::uint8_t> defined;
};

struct VectorDiagnostic {
  std::array<std::vector<double>, 3> component;  // per grid axis
  std::vector<std::uint8_t> defined;
};

// Q = -(hbar^2 / 2m) lap(rho)/rho via the 3-point stencil; requires mass.
ScalarDiagnostic quantum_potential(const PolarField& pf);

// grad(rho)/rho and grad(S).
VectorDiagnostic osmotic_velocity(const PolarField& pf);
VectorDiagnostic bohm_momentum(const PolarField& pf);

// Pointwise grad(rho)/rho + (grad S) I / hbar evaluated in Cl(2) on a 2D
// grid; a grade-1 field that vanishes iff the recomposed field is
// monogenic. Its magnitude matches monogenic_residual(phi)/rho.
struct Cl2PolarResidual {
  grid::GridField field;               // grade-1 planes e1, e2
  std::vector<double> magnitude;
  std::vector<std::uint8_t> defined;
};

Cl2PolarResidual cl2_polar_residual(const PolarField& pf);

// ---------------------------------------------------------------------
// Relativistic plane-wave checks
// ---------------------------------------------------------------------

struct WaveParams {
  double e0 = 1.0;                    // energy
  std::array<double, 3> p{0, 0, 0};   // momentum
  double m_term = 0.0;                // M = m*hbar
  double hbar = 1.0;
};

// E0 - (|p|^2 + M^2)/E0; zero iff the wave ansatz solves the modified
// equation, i.e. E0^2 - |p|^2 = M^2.
double plane_wave_residual(const WaveParams& w);

struct DeBroglie {
  double omega = 0.0;
  std::array<double, 3> k{0, 0, 0};
};

DeBroglie de_broglie(const WaveParams& w);

}  // namespace gaflux::bohm
