#pragma once

#include <string>

#include "gaflux/bohm.hpp"

namespace gaflux::bohm {

enum class Variant { Standard, Modified };

std::string variant_name(Variant v);

// Crank-Nicolson parameters. The standard Hamiltonian is
// H = -(hbar^2/2m) d^2 + U; the modified one replaces the kinetic
// coefficient by hbar^2/E0 and adds the constant potential M^2/E0.
struct EvolveParams {
  double dt = 1e-3;
  int steps = 100;
  int stride = 1;  // keep every stride-th frame (frame 0 always kept)
  Variant variant = Variant::Standard;
  double hbar = 1.0;
  double mass = 1.0;    // standard variant
  double e0 = 1.0;      // modified variant
  double m_term = 0.0;  // M = m*hbar, modified variant
};

struct EvolutionSeries {
  grid::Grid grid;  // 1D; clamped axes take zero just outside the edges
  std::vector<double> potential;
  std::string potential_name = "custom";
  EvolveParams params;
  std::vector<double> times;
  std::vector<std::vector<std::complex<double>>> frames;

  double frame_dt() const { return params.dt * params.stride; }
};

// Unitary for real potentials; throws (with the step index) if the state
// stops being finite.
EvolutionSeries evolve(const grid::Grid& g, const std::vector<std::complex<double>>& initial,
                       const std::vector<double>& potential, const EvolveParams& params,
                       const std::string& potential_name = "custom");

double norm_l2(const grid::Grid& g, const std::vector<std::complex<double>>& psi);

// One implicit Crank-Nicolson application of H to psi, for eigen-identity
// checks: returns (H psi)_j.
std::vector<std::complex<double>> apply_hamiltonian(const grid::Grid& g,
                                                    const std::vector<double>& potential,
                                                    const EvolveParams& params,
                                                    const std::vector<std::complex<double>>& psi);

// ---------------------------------------------------------------------
// Quantum Hamilton-Jacobi and continuity residuals per interior frame.
// Summaries are restricted to nodes whose amplitude clears
// amplitude_cutoff * max(rho) (phase noise below that floor swamps the
// truncation error being measured); the hard rho flag stays at
// kRhoTolerance.
// ---------------------------------------------------------------------

struct DiagnosticsOptions {
  double amplitude_cutoff = 1e-5;
  int margin = 2;
};

struct FrameDiagnostics {
  double time = 0.0;
  std::vector<double> hj_residual;
  std::vector<double> continuity_residual;
  std::vector<std::uint8_t> defined;
  ScalarDiagnostic q;
  grid::FieldSummary hj_summary;
  grid::FieldSummary continuity_summary;
};

std::vector<FrameDiagnostics> hj_and_continuity_residuals(const EvolutionSeries& series,
                                                          const DiagnosticsOptions& opts = {});

// ---------------------------------------------------------------------
// Bohm trajectories: dx/dt = grad(S)/m (standard) or 2 grad(S)/E0
// (modified), RK4 in time with linear interpolation of the velocity in
// space and across frames. Paths terminate with a flag when they enter a
// flagged-amplitude region or leave a clamped grid.
// ---------------------------------------------------------------------

struct Trajectory {
  double seed = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  bool terminated = false;  // entered a flagged region or left the grid
};

std::vector<Trajectory> bohm_trajectories(const EvolutionSeries& series,
                                          const std::vector<double>& seeds, int substeps = 4);

// ---------------------------------------------------------------------
// Heat equation as a gradient flow: evolves d phi/dt = kappa d^2 phi/dx^2
// on a periodic 1D grid and reports the Dirichlet energy E = sum (D phi)^2 h
// per frame, which must never increase.
// ---------------------------------------------------------------------

struct HeatParams {
  double kappa = 1.0;
  double dt = 1e-3;
  int steps = 100;
  int stride = 1;
  bool crank_nicolson = false;  // explicit by default; rejected if unstable
};

struct HeatReport {
  std::vector<double> times;
  std::vector<double> energy;
  bool monotone = false;
  double fitted_rate = 0.0;  // slope of -ln E(t), meaningful for single modes
};

HeatReport heat_gradient_flow_check(const grid::Grid& g, const std::vector<double>& initial,
                                    const HeatParams& params);

// Least-squares phase rotation rate at one node across frames (omega in
// exp(-i omega t)); the de Broglie cross-check fits this against E0/hbar.
double fitted_phase_rate(const EvolutionSeries& series, std::size_t node);

}  // namespace gaflux::bohm
