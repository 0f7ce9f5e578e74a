#include "gaflux/bohm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaflux/grid_ops.hpp"

namespace gaflux::bohm {

using Complex = std::complex<double>;

namespace {

// Moves theta onto the branch closest to `anchor`.
double onto_branch(double theta, double anchor) {
  double two_pi = 2.0 * std::numbers::pi;
  return theta + two_pi * std::round((anchor - theta) / two_pi);
}

}  // namespace

PolarField polar_decompose(const grid::Grid& g, const std::vector<Complex>& psi, double hbar) {
  if (psi.size() != g.node_count())
    throw std::invalid_argument("polar_decompose: value count does not match the grid");
  if (!(hbar > 0)) throw std::invalid_argument("polar_decompose: hbar must be positive");

  PolarField pf;
  pf.grid = g;
  pf.hbar = hbar;
  pf.rho.resize(psi.size());
  pf.defined.assign(psi.size(), 1);
  std::vector<double> theta(psi.size());

  std::size_t ref = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    pf.rho[i] = std::abs(psi[i]);
    theta[i] = std::arg(psi[i]);
    if (pf.rho[i] < kRhoTolerance) pf.defined[i] = 0;
    if (pf.rho[i] > pf.rho[ref]) ref = i;
  }

  // Axis-ordered unwrap from the reference node: along axis 0 through the
  // reference, then axis 1 columns from that row, then axis 2 columns.
  // Flagged nodes keep their raw phase and do not move the anchor.
  auto sweep = [&](std::size_t start, int axis, int dir) {
    auto ijk = g.unravel(start);
    double anchor = theta[start];
    for (int i = ijk[axis] + dir; i >= 0 && i < g.shape[axis]; i += dir) {
      std::size_t idx =
          std::size_t(std::ptrdiff_t(start) +
                      std::ptrdiff_t(i - ijk[axis]) * std::ptrdiff_t(g.stride(axis)));
      theta[idx] = onto_branch(theta[idx], anchor);
      if (pf.defined[idx]) anchor = theta[idx];
    }
  };

  auto ref_ijk = g.unravel(ref);
  sweep(ref, 0, +1);
  sweep(ref, 0, -1);
  if (g.dim >= 2) {
    for (int i0 = 0; i0 < g.shape[0]; ++i0) {
      std::size_t row_node = g.index(i0, ref_ijk[1], ref_ijk[2]);
      sweep(row_node, 1, +1);
      sweep(row_node, 1, -1);
    }
  }
  if (g.dim >= 3) {
    for (int i1 = 0; i1 < g.shape[1]; ++i1)
      for (int i0 = 0; i0 < g.shape[0]; ++i0) {
        std::size_t col_node = g.index(i0, i1, ref_ijk[2]);
        sweep(col_node, 2, +1);
        sweep(col_node, 2, -1);
      }
  }

  pf.action.resize(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) pf.action[i] = hbar * theta[i];
  return pf;
}

PolarField polar_decompose(const grid::GridField& phi, double hbar) {
  return polar_decompose(phi.grid(), grid::to_complex(phi), hbar);
}

std::vector<Complex> recompose(const PolarField& pf) {
  std::vector<Complex> out(pf.rho.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::polar(pf.rho[i], pf.action[i] / pf.hbar);
  return out;
}

ScalarDiagnostic quantum_potential(const PolarField& pf) {
  if (!pf.mass) throw std::invalid_argument("quantum_potential: mass is required");
  ScalarDiagnostic q;
  q.values.assign(pf.rho.size(), 0.0);
  q.defined = pf.defined;

  std::vector<double> lap(pf.rho.size(), 0.0);
  for (int a = 0; a < pf.grid.dim; ++a) {
    std::vector<double> d2 = grid::second_partial(pf.grid, pf.rho, a);
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += d2[i];
  }
  double coeff = -pf.hbar * pf.hbar / (2.0 * *pf.mass);
  for (std::size_t i = 0; i < lap.size(); ++i)
    if (q.defined[i]) q.values[i] = coeff * lap[i] / pf.rho[i];
  return q;
}

VectorDiagnostic osmotic_velocity(const PolarField& pf) {
  VectorDiagnostic v;
  v.defined = pf.defined;
  for (int a = 0; a < pf.grid.dim; ++a) {
    v.component[a] = grid::partial(pf.grid, pf.rho, a);
    for (std::size_t i = 0; i < v.component[a].size(); ++i)
      v.component[a][i] = v.defined[i] ? v.component[a][i] / pf.rho[i] : 0.0;
  }
  return v;
}

VectorDiagnostic bohm_momentum(const PolarField& pf) {
  VectorDiagnostic v;
  v.defined = pf.defined;
  for (int a = 0; a < pf.grid.dim; ++a) {
    v.component[a] = grid::partial(pf.grid, pf.action, a);
    for (std::size_t i = 0; i < v.component[a].size(); ++i)
      if (!v.defined[i]) v.component[a][i] = 0.0;
  }
  return v;
}

Cl2PolarResidual cl2_polar_residual(const PolarField& pf) {
  if (pf.grid.dim != 2)
    throw std::invalid_argument("cl2_polar_residual: needs a 2D grid in Cl(2)");

  VectorDiagnostic osmo = osmotic_velocity(pf);
  VectorDiagnostic mom = bohm_momentum(pf);

  Cl2PolarResidual r{grid::GridField(pf.grid, ga::Signature(2, 0)), {}, pf.defined};
  auto& e1 = r.field.plane(0b01);
  auto& e2 = r.field.plane(0b10);
  r.magnitude.assign(pf.rho.size(), 0.0);

  // grad(rho)/rho + (grad S) I / hbar, using e1 I = e2 and e2 I = -e1
  for (std::size_t i = 0; i < pf.rho.size(); ++i) {
    if (!r.defined[i]) continue;
    double sx = mom.component[0][i] / pf.hbar;
    double sy = mom.component[1][i] / pf.hbar;
    e1[i] = osmo.component[0][i] - sy;
    e2[i] = osmo.component[1][i] + sx;
    r.magnitude[i] = std::hypot(e1[i], e2[i]);
  }
  return r;
}

double plane_wave_residual(const WaveParams& w) {
  if (!(w.e0 > 0)) throw std::invalid_argument("plane_wave_residual: E0 must be positive");
  double p2 = w.p[0] * w.p[0] + w.p[1] * w.p[1] + w.p[2] * w.p[2];
  return w.e0 - (p2 + w.m_term * w.m_term) / w.e0;
}

DeBroglie de_broglie(const WaveParams& w) {
  if (!(w.hbar > 0)) throw std::invalid_argument("de_broglie: hbar must be positive");
  DeBroglie d;
  d.omega = w.e0 / w.hbar;
  for (int i = 0; i < 3; ++i) d.k[i] = w.p[i] / w.hbar;
  return d;
}

}  // namespace gaflux::bohm
