#include "gaflux/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaflux/grid_ops.hpp"

namespace gaflux::bohm {

using Complex = std::complex<double>;

std::string variant_name(Variant v) { return v == Variant::Standard ? "standard" : "modified"; }

namespace {

struct HamiltonianCoeffs {
  double kinetic = 0.0;   // coefficient of -d^2/dx^2
  double constant = 0.0;  // added to the external potential
};

HamiltonianCoeffs coeffs_for(const EvolveParams& p) {
  if (p.variant == Variant::Standard) {
    if (!(p.mass > 0)) throw std::invalid_argument("evolve: standard variant needs mass > 0");
    return {p.hbar * p.hbar / (2.0 * p.mass), 0.0};
  }
  if (!(p.e0 > 0)) throw std::invalid_argument("evolve: modified variant needs E0 > 0");
  return {p.hbar * p.hbar / p.e0, p.m_term * p.m_term / p.e0};
}

// Tridiagonal solve (constant off-diagonal), Thomas algorithm.
void solve_tridiagonal(const std::vector<Complex>& diag, Complex off, std::vector<Complex>& rhs) {
  std::size_t n = diag.size();
  std::vector<Complex> c(n);
  c[0] = off / diag[0];
  rhs[0] /= diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    Complex m = diag[i] - off * c[i - 1];
    c[i] = off / m;
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

// Cyclic tridiagonal via Sherman-Morrison (two plain solves).
void solve_cyclic(const std::vector<Complex>& diag, Complex off, std::vector<Complex>& rhs) {
  std::size_t n = diag.size();
  Complex gamma = -diag[0];
  std::vector<Complex> d = diag;
  d[0] -= gamma;
  d[n - 1] -= off * off / gamma;

  std::vector<Complex> u(n, Complex(0));
  u[0] = gamma;
  u[n - 1] = off;

  std::vector<Complex> y = rhs;
  solve_tridiagonal(d, off, y);
  solve_tridiagonal(d, off, u);

  Complex vy = y[0] + (off / gamma) * y[n - 1];
  Complex vu = u[0] + (off / gamma) * u[n - 1];
  Complex factor = vy / (1.0 + vu);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = y[i] - factor * u[i];
}

}  // namespace

std::vector<Complex> apply_hamiltonian(const grid::Grid& g, const std::vector<double>& potential,
                                       const EvolveParams& params, const std::vector<Complex>& psi) {
  if (g.dim != 1) throw std::invalid_argument("apply_hamiltonian: evolution is 1D");
  HamiltonianCoeffs hc = coeffs_for(params);
  std::size_t n = g.node_count();
  double inv_h2 = 1.0 / (g.spacing[0] * g.spacing[0]);
  bool periodic = g.boundary[0] == grid::Boundary::Periodic;

  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex left = i > 0 ? psi[i - 1] : (periodic ? psi[n - 1] : Complex(0));
    Complex right = i + 1 < n ? psi[i + 1] : (periodic ? psi[0] : Complex(0));
    double u = hc.constant + (potential.empty() ? 0.0 : potential[i]);
    out[i] = -hc.kinetic * (left - 2.0 * psi[i] + right) * inv_h2 + u * psi[i];
  }
  return out;
}

EvolutionSeries evolve(const grid::Grid& g, const std::vector<Complex>& initial,
                       const std::vector<double>& potential, const EvolveParams& params,
                       const std::string& potential_name) {
  if (g.dim != 1) throw std::invalid_argument("evolve: evolution is 1D");
  if (initial.size() != g.node_count()) throw std::invalid_argument("evolve: initial size mismatch");
  if (!potential.empty() && potential.size() != g.node_count())
    throw std::invalid_argument("evolve: potential size mismatch");
  if (!(params.dt > 0)) throw std::invalid_argument("evolve: dt must be positive");
  if (params.steps < 0 || params.stride < 1) throw std::invalid_argument("evolve: bad step counts");

  HamiltonianCoeffs hc = coeffs_for(params);
  std::size_t n = g.node_count();
  double inv_h2 = 1.0 / (g.spacing[0] * g.spacing[0]);
  bool periodic = g.boundary[0] == grid::Boundary::Periodic;

  // (1 + i dt/(2 hbar) H) psi' = (1 - i dt/(2 hbar) H) psi
  Complex ialpha(0.0, params.dt / (2.0 * params.hbar));
  Complex off = -ialpha * hc.kinetic * inv_h2;
  std::vector<Complex> diag(n);
  std::vector<double> hdiag(n);
  for (std::size_t i = 0; i < n; ++i) {
    hdiag[i] = 2.0 * hc.kinetic * inv_h2 + hc.constant + (potential.empty() ? 0.0 : potential[i]);
    diag[i] = 1.0 + ialpha * hdiag[i];
  }

  EvolutionSeries series;
  series.grid = g;
  series.potential = potential.empty() ? std::vector<double>(n, 0.0) : potential;
  series.potential_name = potential_name;
  series.params = params;
  series.times.push_back(0.0);
  series.frames.push_back(initial);

  std::vector<Complex> psi = initial;
  std::vector<Complex> rhs(n);
  for (int step = 1; step <= params.steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex left = i > 0 ? psi[i - 1] : (periodic ? psi[n - 1] : Complex(0));
      Complex right = i + 1 < n ? psi[i + 1] : (periodic ? psi[0] : Complex(0));
      Complex hpsi = hdiag[i] * psi[i] - hc.kinetic * inv_h2 * (left + right);
      rhs[i] = psi[i] - ialpha * hpsi;
    }
    if (periodic)
      solve_cyclic(diag, off, rhs);
    else
      solve_tridiagonal(diag, off, rhs);
    psi = rhs;

    double probe = std::norm(psi[n / 2]) + std::norm(psi[0]);
    if (!std::isfinite(probe))
      throw std::runtime_error("evolve: state became non-finite at step " + std::to_string(step));

    if (step % params.stride == 0) {
      series.times.push_back(step * params.dt);
      series.frames.push_back(psi);
    }
  }
  return series;
}

double norm_l2(const grid::Grid& g, const std::vector<Complex>& psi) {
  double s = 0.0;
  for (const Complex& v : psi) s += std::norm(v);
  return std::sqrt(s * g.spacing[0]);
}

// ----------------------------------------------------------------------
// Quantum HJ / continuity residuals
// ----------------------------------------------------------------------

namespace {

// d(arg psi)/dx * hbar from principal-branch phase increments; independent
// of any unwrapping branch, so periodic seams are safe. arg(b * conj(a))
// equals arg(b/a) and stays finite at zero amplitude.
std::vector<double> action_gradient(const grid::Grid& g, const std::vector<Complex>& psi,
                                    double hbar) {
  std::size_t n = psi.size();
  double h = g.spacing[0];
  bool periodic = g.boundary[0] == grid::Boundary::Periodic;
  auto step = [&](std::size_t a, std::size_t b) { return std::arg(psi[b] * std::conj(psi[a])); };

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (periodic) {
      out[i] = hbar * (step(i, (i + 1) % n) + step((i + n - 1) % n, i)) / (2 * h);
    } else if (i == 0) {
      out[i] = hbar * (3 * step(0, 1) - step(1, 2)) / (2 * h);
    } else if (i == n - 1) {
      out[i] = hbar * (3 * step(n - 2, n - 1) - step(n - 3, n - 2)) / (2 * h);
    } else {
      out[i] = hbar * (step(i, i + 1) + step(i - 1, i)) / (2 * h);
    }
  }
  return out;
}

grid::FieldSummary masked_summary(const grid::Grid& g, const std::vector<double>& values,
                                  const std::vector<std::uint8_t>& mask, int margin) {
  grid::FieldSummary s;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask[i] || g.in_margin(i, margin)) continue;
    double v = std::abs(values[i]);
    s.max = std::max(s.max, v);
    sum_sq += v * v;
    ++s.count;
  }
  s.rms = s.count ? std::sqrt(sum_sq / double(s.count)) : 0.0;
  return s;
}

}  // namespace

std::vector<FrameDiagnostics> hj_and_continuity_residuals(const EvolutionSeries& series,
                                                          const DiagnosticsOptions& opts) {
  if (series.frames.size() < 3)
    throw std::invalid_argument(
        "hj_and_continuity_residuals: need at least 3 frames for centered time differences");

  const grid::Grid& g = series.grid;
  const EvolveParams& p = series.params;
  double dtf = series.frame_dt();

  double kinetic_coeff, q_coeff, flow_coeff, constant_u;
  if (p.variant == Variant::Standard) {
    kinetic_coeff = 1.0 / (2.0 * p.mass);
    q_coeff = p.hbar * p.hbar / (2.0 * p.mass);
    flow_coeff = 1.0 / p.mass;
    constant_u = 0.0;
  } else {
    kinetic_coeff = 1.0 / p.e0;
    q_coeff = p.hbar * p.hbar / p.e0;
    flow_coeff = 2.0 / p.e0;
    constant_u = p.m_term * p.m_term / p.e0;
  }

  std::vector<FrameDiagnostics> out;
  for (std::size_t f = 1; f + 1 < series.frames.size(); ++f) {
    const std::vector<Complex>& frame = series.frames[f];
    const std::vector<Complex>& prev = series.frames[f - 1];
    const std::vector<Complex>& next = series.frames[f + 1];
    std::size_t n = frame.size();

    std::vector<double> rho(n);
    double rho_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rho[i] = std::abs(frame[i]);
      rho_max = std::max(rho_max, rho[i]);
    }
    double floor = std::max(opts.amplitude_cutoff * rho_max, kRhoTolerance);

    FrameDiagnostics d;
    d.time = series.times[f];
    d.hj_residual.assign(n, 0.0);
    d.continuity_residual.assign(n, 0.0);
    d.defined.assign(n, 1);

    // every S derivative comes from principal-branch phase increments,
    // independent of unwrapping branches and periodic seams
    std::vector<double> ds = action_gradient(g, frame, p.hbar);
    std::vector<double> lap_rho = grid::second_partial(g, rho, 0);
    std::vector<double> flow(n);
    for (std::size_t i = 0; i < n; ++i) flow[i] = rho[i] * rho[i] * ds[i] * flow_coeff;
    std::vector<double> div_flow = grid::partial(g, flow, 0);

    for (std::size_t i = 0; i < n; ++i) {
      bool ok = rho[i] >= floor && std::abs(prev[i]) >= kRhoTolerance &&
                std::abs(next[i]) >= kRhoTolerance;
      d.defined[i] = ok ? 1 : 0;
      if (!ok) continue;

      double dsdt = p.hbar *
                    (std::arg(next[i] * std::conj(frame[i])) +
                     std::arg(frame[i] * std::conj(prev[i]))) /
                    (2.0 * dtf);
      double drho2dt = (std::norm(next[i]) - std::norm(prev[i])) / (2.0 * dtf);
      // modified variant: dS/dt + ((grad S)^2 + M^2)/E0 + U_ext + Q = 0;
      // the M^2/E0 term is constant_u
      double u = series.potential[i] + constant_u;
      double q = -q_coeff * lap_rho[i] / rho[i];
      double kinetic = kinetic_coeff * ds[i] * ds[i];

      d.hj_residual[i] = dsdt + kinetic + u + q;
      d.continuity_residual[i] = drho2dt + div_flow[i];
    }

    ScalarDiagnostic q;
    q.values.assign(n, 0.0);
    q.defined = d.defined;
    for (std::size_t i = 0; i < n; ++i)
      if (d.defined[i]) q.values[i] = -q_coeff * lap_rho[i] / rho[i];
    d.q = std::move(q);

    d.hj_summary = masked_summary(g, d.hj_residual, d.defined, opts.margin);
    d.continuity_summary = masked_summary(g, d.continuity_residual, d.defined, opts.margin);
    out.push_back(std::move(d));
  }
  return out;
}

// ----------------------------------------------------------------------
// Trajectories
// ----------------------------------------------------------------------

std::vector<Trajectory> bohm_trajectories(const EvolutionSeries& series,
                                          const std::vector<double>& seeds, int substeps) {
  const grid::Grid& g = series.grid;
  const EvolveParams& p = series.params;
  if (series.frames.size() < 2)
    throw std::invalid_argument("bohm_trajectories: need at least 2 frames");
  if (substeps < 1) throw std::invalid_argument("bohm_trajectories: substeps must be >= 1");

  double flow_coeff = p.variant == Variant::Standard ? 1.0 / p.mass : 2.0 / p.e0;

  // velocity field per frame from branch-free phase increments
  std::vector<std::vector<double>> velocity(series.frames.size());
  std::vector<std::vector<std::uint8_t>> ok(series.frames.size());
  for (std::size_t f = 0; f < series.frames.size(); ++f) {
    std::vector<double> ds = action_gradient(g, series.frames[f], p.hbar);
    velocity[f].resize(ds.size());
    ok[f].resize(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      velocity[f][i] = flow_coeff * ds[i];
      ok[f][i] = std::abs(series.frames[f][i]) >= kRhoTolerance ? 1 : 0;
    }
  }

  double x0 = g.origin[0];
  double h = g.spacing[0];
  int n = g.shape[0];
  double x_hi = x0 + h * (n - 1);
  double dtf = series.frame_dt();
  double t_end = series.times.back();

  // linear in space and in time between frames; nullopt when the probe
  // touches a flagged node or leaves a clamped grid
  auto velocity_at = [&](double x, double t) -> std::optional<double> {
    if (x < x0 || x > x_hi) return std::nullopt;
    double ft = std::clamp((t - series.times.front()) / dtf, 0.0, double(series.frames.size() - 1));
    std::size_t f = std::min(std::size_t(ft), series.frames.size() - 2);
    double w = ft - double(f);
    double fx = (x - x0) / h;
    std::size_t i = std::min(std::size_t(fx), std::size_t(n - 2));
    double tx = fx - double(i);
    if (!ok[f][i] || !ok[f][i + 1] || !ok[f + 1][i] || !ok[f + 1][i + 1]) return std::nullopt;
    double va = (1 - tx) * velocity[f][i] + tx * velocity[f][i + 1];
    double vb = (1 - tx) * velocity[f + 1][i] + tx * velocity[f + 1][i + 1];
    return (1 - w) * va + w * vb;
  };

  PolarField initial = polar_decompose(g, series.frames.front(), p.hbar);

  std::vector<Trajectory> out;
  for (double seed : seeds) {
    if (seed < x0 || seed > x_hi)
      throw std::invalid_argument("bohm_trajectories: seed outside the grid");
    std::size_t nearest = std::size_t(std::lround((seed - x0) / h));
    if (!initial.defined[std::min(nearest, std::size_t(n - 1))])
      throw std::invalid_argument("bohm_trajectories: seed in a flagged-amplitude region");

    Trajectory traj;
    traj.seed = seed;
    double x = seed;
    double t = series.times.front();
    double dt = dtf / substeps;
    traj.t.push_back(t);
    traj.x.push_back(x);

    while (t < t_end - 1e-12) {
      auto k1 = velocity_at(x, t);
      auto k2 = k1 ? velocity_at(x + 0.5 * dt * *k1, t + 0.5 * dt) : std::nullopt;
      auto k3 = k2 ? velocity_at(x + 0.5 * dt * *k2, t + 0.5 * dt) : std::nullopt;
      auto k4 = k3 ? velocity_at(x + dt * *k3, t + dt) : std::nullopt;
      if (!k4) {
        traj.terminated = true;
        break;
      }
      x += dt / 6.0 * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
      t += dt;
      traj.t.push_back(t);
      traj.x.push_back(x);
      if (x < x0 || x > x_hi) {
        traj.terminated = true;
        break;
      }
    }
    out.push_back(std::move(traj));
  }
  return out;
}

// ----------------------------------------------------------------------
// Heat equation gradient flow
// ----------------------------------------------------------------------

HeatReport heat_gradient_flow_check(const grid::Grid& g, const std::vector<double>& initial,
                                    const HeatParams& params) {
  if (g.dim != 1 || g.boundary[0] != grid::Boundary::Periodic)
    throw std::invalid_argument("heat_gradient_flow_check: needs a periodic 1D grid");
  if (initial.size() != g.node_count())
    throw std::invalid_argument("heat_gradient_flow_check: initial size mismatch");

  double h = g.spacing[0];
  double r = params.kappa * params.dt / (h * h);
  if (!params.crank_nicolson && r > 0.5)
    throw std::invalid_argument("heat_gradient_flow_check: explicit step unstable (kappa dt / h^2 = " +
                                std::to_string(r) + " > 0.5)");

  std::size_t n = g.node_count();
  // Dirichlet energy with forward differences: its gradient flow is
  // exactly the 3-point stencil heat equation, so E decays monotonically
  auto energy = [&](const std::vector<double>& u) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = (u[(i + 1) % n] - u[i]) / h;
      e += d * d * h;
    }
    return e;
  };

  std::vector<double> u = initial;
  HeatReport report;
  report.times.push_back(0.0);
  report.energy.push_back(energy(u));

  std::vector<Complex> diag;
  Complex off;
  if (params.crank_nicolson) {
    diag.assign(n, 1.0 + r);
    off = -0.5 * r;
  }

  std::vector<double> next(n);
  std::vector<Complex> rhs(n);
  for (int step = 1; step <= params.steps; ++step) {
    if (params.crank_nicolson) {
      for (std::size_t i = 0; i < n; ++i) {
        double lap = u[(i + 1) % n] - 2.0 * u[i] + u[(i + n - 1) % n];
        rhs[i] = u[i] + 0.5 * r * lap;
      }
      solve_cyclic(diag, off, rhs);
      for (std::size_t i = 0; i < n; ++i) u[i] = rhs[i].real();
    } else {
      for (std::size_t i = 0; i < n; ++i)
        next[i] = u[i] + r * (u[(i + 1) % n] - 2.0 * u[i] + u[(i + n - 1) % n]);
      u.swap(next);
    }
    if (step % params.stride == 0) {
      report.times.push_back(step * params.dt);
      report.energy.push_back(energy(u));
    }
  }

  report.monotone = true;
  for (std::size_t i = 1; i < report.energy.size(); ++i)
    if (report.energy[i] > report.energy[i - 1] * (1.0 + 1e-12) + 1e-300) report.monotone = false;

  // least-squares slope of ln E against t
  std::size_t m = 0;
  double st = 0, se = 0, stt = 0, ste = 0;
  for (std::size_t i = 0; i < report.energy.size(); ++i) {
    if (report.energy[i] <= 0) continue;
    double t = report.times[i], le = std::log(report.energy[i]);
    st += t;
    se += le;
    stt += t * t;
    ste += t * le;
    ++m;
  }
  double denom = double(m) * stt - st * st;
  report.fitted_rate = m >= 2 && std::abs(denom) > 0 ? -(double(m) * ste - st * se) / denom : 0.0;
  return report;
}

double fitted_phase_rate(const EvolutionSeries& series, std::size_t node) {
  std::vector<double> theta(series.frames.size());
  double period = 2.0 * std::numbers::pi;
  for (std::size_t f = 0; f < series.frames.size(); ++f) {
    double t = std::arg(series.frames[f][node]);
    if (f > 0) t += period * std::round((theta[f - 1] - t) / period);
    theta[f] = t;
  }
  double st = 0, se = 0, stt = 0, ste = 0;
  std::size_t m = theta.size();
  for (std::size_t f = 0; f < m; ++f) {
    st += series.times[f];
    se += theta[f];
    stt += series.times[f] * series.times[f];
    ste += series.times[f] * theta[f];
  }
  double denom = double(m) * stt - st * st;
  double slope = std::abs(denom) > 0 ? (double(m) * ste - st * se) / denom : 0.0;
  return -slope;  // psi ~ exp(-i omega t)
}

}  // namespace gaflux::bohm
