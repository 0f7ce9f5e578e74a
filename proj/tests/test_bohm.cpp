#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>

#include "gaflux/evolve.hpp"
#include "gaflux/grid_ops.hpp"

using namespace gaflux;
using namespace gaflux::bohm;
using std::numbers::pi;
using Complex = std::complex<double>;

namespace {

std::vector<Complex> sample_1d(const grid::Grid& g, auto f) {
  std::vector<Complex> out(g.node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.position(i)[0]);
  return out;
}

}  // namespace

TEST_CASE("polar decomposition basics") {
  grid::Grid g = grid::Grid::line(16, 0.0, 1.0, grid::Boundary::Clamped);
  auto psi = sample_1d(g, [](double) { return 2.0 * std::polar(1.0, 0.5); });
  PolarField pf = polar_decompose(g, psi, 1.0);
  for (std::size_t i = 0; i < pf.rho.size(); ++i) {
    CHECK(pf.rho[i] == doctest::Approx(2.0));
    CHECK(pf.action[i] == doctest::Approx(0.5));
    CHECK(pf.defined[i] == 1);
  }
}

TEST_CASE("plane wave unwraps to a linear action") {
  grid::Grid g = grid::Grid::line(128, 0.0, 10.0, grid::Boundary::Clamped);
  double k = 3.0, hbar = 0.7;
  auto psi = sample_1d(g, [&](double x) { return std::polar(1.0, k * x); });
  PolarField pf = polar_decompose(g, psi, hbar);
  for (std::size_t i = 0; i < pf.rho.size(); ++i) {
    double x = g.position(i)[0];
    // S = hbar k x up to one global 2*pi*hbar multiple
    double diff = pf.action[i] - hbar * k * x;
    double wrapped = std::remainder(diff, 2 * pi * hbar);
    CHECK(std::abs(diff - (pf.action[0] - hbar * k * g.position(0)[0])) < 1e-9);
    CHECK(std::abs(wrapped) < 1e-9);
  }
}

TEST_CASE("phase of z unwraps around a ring") {
  // parametrize the unit circle by a periodic 1D grid
  grid::Grid ring = grid::Grid::line(64, 0.0, 2 * pi, grid::Boundary::Periodic);
  auto psi = sample_1d(ring, [](double t) { return std::polar(1.0, t); });
  PolarField pf = polar_decompose(ring, psi, 1.0);
  double increment = pf.action.back() - pf.action.front();
  CHECK(increment == doctest::Approx(2 * pi * 63.0 / 64.0).epsilon(1e-9));
}

TEST_CASE("nodes below tolerance are flagged") {
  grid::Grid g = grid::Grid::line(16, -1.0, 1.0, grid::Boundary::Clamped);
  auto psi = sample_1d(g, [](double x) { return Complex(x < 0 ? 0.0 : 1.0, 0.0); });
  PolarField pf = polar_decompose(g, psi, 1.0);
  CHECK(pf.defined[0] == 0);
  CHECK(pf.defined[15] == 1);
}

TEST_CASE("recompose reproduces the field at unflagged nodes") {
  grid::Grid g = grid::Grid::square(24, 24, -1.5, 1.5, grid::Boundary::Clamped);
  grid::GridField z2 = grid::sample_complex(
      g, [](double x, double y) { return std::complex(x, y) * std::complex(x, y); });
  PolarField pf = polar_decompose(z2, 0.5);
  std::vector<Complex> back = recompose(pf);
  std::vector<Complex> orig = grid::to_complex(z2);
  for (std::size_t i = 0; i < back.size(); ++i)
    if (pf.defined[i]) CHECK(std::abs(back[i] - orig[i]) < 1e-12);
}

TEST_CASE("quantum potential of a gaussian") {
  double sigma = 1.0;
  grid::Grid g = grid::Grid::line(501, -5.0, 5.0, grid::Boundary::Clamped);  // h = sigma/50
  auto psi = sample_1d(g, [&](double x) { return Complex(std::exp(-x * x / (2 * sigma * sigma)), 0.0); });
  PolarField pf = polar_decompose(g, psi, 1.0);
  pf.mass = 1.0;
  ScalarDiagnostic q = quantum_potential(pf);

  double qmax = 0.0, err = 0.0;
  for (std::size_t i = 0; i < q.values.size(); ++i) {
    if (!q.defined[i] || g.in_margin(i, 2)) continue;
    double x = g.position(i)[0];
    double exact = -0.5 * (x * x / std::pow(sigma, 4) - 1.0 / (sigma * sigma));
    qmax = std::max(qmax, std::abs(exact));
    err = std::max(err, std::abs(q.values[i] - exact));
  }
  CHECK(err / qmax < 0.01);

  // constant amplitude has no quantum potential
  auto flat = sample_1d(g, [](double) { return Complex(2.0, 0.0); });
  PolarField pfc = polar_decompose(g, flat, 1.0);
  pfc.mass = 1.0;
  ScalarDiagnostic qc = quantum_potential(pfc);
  for (double v : qc.values) CHECK(std::abs(v) < 1e-12);

  // scale invariance at machine precision
  for (double lambda : {0.1, 10.0}) {
    PolarField scaled = pf;
    for (double& r : scaled.rho) r *= lambda;
    ScalarDiagnostic qs = quantum_potential(scaled);
    for (std::size_t i = 0; i < qs.values.size(); ++i)
      if (q.defined[i]) CHECK(std::abs(qs.values[i] - q.values[i]) < 1e-12);
  }

  PolarField no_mass = pf;
  no_mass.mass.reset();
  CHECK_THROWS_AS(quantum_potential(no_mass), std::invalid_argument);
}

TEST_CASE("osmotic velocity and bohm momentum") {
  grid::Grid g = grid::Grid::line(64, 0.0, 2.0, grid::Boundary::Clamped);
  double a = 0.8, k = 2.5, hbar = 0.5;
  auto psi = sample_1d(g, [&](double x) { return std::polar(std::exp(a * x), k * x); });
  PolarField pf = polar_decompose(g, psi, hbar);

  VectorDiagnostic osmo = osmotic_velocity(pf);
  VectorDiagnostic mom = bohm_momentum(pf);
  for (std::size_t i = 0; i < osmo.component[0].size(); ++i) {
    CHECK(osmo.component[0][i] == doctest::Approx(a).epsilon(1e-3));
    CHECK(mom.component[0][i] == doctest::Approx(hbar * k).epsilon(1e-9));
  }

  auto flat = sample_1d(g, [](double) { return Complex(3.0, 0.0); });
  PolarField pfc = polar_decompose(g, flat, hbar);
  VectorDiagnostic oc = osmotic_velocity(pfc);
  for (double v : oc.component[0]) CHECK(std::abs(v) < 1e-12);

  // osmotic velocity ignores the field's magnitude
  PolarField scaled = pf;
  for (double& r : scaled.rho) r *= 10.0;
  VectorDiagnostic os = osmotic_velocity(scaled);
  for (std::size_t i = 0; i < os.component[0].size(); ++i)
    CHECK(std::abs(os.component[0][i] - osmo.component[0][i]) < 1e-12);
}

TEST_CASE("evolution aborts on non-finite state with the step index") {
  grid::Grid g = grid::Grid::line(16, 0.0, 1.0, grid::Boundary::Clamped);
  std::vector<Complex> bad(g.node_count(), Complex(1.0, 0.0));
  bad[7] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EvolveParams p;
  p.dt = 0.01;
  p.steps = 3;
  CHECK_THROWS_WITH_AS(evolve(g, bad, {}, p, "zero"),
                       "evolve: state became non-finite at step 1", std::runtime_error);
}

TEST_CASE("cl2 polar residual matches the monogenic residual") {
  grid::Grid g = grid::Grid::square(48, 48, 0.25, 1.75, grid::Boundary::Clamped);

  // z is holomorphic: residual -> 0
  grid::GridField z = grid::sample_complex(g, [](double x, double y) { return Complex(x, y); });
  PolarField pfz = polar_decompose(z, 1.0);
  Cl2PolarResidual rz = cl2_polar_residual(pfz);
  // truncation of the polar route scales like h^2/r^3 on this domain
  for (std::size_t i = 0; i < rz.magnitude.size(); ++i)
    if (!g.in_margin(i, 2)) CHECK(rz.magnitude[i] < 0.02);

  // conj(z) is not: the two formulations agree pointwise, |R| = |del phi| / rho
  grid::GridField cz = grid::sample_complex(g, [](double x, double y) { return Complex(x, -y); });
  PolarField pfc = polar_decompose(cz, 1.0);
  Cl2PolarResidual rc = cl2_polar_residual(pfc);
  auto mono = grid::monogenic_residual(cz);
  for (std::size_t i = 0; i < rc.magnitude.size(); ++i) {
    if (g.in_margin(i, 2) || !rc.defined[i]) continue;
    CHECK(rc.magnitude[i] == doctest::Approx(mono.pointwise[i] / pfc.rho[i]).epsilon(5e-3));
  }

  // where the residual vanishes, grad S = hbar * (grad rho / rho) * I
  VectorDiagnostic mom = bohm_momentum(pfz);
  VectorDiagnostic osmo = osmotic_velocity(pfz);
  for (std::size_t i = 0; i < mom.component[0].size(); ++i) {
    if (g.in_margin(i, 2)) continue;
    CHECK(mom.component[0][i] == doctest::Approx(-1.0 * osmo.component[1][i]).epsilon(5e-3));
    CHECK(mom.component[1][i] == doctest::Approx(1.0 * osmo.component[0][i]).epsilon(5e-3));
  }
}

TEST_CASE("crank-nicolson conserves the norm") {
  grid::Grid g = grid::Grid::line(256, -12.0, 12.0, grid::Boundary::Clamped);
  auto psi0 = sample_1d(g, [](double x) { return Complex(std::exp(-x * x / 2.0), 0.0); });
  EvolveParams p;
  p.dt = 0.004;
  p.steps = 1000;
  p.stride = 250;
  p.mass = 1.0;
  EvolutionSeries s = evolve(g, psi0, {}, p, "free");
  double n0 = norm_l2(g, s.frames.front());
  for (const auto& frame : s.frames) CHECK(std::abs(norm_l2(g, frame) - n0) < 1e-10);
}

TEST_CASE("modified-variant plane wave rotates at E0/hbar") {
  // (E0, p, M) = (5, 4, 3); k = p/hbar = 4 on a 2*pi periodic grid
  grid::Grid g = grid::Grid::line(512, 0.0, 2 * pi, grid::Boundary::Periodic);
  double e0 = 5.0, pmom = 4.0, mterm = 3.0;
  auto psi0 = sample_1d(g, [&](double x) { return std::polar(1.0, pmom * x); });

  EvolveParams p;
  p.dt = 0.002;
  p.steps = 630;
  p.stride = 10;
  p.variant = Variant::Modified;
  p.e0 = e0;
  p.m_term = mterm;
  EvolutionSeries s = evolve(g, psi0, {}, p, "zero");

  // amplitude static
  for (const auto& frame : s.frames)
    for (const auto& v : frame) CHECK(std::abs(std::abs(v) - 1.0) < 1e-10);

  // the initial state is a discrete eigenvector: H psi = E_h psi
  auto hpsi = apply_hamiltonian(g, {}, p, psi0);
  Complex ratio = hpsi[17] / psi0[17];
  double e_h = ratio.real();
  CHECK(std::abs(ratio.imag()) < 1e-10);
  for (std::size_t i = 0; i < hpsi.size(); ++i) CHECK(std::abs(hpsi[i] - e_h * psi0[i]) < 1e-9);

  // fitted rotation rate matches E0/hbar within 0.1%
  double omega_fit = fitted_phase_rate(s, 101);
  CHECK(std::abs(omega_fit - e0 / p.hbar) / (e0 / p.hbar) < 1e-3);

  // and the evolved frames follow the exact discrete phase rotation
  double alpha = p.dt * e_h / (2.0 * p.hbar);
  Complex gain = (Complex(1, 0) - Complex(0, alpha)) / (Complex(1, 0) + Complex(0, alpha));
  Complex expected = std::pow(gain, 10);
  for (std::size_t i = 0; i < psi0.size(); i += 37)
    CHECK(std::abs(s.frames[1][i] - expected * psi0[i]) < 1e-10);
}

TEST_CASE("barrier scattering conserves total probability") {
  grid::Grid g = grid::Grid::line(512, -30.0, 30.0, grid::Boundary::Clamped);
  std::vector<double> U(g.node_count(), 0.0);
  for (std::size_t i = 0; i < U.size(); ++i) {
    double x = g.position(i)[0];
    if (std::abs(x) < 1.0) U[i] = 50.0;
  }
  auto psi0 = sample_1d(g, [](double x) {
    return std::polar(std::exp(-(x + 10.0) * (x + 10.0) / 4.0), 3.0 * x);
  });
  EvolveParams p;
  p.dt = 0.005;
  p.steps = 400;
  p.stride = 100;
  EvolutionSeries s = evolve(g, psi0, U, p, "barrier");

  double total0 = 0.0, total1 = 0.0;
  const auto& last = s.frames.back();
  for (std::size_t i = 0; i < last.size(); ++i) {
    total0 += std::norm(s.frames.front()[i]);
    total1 += std::norm(last[i]);
  }
  CHECK(std::abs(total1 - total0) * g.spacing[0] < 1e-8);
}

TEST_CASE("hj and continuity residuals shrink at second order") {
  auto residuals = [](int n, double dt) {
    grid::Grid g = grid::Grid::line(n, -10.0, 10.0, grid::Boundary::Clamped);
    std::vector<Complex> psi0(g.node_count());
    for (std::size_t i = 0; i < psi0.size(); ++i) {
      double x = g.position(i)[0];
      psi0[i] = std::exp(-x * x / 2.0);
    }
    EvolveParams p;
    p.dt = dt;
    p.steps = 60;
    p.stride = 20;
    p.mass = 1.0;
    EvolutionSeries s = evolve(g, psi0, {}, p, "free");
    auto diags = hj_and_continuity_residuals(s);
    return std::pair(diags[0].hj_summary.rms, diags[0].continuity_summary.rms);
  };
  auto [hj_c, cont_c] = residuals(200, 0.01);
  auto [hj_f, cont_f] = residuals(400, 0.005);
  CHECK(grid::convergence_order(hj_c, hj_f) > 1.5);
  CHECK(grid::convergence_order(cont_c, cont_f) > 1.5);
}

TEST_CASE("stationary harmonic ground state satisfies the quantum HJ equation") {
  grid::Grid g = grid::Grid::line(128, -8.0, 8.0, grid::Boundary::Clamped);
  std::size_t n = g.node_count();
  double h = g.spacing[0];
  std::vector<double> U(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = g.position(i)[0];
    U[i] = 0.5 * x * x;
  }

  // ground state of the same discrete Hamiltonian, by dense eigensolve
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    H(i, i) = 1.0 / (h * h) + U[i];
    if (i + 1 < n) {
      H(i, i + 1) = -0.5 / (h * h);
      H(i + 1, i) = -0.5 / (h * h);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  double e0 = solver.eigenvalues()(0);
  Eigen::VectorXd ground = solver.eigenvectors().col(0);
  if (ground(n / 2) < 0) ground = -ground;
  CHECK(e0 == doctest::Approx(0.5).epsilon(1e-3));

  std::vector<Complex> psi0(n);
  for (std::size_t i = 0; i < n; ++i) psi0[i] = ground(i);

  EvolveParams p;
  p.dt = 0.002;
  p.steps = 60;
  p.stride = 20;
  p.mass = 1.0;
  EvolutionSeries s = evolve(g, psi0, U, p, "harmonic");
  auto diags = hj_and_continuity_residuals(s);

  // dS/dt = -E everywhere the amplitude is healthy
  const auto& d = diags[0];
  PolarField before = polar_decompose(g, s.frames[0], p.hbar);
  PolarField after = polar_decompose(g, s.frames[2], p.hbar);
  double dsdt = (after.action[n / 2] - before.action[n / 2]) / (2.0 * s.frame_dt());
  CHECK(dsdt == doctest::Approx(-e0).epsilon(1e-5));

  CHECK(d.hj_summary.max < 1e-6);
  CHECK(d.continuity_summary.max < 1e-6);
}

TEST_CASE("plane-wave diagnostics are trivial") {
  grid::Grid g = grid::Grid::line(128, 0.0, 2 * pi, grid::Boundary::Periodic);
  auto psi0 = sample_1d(g, [](double x) { return std::polar(1.0, 3.0 * x); });
  EvolveParams p;
  p.dt = 0.005;
  p.steps = 40;
  p.stride = 10;
  p.mass = 1.0;
  EvolutionSeries s = evolve(g, psi0, {}, p, "zero");
  auto diags = hj_and_continuity_residuals(s);
  for (const auto& d : diags) {
    for (std::size_t i = 0; i < d.q.values.size(); ++i)
      if (d.defined[i]) CHECK(std::abs(d.q.values[i]) < 1e-8);
    CHECK(d.continuity_summary.max < 1e-8);
  }
}

TEST_CASE("bohm trajectories") {
  SUBCASE("plane wave gives straight lines of slope hbar k / m") {
    grid::Grid g = grid::Grid::line(256, 0.0, 20.0, grid::Boundary::Clamped);
    double k = 2.0;
    auto psi0 = sample_1d(g, [&](double x) { return std::polar(1.0, k * x); });
    EvolveParams p;
    p.dt = 0.01;
    p.steps = 100;
    p.stride = 10;
    p.mass = 2.0;
    EvolutionSeries s = evolve(g, psi0, {}, p, "zero");
    auto trajs = bohm_trajectories(s, {5.0, 10.0});
    for (const auto& tr : trajs) {
      CHECK_FALSE(tr.terminated);
      for (std::size_t i = 0; i < tr.t.size(); ++i)
        CHECK(tr.x[i] == doctest::Approx(tr.seed + k / p.mass * tr.t[i]).epsilon(2e-3));
    }
  }

  SUBCASE("free gaussian drifts outward") {
    grid::Grid g = grid::Grid::line(400, -15.0, 15.0, grid::Boundary::Clamped);
    auto psi0 = sample_1d(g, [](double x) { return Complex(std::exp(-x * x / 2.0), 0.0); });
    EvolveParams p;
    p.dt = 0.005;
    p.steps = 300;
    p.stride = 20;
    p.mass = 1.0;
    EvolutionSeries s = evolve(g, psi0, {}, p, "free");
    auto trajs = bohm_trajectories(s, {1.0});
    const auto& tr = trajs[0];
    for (std::size_t i = 1; i < tr.x.size(); ++i) CHECK(tr.x[i] >= tr.x[i - 1] - 1e-9);
  }

  SUBCASE("odd two-gaussian superposition: paths never cross the node") {
    // 401 points put a node exactly at x = 0, where the odd state vanishes
    grid::Grid g = grid::Grid::line(401, -15.0, 15.0, grid::Boundary::Clamped);
    double a = 2.0;
    auto psi0 = sample_1d(g, [&](double x) {
      return Complex(std::exp(-(x - a) * (x - a) / 2.0) - std::exp(-(x + a) * (x + a) / 2.0), 0.0);
    });
    EvolveParams p;
    p.dt = 0.005;
    p.steps = 300;
    p.stride = 20;
    p.mass = 1.0;
    EvolutionSeries s = evolve(g, psi0, {}, p, "two-gaussian");
    auto trajs = bohm_trajectories(s, {1.0, 2.0, 3.0});
    for (const auto& tr : trajs)
      for (double x : tr.x) CHECK(x > 0.0);

    CHECK_THROWS_AS(bohm_trajectories(s, {0.0}), std::invalid_argument);
  }
}

TEST_CASE("plane wave residual") {
  CHECK(plane_wave_residual({5.0, {4.0, 0, 0}, 3.0, 1.0}) == 0.0);
  CHECK(plane_wave_residual({4.0, {4.0, 0, 0}, 0.0, 1.0}) == 0.0);
  CHECK(plane_wave_residual({2.0, {1.0, 0, 0}, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(plane_wave_residual({-1.0, {0, 0, 0}, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("de broglie relations") {
  DeBroglie d1 = de_broglie({1.0, {0, 0, 0}, 0.0, 1.0});
  CHECK(d1.omega == doctest::Approx(1.0));
  DeBroglie d2 = de_broglie({2.0, {3.0, 0, 0}, 0.0, 2.0});
  CHECK(d2.omega == doctest::Approx(1.0));
  CHECK(d2.k[0] == doctest::Approx(1.5));
}

TEST_CASE("heat equation gradient flow") {
  grid::Grid g = grid::Grid::line(64, 0.0, 2 * pi, grid::Boundary::Periodic);
  double h = g.spacing[0];

  std::vector<double> sine(g.node_count());
  for (std::size_t i = 0; i < sine.size(); ++i) sine[i] = std::sin(g.position(i)[0]);

  HeatParams hp;
  hp.kappa = 1.0;
  hp.dt = 0.4 * h * h;
  hp.steps = int(1.0 / hp.dt);  // about one decay time of E
  hp.stride = 16;
  HeatReport r = heat_gradient_flow_check(g, sine, hp);
  CHECK(r.monotone);
  CHECK(std::abs(r.fitted_rate - 2.0) < 0.02);
  // endpoint value matches exp(-2 kappa t) within 1%
  double predicted = r.energy.front() * std::exp(-2.0 * r.times.back());
  CHECK(std::abs(r.energy.back() - predicted) / predicted < 0.01);

  std::vector<double> flat(g.node_count(), 1.25);
  HeatReport rf = heat_gradient_flow_check(g, flat, hp);
  for (double e : rf.energy) CHECK(std::abs(e) < 1e-20);
  CHECK(rf.monotone);

  // random smooth data stays monotone
  std::vector<double> bumpy(g.node_count());
  for (std::size_t i = 0; i < bumpy.size(); ++i) {
    double x = g.position(i)[0];
    bumpy[i] = std::sin(3 * x) + 0.4 * std::cos(7 * x) + 0.2 * std::sin(11 * x + 1.0);
  }
  HeatReport rb = heat_gradient_flow_check(g, bumpy, hp);
  CHECK(rb.monotone);

  HeatParams unstable = hp;
  unstable.dt = h * h;
  CHECK_THROWS_AS(heat_gradient_flow_check(g, sine, unstable), std::invalid_argument);

  HeatParams cn = hp;
  cn.crank_nicolson = true;
  cn.dt = h;  // far beyond the explicit limit, still fine
  cn.steps = 64;
  cn.stride = 8;
  HeatReport rc = heat_gradient_flow_check(g, sine, cn);
  CHECK(rc.monotone);
}
