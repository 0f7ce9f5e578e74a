#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gaflux/grid_ops.hpp"
#include "support/sym_eval.hpp"

using namespace gaflux;
using namespace gaflux::grid;
using std::numbers::pi;

namespace {

const ga::Signature cl2(2, 0);
const ga::Signature cl3(3, 0);

GridField vector_field(const Grid& g, ga::Signature sig, int axis, ScalarFn f) {
  GridField out(g, sig);
  auto& p = out.plane(ga::BladeMask{1} << axis);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = f(g.position(i));
  return out;
}

double max_plane_error(const GridField& f, ga::BladeMask mask, ScalarFn expected, int margin) {
  const auto* p = f.find_plane(mask);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.grid().node_count(); ++i) {
    if (f.grid().in_margin(i, margin)) continue;
    double v = p ? (*p)[i] : 0.0;
    worst = std::max(worst, std::abs(v - expected(f.grid().position(i))));
  }
  return worst;
}

}  // namespace

TEST_CASE("dirac of x*e1 is the constant scalar 1") {
  Grid g = Grid::square(32, 32, -1.0, 1.0, Boundary::Clamped);
  GridField f = vector_field(g, cl2, 0, [](auto p) { return p[0]; });
  GridField d = dirac_op(f);
  // exact for linear fields, including the one-sided edges
  CHECK(max_plane_error(d, 0, [](auto) { return 1.0; }, 0) < 1e-12);
  CHECK(d.planes().size() == 1);
}

TEST_CASE("dirac of a constant field is zero") {
  Grid g = Grid::line(16, 0.0, 1.0, Boundary::Clamped);
  GridField f = sample_scalar(g, cl2, [](auto) { return 3.25; });
  CHECK(dirac_op(f).planes().empty());
}

TEST_CASE("z is monogenic up to roundoff") {
  Grid g = Grid::square(24, 24, -1.0, 1.0, Boundary::Clamped);
  GridField z = sample_complex(g, [](double x, double y) { return std::complex(x, y); });
  auto r = monogenic_residual(z);
  CHECK(r.summary.max < 1e-12);
}

TEST_CASE("interior/exterior split of the worked flux fields") {
  // F = f e1^e2 with f = x1*x2: interior = f,1 e2 - f,2 e1 = x2 e2 - x1 e1,
  // exterior = 0
  Grid g = Grid::square(40, 40, -1.0, 1.0, Boundary::Clamped);
  GridField F(g, cl2);
  {
    auto& p = F.plane(0b11);
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto pos = g.position(i);
      p[i] = pos[0] * pos[1];
    }
  }
  GridField in = interior_derivative(F);
  CHECK(max_plane_error(in, 0b10, [](auto p) { return p[1]; }, 0) < 1e-12);
  CHECK(max_plane_error(in, 0b01, [](auto p) { return -p[0]; }, 0) < 1e-12);
  CHECK(exterior_derivative(F).planes().empty());

  // G = x3 e1^e2 on a 3D grid: exterior = e1^e2^e3, interior = 0
  Grid g3 = Grid::box3(8, -1.0, 1.0, Boundary::Clamped);
  GridField G(g3, cl3);
  {
    auto& p = G.plane(0b011);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = g3.position(i)[2];
  }
  GridField ext = exterior_derivative(G);
  CHECK(max_plane_error(ext, 0b111, [](auto) { return 1.0; }, 0) < 1e-12);
  CHECK(interior_derivative(G).planes().empty());

  // grade-0 fields have no interior part
  GridField s = sample_scalar(g, cl2, [](auto p) { return p[0] * p[0]; });
  CHECK(interior_derivative(s).planes().empty());

  // split is exact: interior + exterior = dirac on the same samples
  GridField total = interior_derivative(F) + exterior_derivative(F);
  GridField diff = total - dirac_op(F);
  for (const auto& [mask, data] : diff.planes())
    for (double v : data) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("laplacian: exact on quadratics, spectral on sin*sin") {
  Grid g = Grid::line(20, -1.0, 1.0, Boundary::Clamped);
  GridField f = sample_scalar(g, cl2, [](auto p) { return p[0] * p[0]; });
  GridField lap = laplacian(f);
  CHECK(max_plane_error(lap, 0, [](auto) { return 2.0; }, 0) < 1e-11);

  GridField c = sample_scalar(g, cl2, [](auto) { return 5.0; });
  GridField lc = laplacian(c);
  CHECK(max_plane_error(lc, 0, [](auto) { return 0.0; }, 0) < 1e-12);

  Grid gp = Grid::square(64, 64, 0.0, 2 * pi, Boundary::Periodic);
  GridField ss =
      sample_scalar(gp, cl2, [](auto p) { return std::sin(p[0]) * std::sin(p[1]); });
  GridField lss = laplacian(ss);
  double worst_rel = 0.0;
  const auto& out = *lss.find_plane(0);
  const auto& in = *ss.find_plane(0);
  for (std::size_t i = 0; i < out.size(); ++i)
    worst_rel = std::max(worst_rel, std::abs(out[i] + 2.0 * in[i]) / 2.0);
  CHECK(worst_rel < 0.005);
}

TEST_CASE("monogenic residuals: z^2, conj(z), z/|z|") {
  Grid g = Grid::square(48, 48, -1.0, 1.0, Boundary::Clamped);

  GridField z2 = sample_complex(g, [](double x, double y) {
    return std::complex(x, y) * std::complex(x, y);
  });
  CHECK(monogenic_residual(z2).summary.max < 1e-12);

  GridField cz = sample_complex(g, [](double x, double y) { return std::complex(x, -y); });
  auto rc = monogenic_residual(cz);
  for (std::size_t i = 0; i < rc.pointwise.size(); ++i)
    if (!g.in_margin(i, 2)) CHECK(rc.pointwise[i] == doctest::Approx(2.0).epsilon(1e-9));

  // phase vortex z/|z|: numeric residual tracks the analytic 1/r away from
  // the puncture
  GridField vortex = sample_complex(g, [](double x, double y) {
    std::complex z(x, y);
    double r = std::abs(z);
    return r < 1e-12 ? std::complex(0.0, 0.0) : z / r;
  });
  auto rv = monogenic_residual(vortex);
  for (std::size_t i = 0; i < rv.pointwise.size(); ++i) {
    auto p = g.position(i);
    double r = std::hypot(p[0], p[1]);
    if (r < 0.4 || g.in_margin(i, 2)) continue;
    CHECK(std::abs(rv.pointwise[i] - 1.0 / r) < 0.02);
  }
}

TEST_CASE("residual scales linearly with the field") {
  Grid g = Grid::square(24, 24, -1.0, 1.0, Boundary::Clamped);
  GridField cz = sample_complex(g, [](double x, double y) { return std::complex(x, -y); });
  auto r1 = monogenic_residual(cz);
  auto r2 = monogenic_residual(cz * 2.5);
  for (std::size_t i = 0; i < r1.pointwise.size(); ++i)
    CHECK(r2.pointwise[i] == doctest::Approx(2.5 * r1.pointwise[i]));
}

TEST_CASE("gauge residual") {
  Grid g3 = Grid::box3(12, 0.0, 1.0, Boundary::Clamped);
  const double a1 = 0.7, a3 = -0.4;

  // A = a1 e1 + a3 e3; (del + A) G = 0 is solved by g = exp(-(a1 x1 + a3 x3))
  GridField A(g3, cl3);
  std::fill(A.plane(0b001).begin(), A.plane(0b001).end(), a1);
  std::fill(A.plane(0b100).begin(), A.plane(0b100).end(), a3);

  auto solution = [&](const Grid& g) {
    GridField G(g, cl3);
    auto& p = G.plane(0b011);
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto pos = g.position(i);
      p[i] = std::exp(-(a1 * pos[0] + a3 * pos[2]));
    }
    return G;
  };

  GridField G = solution(g3);
  auto r = gauge_residual(G, A);
  CHECK(r.summary.max < 1e-3);

  // refining the grid shows second order
  Grid g3f = Grid::box3(24, 0.0, 1.0, Boundary::Clamped);
  GridField Af(g3f, cl3);
  std::fill(Af.plane(0b001).begin(), Af.plane(0b001).end(), a1);
  std::fill(Af.plane(0b100).begin(), Af.plane(0b100).end(), a3);
  auto rf = gauge_residual(solution(g3f), Af);
  CHECK(convergence_order(r.summary.rms, rf.summary.rms) > 1.8);

  // A = 0 reduces to the monogenic residual
  Grid g = Grid::square(20, 20, -1.0, 1.0, Boundary::Clamped);
  GridField cz = sample_complex(g, [](double x, double y) { return std::complex(x, -y); });
  GridField zeroA(g, cl2);
  zeroA.plane(0b01);
  auto rz = gauge_residual(cz, zeroA);
  auto rm = monogenic_residual(cz);
  CHECK(rz.summary.max == doctest::Approx(rm.summary.max));

  // f = 0 gives residual 0
  GridField zf(g, cl2);
  CHECK(gauge_residual(zf, zeroA).summary.max == 0.0);

  Grid other = Grid::square(22, 22, -1.0, 1.0, Boundary::Clamped);
  GridField wrong(other, cl2);
  CHECK_THROWS_AS(gauge_residual(cz, wrong), std::invalid_argument);
}

TEST_CASE("lorentz gauge divergence") {
  Grid g = Grid::square(24, 24, -1.0, 1.0, Boundary::Clamped);

  GridField constA(g, cl2);
  std::fill(constA.plane(0b01).begin(), constA.plane(0b01).end(), 1.5);
  for (double v : lorentz_gauge_divergence(constA)) CHECK(std::abs(v) < 1e-12);

  GridField solenoidal(g, cl2);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    auto p = g.position(i);
    solenoidal.plane(0b01)[i] = p[0];
    solenoidal.plane(0b10)[i] = -p[1];
  }
  for (double v : lorentz_gauge_divergence(solenoidal)) CHECK(std::abs(v) < 1e-12);

  GridField expanding(g, cl2);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    auto p = g.position(i);
    expanding.plane(0b01)[i] = p[0];
    expanding.plane(0b10)[i] = p[1];
  }
  for (double v : lorentz_gauge_divergence(expanding)) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("dirac twice reproduces the laplacian") {
  Grid g = Grid::square(64, 64, 0.0, 2 * pi, Boundary::Periodic);
  GridField f = sample_scalar(g, cl2, [](auto p) { return std::sin(p[0]) * std::sin(p[1]); });

  GridField dd = dirac_op(dirac_op(f));
  // composed central differences: the bivector part cancels to roundoff
  for (const auto& [mask, data] : dd.planes()) {
    if (mask == 0) continue;
    for (double v : data) CHECK(std::abs(v) < 1e-10);
  }

  // grade-0 part equals the composed-stencil laplacian exactly; against the
  // independent 3-point stencil it agrees at O(h^2)
  std::vector<double> composed(g.node_count(), 0.0);
  for (int a = 0; a < 2; ++a) {
    auto d1 = partial(g, *f.find_plane(0), a);
    auto d2 = partial(g, d1, a);
    for (std::size_t i = 0; i < composed.size(); ++i) composed[i] += d2[i];
  }
  const auto& scalar = *dd.find_plane(0);
  for (std::size_t i = 0; i < composed.size(); ++i)
    CHECK(std::abs(scalar[i] - composed[i]) < 1e-10);

  GridField lap = laplacian(f);
  const auto& l3 = *lap.find_plane(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < l3.size(); ++i) worst = std::max(worst, std::abs(scalar[i] - l3[i]));
  CHECK(worst < 0.02);  // both second order around |lap| <= 2
}

TEST_CASE("smooth-field residual converges at second order") {
  auto residual_at = [](int n) {
    Grid g = Grid::square(n, n, -1.0, 1.0, Boundary::Clamped);
    GridField z3 = sample_complex(g, [](double x, double y) {
      std::complex z(x, y);
      return z * z * z;
    });
    return monogenic_residual(z3).summary.rms;
  };
  double coarse = residual_at(32), fine = residual_at(64);
  CHECK(convergence_order(coarse, fine) > 1.8);
}

TEST_CASE("cauchy reconstruction") {
  auto z2 = [](std::complex<double> z) { return z * z; };
  topo::Contour c = topo::Contour::circle({0, 0}, 1.0, 512);
  std::vector<std::complex<double>> samples(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) samples[k] = z2(c.point(k));

  std::complex<double> y(0.3, 0.1);
  CHECK(std::abs(cauchy_reconstruct(c, samples, y) - z2(y)) < 1e-3);

  std::vector<std::complex<double>> constant(c.size(), std::complex<double>(2.0, -1.0));
  CHECK(std::abs(cauchy_reconstruct(c, constant, y) - std::complex<double>(2.0, -1.0)) < 1e-9);

  std::vector<std::complex<double>> ident(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) ident[k] = c.point(k);
  CHECK(std::abs(cauchy_reconstruct(c, ident, {0, 0})) < 1e-6);

  CHECK_THROWS_AS(cauchy_reconstruct(c, samples, {1.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(cauchy_reconstruct(c, samples, {0.999, 0.0}), std::domain_error);

  ga::Multivector mv = cauchy_reconstruct_mv(c, samples, y);
  CHECK(mv.coefficient(0) == doctest::Approx(z2(y).real()).epsilon(1e-2));
  CHECK(mv.coefficient(0b11) == doctest::Approx(z2(y).imag()).epsilon(1e-2));
}

TEST_CASE("symbolic dirac agrees with the grid operator") {
  using namespace gaflux::testsupport;
  sym::DepsMap deps{{"f", {0, 1}}};
  sym::SymField F = sym::parse("f e1^e2", 2, deps);
  sym::SymField dF = sym::dirac_apply(F);

  Bindings bind{{"f", ExpBinding{1.3, {0.8, -0.5, 0.0}}}};

  auto agreement = [&](int n) {
    Grid g = Grid::square(n, n, 0.0, 1.0, Boundary::Clamped);
    GridField numeric = dirac_op(instantiate(F, g, bind));
    GridField symbolic = instantiate(dF, g, bind);
    return summarize(g, pointwise_norm(numeric - symbolic)).rms;
  };
  double coarse = agreement(16), fine = agreement(32);
  CHECK(coarse < 1e-3);
  CHECK(convergence_order(coarse, fine) > 1.8);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid::line(3, 0, 1, Boundary::Clamped), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, {8, 1, 1}, {0.0, 1, 1}, {0, 0, 0},
                       {Boundary::Clamped, Boundary::Clamped, Boundary::Clamped}),
                  std::invalid_argument);
}
