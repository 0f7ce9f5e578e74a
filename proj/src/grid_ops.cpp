#include "gaflux/grid_ops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaflux::grid {

std::vector<double> partial(const Grid& g, const std::vector<double>& u, int axis) {
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("partial: axis out of range");
  std::vector<double> out(u.size());
  double h = g.spacing[axis];
  std::size_t stride = g.stride(axis);
  int n = g.shape[axis];
  bool periodic = g.boundary[axis] == Boundary::Periodic;

  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    int i = g.unravel(idx)[axis];
    auto at = [&](int j) {
      if (periodic) j = ((j % n) + n) % n;
      return u[std::size_t(std::ptrdiff_t(idx) + std::ptrdiff_t(j - i) * std::ptrdiff_t(stride))];
    };
    if (periodic || (i > 0 && i < n - 1)) {
      out[idx] = (at(i + 1) - at(i - 1)) / (2 * h);
    } else if (i == 0) {
      out[idx] = (-3 * at(0) + 4 * at(1) - at(2)) / (2 * h);
    } else {
      out[idx] = (3 * at(n - 1) - 4 * at(n - 2) + at(n - 3)) / (2 * h);
    }
  }
  return out;
}

std::vector<double> second_partial(const Grid& g, const std::vector<double>& u, int axis) {
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("second_partial: axis out of range");
  std::vector<double> out(u.size());
  double h2 = g.spacing[axis] * g.spacing[axis];
  std::size_t stride = g.stride(axis);
  int n = g.shape[axis];
  bool periodic = g.boundary[axis] == Boundary::Periodic;

  for (std::size_t idx = 0; idx < u.size(); ++idx) {
    int i = g.unravel(idx)[axis];
    auto at = [&](int j) {
      if (periodic) j = ((j % n) + n) % n;
      return u[std::size_t(std::ptrdiff_t(idx) + std::ptrdiff_t(j - i) * std::ptrdiff_t(stride))];
    };
    if (periodic || (i > 0 && i < n - 1)) {
      out[idx] = (at(i + 1) - 2 * at(i) + at(i - 1)) / h2;
    } else if (i == 0) {
      out[idx] = (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / h2;
    } else {
      out[idx] = (2 * at(n - 1) - 5 * at(n - 2) + 4 * at(n - 3) - at(n - 4)) / h2;
    }
  }
  return out;
}

namespace {

enum class DiracPart { Full, Interior, Exterior };

GridField dirac_impl(const GridField& f, DiracPart part) {
  const Grid& g = f.grid();
  const ga::Signature& sig = f.signature();
  if (g.dim > sig.dimension())
    throw std::invalid_argument("dirac_op: grid has more axes than the signature has generators");

  GridField out(g, sig);
  for (const auto& [mask, data] : f.planes()) {
    int gr = ga::grade(mask);
    for (int a = 0; a < g.dim; ++a) {
      ga::BladeMask ea = ga::BladeMask{1} << a;
      ga::BladeMask rm = ea ^ mask;
      int rgrade = ga::grade(rm);
      if (part == DiracPart::Interior && rgrade != gr - 1) continue;
      if (part == DiracPart::Exterior && rgrade != gr + 1) continue;
      // reciprocal basis: e^a = metric(a) e_a
      int sign = sig.metric(a) * ga::product_sign(sig, ea, mask);
      std::vector<double> d = partial(g, data, a);
      auto& target = out.plane(rm);
      for (std::size_t i = 0; i < d.size(); ++i) target[i] += sign * d[i];
    }
  }
  return out.compact();
}

}  // namespace

GridField dirac_op(const GridField& f) { return dirac_impl(f, DiracPart::Full); }
GridField interior_derivative(const GridField& f) { return dirac_impl(f, DiracPart::Interior); }
GridField exterior_derivative(const GridField& f) { return dirac_impl(f, DiracPart::Exterior); }

GridField laplacian(const GridField& f) {
  const Grid& g = f.grid();
  GridField out(g, f.signature());
  for (const auto& [mask, data] : f.planes()) {
    auto& target = out.plane(mask);
    for (int a = 0; a < g.dim; ++a) {
      std::vector<double> d2 = second_partial(g, data, a);
      for (std::size_t i = 0; i < d2.size(); ++i) target[i] += d2[i];
    }
  }
  return out;
}

ResidualReport monogenic_residual(const GridField& f) {
  ResidualReport r;
  r.pointwise = pointwise_norm(dirac_op(f));
  r.summary = summarize(f.grid(), r.pointwise);
  return r;
}

ResidualReport gauge_residual(const GridField& f, const GridField& a) {
  if (!(f.grid() == a.grid())) throw std::invalid_argument("gauge_residual: grid mismatch");
  if (!(f.signature() == a.signature()))
    throw std::invalid_argument("gauge_residual: signature mismatch");
  for (const auto& [mask, data] : a.planes())
    if (ga::grade(mask) != 1)
      throw std::invalid_argument("gauge_residual: potential must be grade-1 at every node");

  GridField total = dirac_op(f);
  // pointwise geometric product A f
  for (const auto& [ma, pa] : a.planes()) {
    for (const auto& [mf, pf] : f.planes()) {
      int sign = ga::product_sign(f.signature(), ma, mf);
      auto& target = total.plane(ma ^ mf);
      for (std::size_t i = 0; i < target.size(); ++i) target[i] += sign * pa[i] * pf[i];
    }
  }

  ResidualReport r;
  r.pointwise = pointwise_norm(total);
  r.summary = summarize(f.grid(), r.pointwise);
  return r;
}

std::vector<double> lorentz_gauge_divergence(const GridField& a) {
  const Grid& g = a.grid();
  std::vector<double> out(g.node_count(), 0.0);
  for (int ax = 0; ax < g.dim; ++ax) {
    const std::vector<double>* comp = a.find_plane(ga::BladeMask{1} << ax);
    if (!comp) continue;
    std::vector<double> d = partial(g, *comp, ax);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

std::complex<double> cauchy_reconstruct(const topo::Contour& c,
                                        const std::vector<std::complex<double>>& boundary_values,
                                        std::complex<double> y) {
  if (boundary_values.size() != c.size())
    throw std::invalid_argument("cauchy_reconstruct: one boundary value per contour sample");
  if (!c.contains(y))
    throw std::domain_error("cauchy_reconstruct: evaluation point is not inside the contour");
  if (c.min_distance(y) <= 2.0 * c.max_spacing())
    throw std::domain_error("cauchy_reconstruct: evaluation point too close to the contour");

  // closed-loop trapezoid with the contour's tangent weights
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    acc += boundary_values[k] / (c.point(k) - y) * c.dz(k);
  return acc / std::complex<double>(0.0, 2.0 * std::numbers::pi);
}

ga::Multivector cauchy_reconstruct_mv(const topo::Contour& c,
                                      const std::vector<std::complex<double>>& boundary_values,
                                      std::complex<double> y) {
  std::complex<double> v = cauchy_reconstruct(c, boundary_values, y);
  ga::Multivector mv(ga::Signature(2, 0));
  mv.set_coefficient(0, v.real());
  mv.set_coefficient(0b11, v.imag());
  return mv;
}

double convergence_order(double coarse, double fine) {
  if (!(coarse > 0) || !(fine > 0)) return 0.0;
  return std::log2(coarse / fine);
}

}  // namespace gaflux::grid
