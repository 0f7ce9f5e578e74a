#include "gaflux/topo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaflux/grid_ops.hpp"

namespace gaflux::topo {

using std::numbers::pi;
using Complex = std::complex<double>;

std::vector<Complex> sample_on_contour(const ComplexSampler& f, const Contour& c) {
  std::vector<Complex> out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = f(c.point(k));
  return out;
}

ComplexSampler sampler_from(const grid::GridField& f) {
  return [f](Complex z) { return grid::interpolate_complex(f, z.real(), z.imag()); };
}

namespace {

// One principal-branch increment; throws on the undersampled antipodal case.
double phase_step(Complex a, Complex b) {
  double d = std::arg(b / a);
  if (std::abs(d) >= pi - 1e-9)
    throw std::domain_error(
        "winding_number: phase jump >= pi between adjacent samples; refine the contour");
  return d;
}

void require_nonvanishing(const std::vector<Complex>& values, double tol) {
  for (const Complex& v : values)
    if (std::abs(v) < tol)
      throw std::domain_error("winding_number: |phi| below zero tolerance on the contour");
}

}  // namespace

std::vector<double> unwrap_phases(const std::vector<Complex>& values, const WindingOptions& opts) {
  require_nonvanishing(values, opts.zero_tolerance);
  std::vector<double> out(values.size() + 1);
  out[0] = std::arg(values[0]);
  for (std::size_t k = 0; k < values.size(); ++k)
    out[k + 1] = out[k] + phase_step(values[k], values[(k + 1) % values.size()]);
  return out;
}

int winding_number(const std::vector<Complex>& values, const WindingOptions& opts) {
  std::vector<double> phases = unwrap_phases(values, opts);
  double raw = (phases.back() - phases.front()) / (2 * pi);
  long n = std::lround(raw);
  if (std::abs(raw - double(n)) > opts.integer_tolerance)
    throw std::domain_error("winding_number: phase sum " + std::to_string(raw) +
                            " is not within tolerance of an integer");
  return int(n);
}

int winding_number(const ComplexSampler& f, const Contour& c, const WindingOptions& opts) {
  return winding_number(sample_on_contour(f, c), opts);
}

// ----------------------------------------------------------------------
// Brute-force zero oracle: scan the interior for local minima of |phi|,
// cluster them, and sum the windings of small probe circles. A multiple
// zero is one cluster whose probe winding carries the multiplicity.
// ----------------------------------------------------------------------

namespace {

struct Candidate {
  Complex where;
  double mag;
};

int probe_winding(const ComplexSampler& f, Complex center, double radius, const Contour& c,
                  const ZeroSearchOptions& opts) {
  radius = std::min(radius, 0.5 * c.min_distance(center));  // stay inside the contour
  for (double scale : {1.0, 1.37, 0.71, 1.9}) {
    try {
      Contour probe = Contour::circle(center, radius * scale, opts.probe_samples);
      return winding_number(f, probe, opts.winding);
    } catch (const std::domain_error&) {
      continue;  // probe grazed a zero; retry with a different radius
    }
  }
  throw std::domain_error("count_zeros: could not place a probe circle around (" +
                          std::to_string(center.real()) + ", " + std::to_string(center.imag()) +
                          ")");
}

}  // namespace

ZeroCountReport count_zeros_report(const ComplexSampler& f, const Contour& c,
                                   const ZeroSearchOptions& opts) {
  if (!c.is_simple())
    throw std::invalid_argument("count_zeros: contour must be simple for the argument principle");

  ZeroCountReport report;
  std::vector<Complex> boundary = sample_on_contour(f, c);
  report.argument_principle = winding_number(boundary, opts.winding);

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  double scale = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    Complex z = c.point(k);
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
    scale = std::max(scale, std::abs(boundary[k]));
  }

  int m = opts.scan_resolution;
  double hx = (xmax - xmin) / (m - 1), hy = (ymax - ymin) / (m - 1);
  double cell = std::hypot(hx, hy);
  double threshold = opts.relative_threshold * scale;

  std::vector<double> mag(std::size_t(m) * m, std::numeric_limits<double>::infinity());
  auto at = [&](int i, int j) -> double& { return mag[std::size_t(j) * m + i]; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      Complex z(xmin + i * hx, ymin + j * hy);
      if (!c.contains(z) || c.min_distance(z) < 2 * cell) continue;
      at(i, j) = std::abs(f(z));
    }

  std::vector<Candidate> candidates;
  for (int j = 1; j + 1 < m; ++j)
    for (int i = 1; i + 1 < m; ++i) {
      double v = at(i, j);
      if (!(v < threshold)) continue;
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          if (at(i + di, j + dj) < v) {
            is_min = false;
            break;
          }
        }
      if (is_min) candidates.push_back({Complex(xmin + i * hx, ymin + j * hy), v});
    }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.mag < b.mag; });
  std::vector<Candidate> clusters;
  for (const Candidate& cand : candidates) {
    bool merged = false;
    for (const Candidate& rep : clusters)
      if (std::abs(rep.where - cand.where) < 4 * cell) {
        merged = true;
        break;
      }
    if (!merged) clusters.push_back(cand);
  }

  report.oracle = 0;
  for (const Candidate& rep : clusters) {
    int w = probe_winding(f, rep.where, 4 * cell, c, opts);
    if (w != 0) {
      report.oracle += w;
      report.zeros.push_back(rep.where);
    }
  }
  report.oracle_agrees = report.oracle == report.argument_principle;
  return report;
}

int count_zeros(const ComplexSampler& f, const Contour& c, const ZeroSearchOptions& opts) {
  return count_zeros_report(f, c, opts).argument_principle;
}

// ----------------------------------------------------------------------
// Born-Sommerfeld loop integrals
// ----------------------------------------------------------------------

double born_sommerfeld_integral(const std::vector<Complex>& values, double hbar,
                                const WindingOptions& opts) {
  std::vector<double> theta = unwrap_phases(values, opts);
  // finite differences of S = hbar*theta, trapezoid-summed around the loop
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < theta.size(); ++k) total += hbar * (theta[k + 1] - theta[k]);
  return total;
}

double born_sommerfeld_line_integral(const grid::GridField& grad_s, const Contour& c) {
  const grid::Grid& g = grad_s.grid();
  if (g.dim != 2)
    throw std::invalid_argument("born_sommerfeld_line_integral: needs a 2D vector field");
  const auto* ex = grad_s.find_plane(0b01);
  const auto* ey = grad_s.find_plane(0b10);

  auto interp = [&](const std::vector<double>& data, double x, double y) {
    double fx = (x - g.origin[0]) / g.spacing[0];
    double fy = (y - g.origin[1]) / g.spacing[1];
    int ix = std::clamp(int(std::floor(fx)), 0, g.shape[0] - 2);
    int iy = std::clamp(int(std::floor(fy)), 0, g.shape[1] - 2);
    double tx = fx - ix, ty = fy - iy;
    auto at = [&](int i, int j) { return data[g.index(i, j)]; };
    return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
           (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
  };
  auto value = [&](Complex z) -> Complex {
    return {ex ? interp(*ex, z.real(), z.imag()) : 0.0,
            ey ? interp(*ey, z.real(), z.imag()) : 0.0};
  };

  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    Complex a = c.point(k), b = c.point(k + 1);
    Complex va = value(a), vb = value(b);
    Complex dl = b - a;
    total += 0.5 * ((va.real() + vb.real()) * dl.real() + (va.imag() + vb.imag()) * dl.imag());
  }
  return total;
}

// ----------------------------------------------------------------------
// verify_dbs
// ----------------------------------------------------------------------

WindingReport verify_dbs(const ComplexSampler& f, const Contour& c, double hbar,
                         const DbsOptions& opts) {
  WindingReport r;
  r.hbar = hbar;

  std::vector<Complex> boundary = sample_on_contour(f, c);
  r.winding = winding_number(boundary, opts.zeros.winding);
  r.loop_integral = born_sommerfeld_integral(boundary, hbar, opts.zeros.winding);

  ZeroCountReport zeros = count_zeros_report(f, c, opts.zeros);
  r.zero_count = zeros.argument_principle;
  r.oracle_agrees = zeros.oracle_agrees;

  double scale = 0.0, radius = 0.0;
  Complex centroid = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) centroid += c.point(k);
  centroid /= double(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    scale += std::abs(boundary[k]);
    radius = std::max(radius, std::abs(c.point(k) - centroid));
  }
  scale /= double(c.size());
  r.field_scale = scale;

  // monogenicity of the interior (the no-poles condition): sample a
  // bounding grid and restrict the Dirac residual to inside nodes
  {
    int n = opts.residual_grid;
    double h = 2 * radius / (n - 1);
    grid::Grid g(2, {n, n, 1}, {h, h, 1.0},
                 {centroid.real() - radius, centroid.imag() - radius, 0.0},
                 {grid::Boundary::Clamped, grid::Boundary::Clamped, grid::Boundary::Clamped});
    grid::GridField field =
        grid::sample_complex(g, [&](double x, double y) { return f(Complex(x, y)); });
    grid::ResidualReport res = grid::monogenic_residual(field);
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < res.pointwise.size(); ++i) {
      auto p = g.position(i);
      Complex z(p[0], p[1]);
      if (!c.contains(z) || c.min_distance(z) < 2 * h) continue;
      sum_sq += res.pointwise[i] * res.pointwise[i];
      ++count;
    }
    r.monogenic_rms = count ? std::sqrt(sum_sq / double(count)) : 0.0;
    double gradient_scale = std::max(scale / std::max(radius, 1e-300), 1e-300);
    r.monogenic_ok = r.monogenic_rms <= opts.monogenic_threshold * gradient_scale;
  }

  // closed-loop integral of a constant mass term; identically ~0
  Complex dz_sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) dz_sum += c.dz(k);
  r.mass_loop_integral = std::abs(opts.mass * dz_sum);

  double target = r.winding * 2 * pi * hbar;
  double tol = 1e-6 * std::max(std::abs(target), 2 * pi * hbar);
  r.consistent = (r.zero_count == r.winding) && r.oracle_agrees &&
                 std::abs(r.loop_integral - target) <= tol;
  return r;
}

}  // namespace gaflux::topo
