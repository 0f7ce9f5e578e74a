#include "gaflux/contour.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaflux::topo {

Contour::Contour(std::vector<std::complex<double>> pts) : points_(std::move(pts)) {
  if (points_.size() < 16) throw std::invalid_argument("Contour: need at least 16 samples");
}

Contour Contour::circle(std::complex<double> center, double radius, int samples) {
  if (radius <= 0) throw std::invalid_argument("Contour: radius must be positive");
  std::vector<std::complex<double>> pts(samples);
  for (int j = 0; j < samples; ++j) {
    double t = 2.0 * std::numbers::pi * j / samples;
    pts[j] = center + radius * std::complex<double>(std::cos(t), std::sin(t));
  }
  Contour c(std::move(pts));
  c.parametric_circle_ = true;
  c.center_ = center;
  return c;
}

Contour Contour::from_points(std::vector<std::complex<double>> points) {
  // drop an explicit duplicate closing point
  if (points.size() > 1 && std::abs(points.front() - points.back()) < 1e-15) points.pop_back();
  return Contour(std::move(points));
}

double Contour::max_spacing() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i)
    m = std::max(m, std::abs(point(i + 1) - point(i)));
  return m;
}

std::complex<double> Contour::dz(std::size_t k) const {
  if (parametric_circle_) {
    double dt = 2.0 * std::numbers::pi / double(points_.size());
    return std::complex<double>(0.0, dt) * (point(k) - center_);
  }
  return 0.5 * (point(k + 1) - point(k + points_.size() - 1));
}

bool Contour::contains(std::complex<double> z) const {
  bool inside = false;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    std::complex<double> a = point(i), b = point(i + 1);
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      double xcross =
          a.real() + (z.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
      if (z.real() < xcross) inside = !inside;
    }
  }
  return inside;
}

double Contour::min_distance(std::complex<double> z) const {
  double best = std::abs(z - points_[0]);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    std::complex<double> a = point(i), d = point(i + 1) - point(i);
    double len2 = std::norm(d);
    double t = len2 > 0 ? std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::abs(z - (a + t * d)));
  }
  return best;
}

namespace {

int orientation(std::complex<double> a, std::complex<double> b, std::complex<double> c) {
  double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
             (b.imag() - a.imag()) * (c.real() - a.real());
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool segments_cross(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                    std::complex<double> d) {
  int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

bool Contour::is_simple() const {
  std::size_t n = points_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // closing edge shares a vertex
      if (segments_cross(point(i), point(i + 1), point(j), point(j + 1))) return false;
    }
  }
  return true;
}

}  // namespace gaflux::topo
