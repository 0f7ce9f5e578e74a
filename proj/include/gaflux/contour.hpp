#pragma once

#include <complex>
#include <vector>

namespace gaflux::topo {

// Closed ordered sample path in the plane (last point joins back to the
// first). Loop integrals and winding counts walk these samples.
class Contour {
 public:
  static Contour circle(std::complex<double> center, double radius, int samples);
  static Contour from_points(std::vector<std::complex<double>> points);

  std::size_t size() const { return points_.size(); }
  std::complex<double> point(std::size_t i) const { return points_[i % points_.size()]; }
  const std::vector<std::complex<double>>& points() const { return points_; }

  double max_spacing() const;

  // Quadrature weight dz_k for closed-loop trapezoid sums. Parametric
  // circles use the exact tangent (spectrally accurate for smooth
  // integrands); point-list contours fall back to the central difference
  // (z_{k+1} - z_{k-1})/2.
  std::complex<double> dz(std::size_t k) const;

  // Even-odd ray test; true for strictly interior points.
  bool contains(std::complex<double> z) const;
  double min_distance(std::complex<double> z) const;

  // O(n^2) segment scan; needed before argument-principle use.
  bool is_simple() const;

 private:
  explicit Contour(std::vector<std::complex<double>> pts);
  std::vector<std::complex<double>> points_;
  bool parametric_circle_ = false;
  std::complex<double> center_;
};

}  // namespace gaflux::topo
