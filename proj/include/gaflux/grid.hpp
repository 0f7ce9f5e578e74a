#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "gaflux/clifford.hpp"

namespace gaflux::grid {

enum class Boundary { Periodic, Clamped };

std::string boundary_name(Boundary b);

// Uniform rectangular grid, 1 to 3 axes. Axis a pairs with generator a of
// whatever signature the field carries. Periodic axes cover [lo, hi) with
// spacing (hi-lo)/n; clamped axes include both endpoints with spacing
// (hi-lo)/(n-1).
struct Grid {
  int dim = 1;
  std::array<int, 3> shape{1, 1, 1};
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<Boundary, 3> boundary{Boundary::Clamped, Boundary::Clamped, Boundary::Clamped};

  Grid() = default;
  Grid(int dim_, std::array<int, 3> shape_, std::array<double, 3> spacing_,
       std::array<double, 3> origin_, std::array<Boundary, 3> boundary_);

  static Grid line(int n, double lo, double hi, Boundary b);
  static Grid square(int nx, int ny, double lo, double hi, Boundary b);
  static Grid box3(int n, double lo, double hi, Boundary b);

  std::size_t node_count() const;
  std::size_t stride(int axis) const;
  std::size_t index(int i0, int i1 = 0, int i2 = 0) const;
  std::array<int, 3> unravel(std::size_t idx) const;
  std::array<double, 3> position(std::size_t idx) const;
  double coordinate(int axis, int i) const { return origin[axis] + spacing[axis] * i; }

  // True when the node sits within `margin` cells of a clamped edge.
  bool in_margin(std::size_t idx, int margin) const;

  bool operator==(const Grid&) const = default;
};

// Multivector samples on a grid, stored as one dense plane of doubles per
// basis blade that is present. A Cl(2)-even field therefore holds exactly
// the two planes of the embedding u + Iv <-> u*1 + v*e1^e2.
class GridField {
 public:
  GridField(Grid g, ga::Signature sig);

  const Grid& grid() const { return grid_; }
  const ga::Signature& signature() const { return sig_; }
  const std::map<ga::BladeMask, std::vector<double>>& planes() const { return planes_; }

  std::vector<double>& plane(ga::BladeMask mask);             // creates if absent
  const std::vector<double>* find_plane(ga::BladeMask mask) const;

  ga::Multivector value(std::size_t idx) const;
  void set_value(std::size_t idx, const ga::Multivector& mv);

  // Drops planes whose entries are all below the coefficient pruning
  // threshold (stencils on constant data leave ~1e-16 residue).
  GridField& compact(double tol = ga::kPruneTolerance);

  GridField operator-() const;
  GridField& operator+=(const GridField& rhs);
  GridField& operator-=(const GridField& rhs);
  GridField& operator*=(double s);
  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(GridField a, double s) { return a *= s; }
  friend GridField operator*(double s, GridField a) { return a *= s; }

 private:
  Grid grid_;
  ga::Signature sig_;
  std::map<ga::BladeMask, std::vector<double>> planes_;
};

// Pointwise Euclidean norm over blade coefficients.
std::vector<double> pointwise_norm(const GridField& f);

struct FieldSummary {
  double max = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
};

// Max and RMS over nodes, excluding `margin` cells next to clamped edges
// (one-sided stencils carry different error constants there).
FieldSummary summarize(const Grid& g, const std::vector<double>& pointwise, int margin = 2);

// ---------------------------------------------------------------------
// Sampling helpers
// ---------------------------------------------------------------------

using ScalarFn = std::function<double(std::array<double, 3>)>;
using ComplexFn = std::function<std::complex<double>(double, double)>;

GridField sample_scalar(const Grid& g, ga::Signature sig, const ScalarFn& f);

// Complex field in the Cl(2) even subalgebra on a 2D grid.
GridField sample_complex(const Grid& g, const ComplexFn& f);

GridField from_complex(const Grid& g, const std::vector<std::complex<double>>& values);
std::vector<std::complex<double>> to_complex(const GridField& f);

// Bilinear interpolation of a complex (Cl(2)-even) field on a 2D grid.
std::complex<double> interpolate_complex(const GridField& f, double x, double y);

}  // namespace gaflux::grid
