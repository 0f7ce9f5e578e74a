#include "gaflux/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gaflux::grid {

std::string boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "clamped"; }

Grid::Grid(int dim_, std::array<int, 3> shape_, std::array<double, 3> spacing_,
           std::array<double, 3> origin_, std::array<Boundary, 3> boundary_)
    : dim(dim_), shape(shape_), spacing(spacing_), origin(origin_), boundary(boundary_) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dimension must be 1, 2 or 3");
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      shape[a] = 1;
      continue;
    }
    if (shape[a] < 4) throw std::invalid_argument("Grid: need at least 4 points per axis");
    if (!(spacing[a] > 0)) throw std::invalid_argument("Grid: spacing must be positive");
  }
}

Grid Grid::line(int n, double lo, double hi, Boundary b) {
  double h = b == Boundary::Periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
  return Grid(1, {n, 1, 1}, {h, 1, 1}, {lo, 0, 0}, {b, b, b});
}

Grid Grid::square(int nx, int ny, double lo, double hi, Boundary b) {
  double hx = b == Boundary::Periodic ? (hi - lo) / nx : (hi - lo) / (nx - 1);
  double hy = b == Boundary::Periodic ? (hi - lo) / ny : (hi - lo) / (ny - 1);
  return Grid(2, {nx, ny, 1}, {hx, hy, 1}, {lo, lo, 0}, {b, b, b});
}

Grid Grid::box3(int n, double lo, double hi, Boundary b) {
  double h = b == Boundary::Periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
  return Grid(3, {n, n, n}, {h, h, h}, {lo, lo, lo}, {b, b, b});
}

std::size_t Grid::node_count() const {
  return std::size_t(shape[0]) * std::size_t(shape[1]) * std::size_t(shape[2]);
}

std::size_t Grid::stride(int axis) const {
  switch (axis) {
    case 0:
      return 1;
    case 1:
      return std::size_t(shape[0]);
    default:
      return std::size_t(shape[0]) * std::size_t(shape[1]);
  }
}

std::size_t Grid::index(int i0, int i1, int i2) const {
  return std::size_t(i0) + std::size_t(shape[0]) * (std::size_t(i1) + std::size_t(shape[1]) * i2);
}

std::array<int, 3> Grid::unravel(std::size_t idx) const {
  int i0 = int(idx % shape[0]);
  int i1 = int((idx / shape[0]) % shape[1]);
  int i2 = int(idx / (std::size_t(shape[0]) * shape[1]));
  return {i0, i1, i2};
}

std::array<double, 3> Grid::position(std::size_t idx) const {
  auto [i0, i1, i2] = unravel(idx);
  return {coordinate(0, i0), coordinate(1, i1), coordinate(2, i2)};
}

bool Grid::in_margin(std::size_t idx, int margin) const {
  auto ijk = unravel(idx);
  for (int a = 0; a < dim; ++a) {
    if (boundary[a] != Boundary::Clamped) continue;
    if (ijk[a] < margin || ijk[a] >= shape[a] - margin) return true;
  }
  return false;
}

GridField::GridField(Grid g, ga::Signature sig) : grid_(std::move(g)), sig_(sig) {}

std::vector<double>& GridField::plane(ga::BladeMask mask) {
  if (mask >= sig_.blade_count())
    throw std::invalid_argument("GridField: blade mask not valid for signature");
  auto it = planes_.find(mask);
  if (it == planes_.end())
    it = planes_.emplace(mask, std::vector<double>(grid_.node_count(), 0.0)).first;
  return it->second;
}

const std::vector<double>* GridField::find_plane(ga::BladeMask mask) const {
  auto it = planes_.find(mask);
  return it == planes_.end() ? nullptr : &it->second;
}

ga::Multivector GridField::value(std::size_t idx) const {
  ga::Multivector mv(sig_);
  for (const auto& [mask, data] : planes_) mv.set_coefficient(mask, data[idx]);
  return mv;
}

void GridField::set_value(std::size_t idx, const ga::Multivector& mv) {
  for (const auto& [mask, c] : mv.terms()) plane(mask)[idx] = c;
}

GridField& GridField::compact(double tol) {
  for (auto it = planes_.begin(); it != planes_.end();) {
    bool all_zero = true;
    for (double v : it->second)
      if (std::abs(v) > tol) {
        all_zero = false;
        break;
      }
    it = all_zero ? planes_.erase(it) : ++it;
  }
  return *this;
}

GridField GridField::operator-() const {
  GridField out(grid_, sig_);
  for (const auto& [mask, data] : planes_) {
    auto& p = out.plane(mask);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = -data[i];
  }
  return out;
}

namespace {
void require_compatible(const GridField& a, const GridField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("GridField: grid mismatch");
  if (!(a.signature() == b.signature()))
    throw std::invalid_argument("GridField: signature mismatch");
}
}  // namespace

GridField& GridField::operator+=(const GridField& rhs) {
  require_compatible(*this, rhs);
  for (const auto& [mask, data] : rhs.planes_) {
    auto& p = plane(mask);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += data[i];
  }
  return *this;
}

GridField& GridField::operator-=(const GridField& rhs) {
  require_compatible(*this, rhs);
  for (const auto& [mask, data] : rhs.planes_) {
    auto& p = plane(mask);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= data[i];
  }
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (auto& [mask, data] : planes_)
    for (double& v : data) v *= s;
  return *this;
}

std::vector<double> pointwise_norm(const GridField& f) {
  std::vector<double> out(f.grid().node_count(), 0.0);
  for (const auto& [mask, data] : f.planes())
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += data[i] * data[i];
  for (double& v : out) v = std::sqrt(v);
  return out;
}

FieldSummary summarize(const Grid& g, const std::vector<double>& pointwise, int margin) {
  FieldSummary s;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < pointwise.size(); ++i) {
    if (g.in_margin(i, margin)) continue;
    double v = std::abs(pointwise[i]);
    s.max = std::max(s.max, v);
    sum_sq += v * v;
    ++s.count;
  }
  s.rms = s.count ? std::sqrt(sum_sq / double(s.count)) : 0.0;
  return s;
}

GridField sample_scalar(const Grid& g, ga::Signature sig, const ScalarFn& f) {
  GridField out(g, sig);
  auto& p = out.plane(0);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = f(g.position(i));
  return out;
}

GridField sample_complex(const Grid& g, const ComplexFn& f) {
  if (g.dim != 2) throw std::invalid_argument("sample_complex: needs a 2D grid");
  GridField out(g, ga::Signature(2, 0));
  auto& re = out.plane(0);
  auto& im = out.plane(0b11);
  for (std::size_t i = 0; i < re.size(); ++i) {
    auto pos = g.position(i);
    std::complex<double> v = f(pos[0], pos[1]);
    re[i] = v.real();
    im[i] = v.imag();
  }
  return out;
}

GridField from_complex(const Grid& g, const std::vector<std::complex<double>>& values) {
  if (values.size() != g.node_count()) throw std::invalid_argument("from_complex: size mismatch");
  GridField out(g, ga::Signature(2, 0));
  auto& re = out.plane(0);
  auto& im = out.plane(0b11);
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  return out;
}

std::vector<std::complex<double>> to_complex(const GridField& f) {
  const std::vector<double>* re = f.find_plane(0);
  const std::vector<double>* im = f.find_plane(0b11);
  std::vector<std::complex<double>> out(f.grid().node_count());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = {re ? (*re)[i] : 0.0, im ? (*im)[i] : 0.0};
  return out;
}

std::complex<double> interpolate_complex(const GridField& f, double x, double y) {
  const Grid& g = f.grid();
  if (g.dim != 2) throw std::invalid_argument("interpolate_complex: needs a 2D grid");
  double fx = (x - g.origin[0]) / g.spacing[0];
  double fy = (y - g.origin[1]) / g.spacing[1];
  int ix = int(std::floor(fx)), iy = int(std::floor(fy));
  ix = std::max(0, std::min(ix, g.shape[0] - 2));
  iy = std::max(0, std::min(iy, g.shape[1] - 2));
  double tx = fx - ix, ty = fy - iy;

  const auto* re = f.find_plane(0);
  const auto* im = f.find_plane(0b11);
  auto at = [&](int i, int j) {
    std::size_t idx = g.index(i, j);
    return std::complex<double>(re ? (*re)[idx] : 0.0, im ? (*im)[idx] : 0.0);
  };
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
         (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
}

}  // namespace gaflux::grid
