#include "gaflux/betti.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>

namespace gaflux::topo {

namespace {

void validate(const grid::Grid& g, const ga::Signature& sig, const BettiOptions& opts) {
  for (int a = 0; a < g.dim; ++a)
    if (g.boundary[a] != grid::Boundary::Periodic)
      throw std::invalid_argument("betti_numbers: all axes must be periodic (flat torus)");
  if (g.node_count() > opts.node_budget)
    throw std::invalid_argument("betti_numbers: grid exceeds the eigensolve budget of " +
                                std::to_string(opts.node_budget) + " nodes");
  if (sig.q != 0 || sig.dimension() != g.dim)
    throw std::invalid_argument(
        "betti_numbers: signature must be the Euclidean algebra of the grid dimension");
}

// Scalar 3-point stencil Laplacian on the periodic grid, assembled sparse.
// On a flat torus the grade-k Hodge Laplacian is block diagonal with one
// identical copy of this matrix per blade component, so its spectrum is
// computed once and shared.
Eigen::SparseMatrix<double> scalar_stencil(const grid::Grid& g) {
  std::size_t n = g.node_count();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(n * (2 * g.dim + 1));
  for (std::size_t idx = 0; idx < n; ++idx) {
    auto ijk = g.unravel(idx);
    double diag = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      double w = 1.0 / (g.spacing[a] * g.spacing[a]);
      int m = g.shape[a];
      int up = (ijk[a] + 1) % m, dn = (ijk[a] - 1 + m) % m;
      std::size_t iu = idx + std::size_t(up - ijk[a]) * g.stride(a);
      std::size_t id = idx + std::size_t(dn - ijk[a]) * g.stride(a);
      trip.emplace_back(int(idx), int(iu), w);
      trip.emplace_back(int(idx), int(id), w);
      diag -= 2.0 * w;
    }
    trip.emplace_back(int(idx), int(idx), diag);
  }
  Eigen::SparseMatrix<double> L{Eigen::Index(n), Eigen::Index(n)};
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

struct BlockSpectrum {
  std::vector<double> singular;  // ascending |eigenvalue|
  Eigen::MatrixXd vectors;       // columns, same order as eigenvalues
  int kernel = 0;
  double sigma_max = 0, last_zero = 0, first_nonzero = 0, gap_ratio = 0;
};

BlockSpectrum block_spectrum(const grid::Grid& g, const BettiOptions& opts) {
  Eigen::SparseMatrix<double> L = scalar_stencil(g);
  Eigen::MatrixXd dense = Eigen::MatrixXd(L);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("betti_numbers: eigensolve failed");

  BlockSpectrum s;
  Eigen::VectorXd ev = solver.eigenvalues();
  s.vectors = solver.eigenvectors();
  s.singular.resize(ev.size());
  std::vector<int> order(ev.size());
  for (int i = 0; i < ev.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(ev[a]) < std::abs(ev[b]); });
  Eigen::MatrixXd sorted(s.vectors.rows(), s.vectors.cols());
  for (int i = 0; i < ev.size(); ++i) {
    s.singular[i] = std::abs(ev[order[i]]);
    sorted.col(i) = s.vectors.col(order[i]);
  }
  s.vectors = std::move(sorted);

  s.sigma_max = s.singular.back();
  double cut = opts.rank_tolerance * s.sigma_max;
  while (s.kernel < int(s.singular.size()) && s.singular[s.kernel] < cut) ++s.kernel;
  s.last_zero = s.kernel > 0 ? s.singular[s.kernel - 1] : 0.0;
  s.first_nonzero = s.kernel < int(s.singular.size()) ? s.singular[s.kernel] : 0.0;
  s.gap_ratio = s.first_nonzero / std::max(s.last_zero, 1e-300);
  return s;
}

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return int(r);
}

std::vector<ga::BladeMask> grade_masks(int dim, int k) {
  std::vector<ga::BladeMask> masks;
  for (ga::BladeMask m = 0; m < (ga::BladeMask{1} << dim); ++m)
    if (ga::grade(m) == k) masks.push_back(m);
  return masks;
}

}  // namespace

std::vector<BettiReport> betti_numbers(const grid::Grid& g, ga::Signature sig, int max_grade,
                                       const BettiOptions& opts) {
  validate(g, sig, opts);
  BlockSpectrum spec = block_spectrum(g, opts);

  std::vector<BettiReport> out;
  for (int k = 0; k <= max_grade; ++k) {
    BettiReport r;
    r.grade = k;
    r.components = binomial(g.dim, k);
    if (r.components == 0) {
      out.push_back(r);  // grade above the dimension: empty operator
      continue;
    }
    r.kernel_dimension = r.components * spec.kernel;
    r.sigma_max = spec.sigma_max;
    r.last_zero = spec.last_zero;
    r.first_nonzero = spec.first_nonzero;
    r.gap_ratio = spec.gap_ratio;
    out.push_back(r);
  }
  return out;
}

std::vector<grid::GridField> harmonic_kernel_fields(const grid::Grid& g, ga::Signature sig,
                                                    int grade, const BettiOptions& opts) {
  validate(g, sig, opts);
  BlockSpectrum spec = block_spectrum(g, opts);

  std::vector<grid::GridField> fields;
  for (ga::BladeMask mask : grade_masks(g.dim, grade)) {
    for (int v = 0; v < spec.kernel; ++v) {
      grid::GridField f(g, sig);
      auto& plane = f.plane(mask);
      for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = spec.vectors(int(i), v);
      fields.push_back(std::move(f));
    }
  }
  return fields;
}

}  // namespace gaflux::topo
