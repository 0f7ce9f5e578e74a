#pragma once

#include <string>
#include <vector>

#include "gaflux/grid.hpp"

namespace gaflux::topo {

// Harmonic-kernel dimension of the discrete Hodge Laplacian per grade on
// a periodic (flat torus) grid. The Laplacian acts componentwise with the
// plain 3-point stencil per axis; a composed central-difference Dirac
// square would carry a spurious checkerboard null mode.
struct BettiReport {
  int grade = 0;
  int components = 0;        // blade components of this grade
  int kernel_dimension = 0;  // the Betti number
  double sigma_max = 0.0;
  double last_zero = 0.0;    // largest singular value counted as zero
  double first_nonzero = 0.0;
  double gap_ratio = 0.0;    // first_nonzero / last_zero
  std::string stencil = "three-point";
};

struct BettiOptions {
  double rank_tolerance = 1e-6;   // relative to sigma_max
  double required_gap = 100.0;    // demanded ratio across the zero cut
  std::size_t node_budget = 4096;
};

// Throws on non-periodic axes or a grid above the eigensolve budget.
std::vector<BettiReport> betti_numbers(const grid::Grid& g, ga::Signature sig, int max_grade,
                                       const BettiOptions& opts = {});

// Kernel basis lifted back to fields (for residual checks); grade must be
// within the grid dimension.
std::vector<grid::GridField> harmonic_kernel_fields(const grid::Grid& g, ga::Signature sig,
                                                    int grade, const BettiOptions& opts = {});

}  // namespace gaflux::topo
