#pragma once

#include <map>
#include <string>

#include "gaflux/evolve.hpp"
#include "gaflux/topo.hpp"

namespace gaflux::fields {

// Field specs are "name" or "name:key=val,key=val", e.g. "z_pow_3",
// "gaussian:sigma=1,x0=0", "plane:p=4". Unknown names throw.
struct FieldSpec {
  std::string name;
  std::map<std::string, double> params;

  static FieldSpec parse(const std::string& text);
  double get(const std::string& key, double fallback) const;
};

// Complex plane samplers: z_pow_<n>, conj_z, unit_phase, two_root,
// gaussian, plane.
topo::ComplexSampler complex_sampler(const FieldSpec& spec);

// The same samplers materialized on a 2D grid.
grid::GridField builtin_field(const FieldSpec& spec, const grid::Grid& g);

// 1D initial states for evolution: gaussian (sigma, x0, k),
// plane (k), two_gaussian (a, sign, sigma).
std::vector<std::complex<double>> initial_state(const FieldSpec& spec, const grid::Grid& g);

// Potentials: zero, barrier (v0, a, b), harmonic (k).
std::vector<double> potential(const FieldSpec& spec, const grid::Grid& g);

std::string known_fields();

}  // namespace gaflux::fields
