#pragma once

// Test-only instantiation of symbolic fields with concrete functions.
// Every base symbol is bound to an exponential family A*exp(sum c_i x_i),
// whose partial derivatives of any order stay in closed form, so arbitrary
// derivative atoms evaluate exactly.

#include <array>
#include <cmath>
#include <map>
#include <string>

#include "gaflux/grid.hpp"
#include "gaflux/symbolic.hpp"

namespace gaflux::testsupport {

struct ExpBinding {
  double amplitude = 1.0;
  std::array<double, 3> slope{0, 0, 0};  // coefficient per coordinate

  double value(const std::array<double, 3>& x) const {
    return amplitude * std::exp(slope[0] * x[0] + slope[1] * x[1] + slope[2] * x[2]);
  }
};

using Bindings = std::map<std::string, ExpBinding>;

inline double eval_expr(const sym::ScalarExpr& e, const std::array<double, 3>& x,
                        const Bindings& bind);

inline double eval_atom(const sym::Atom& a, const std::array<double, 3>& x,
                        const Bindings& bind) {
  switch (a.kind) {
    case sym::Atom::Kind::Coord:
      return x[a.coord];
    case sym::Atom::Kind::Symbol:
      return bind.at(a.name).value(x);
    case sym::Atom::Kind::Deriv: {
      const ExpBinding& b = bind.at(a.name);
      double factor = 1.0;
      for (int i : a.deriv_index) factor *= b.slope[i];
      return factor * b.value(x);
    }
    case sym::Atom::Kind::Log:
      return std::log(bind.at(a.name).value(x));
    case sym::Atom::Kind::Exp:
      return std::exp(eval_expr(*a.arg, x, bind));
  }
  return 0.0;
}

inline double eval_expr(const sym::ScalarExpr& e, const std::array<double, 3>& x,
                        const Bindings& bind) {
  double sum = 0.0;
  for (const auto& term : e.terms) {
    double prod = term.coeff.value();
    for (const auto& f : term.factors) prod *= std::pow(eval_atom(f.atom, x, bind), f.power);
    sum += prod;
  }
  return sum;
}

inline grid::GridField instantiate(const sym::SymField& f, const grid::Grid& g,
                                   const Bindings& bind) {
  grid::GridField out(g, ga::Signature(f.dimension(), 0));
  for (const auto& [mask, expr] : f.terms()) {
    auto& plane = out.plane(mask);
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = eval_expr(expr, g.position(i), bind);
  }
  return out;
}

}  // namespace gaflux::testsupport
