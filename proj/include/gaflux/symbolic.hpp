#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gaflux/clifford.hpp"

namespace gaflux::sym {

// Exact rational coefficients; all folding happens in Q.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n) {}
  Rational(long long n, long long d);

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }
  Rational inverse() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator-(Rational a) { return Rational(-a.num, a.den); }
  friend bool operator==(const Rational&, const Rational&) = default;

  std::string str() const;
  double value() const { return double(num) / double(den); }
};

struct ScalarExpr;

// One multiplicative atom of a scalar expression. Coordinates and
// derivative marks use 0-based indices internally; text labels are
// 1-based (x1, d_1).
struct Atom {
  enum class Kind { Coord, Symbol, Deriv, Log, Exp };
  Kind kind = Kind::Symbol;
  std::string name;                      // Symbol, Deriv, Log
  int coord = 0;                         // Coord
  std::vector<int> deriv_index;          // Deriv: sorted multi-index, repeats allowed
  std::shared_ptr<const ScalarExpr> arg; // Exp

  static Atom coordinate(int i);
  static Atom symbol(std::string n);
  static Atom derivative(std::string n, std::vector<int> idx);
  static Atom log_of(std::string n);
  static Atom exp_of(ScalarExpr a);
};

int compare(const Atom& a, const Atom& b);
int compare(const ScalarExpr& a, const ScalarExpr& b);

struct Factor {
  Atom atom;
  int power = 1;
};

struct Term {
  Rational coeff = Rational(1);
  std::vector<Factor> factors;  // sorted, unique atoms
};

// Canonical sum of products. Every constructor and operation returns the
// normal form: factors sorted, like atoms folded by power, exp factors
// merged through their arguments, like terms merged, zeros dropped.
struct ScalarExpr {
  std::vector<Term> terms;

  static ScalarExpr zero() { return {}; }
  static ScalarExpr constant(Rational r);
  static ScalarExpr one() { return constant(Rational(1)); }
  static ScalarExpr atom(Atom a, int power = 1);

  bool is_zero() const { return terms.empty(); }
  bool is_one() const;

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return compare(a, b) == 0; }
};

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);

// Formal inverse; defined for a single product term whose factors are all
// symbols or exponentials. Throws std::domain_error otherwise.
ScalarExpr expr_inverse(const ScalarExpr& a);

// Which coordinates each symbol depends on (0-based). Symbols absent from
// the map are constants.
using DepsMap = std::map<std::string, std::set<int>>;

// d/dx_i with the usual linearity/Leibniz/exp/ln rules; derivatives of
// symbols are opaque multi-index atoms, symmetric in the indices.
ScalarExpr derivative(const ScalarExpr& a, int i, const DepsMap& deps);

std::string to_string(const ScalarExpr& a);

// ---------------------------------------------------------------------
// Symbolic multivector fields over Cl(n,0): sums of scalar expressions
// times basis blades, canonicalized per blade.
// ---------------------------------------------------------------------

class SymField {
 public:
  explicit SymField(int dimension, DepsMap deps = {});

  int dimension() const { return dim_; }
  const DepsMap& deps() const { return deps_; }
  const std::map<ga::BladeMask, ScalarExpr>& terms() const { return terms_; }

  void add_term(ga::BladeMask mask, const ScalarExpr& expr);
  ScalarExpr component(ga::BladeMask mask) const;
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const SymField& a, const SymField& b);

 private:
  int dim_;
  DepsMap deps_;
  std::map<ga::BladeMask, ScalarExpr> terms_;
};

SymField operator+(const SymField& a, const SymField& b);
SymField operator-(const SymField& a, const SymField& b);
SymField operator-(const SymField& a);
SymField operator*(const ScalarExpr& s, const SymField& f);

SymField geometric_product(const SymField& a, const SymField& b);
SymField inner_product(const SymField& a, const SymField& b);
SymField outer_product(const SymField& a, const SymField& b);

// Re-normalizes; the result of every operation is already canonical, so
// this is idempotent by construction.
SymField canonicalize(const SymField& f);

// Full Dirac derivative: sum_i e_i (d_i F), and its grade-split parts.
SymField dirac_apply(const SymField& f);
SymField interior(const SymField& f);
SymField exterior(const SymField& f);

struct FluxRatios {
  SymField internal;  // (del . G) G^-1
  SymField external;  // (del ^ G) G^-1
};

// Requires G to be a single invertible blade term.
FluxRatios flux_ratios(const SymField& g);

// Text grammar (1-based labels; an e0/x0/d_0 anywhere switches the whole
// expression to 0-based):
//   field  := ['-'] term (('+'|'-') term)*
//   term   := scalarfactor* blade?
//   blade  := 'e'idx ('^' 'e'idx)*
//   scalarfactor := number | symbol | x<idx> | d_<idx>(target) | exp(scalar)
//                   | ln(symbol) | '(' scalar ')'  with optional ^int power,
//                   joined by '*', '/' or juxtaposition
SymField parse(const std::string& text, int dimension, DepsMap deps = {});

std::string to_string(const SymField& f);

// ---------------------------------------------------------------------
// Mechanical verification of fixed identities.
// ---------------------------------------------------------------------

struct IdentityCheck {
  std::string name;
  std::string expected;
  std::string computed;
  bool pass = false;
};

// The worked bivector-flux identities for F(x1,x2) = f e1^e2 and
// G(x1,x3) = g e1^e2: interior/exterior derivatives and their blade
// ratios, all by exact canonical-form equality.
std::vector<IdentityCheck> section2_flux_suite();

// The gauge-coupled system del.G = A.G, del^G = A^G (and the ratio
// forms) under A2 = 0, g = exp(A1 x1 + A3 x3), plus a perturbed
// solution that must fail the exterior equation and the trivial A = 0
// case.
std::vector<IdentityCheck> verify_gauge_example();

}  // namespace gaflux::sym
