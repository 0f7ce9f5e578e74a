#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gaflux::ga {

// Real Clifford algebra Cl(p,q): generators 0..p-1 square to +1,
// p..p+q-1 to -1. Dimension is capped so 2^(p+q) blade tables stay
// desk-sized.
struct Signature {
  int p = 0;
  int q = 0;

  static constexpr int kMaxDimension = 12;

  Signature() = default;
  Signature(int p_, int q_);

  int dimension() const { return p + q; }
  std::size_t blade_count() const { return std::size_t{1} << dimension(); }

  // Square of generator i.
  int metric(int i) const { return i < p ? +1 : -1; }

  bool operator==(const Signature&) const = default;
};

// A basis blade is a set of generator indices, kept canonically as a
// bitmask (bit i = generator i). Mask 0 is the scalar blade.
using BladeMask = std::uint32_t;

int grade(BladeMask m);
BladeMask blade_from_indices(const std::vector<int>& indices);

// Sign from reordering the concatenation of two canonical blades into
// canonical ascending order (transposition count), metric not applied.
int reorder_sign(BladeMask a, BladeMask b);

// Full sign of the basis-blade product a*b in the given signature,
// including metric contraction of repeated generators. Result mask is
// always a^b.
int product_sign(const Signature& sig, BladeMask a, BladeMask b);

// Coefficients with magnitude below this are dropped after every
// operation, keeping the sparse map honest.
inline constexpr double kPruneTolerance = 1e-14;

class Multivector {
 public:
  explicit Multivector(Signature sig) : sig_(sig) {}

  static Multivector scalar(Signature sig, double value);
  static Multivector blade(Signature sig, BladeMask mask, double coeff = 1.0);
  // Generator e_i by 0-based index.
  static Multivector generator(Signature sig, int index, double coeff = 1.0);

  const Signature& signature() const { return sig_; }
  const std::map<BladeMask, double>& terms() const { return coeffs_; }

  double coefficient(BladeMask mask) const;
  void set_coefficient(BladeMask mask, double value);

  bool is_zero() const { return coeffs_.empty(); }
  // Euclidean norm over blade coefficients.
  double norm() const;
  double max_abs_coefficient() const;

  Multivector& prune(double tol = kPruneTolerance);

  Multivector operator-() const;
  Multivector& operator+=(const Multivector& rhs);
  Multivector& operator-=(const Multivector& rhs);
  Multivector& operator*=(double s);

  friend Multivector operator+(Multivector lhs, const Multivector& rhs) { return lhs += rhs; }
  friend Multivector operator-(Multivector lhs, const Multivector& rhs) { return lhs -= rhs; }
  friend Multivector operator*(Multivector lhs, double s) { return lhs *= s; }
  friend Multivector operator*(double s, Multivector rhs) { return rhs *= s; }

 private:
  Signature sig_;
  std::map<BladeMask, double> coeffs_;
};

Multivector geometric_product(const Multivector& a, const Multivector& b);
// Gradewise grade-|ga-gb| part of the geometric product.
Multivector inner_product(const Multivector& a, const Multivector& b);
// Gradewise grade-(ga+gb) part; zero where ga+gb exceeds the dimension.
Multivector outer_product(const Multivector& a, const Multivector& b);

Multivector grade_project(const Multivector& a, int k);
Multivector reverse(const Multivector& a);

// Inverse of a nonzero scalar multiple of a single blade. Throws
// std::domain_error for zero, mixed-grade, or multi-blade input.
Multivector blade_inverse(const Multivector& a);

// P_B(A) = (A.B)B^-1 and R_B(A) = (A^B)B^-1.
Multivector projection(const Multivector& a, const Multivector& b);
Multivector rejection(const Multivector& a, const Multivector& b);

inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}
inline Multivector operator^(const Multivector& a, const Multivector& b) {
  return outer_product(a, b);
}

// ---------------------------------------------------------------------
// Text form. Printing is 1-based (`e1` is generator 0), terms like
// `3.5*e1^e2 + 1`, prefixed with the signature header `Cl(p,q):`.
// Parsing accepts 0-based labels as well: if an `e0` appears anywhere in
// the expression the whole expression is read 0-based, matching the
// {1, e0, e1, e0e1} basis convention for Cl(2).
// Round-trips losslessly (coefficients printed at 17 significant digits).
// ---------------------------------------------------------------------

std::string blade_name(BladeMask mask);  // "1", "e1", "e1^e2", 1-based
std::string to_string(const Multivector& mv);

Multivector parse_multivector(const std::string& text);
// Body without the Cl(p,q) header.
Multivector parse_multivector_terms(const std::string& body, Signature sig);

}  // namespace gaflux::ga
