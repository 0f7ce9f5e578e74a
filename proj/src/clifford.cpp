#include "gaflux/clifford.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace gaflux::ga {

Signature::Signature(int p_, int q_) : p(p_), q(q_) {
  if (p < 0 || q < 0) throw std::invalid_argument("Signature: p and q must be nonnegative");
  if (p + q > kMaxDimension)
    throw std::invalid_argument("Signature: dimension " + std::to_string(p + q) +
                                " exceeds cap " + std::to_string(kMaxDimension));
}

int grade(BladeMask m) { return std::popcount(m); }

BladeMask blade_from_indices(const std::vector<int>& indices) {
  BladeMask m = 0;
  for (int i : indices) {
    if (i < 0 || i >= Signature::kMaxDimension)
      throw std::invalid_argument("blade_from_indices: generator index out of range");
    BladeMask bit = BladeMask{1} << i;
    if (m & bit) throw std::invalid_argument("blade_from_indices: repeated generator index");
    m |= bit;
  }
  return m;
}

int reorder_sign(BladeMask a, BladeMask b) {
  // Count generators of b that each generator of a must hop over to
  // reach ascending order.
  int swaps = 0;
  BladeMask t = a >> 1;
  while (t) {
    swaps += std::popcount(t & b);
    t >>= 1;
  }
  return (swaps & 1) ? -1 : +1;
}

int product_sign(const Signature& sig, BladeMask a, BladeMask b) {
  int sign = reorder_sign(a, b);
  BladeMask common = a & b;
  while (common) {
    int i = std::countr_zero(common);
    sign *= sig.metric(i);
    common &= common - 1;
  }
  return sign;
}

Multivector Multivector::scalar(Signature sig, double value) {
  return blade(sig, 0, value);
}

Multivector Multivector::blade(Signature sig, BladeMask mask, double coeff) {
  if (mask >= sig.blade_count())
    throw std::invalid_argument("Multivector::blade: mask not valid for signature");
  Multivector mv(sig);
  mv.set_coefficient(mask, coeff);
  return mv;
}

Multivector Multivector::generator(Signature sig, int index, double coeff) {
  if (index < 0 || index >= sig.dimension())
    throw std::invalid_argument("Multivector::generator: index out of range");
  return blade(sig, BladeMask{1} << index, coeff);
}

double Multivector::coefficient(BladeMask mask) const {
  auto it = coeffs_.find(mask);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void Multivector::set_coefficient(BladeMask mask, double value) {
  if (mask >= sig_.blade_count())
    throw std::invalid_argument("Multivector: blade mask not valid for signature");
  if (std::abs(value) < kPruneTolerance)
    coeffs_.erase(mask);
  else
    coeffs_[mask] = value;
}

double Multivector::norm() const {
  double s = 0.0;
  for (const auto& [m, c] : coeffs_) s += c * c;
  return std::sqrt(s);
}

double Multivector::max_abs_coefficient() const {
  double s = 0.0;
  for (const auto& [m, c] : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

Multivector& Multivector::prune(double tol) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) < tol)
      it = coeffs_.erase(it);
    else
      ++it;
  }
  return *this;
}

Multivector Multivector::operator-() const {
  Multivector out(sig_);
  for (const auto& [m, c] : coeffs_) out.coeffs_[m] = -c;
  return out;
}

namespace {
void require_same_signature(const Multivector& a, const Multivector& b) {
  if (!(a.signature() == b.signature()))
    throw std::invalid_argument("multivector signature mismatch: Cl(" +
                                std::to_string(a.signature().p) + "," +
                                std::to_string(a.signature().q) + ") vs Cl(" +
                                std::to_string(b.signature().p) + "," +
                                std::to_string(b.signature().q) + ")");
}
}  // namespace

Multivector& Multivector::operator+=(const Multivector& rhs) {
  require_same_signature(*this, rhs);
  for (const auto& [m, c] : rhs.coeffs_) coeffs_[m] += c;
  return prune();
}

Multivector& Multivector::operator-=(const Multivector& rhs) {
  require_same_signature(*this, rhs);
  for (const auto& [m, c] : rhs.coeffs_) coeffs_[m] -= c;
  return prune();
}

Multivector& Multivector::operator*=(double s) {
  for (auto& [m, c] : coeffs_) c *= s;
  return prune();
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  require_same_signature(a, b);
  Multivector out(a.signature());
  std::map<BladeMask, double> acc;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms())
      acc[ma ^ mb] += product_sign(a.signature(), ma, mb) * ca * cb;
  for (const auto& [m, c] : acc) out.set_coefficient(m, c);
  return out.prune();
}

namespace {
enum class GradeRule { Inner, Outer };

Multivector gradewise_product(const Multivector& a, const Multivector& b, GradeRule rule) {
  require_same_signature(a, b);
  Multivector out(a.signature());
  std::map<BladeMask, double> acc;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      int ga = grade(ma), gb = grade(mb);
      int gp = grade(ma ^ mb);
      int keep = rule == GradeRule::Inner ? std::abs(ga - gb) : ga + gb;
      if (gp != keep) continue;
      acc[ma ^ mb] += product_sign(a.signature(), ma, mb) * ca * cb;
    }
  }
  for (const auto& [m, c] : acc) out.set_coefficient(m, c);
  return out.prune();
}
}  // namespace

Multivector inner_product(const Multivector& a, const Multivector& b) {
  return gradewise_product(a, b, GradeRule::Inner);
}

Multivector outer_product(const Multivector& a, const Multivector& b) {
  return gradewise_product(a, b, GradeRule::Outer);
}

Multivector grade_project(const Multivector& a, int k) {
  Multivector out(a.signature());
  for (const auto& [m, c] : a.terms())
    if (grade(m) == k) out.set_coefficient(m, c);
  return out;
}

Multivector reverse(const Multivector& a) {
  Multivector out(a.signature());
  for (const auto& [m, c] : a.terms()) {
    int k = grade(m);
    int sign = (k * (k - 1) / 2) % 2 == 0 ? +1 : -1;
    out.set_coefficient(m, sign * c);
  }
  return out;
}

Multivector blade_inverse(const Multivector& a) {
  if (a.is_zero()) throw std::domain_error("blade_inverse: zero multivector");
  int k = -1;
  for (const auto& [m, c] : a.terms()) {
    if (k < 0) k = grade(m);
    if (grade(m) != k)
      throw std::domain_error("blade_inverse: mixed-grade input is not a blade");
  }
  // For a blade B, B*reverse(B) is a nonzero scalar and B^-1 = reverse(B)/that.
  Multivector rev = reverse(a);
  Multivector sq = geometric_product(a, rev);
  double s = sq.coefficient(0);
  Multivector residue = sq - Multivector::scalar(a.signature(), s);
  if (residue.max_abs_coefficient() > 1e-12 * std::max(1.0, std::abs(s)))
    throw std::domain_error("blade_inverse: input is not a blade (B*~B is not scalar)");
  if (std::abs(s) < kPruneTolerance) throw std::domain_error("blade_inverse: null blade");
  return rev * (1.0 / s);
}

Multivector projection(const Multivector& a, const Multivector& b) {
  return geometric_product(inner_product(a, b), blade_inverse(b));
}

Multivector rejection(const Multivector& a, const Multivector& b) {
  return geometric_product(outer_product(a, b), blade_inverse(b));
}

}  // namespace gaflux::ga
