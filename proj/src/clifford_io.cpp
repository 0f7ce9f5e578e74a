#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gaflux/clifford.hpp"

namespace gaflux::ga {

namespace {

std::string format_coeff(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string blade_name(BladeMask mask) {
  if (mask == 0) return "1";
  std::string out;
  BladeMask m = mask;
  while (m) {
    int i = std::countr_zero(m);
    if (!out.empty()) out += '^';
    out += 'e' + std::to_string(i + 1);
    m &= m - 1;
  }
  return out;
}

std::string to_string(const Multivector& mv) {
  std::string out = "Cl(" + std::to_string(mv.signature().p) + "," +
                    std::to_string(mv.signature().q) + "):";
  if (mv.is_zero()) return out + " 0";

  // Terms sorted by (grade, mask) for a stable canonical layout.
  std::vector<std::pair<BladeMask, double>> terms(mv.terms().begin(), mv.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return std::pair(grade(a.first), a.first) < std::pair(grade(b.first), b.first);
  });

  bool first = true;
  for (const auto& [mask, c] : terms) {
    double mag = std::abs(c);
    out += first ? (c < 0 ? " -" : " ") : (c < 0 ? " - " : " + ");
    first = false;
    if (mask == 0)
      out += format_coeff(mag);
    else
      out += format_coeff(mag) + "*" + blade_name(mask);
  }
  return out;
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("multivector parse error at position " + std::to_string(pos) +
                                ": " + what);
  }
};

int parse_int(Cursor& cur) {
  cur.skip_ws();
  std::size_t start = cur.pos;
  while (cur.pos < cur.text.size() && std::isdigit(static_cast<unsigned char>(cur.text[cur.pos])))
    ++cur.pos;
  if (cur.pos == start) cur.fail("expected integer");
  return std::stoi(cur.text.substr(start, cur.pos - start));
}

double parse_number(Cursor& cur) {
  cur.skip_ws();
  std::size_t consumed = 0;
  double v;
  try {
    v = std::stod(cur.text.substr(cur.pos), &consumed);
  } catch (const std::exception&) {
    cur.fail("expected number");
  }
  cur.pos += consumed;
  return v;
}

// One blade: e3^e1^e2 -> list of raw labels (base resolved later).
std::vector<int> parse_blade_labels(Cursor& cur) {
  std::vector<int> labels;
  for (;;) {
    cur.expect('e');
    labels.push_back(parse_int(cur));
    if (!cur.accept('^')) break;
  }
  return labels;
}

struct RawTerm {
  double coeff = 1.0;
  std::vector<int> labels;  // generator labels as written
};

}  // namespace

Multivector parse_multivector_terms(const std::string& body, Signature sig) {
  Cursor cur{body};
  std::vector<RawTerm> terms;
  bool saw_zero_label = false;

  bool first = true;
  while (!cur.done()) {
    double sign = 1.0;
    if (cur.accept('-'))
      sign = -1.0;
    else if (!cur.accept('+') && !first)
      cur.fail("expected '+' or '-' between terms");
    first = false;

    RawTerm term;
    term.coeff = sign;
    bool have_factor = false;
    for (;;) {
      char c = cur.peek();
      if (c == 'e') {
        term.labels = parse_blade_labels(cur);
        have_factor = true;
        break;  // blade ends the term
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        term.coeff *= parse_number(cur);
        have_factor = true;
        if (!cur.accept('*')) break;
        continue;
      }
      break;
    }
    if (!have_factor) cur.fail("empty term");
    for (int l : term.labels)
      if (l == 0) saw_zero_label = true;
    terms.push_back(std::move(term));
  }

  Multivector out(sig);
  for (const auto& term : terms) {
    // Labels are 1-based unless an e0 appeared anywhere in the expression.
    // A wedge-written blade with a repeated generator is zero; out-of-order
    // generators pick up the transposition sign.
    BladeMask mask = 0;
    int sign = 1;
    bool zero = false;
    for (int label : term.labels) {
      int index = saw_zero_label ? label : label - 1;
      if (index < 0 || index >= sig.dimension())
        throw std::invalid_argument("multivector parse error: generator e" +
                                    std::to_string(label) + " out of range for Cl(" +
                                    std::to_string(sig.p) + "," + std::to_string(sig.q) + ")");
      BladeMask bit = BladeMask{1} << index;
      if (mask & bit) {
        zero = true;
        break;
      }
      sign *= reorder_sign(mask, bit);
      mask |= bit;
    }
    if (zero) continue;
    out += Multivector::blade(sig, mask, sign * term.coeff);
  }
  return out.prune();
}

Multivector parse_multivector(const std::string& text) {
  Cursor cur{text};
  cur.expect('C');
  cur.expect('l');
  cur.expect('(');
  int p = parse_int(cur);
  cur.expect(',');
  int q = parse_int(cur);
  cur.expect(')');
  cur.accept(':');
  return parse_multivector_terms(text.substr(cur.pos), Signature(p, q));
}

}  // namespace gaflux::ga
