#include "gaflux/builtin_fields.hpp"

#include <cmath>
#include <stdexcept>

namespace gaflux::fields {

using Complex = std::complex<double>;

FieldSpec FieldSpec::parse(const std::string& text) {
  FieldSpec spec;
  auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (colon == std::string::npos) return spec;

  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    std::string item = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("field spec: expected key=value in '" + item + "'");
    spec.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

double FieldSpec::get(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

topo::ComplexSampler complex_sampler(const FieldSpec& spec) {
  const std::string& n = spec.name;
  if (n.rfind("z_pow_", 0) == 0) {
    int k = std::stoi(n.substr(6));
    return [k](Complex z) { return std::pow(z, k); };
  }
  if (n == "conj_z") return [](Complex z) { return std::conj(z); };
  if (n == "unit_phase") {
    return [](Complex z) {
      double r = std::abs(z);
      return r < 1e-300 ? Complex(0, 0) : z / r;
    };
  }
  if (n == "two_root") {
    Complex a(spec.get("a_re", 0.3), spec.get("a_im", 0.0));
    Complex b(spec.get("b_re", 0.0), spec.get("b_im", -0.4));
    return [a, b](Complex z) { return (z - a) * (z - b); };
  }
  if (n == "gaussian") {
    double sigma = spec.get("sigma", 1.0);
    double x0 = spec.get("x0", 0.0), y0 = spec.get("y0", 0.0);
    return [sigma, x0, y0](Complex z) {
      double dx = z.real() - x0, dy = z.imag() - y0;
      return Complex(std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)), 0.0);
    };
  }
  if (n == "plane") {
    double k = spec.get("p", spec.get("k", 1.0)) / spec.get("hbar", 1.0);
    return [k](Complex z) { return std::polar(1.0, k * z.real()); };
  }
  throw std::invalid_argument("unknown complex field '" + n + "' (known: " + known_fields() + ")");
}

grid::GridField builtin_field(const FieldSpec& spec, const grid::Grid& g) {
  if (g.dim != 2) throw std::invalid_argument("builtin_field: needs a 2D grid");
  topo::ComplexSampler f = complex_sampler(spec);
  return grid::sample_complex(g, [&](double x, double y) { return f(Complex(x, y)); });
}

std::vector<Complex> initial_state(const FieldSpec& spec, const grid::Grid& g) {
  if (g.dim != 1) throw std::invalid_argument("initial_state: needs a 1D grid");
  std::vector<Complex> out(g.node_count());
  const std::string& n = spec.name;

  if (n == "gaussian") {
    double sigma = spec.get("sigma", 1.0), x0 = spec.get("x0", 0.0), k = spec.get("k", 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      double x = g.position(i)[0];
      out[i] = std::polar(std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma)), k * x);
    }
    return out;
  }
  if (n == "plane") {
    double k = spec.get("p", spec.get("k", 1.0)) / spec.get("hbar", 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::polar(1.0, k * g.position(i)[0]);
    return out;
  }
  if (n == "two_gaussian") {
    double a = spec.get("a", 2.0), sigma = spec.get("sigma", 1.0), sign = spec.get("sign", 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      double x = g.position(i)[0];
      out[i] = Complex(std::exp(-(x - a) * (x - a) / (2 * sigma * sigma)) +
                           sign * std::exp(-(x + a) * (x + a) / (2 * sigma * sigma)),
                       0.0);
    }
    return out;
  }
  throw std::invalid_argument("unknown initial state '" + n + "'");
}

std::vector<double> potential(const FieldSpec& spec, const grid::Grid& g) {
  std::vector<double> out(g.node_count(), 0.0);
  const std::string& n = spec.name;
  if (n == "zero" || n.empty()) return out;
  if (n == "barrier") {
    double v0 = spec.get("v0", 50.0), a = spec.get("a", -1.0), b = spec.get("b", 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      double x = g.position(i)[0];
      if (x >= a && x <= b) out[i] = v0;
    }
    return out;
  }
  if (n == "harmonic") {
    double k = spec.get("k", 1.0), x0 = spec.get("x0", 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      double x = g.position(i)[0] - x0;
      out[i] = 0.5 * k * x * x;
    }
    return out;
  }
  throw std::invalid_argument("unknown potential '" + n + "'");
}

std::string known_fields() {
  return "z_pow_<n>, conj_z, unit_phase, two_root, gaussian, plane, two_gaussian; "
         "potentials: zero, barrier, harmonic";
}

}  // namespace gaflux::fields
