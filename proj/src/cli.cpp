#include "gaflux/cli.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaflux/acceptance.hpp"
#include "gaflux/betti.hpp"
#include "gaflux/builtin_fields.hpp"
#include "gaflux/evolve.hpp"
#include "gaflux/field_io.hpp"
#include "gaflux/grid_ops.hpp"
#include "gaflux/report.hpp"
#include "gaflux/symbolic.hpp"
#include "gaflux/topo.hpp"

namespace gaflux::cli {

using nlohmann::json;
using Complex = std::complex<double>;

namespace {

// Effective configuration: defaults, overridden by flags, overridden by
// the --config file. Handlers read only the merged bag, which is echoed
// into every report.
struct ConfigBag {
  json data = json::object();

  void set(const std::string& key, const json& v) { data[key] = v; }
  void overlay(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file " + config_path);
    json file = json::parse(in);
    for (auto& [k, v] : file.items()) data[k] = v;
  }

  double num(const std::string& key) const { return data.at(key).get<double>(); }
  int integer(const std::string& key) const { return data.at(key).get<int>(); }
  std::string str(const std::string& key) const { return data.at(key).get<std::string>(); }
  bool flag(const std::string& key) const { return data.at(key).get<bool>(); }
};

std::string out_dir(const ConfigBag& bag) {
  std::string dir = bag.str("out");
  std::filesystem::create_directories(dir);
  return dir;
}

int finish(const ConfigBag& bag, report::RunReport& rep, const std::string& name,
           std::chrono::steady_clock::time_point start) {
  rep.command = name;
  rep.version = report::kVersion;
  rep.config_json = bag.data.dump();
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cout << rep.to_table();
  std::string path = out_dir(bag) + "/" + name + "_report.json";
  report::save_report(path, rep);
  std::cout << (rep.pass() ? "PASS" : "FAIL") << " (report: " << path << ")\n";
  return rep.pass() ? 0 : 1;
}

void save_field_data(const ConfigBag& bag, const std::string& stem, const grid::GridField& f) {
  std::string base = out_dir(bag) + "/" + stem;
  if (bag.str("format") == "csv")
    io::write_field_csv(base + ".csv", f);
  else
    io::save_field(base + ".json", f);
}

grid::Grid grid_from_bag(const ConfigBag& bag, int dim) {
  int n = bag.integer("n");
  double lo = bag.num("lo"), hi = bag.num("hi");
  grid::Boundary b =
      bag.str("boundary") == "periodic" ? grid::Boundary::Periodic : grid::Boundary::Clamped;
  return dim == 1 ? grid::Grid::line(n, lo, hi, b) : grid::Grid::square(n, n, lo, hi, b);
}

topo::Contour contour_from_bag(const ConfigBag& bag) {
  std::string file = bag.str("contour_file");
  if (!file.empty()) return io::read_contour(file);
  std::string circle = bag.str("circle");
  double cx, cy, r;
  int samples;
  if (std::sscanf(circle.c_str(), "%lf,%lf,%lf,%d", &cx, &cy, &r, &samples) != 4)
    throw std::runtime_error("expected --circle cx,cy,r,samples");
  return topo::Contour::circle({cx, cy}, r, samples);
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

report::CheckResult bool_check(const std::string& name, bool ok, const std::string& detail) {
  report::CheckResult c;
  c.name = name;
  c.pass = ok;
  c.expected = "true";
  c.computed = detail.empty() ? (ok ? "true" : "false") : detail;
  return c;
}

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------

int run_ga_eval(const ConfigBag& bag) {
  auto start = Clock::now();
  ga::Multivector a = ga::parse_multivector(bag.str("a"));
  std::string op = bag.str("op");

  ga::Multivector result(a.signature());
  if (op == "reverse") {
    result = ga::reverse(a);
  } else if (op == "inverse") {
    result = ga::blade_inverse(a);
  } else if (op == "grade") {
    result = ga::grade_project(a, bag.integer("grade"));
  } else {
    ga::Multivector b = ga::parse_multivector(bag.str("b"));
    if (op == "geometric")
      result = a * b;
    else if (op == "inner")
      result = ga::inner_product(a, b);
    else if (op == "outer")
      result = ga::outer_product(a, b);
    else if (op == "project")
      result = ga::projection(a, b);
    else if (op == "reject")
      result = ga::rejection(a, b);
    else
      throw std::runtime_error("unknown op '" + op +
                               "' (geometric|inner|outer|project|reject|reverse|inverse|grade)");
  }

  report::RunReport rep;
  report::CheckResult c;
  c.name = "evaluate " + op;
  c.pass = true;
  c.expected = "-";
  c.computed = ga::to_string(result);
  rep.checks.push_back(c);
  return finish(bag, rep, "ga-eval", start);
}

int run_sym_verify(const ConfigBag& bag) {
  auto start = Clock::now();
  std::string suite = bag.str("suite");
  std::vector<sym::IdentityCheck> checks;
  if (suite == "paper-section-2" || suite == "all") {
    auto s = sym::section2_flux_suite();
    checks.insert(checks.end(), s.begin(), s.end());
  }
  if (suite == "gauge" || suite == "all") {
    auto s = sym::verify_gauge_example();
    checks.insert(checks.end(), s.begin(), s.end());
  }
  if (checks.empty()) throw std::runtime_error("unknown suite (paper-section-2|gauge|all)");

  report::RunReport rep;
  for (const auto& c : checks) {
    report::CheckResult r;
    r.name = c.name;
    r.pass = c.pass;
    r.expected = c.expected;
    r.computed = c.computed;
    rep.checks.push_back(r);
  }
  return finish(bag, rep, "sym-verify", start);
}

int run_grid_analyze(const ConfigBag& bag) {
  auto start = Clock::now();
  grid::Grid g = grid_from_bag(bag, 2);
  fields::FieldSpec spec = fields::FieldSpec::parse(bag.str("field"));
  grid::GridField f = fields::builtin_field(spec, g);
  std::string op = bag.str("op");

  report::RunReport rep;
  if (op == "dirac" || op == "interior" || op == "exterior" || op == "laplacian") {
    grid::GridField out = op == "dirac"      ? grid::dirac_op(f)
                          : op == "interior" ? grid::interior_derivative(f)
                          : op == "exterior" ? grid::exterior_derivative(f)
                                             : grid::laplacian(f);
    save_field_data(bag, "grid_analyze_" + op, out);
    grid::FieldSummary s = grid::summarize(g, grid::pointwise_norm(out));
    rep.checks.push_back(bool_check(
        op + " norms", true, "max " + sci(s.max) + ", rms " + sci(s.rms)));
  } else if (op == "monogenic") {
    grid::ResidualReport r = grid::monogenic_residual(f);
    grid::GridField res(g, ga::Signature(2, 0));
    res.plane(0) = r.pointwise;
    save_field_data(bag, "grid_analyze_monogenic", res);
    double bound = bag.num("expect_below");
    report::CheckResult c;
    c.name = "monogenic residual max (interior)";
    c.computed = sci(r.summary.max);
    c.expected = bound > 0 ? "< " + sci(bound) : "-";
    c.pass = bound > 0 ? r.summary.max < bound : true;
    rep.checks.push_back(c);
  } else {
    throw std::runtime_error("unknown op (dirac|interior|exterior|laplacian|monogenic)");
  }
  return finish(bag, rep, "grid-analyze", start);
}

int run_topo_winding(const ConfigBag& bag) {
  auto start = Clock::now();
  topo::Contour c = contour_from_bag(bag);
  topo::ComplexSampler f = fields::complex_sampler(fields::FieldSpec::parse(bag.str("field")));
  double hbar = bag.num("hbar");

  auto values = topo::sample_on_contour(f, c);
  int w = topo::winding_number(values);
  double action = topo::born_sommerfeld_integral(values, hbar);
  double n_of_h = action / (2 * std::numbers::pi * hbar);

  report::RunReport rep;
  rep.checks.push_back(bool_check("winding", true, std::to_string(w)));
  rep.checks.push_back(report::make_check("loop integral / h is the winding", w, n_of_h, 0.01));
  return finish(bag, rep, "topo-winding", start);
}

int run_topo_zeros(const ConfigBag& bag) {
  auto start = Clock::now();
  topo::Contour c = contour_from_bag(bag);
  topo::ComplexSampler f = fields::complex_sampler(fields::FieldSpec::parse(bag.str("field")));
  double hbar = bag.num("hbar");

  topo::DbsOptions opts;
  opts.mass = bag.num("mass");
  topo::WindingReport r = topo::verify_dbs(f, c, hbar, opts);

  double target = r.winding * 2 * std::numbers::pi * hbar;
  report::RunReport rep;
  rep.checks.push_back(report::make_check("N = omega", r.winding, r.zero_count, 0));
  rep.checks.push_back(bool_check("brute-force oracle concurs", r.oracle_agrees, ""));
  rep.checks.push_back(
      bool_check("monogenic inside", r.monogenic_ok, "rms " + sci(r.monogenic_rms)));
  rep.checks.push_back(report::make_check("loop integral = omega * 2*pi*hbar", target,
                                          r.loop_integral,
                                          1e-6 * std::max(1.0, std::abs(target))));
  rep.checks.push_back(bool_check("consistent", r.consistent, ""));
  if (opts.mass != 0.0)
    rep.checks.push_back(
        report::make_check("mass loop integral (diagnostic)", 0.0, r.mass_loop_integral, 1e-9));
  return finish(bag, rep, "topo-zeros", start);
}

int run_topo_betti(const ConfigBag& bag) {
  auto start = Clock::now();
  int ring = bag.integer("ring");
  int torus = bag.integer("torus");
  int max_grade = bag.integer("max_grade");

  grid::Grid g = ring > 0
                     ? grid::Grid::line(ring, 0.0, 2 * std::numbers::pi, grid::Boundary::Periodic)
                     : grid::Grid::square(torus, torus, 0.0, 2 * std::numbers::pi,
                                          grid::Boundary::Periodic);
  ga::Signature sig(g.dim, 0);
  if (max_grade < 0) max_grade = g.dim;
  auto reports = topo::betti_numbers(g, sig, max_grade);

  json records = json::array();
  report::RunReport rep;
  for (const auto& r : reports) {
    records.push_back({{"grade", r.grade},
                       {"components", r.components},
                       {"kernel_dimension", r.kernel_dimension},
                       {"sigma_max", r.sigma_max},
                       {"last_zero", r.last_zero},
                       {"first_nonzero", r.first_nonzero},
                       {"gap_ratio", r.gap_ratio},
                       {"stencil", r.stencil}});
    rep.checks.push_back(bool_check(
        "betti_" + std::to_string(r.grade), r.components == 0 || r.gap_ratio >= 100.0,
        std::to_string(r.kernel_dimension) + " (gap " + sci(r.gap_ratio) + ")"));
  }
  std::ofstream out(out_dir(bag) + "/topo_betti_records.json");
  out << records.dump(2) << '\n';
  return finish(bag, rep, "topo-betti", start);
}

bohm::EvolveParams evolve_params(const ConfigBag& bag) {
  bohm::EvolveParams p;
  p.dt = bag.num("dt");
  p.steps = bag.integer("steps");
  p.stride = bag.integer("stride");
  p.variant = bag.str("variant") == "modified" ? bohm::Variant::Modified : bohm::Variant::Standard;
  p.hbar = bag.num("hbar");
  p.mass = bag.num("mass");
  p.e0 = bag.num("e0");
  p.m_term = bag.num("M");
  return p;
}

int run_bohm_evolve(const ConfigBag& bag) {
  auto start = Clock::now();
  grid::Grid g = grid_from_bag(bag, 1);
  fields::FieldSpec init = fields::FieldSpec::parse(bag.str("initial"));
  fields::FieldSpec pot = fields::FieldSpec::parse(bag.str("potential"));
  bohm::EvolveParams p = evolve_params(bag);

  bohm::EvolutionSeries s =
      bohm::evolve(g, fields::initial_state(init, g), fields::potential(pot, g), p, pot.name);
  io::save_series(out_dir(bag), bag.str("name"), s);

  double n0 = bohm::norm_l2(g, s.frames.front());
  double drift = 0.0;
  for (const auto& frame : s.frames)
    drift = std::max(drift, std::abs(bohm::norm_l2(g, frame) - n0));

  report::RunReport rep;
  rep.checks.push_back(report::make_check("norm drift", 0.0, drift, 1e-10));
  return finish(bag, rep, "bohm-evolve", start);
}

int run_bohm_diagnose(const ConfigBag& bag) {
  auto start = Clock::now();
  bohm::EvolutionSeries s = io::load_series(bag.str("series"));
  bohm::DiagnosticsOptions opts;
  opts.amplitude_cutoff = bag.num("cutoff");
  auto diags = bohm::hj_and_continuity_residuals(s, opts);

  // per-node CSV for the middle interior frame
  std::size_t mid_idx = diags.size() / 2;
  const auto& mid = diags[mid_idx];
  std::ofstream csv(out_dir(bag) + "/bohm_diagnose.csv");
  csv << "x,rho,q,hj_residual,continuity_residual,defined\n";
  const auto& frame = s.frames[mid_idx + 1];
  char buf[160];
  for (std::size_t i = 0; i < frame.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", s.grid.position(i)[0],
                  std::abs(frame[i]), mid.q.values[i], mid.hj_residual[i],
                  mid.continuity_residual[i], int(mid.defined[i]));
    csv << buf;
  }

  report::RunReport rep;
  for (const auto& d : diags) {
    rep.checks.push_back(bool_check("frame t=" + std::to_string(d.time), true,
                                    "hj rms " + sci(d.hj_summary.rms) + ", continuity rms " +
                                        sci(d.continuity_summary.rms)));
  }
  return finish(bag, rep, "bohm-diagnose", start);
}

int run_bohm_trajectories(const ConfigBag& bag) {
  auto start = Clock::now();
  bohm::EvolutionSeries s = io::load_series(bag.str("series"));
  std::vector<double> seeds;
  {
    std::string text = bag.str("seeds");
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t comma = text.find(',', pos);
      seeds.push_back(std::stod(text.substr(pos, comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  auto trajs = bohm::bohm_trajectories(s, seeds, bag.integer("substeps"));

  std::ofstream csv(out_dir(bag) + "/bohm_trajectories.csv");
  csv << "seed_id,t,x\n";
  char buf[96];
  for (std::size_t k = 0; k < trajs.size(); ++k)
    for (std::size_t i = 0; i < trajs[k].t.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, trajs[k].t[i], trajs[k].x[i]);
      csv << buf;
    }

  report::RunReport rep;
  for (const auto& traj : trajs)
    rep.checks.push_back(bool_check("seed " + std::to_string(traj.seed), true,
                                    traj.terminated ? "terminated in flagged region"
                                                    : "completed"));
  return finish(bag, rep, "bohm-trajectories", start);
}

int run_rel_dispersion(const ConfigBag& bag) {
  auto start = Clock::now();
  bohm::WaveParams w{bag.num("e0"), {bag.num("p"), 0, 0}, bag.num("M"), bag.num("hbar")};
  double residual = bohm::plane_wave_residual(w);
  bohm::DeBroglie db = bohm::de_broglie(w);

  report::RunReport rep;
  rep.checks.push_back(report::make_check("plane wave residual", 0.0, residual, 1e-12));
  rep.checks.push_back(bool_check(
      "de broglie", true, "omega " + std::to_string(db.omega) + ", k " + std::to_string(db.k[0])));

  if (bag.flag("fit")) {
    // fit on an integer mode of the periodic box closest to k
    int m = std::max(1, int(std::lround(w.p[0] / w.hbar)));
    grid::Grid g = grid::Grid::line(512, 0.0, 2 * std::numbers::pi, grid::Boundary::Periodic);
    std::vector<Complex> psi0(g.node_count());
    for (std::size_t i = 0; i < psi0.size(); ++i)
      psi0[i] = std::polar(1.0, double(m) * g.position(i)[0]);
    bohm::EvolveParams p;
    p.dt = 0.002;
    p.steps = 630;
    p.stride = 10;
    p.variant = bohm::Variant::Modified;
    p.hbar = w.hbar;
    p.e0 = w.e0;
    p.m_term = w.m_term;
    bohm::EvolutionSeries s = bohm::evolve(g, psi0, {}, p, "zero");
    double fit = bohm::fitted_phase_rate(s, 101);
    rep.checks.push_back(
        report::make_check("fitted phase rate = E0/hbar", db.omega, fit, 1e-3 * db.omega));
  }
  return finish(bag, rep, "rel-dispersion", start);
}

int run_heat_flow(const ConfigBag& bag) {
  auto start = Clock::now();
  grid::Grid g =
      grid::Grid::line(bag.integer("n"), 0.0, 2 * std::numbers::pi, grid::Boundary::Periodic);
  std::vector<double> initial(g.node_count());
  std::string shape = bag.str("initial");
  for (std::size_t i = 0; i < initial.size(); ++i) {
    double x = g.position(i)[0];
    initial[i] = shape == "bumpy"
                     ? std::sin(3 * x) + 0.4 * std::cos(7 * x) + 0.2 * std::sin(11 * x + 1.0)
                     : std::sin(x);
  }

  bohm::HeatParams hp;
  hp.kappa = bag.num("kappa");
  double h = g.spacing[0];
  hp.dt = bag.num("dt") > 0 ? bag.num("dt") : 0.4 * h * h / hp.kappa;
  hp.steps = bag.integer("steps") > 0 ? bag.integer("steps") : int(1.0 / hp.dt);
  hp.stride = bag.integer("stride");
  hp.crank_nicolson = bag.flag("cn");
  bohm::HeatReport r = bohm::heat_gradient_flow_check(g, initial, hp);

  std::ofstream csv(out_dir(bag) + "/heat_flow_energy.csv");
  csv << "t,energy\n";
  char buf[80];
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.times[i], r.energy[i]);
    csv << buf;
  }

  report::RunReport rep;
  rep.checks.push_back(bool_check("energy monotone nonincreasing", r.monotone, ""));
  if (shape != "bumpy")
    rep.checks.push_back(report::make_check("sin-mode decay rate = 2*kappa", 2.0 * hp.kappa,
                                            r.fitted_rate, 0.01 * 2.0 * hp.kappa));
  return finish(bag, rep, "heat-flow", start);
}

int run_paper_suite(const ConfigBag& bag) {
  auto start = Clock::now();
  acceptance::AcceptanceOptions opts;
  opts.seed = unsigned(bag.integer("seed"));
  auto results = acceptance::run_acceptance(opts);
  std::cout << acceptance::format_results(results);

  report::RunReport rep;
  for (const auto& r : results) {
    report::CheckResult c;
    c.name = std::to_string(r.id) + " " + r.name;
    c.pass = r.pass;
    c.expected = "pass";
    c.computed = r.detail;
    rep.checks.push_back(c);
  }
  return finish(bag, rep, "paper-suite", start);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"geometric-algebra flux toolkit"};
  app.require_subcommand(1);

  // defaults live per subcommand; flag callbacks record only values the
  // user actually supplied; a --config file overrides both at dispatch
  std::map<std::string, json> sub_defaults;
  json flag_values = json::object();
  std::string config_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--out", [&flag_values](const std::string& v) { flag_values["out"] = v; },
        "output directory (default $GAFLUX_OUT_DIR or .)");
    sub->add_option_function<std::string>(
        "--format", [&flag_values](const std::string& v) { flag_values["format"] = v; },
        "json|csv data outputs");
    sub->add_option("--config", config_path, "JSON config file; overrides flags");
  };
  auto opt_str = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                     const std::string& def, const std::string& help) {
    sub_defaults[sub->get_name()][key] = def;
    sub->add_option_function<std::string>(
        flag, [&flag_values, key](const std::string& v) { flag_values[key] = v; }, help);
  };
  auto opt_num = [&](CLI::App* sub, const std::string& flag, const std::string& key, double def,
                     const std::string& help) {
    sub_defaults[sub->get_name()][key] = def;
    sub->add_option_function<double>(
        flag, [&flag_values, key](double v) { flag_values[key] = v; }, help);
  };
  auto opt_int = [&](CLI::App* sub, const std::string& flag, const std::string& key, int def,
                     const std::string& help) {
    sub_defaults[sub->get_name()][key] = def;
    sub->add_option_function<int>(
        flag, [&flag_values, key](int v) { flag_values[key] = v; }, help);
  };
  auto opt_bool = [&](CLI::App* sub, const std::string& flag, const std::string& key, bool def,
                      const std::string& help) {
    sub_defaults[sub->get_name()][key] = def;
    sub->add_flag_function(
        flag, [&flag_values, key](std::int64_t v) { flag_values[key] = v > 0; }, help);
  };

  int (*handler)(const ConfigBag&) = nullptr;
  std::string chosen;
  auto mount = [&](CLI::App* sub, int (*fn)(const ConfigBag&)) {
    common(sub);
    std::string name = sub->get_name();
    sub->callback([&handler, &chosen, fn, name] {
      handler = fn;
      chosen = name;
    });
  };

  {
    auto* sub = app.add_subcommand("ga-eval", "evaluate Clifford products on multivector text");
    opt_str(sub, "--a", "a", "", "left operand, e.g. 'Cl(2,0): e1'");
    opt_str(sub, "--b", "b", "", "right operand (binary ops)");
    opt_str(sub, "--op", "op", "geometric",
            "geometric|inner|outer|project|reject|reverse|inverse|grade");
    opt_int(sub, "--grade", "grade", 0, "grade for --op grade");
    mount(sub, run_ga_eval);
  }
  {
    auto* sub = app.add_subcommand("sym-verify", "verify the symbolic flux/gauge identities");
    opt_str(sub, "--suite", "suite", "all", "paper-section-2|gauge|all");
    mount(sub, run_sym_verify);
  }
  {
    auto* sub = app.add_subcommand("grid-analyze", "grid operators on a builtin field");
    opt_str(sub, "--field", "field", "z_pow_2", "field spec, e.g. z_pow_3 or gaussian:sigma=1");
    opt_str(sub, "--op", "op", "monogenic", "dirac|interior|exterior|laplacian|monogenic");
    opt_int(sub, "--n", "n", 64, "points per axis");
    opt_num(sub, "--lo", "lo", -1.0, "domain low edge");
    opt_num(sub, "--hi", "hi", 1.0, "domain high edge");
    opt_str(sub, "--boundary", "boundary", "clamped", "clamped|periodic");
    opt_num(sub, "--expect-below", "expect_below", 0.0, "fail if the residual max exceeds this");
    mount(sub, run_grid_analyze);
  }
  {
    auto* sub = app.add_subcommand("topo-winding", "winding number and loop integral");
    opt_str(sub, "--field", "field", "z_pow_1", "field spec");
    opt_str(sub, "--circle", "circle", "0,0,1,256", "cx,cy,r,samples");
    opt_str(sub, "--contour-file", "contour_file", "", "point-list file (x,y per line)");
    opt_num(sub, "--hbar", "hbar", 1.0, "action constant");
    mount(sub, run_topo_winding);
  }
  {
    auto* sub = app.add_subcommand("topo-zeros", "argument-principle zero count with oracle");
    opt_str(sub, "--field", "field", "z_pow_1", "field spec");
    opt_str(sub, "--circle", "circle", "0,0,1,256", "cx,cy,r,samples");
    opt_str(sub, "--contour-file", "contour_file", "", "point-list file");
    opt_num(sub, "--hbar", "hbar", 1.0, "action constant");
    opt_num(sub, "--mass", "mass", 0.0, "constant mass term for the loop diagnostic");
    mount(sub, run_topo_zeros);
  }
  {
    auto* sub = app.add_subcommand("topo-betti", "harmonic-kernel Betti numbers");
    opt_int(sub, "--ring", "ring", 0, "1D periodic nodes (overrides --torus)");
    opt_int(sub, "--torus", "torus", 32, "2D periodic nodes per axis");
    opt_int(sub, "--max-grade", "max_grade", -1, "highest grade (default: dimension)");
    mount(sub, run_topo_betti);
  }
  {
    auto* sub = app.add_subcommand("bohm-evolve", "Crank-Nicolson evolution, writes a series");
    opt_str(sub, "--initial", "initial", "gaussian:sigma=1", "initial state spec");
    opt_str(sub, "--potential", "potential", "zero",
            "zero|barrier:v0=..,a=..,b=..|harmonic:k=..");
    opt_int(sub, "--n", "n", 256, "grid points");
    opt_num(sub, "--lo", "lo", -12.0, "domain low edge");
    opt_num(sub, "--hi", "hi", 12.0, "domain high edge");
    opt_str(sub, "--boundary", "boundary", "clamped", "clamped|periodic");
    opt_num(sub, "--dt", "dt", 0.004, "time step");
    opt_int(sub, "--steps", "steps", 500, "steps");
    opt_int(sub, "--stride", "stride", 50, "keep every stride-th frame");
    opt_str(sub, "--variant", "variant", "standard", "standard|modified");
    opt_num(sub, "--hbar", "hbar", 1.0, "action constant");
    opt_num(sub, "--mass", "mass", 1.0, "mass (standard variant)");
    opt_num(sub, "--e0", "e0", 1.0, "E0 (modified variant)");
    opt_num(sub, "--M", "M", 0.0, "M = m*hbar (modified variant)");
    opt_str(sub, "--name", "name", "series", "series name");
    mount(sub, run_bohm_evolve);
  }
  {
    auto* sub = app.add_subcommand("bohm-diagnose", "quantum HJ and continuity residuals");
    opt_str(sub, "--series", "series", "series_manifest.json", "series manifest path");
    opt_num(sub, "--cutoff", "cutoff", 1e-5, "relative amplitude cutoff for summaries");
    mount(sub, run_bohm_diagnose);
  }
  {
    auto* sub = app.add_subcommand("bohm-trajectories", "integrate Bohm trajectories");
    opt_str(sub, "--series", "series", "series_manifest.json", "series manifest path");
    opt_str(sub, "--seeds", "seeds", "0.5,1.0,2.0", "comma-separated seed positions");
    opt_int(sub, "--substeps", "substeps", 4, "RK4 substeps per frame");
    mount(sub, run_bohm_trajectories);
  }
  {
    auto* sub = app.add_subcommand("rel-dispersion", "plane-wave dispersion identity");
    opt_num(sub, "--e0", "e0", 5.0, "energy");
    opt_num(sub, "--p", "p", 4.0, "momentum");
    opt_num(sub, "--M", "M", 3.0, "mass term M = m*hbar");
    opt_num(sub, "--hbar", "hbar", 1.0, "action constant");
    opt_bool(sub, "--fit,!--no-fit", "fit", true, "evolve a matching wave and fit the phase rate");
    mount(sub, run_rel_dispersion);
  }
  {
    auto* sub = app.add_subcommand("heat-flow", "heat equation energy decay");
    opt_int(sub, "--n", "n", 64, "grid points on [0, 2*pi)");
    opt_num(sub, "--kappa", "kappa", 1.0, "diffusion constant");
    opt_num(sub, "--dt", "dt", 0.0, "time step (default 0.4 h^2/kappa)");
    opt_int(sub, "--steps", "steps", 0, "steps (default: one decay time)");
    opt_int(sub, "--stride", "stride", 16, "energy sampling stride");
    opt_bool(sub, "--cn", "cn", false, "Crank-Nicolson instead of explicit");
    opt_str(sub, "--initial", "initial", "sin", "sin|bumpy");
    mount(sub, run_heat_flow);
  }
  {
    auto* sub = app.add_subcommand("paper-suite", "run every acceptance criterion");
    opt_int(sub, "--seed", "seed", 20240808, "seed for the random axiom triples");
    mount(sub, run_paper_suite);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    ConfigBag bag;
    const char* env_out = std::getenv("GAFLUX_OUT_DIR");
    bag.set("out", env_out ? env_out : ".");
    bag.set("format", "json");
    for (auto& [k, v] : sub_defaults[chosen].items()) bag.set(k, v);
    for (auto& [k, v] : flag_values.items()) bag.set(k, v);
    if (!config_path.empty()) bag.overlay(config_path);
    return handler ? handler(bag) : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gaflux::cli
