#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaflux/builtin_fields.hpp"
#include "gaflux/cli.hpp"
#include "gaflux/field_io.hpp"
#include "gaflux/grid_ops.hpp"

using namespace gaflux;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("gaflux_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("grid field json round-trip is exact") {
  grid::Grid g = grid::Grid::square(8, 8, -1.0, 1.0, grid::Boundary::Clamped);
  grid::GridField f = grid::sample_complex(g, [](double x, double y) {
    return std::complex(x * y + 0.1234567890123456, x - y);
  });

  grid::GridField back = io::field_from_json(io::field_to_json(f));
  CHECK(back.grid() == f.grid());
  CHECK(back.signature() == f.signature());
  for (const auto& [mask, data] : f.planes()) {
    const auto* other = back.find_plane(mask);
    REQUIRE(other != nullptr);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(data[i] == (*other)[i]);
  }

  fs::path dir = temp_dir("field");
  io::save_field((dir / "f.json").string(), f);
  grid::GridField loaded = io::load_field((dir / "f.json").string());
  CHECK(grid::summarize(g, grid::pointwise_norm(loaded - f), 0).max == 0.0);
}

TEST_CASE("csv export flattens one blade component per column") {
  grid::Grid g = grid::Grid::line(4, 0.0, 3.0, grid::Boundary::Clamped);
  grid::GridField f(g, ga::Signature(2, 0));
  f.plane(0) = {1, 2, 3, 4};
  f.plane(0b11) = {5, 6, 7, 8};

  fs::path dir = temp_dir("csv");
  io::write_field_csv((dir / "f.csv").string(), f);
  std::string text = slurp(dir / "f.csv");
  CHECK(text.rfind("x,1,e1^e2\n", 0) == 0);
  CHECK(text.find("\n1,2,6\n") != std::string::npos);
}

TEST_CASE("evolution series round-trips through the manifest") {
  grid::Grid g = grid::Grid::line(32, -5.0, 5.0, grid::Boundary::Clamped);
  std::vector<std::complex<double>> psi0(g.node_count());
  for (std::size_t i = 0; i < psi0.size(); ++i) {
    double x = g.position(i)[0];
    psi0[i] = std::exp(-x * x);
  }
  bohm::EvolveParams p;
  p.dt = 0.01;
  p.steps = 10;
  p.stride = 5;
  bohm::EvolutionSeries s = bohm::evolve(g, psi0, {}, p, "free");

  fs::path dir = temp_dir("series");
  io::save_series(dir.string(), "t", s);
  bohm::EvolutionSeries back = io::load_series((dir / "t_manifest.json").string());
  CHECK(back.grid == s.grid);
  CHECK(back.params.dt == s.params.dt);
  CHECK(back.frames.size() == s.frames.size());
  for (std::size_t f = 0; f < s.frames.size(); ++f)
    for (std::size_t i = 0; i < s.frames[f].size(); ++i)
      CHECK(back.frames[f][i] == s.frames[f][i]);
}

TEST_CASE("contour file parsing") {
  fs::path dir = temp_dir("contour");
  {
    std::ofstream out(dir / "c.csv");
    out << "# a square-ish loop\n";
    for (int k = 0; k < 32; ++k) {
      double t = 2 * 3.14159265358979 * k / 32;
      out << std::cos(t) << "," << std::sin(t) << "\n";
    }
  }
  topo::Contour c = io::read_contour((dir / "c.csv").string());
  CHECK(c.size() == 32);
  CHECK(c.contains({0, 0}));
  CHECK_THROWS(io::read_contour((dir / "missing.csv").string()));
}

TEST_CASE("field specs parse parameters") {
  fields::FieldSpec spec = fields::FieldSpec::parse("gaussian:sigma=2,x0=-1");
  CHECK(spec.name == "gaussian");
  CHECK(spec.get("sigma", 0) == 2.0);
  CHECK(spec.get("x0", 0) == -1.0);
  CHECK(spec.get("absent", 7.5) == 7.5);
  CHECK_THROWS(fields::FieldSpec::parse("gaussian:sigma"));
  CHECK_THROWS(fields::complex_sampler(fields::FieldSpec::parse("no_such_field")));
}

TEST_CASE("builtin fields match their definitions") {
  auto z2 = fields::complex_sampler(fields::FieldSpec::parse("z_pow_2"));
  CHECK(std::abs(z2({0.5, 0.0}) - std::complex(0.25, 0.0)) < 1e-15);
  auto gauss = fields::complex_sampler(fields::FieldSpec::parse("gaussian:sigma=1"));
  CHECK(std::abs(gauss({0.0, 0.0}) - std::complex(1.0, 0.0)) < 1e-15);
  // (E0, p, M) = (5, 4, 3) satisfies the dispersion identity
  CHECK(bohm::plane_wave_residual({5.0, {4.0, 0, 0}, 3.0, 1.0}) == 0.0);
}

TEST_CASE("cli runs subcommands in-process") {
  fs::path dir = temp_dir("cli");
  std::string out = "--out=" + dir.string();

  CHECK(cli::run({"sym-verify", "--suite", "all", out}) == 0);
  CHECK(cli::run({"topo-winding", "--field", "z_pow_3", "--circle", "0,0,1,128", out}) == 0);
  CHECK(fs::exists(dir / "topo-winding_report.json"));

  // failing check -> exit 1
  CHECK(cli::run({"grid-analyze", "--field", "conj_z", "--expect-below", "1e-6", out}) == 1);

  // usage and bad input -> exit 2
  CHECK(cli::run({"no-such-command"}) == 2);
  CHECK(cli::run({}) == 2);
  CHECK(cli::run({"ga-eval", "--a", "not a multivector", out}) == 2);
}

TEST_CASE("config file overrides flags and is echoed") {
  fs::path dir = temp_dir("config");
  fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"field": "z_pow_2"})";
  }
  std::string out = "--out=" + dir.string();
  CHECK(cli::run({"topo-winding", "--field", "z_pow_5", "--circle", "0,0,1,128",
                  "--config", cfg.string(), out}) == 0);

  nlohmann::json report = nlohmann::json::parse(slurp(dir / "topo-winding_report.json"));
  CHECK(report.at("config").at("field").get<std::string>() == "z_pow_2");
  CHECK(report.at("checks").at(0).at("computed").get<std::string>() == "2");
  CHECK(report.at("pass").get<bool>());
}

TEST_CASE("identical config gives byte-identical data outputs") {
  fs::path a = temp_dir("det_a"), b = temp_dir("det_b");
  CHECK(cli::run({"heat-flow", "--n", "48", "--out", a.string()}) == 0);
  CHECK(cli::run({"heat-flow", "--n", "48", "--out", b.string()}) == 0);
  CHECK(slurp(a / "heat_flow_energy.csv") == slurp(b / "heat_flow_energy.csv"));

  CHECK(cli::run({"grid-analyze", "--field", "z_pow_3", "--op", "dirac", "--format", "csv",
                  "--out", a.string()}) == 0);
  CHECK(cli::run({"grid-analyze", "--field", "z_pow_3", "--op", "dirac", "--format", "csv",
                  "--out", b.string()}) == 0);
  CHECK(slurp(a / "grid_analyze_dirac.csv") == slurp(b / "grid_analyze_dirac.csv"));
}

TEST_CASE("format flag switches data outputs") {
  fs::path dir = temp_dir("format");
  CHECK(cli::run({"grid-analyze", "--field", "z_pow_2", "--op", "laplacian", "--format", "json",
                  "--out", dir.string()}) == 0);
  CHECK(fs::exists(dir / "grid_analyze_laplacian.json"));
  CHECK(cli::run({"grid-analyze", "--field", "z_pow_2", "--op", "laplacian", "--format", "csv",
                  "--out", dir.string()}) == 0);
  CHECK(fs::exists(dir / "grid_analyze_laplacian.csv"));
}
