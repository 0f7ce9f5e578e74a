#include "gaflux/field_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaflux::io {

using nlohmann::json;

namespace {

json grid_to_json(const grid::Grid& g) {
  json j;
  j["dimension"] = g.dim;
  j["shape"] = std::vector<int>(g.shape.begin(), g.shape.begin() + g.dim);
  j["spacing"] = std::vector<double>(g.spacing.begin(), g.spacing.begin() + g.dim);
  j["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.dim);
  std::vector<std::string> b;
  for (int a = 0; a < g.dim; ++a) b.push_back(grid::boundary_name(g.boundary[a]));
  j["boundary"] = b;
  return j;
}

grid::Grid grid_from_json(const json& j) {
  int dim = j.at("dimension").get<int>();
  std::array<int, 3> shape{1, 1, 1};
  std::array<double, 3> spacing{1, 1, 1}, origin{0, 0, 0};
  std::array<grid::Boundary, 3> boundary{grid::Boundary::Clamped, grid::Boundary::Clamped,
                                         grid::Boundary::Clamped};
  for (int a = 0; a < dim; ++a) {
    shape[a] = j.at("shape").at(a).get<int>();
    spacing[a] = j.at("spacing").at(a).get<double>();
    origin[a] = j.at("origin").at(a).get<double>();
    std::string b = j.at("boundary").at(a).get<std::string>();
    if (b != "periodic" && b != "clamped")
      throw std::runtime_error("field file: unknown boundary policy " + b);
    boundary[a] = b == "periodic" ? grid::Boundary::Periodic : grid::Boundary::Clamped;
  }
  return grid::Grid(dim, shape, spacing, origin, boundary);
}

}  // namespace

std::string field_to_json(const grid::GridField& f) {
  json j;
  j["grid"] = grid_to_json(f.grid());
  j["signature"] = {{"p", f.signature().p}, {"q", f.signature().q}};
  json comps = json::object();
  for (const auto& [mask, data] : f.planes()) comps[std::to_string(mask)] = data;
  j["components"] = comps;
  return j.dump(2);
}

grid::GridField field_from_json(const std::string& text) {
  json j = json::parse(text);
  grid::Grid g = grid_from_json(j.at("grid"));
  ga::Signature sig(j.at("signature").at("p").get<int>(), j.at("signature").at("q").get<int>());
  grid::GridField f(g, sig);
  for (const auto& [key, data] : j.at("components").items()) {
    ga::BladeMask mask = ga::BladeMask(std::stoul(key));
    auto& plane = f.plane(mask);
    if (data.size() != plane.size())
      throw std::runtime_error("field file: component size mismatch");
    for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = data.at(i).get<double>();
  }
  return f;
}

void save_field(const std::string& path, const grid::GridField& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  out << field_to_json(f) << '\n';
}

grid::GridField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_field: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return field_from_json(buf.str());
}

void write_field_csv(const std::string& path, const grid::GridField& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
  const grid::Grid& g = f.grid();

  out << "x";
  if (g.dim >= 2) out << ",y";
  if (g.dim >= 3) out << ",z";
  for (const auto& [mask, data] : f.planes()) out << "," << ga::blade_name(mask);
  out << "\n";

  char buf[40];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    auto pos = g.position(i);
    emit(pos[0]);
    for (int a = 1; a < g.dim; ++a) {
      out << ",";
      emit(pos[a]);
    }
    for (const auto& [mask, data] : f.planes()) {
      out << ",";
      emit(data[i]);
    }
    out << "\n";
  }
}

void save_series(const std::string& directory, const std::string& name,
                 const bohm::EvolutionSeries& series) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);

  json manifest;
  manifest["name"] = name;
  manifest["grid"] = grid_to_json(series.grid);
  manifest["dt"] = series.params.dt;
  manifest["stride"] = series.params.stride;
  manifest["steps"] = series.params.steps;
  manifest["variant"] = bohm::variant_name(series.params.variant);
  manifest["hbar"] = series.params.hbar;
  manifest["mass"] = series.params.mass;
  manifest["e0"] = series.params.e0;
  manifest["m_term"] = series.params.m_term;
  manifest["potential_name"] = series.potential_name;
  manifest["potential"] = series.potential;
  manifest["times"] = series.times;

  std::vector<std::string> frame_files;
  for (std::size_t i = 0; i < series.frames.size(); ++i) {
    char fname[64];
    std::snprintf(fname, sizeof fname, "%s_frame_%04zu.json", name.c_str(), i);
    save_field((fs::path(directory) / fname).string(),
               grid::from_complex(series.grid, series.frames[i]));
    frame_files.push_back(fname);
  }
  manifest["frames"] = frame_files;

  std::ofstream out(fs::path(directory) / (name + "_manifest.json"));
  if (!out) throw std::runtime_error("save_series: cannot write manifest");
  out << manifest.dump(2) << '\n';
}

bohm::EvolutionSeries load_series(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("load_series: cannot open " + manifest_path);
  json manifest = json::parse(in);

  bohm::EvolutionSeries series;
  series.grid = grid_from_json(manifest.at("grid"));
  series.params.dt = manifest.at("dt").get<double>();
  series.params.stride = manifest.at("stride").get<int>();
  series.params.steps = manifest.at("steps").get<int>();
  series.params.variant = manifest.at("variant").get<std::string>() == "modified"
                              ? bohm::Variant::Modified
                              : bohm::Variant::Standard;
  series.params.hbar = manifest.at("hbar").get<double>();
  series.params.mass = manifest.at("mass").get<double>();
  series.params.e0 = manifest.at("e0").get<double>();
  series.params.m_term = manifest.at("m_term").get<double>();
  series.potential_name = manifest.at("potential_name").get<std::string>();
  series.potential = manifest.at("potential").get<std::vector<double>>();
  series.times = manifest.at("times").get<std::vector<double>>();

  fs::path dir = fs::path(manifest_path).parent_path();
  for (const auto& fname : manifest.at("frames")) {
    grid::GridField f = load_field((dir / fname.get<std::string>()).string());
    series.frames.push_back(grid::to_complex(f));
  }
  return series;
}

topo::Contour read_contour(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_contour: cannot open " + path);
  std::vector<std::complex<double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    double x, y;
    char comma;
    std::istringstream row(line);
    if (!(row >> x >> comma >> y) || comma != ',')
      throw std::runtime_error("read_contour: malformed line: " + line);
    pts.emplace_back(x, y);
  }
  return topo::Contour::from_points(std::move(pts));
}

}  // namespace gaflux::io
