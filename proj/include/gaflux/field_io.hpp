#pragma once

#include <string>

#include "gaflux/contour.hpp"
#include "gaflux/evolve.hpp"
#include "gaflux/grid.hpp"

namespace gaflux::io {

// Self-describing JSON container: header (dimension, shape, spacings,
// origin, signature, boundary policy) plus one coefficient array per
// blade mask. Round-trips bit-exactly.
void save_field(const std::string& path, const grid::GridField& f);
grid::GridField load_field(const std::string& path);

std::string field_to_json(const grid::GridField& f);
grid::GridField field_from_json(const std::string& text);

// One row per node: coordinates, then one column per blade component.
void write_field_csv(const std::string& path, const grid::GridField& f);

// Evolution series: a manifest plus one field file per frame.
void save_series(const std::string& directory, const std::string& name,
                 const bohm::EvolutionSeries& series);
bohm::EvolutionSeries load_series(const std::string& manifest_path);

// Point-list contour file: one "x,y" pair per line, '#' comments allowed.
topo::Contour read_contour(const std::string& path);

}  // namespace gaflux::io
