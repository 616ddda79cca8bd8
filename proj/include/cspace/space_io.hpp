#pragma once

#include "cspace/concepts.hpp"

#include "json.hpp"

#include <utility>

namespace cspace {

/// A domain structure plus named concepts, as stored in a space file.
struct Space {
  SpacePtr structure;
  std::map<std::string, Concept> concepts;
};

/// Space file schema (one JSON document):
///   {
///     "dimensions": ["hue", ...],                     // names, index order
///     "domains":    {"color": [0], ...},              // partition of indices
///     "concepts":   {"apple": <concept record>, ...}
///   }
/// A concept record holds "mu0", "c", "domain_weights" (domain → weight),
/// "dimension_weights" (domain → dimension name → weight) and "cuboids", an
/// array of objects mapping dimension names to [low, high]. Dimensions
/// absent from a cuboid are unbounded (±∞); a one-sided unbounded dimension
/// uses null for the missing end. Concepts may be absent entirely.
Space load_space(const std::string& path);
Space space_from_json(const nlohmann::json& doc);

nlohmann::json space_to_json(const Space& space);
void save_space(const Space& space, const std::string& path);

/// A single concept as a JSON record (the file's per-concept format).
nlohmann::json concept_to_json(const Concept& s);
Concept concept_from_json(const SpacePtr& structure, const nlohmann::json& record,
                          const std::string& name);

/// Membership of the concept projected onto two plotting dimensions
/// (maximum over all other coordinates; well-defined because the central
/// region pins the free coordinates for every cuboid at once).
double planar_membership(const Concept& s, int dim_x, int dim_y, double x, double y);

/// One exported boundary curve: the α-cut outline of a concept projected
/// onto the plotting plane, as data-space vertices. Every vertex has planar
/// membership α (up to the solver tolerance); unbounded outlines come out
/// as open polylines clipped at the padded data window.
struct PlotCurve {
  std::string concept_name;
  double alpha;
  std::vector<std::pair<double, double>> points;
  bool closed;
};

/// Curves that export_plot would draw, for inspection and testing.
std::vector<PlotCurve> alpha_curves(const Space& space, const std::vector<std::string>& concepts,
                                    const std::string& dim_x, const std::string& dim_y,
                                    const std::vector<double>& alphas);

/// Writes an SVG 1.1 plot of the selected concepts (all of them if the list
/// is empty) projected onto two dimensions: core rectangles plus α-cut
/// boundaries for every requested α, with axes and a legend.
void export_plot(const Space& space, const std::vector<std::string>& concepts,
                 const std::string& dim_x, const std::string& dim_y,
                 const std::vector<double>& alphas, const std::string& out_path,
                 int width = 640, int height = 640);

}  // namespace cspace
