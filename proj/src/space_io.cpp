#include "cspace/space_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace cspace {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& message) { throw Error(message); }

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(where + ": expected a finite number");
  return v;
}

SpacePtr structure_from_json(const json& doc) {
  const json& dims = member(doc, "dimensions", "space file");
  if (!dims.is_array()) fail("space file: \"dimensions\" must be an array of names");
  std::vector<std::string> names;
  for (const json& d : dims) {
    if (!d.is_string()) fail("space file: \"dimensions\" must be an array of names");
    names.push_back(d.get<std::string>());
  }
  const json& doms = member(doc, "domains", "space file");
  if (!doms.is_object()) fail("space file: \"domains\" must map domain names to dimension indices");
  std::map<std::string, std::vector<int>> domains;
  for (auto it = doms.begin(); it != doms.end(); ++it) {
    if (!it.value().is_array())
      fail("space file: domain \"" + it.key() + "\" must be an array of dimension indices");
    std::vector<int> idx;
    for (const json& v : it.value()) {
      if (!v.is_number_integer())
        fail("space file: domain \"" + it.key() + "\" must be an array of dimension indices");
      idx.push_back(v.get<int>());
    }
    domains.emplace(it.key(), std::move(idx));
  }
  return std::make_shared<const DomainStructure>(std::move(domains), std::move(names));
}

Concept parse_concept(const SpacePtr& structure, const json& record) {
  const double mu0 = number(member(record, "mu0", "concept record"), "concept record: mu0");
  const double c = number(member(record, "c", "concept record"), "concept record: c");

  const json& dw = member(record, "domain_weights", "concept record");
  if (!dw.is_object() || dw.empty())
    fail("concept record: \"domain_weights\" must map domains to positive weights");
  std::map<std::string, double> domain_weights;
  std::set<std::string> domain_set;
  for (auto it = dw.begin(); it != dw.end(); ++it) {
    if (!structure->has_domain(it.key())) fail("concept record: unknown domain \"" + it.key() + "\"");
    domain_weights.emplace(it.key(), number(it.value(), "weight of domain " + it.key()));
    domain_set.insert(it.key());
  }

  const json& xw = member(record, "dimension_weights", "concept record");
  if (!xw.is_object()) fail("concept record: \"dimension_weights\" must map domains to objects");
  std::map<std::string, std::map<int, double>> dimension_weights;
  for (auto it = xw.begin(); it != xw.end(); ++it) {
    if (!it.value().is_object())
      fail("concept record: dimension weights of \"" + it.key() + "\" must be an object");
    std::map<int, double> per_dim;
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
      per_dim.emplace(structure->dimension_index(jt.key()),
                      number(jt.value(), "weight of dimension " + jt.key()));
    dimension_weights.emplace(it.key(), std::move(per_dim));
  }

  const json& boxes = member(record, "cuboids", "concept record");
  if (!boxes.is_array() || boxes.empty())
    fail("concept record: \"cuboids\" must be a non-empty array");
  const int n = structure->dimension_count();
  std::vector<Cuboid> cuboids;
  for (const json& box : boxes) {
    if (!box.is_object()) fail("concept record: each cuboid must map dimension names to ranges");
    Vec lo = Vec::Constant(n, -kInf);
    Vec hi = Vec::Constant(n, kInf);
    for (auto it = box.begin(); it != box.end(); ++it) {
      const int d = structure->dimension_index(it.key());
      const json& range = it.value();
      if (!range.is_array() || range.size() != 2)
        fail("concept record: range of \"" + it.key() + "\" must be [low, high]");
      lo[d] = range[0].is_null() ? -kInf : number(range[0], "low bound of " + it.key());
      hi[d] = range[1].is_null() ? kInf : number(range[1], "high bound of " + it.key());
    }
    cuboids.emplace_back(structure, domain_set, std::move(lo), std::move(hi));
  }

  Core core(structure, domain_set, std::move(cuboids));
  Weights weights(std::move(domain_weights), std::move(dimension_weights));
  return Concept(std::move(core), mu0, c, std::move(weights));
}

}  // namespace

Concept concept_from_json(const SpacePtr& structure, const json& record, const std::string& name) {
  if (name.empty()) fail("space file: concept names must be non-empty");
  try {
    return parse_concept(structure, record);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + ": " + name);
  } catch (const json::exception& e) {
    throw Error("concept record is malformed (" + std::string(e.what()) + "): " + name);
  }
}

Space space_from_json(const json& doc) {
  Space space;
  space.structure = structure_from_json(doc);
  if (doc.contains("concepts")) {
    const json& cs = doc.at("concepts");
    if (!cs.is_object()) fail("space file: \"concepts\" must map names to concept records");
    for (auto it = cs.begin(); it != cs.end(); ++it)
      space.concepts.emplace(it.key(), concept_from_json(space.structure, it.value(), it.key()));
  }
  return space;
}

Space load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("space file " + path + ": " + e.what());
  }
  return space_from_json(doc);
}

json concept_to_json(const Concept& s) {
  json record;
  record["mu0"] = s.mu0();
  record["c"] = s.c();
  json dw = json::object();
  for (const auto& [name, w] : s.weights().domain_weights()) dw[name] = w;
  record["domain_weights"] = std::move(dw);
  const auto& names = s.space()->dimension_names();
  json xw = json::object();
  for (const auto& [dom, per_dim] : s.weights().dimension_weights()) {
    json o = json::object();
    for (const auto& [d, w] : per_dim) o[names[d]] = w;
    xw[dom] = std::move(o);
  }
  record["dimension_weights"] = std::move(xw);
  json boxes = json::array();
  for (const Cuboid& box : s.core().cuboids()) {
    json b = json::object();
    for (int d = 0; d < s.space()->dimension_count(); ++d) {
      const double lo = box.lo()[d];
      const double hi = box.hi()[d];
      if (lo == -kInf && hi == kInf) continue;  // unbounded dimensions are omitted
      json range = json::array();
      if (lo == -kInf) range.push_back(nullptr); else range.push_back(lo);
      if (hi == kInf) range.push_back(nullptr); else range.push_back(hi);
      b[names[d]] = std::move(range);
    }
    boxes.push_back(std::move(b));
  }
  record["cuboids"] = std::move(boxes);
  return record;
}

json space_to_json(const Space& space) {
  json doc;
  doc["dimensions"] = space.structure->dimension_names();
  json doms = json::object();
  for (const auto& [name, dims] : space.structure->domains()) doms[name] = dims;
  doc["domains"] = std::move(doms);
  json cs = json::object();
  for (const auto& [name, s] : space.concepts) cs[name] = concept_to_json(s);
  doc["concepts"] = std::move(cs);
  return doc;
}

void save_space(const Space& space, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write file: " + path);
  out << space_to_json(space).dump(2) << '\n';
  if (!out) fail("cannot write file: " + path);
}

// ---------------------------------------------------------------------------
// Plotting
// ---------------------------------------------------------------------------

namespace {

struct PlanarBox {
  double x0, x1, y0, y1;
};

/// A concept reduced to the plotting plane: rectangles plus the metric on
/// the two plotted dimensions. Membership here equals the maximum of the
/// full membership over all other coordinates (the non-empty central region
/// supplies coordinates that are interior for every cuboid at once).
struct PlanarConcept {
  double mu0 = 1.0;
  double c = 1.0;
  bool same_domain = false;
  double dom_weight = 1.0, wdx = 1.0, wdy = 1.0;  // same-domain metric
  double weff_x = 1.0, weff_y = 1.0;              // w_δ·√w_d per axis
  std::vector<PlanarBox> boxes;

  double dist(double x, double y, const PlanarBox& b) const {
    double ux = 0.0, uy = 0.0;
    if (x < b.x0) ux = b.x0 - x;
    else if (x > b.x1) ux = x - b.x1;
    if (y < b.y0) uy = b.y0 - y;
    else if (y > b.y1) uy = y - b.y1;
    if (same_domain) return dom_weight * std::sqrt(wdx * ux * ux + wdy * uy * uy);
    return weff_x * ux + weff_y * uy;
  }

  double min_dist(double x, double y) const {
    double best = kInf;
    for (const PlanarBox& b : boxes) best = std::min(best, dist(x, y, b));
    return best;
  }

  double membership(double x, double y) const { return mu0 * std::exp(-c * min_dist(x, y)); }
};

PlanarConcept flatten(const Concept& s, int dx, int dy) {
  PlanarConcept p;
  p.mu0 = s.mu0();
  p.c = s.c();
  const DomainStructure& space = *s.space();
  const std::string& ddx = space.domain_of(dx);
  const std::string& ddy = space.domain_of(dy);
  const Weights& w = s.weights();
  const bool has_x = s.domain_set().count(ddx) != 0;
  const bool has_y = s.domain_set().count(ddy) != 0;
  if (has_x) p.weff_x = w.domain_weight(ddx) * std::sqrt(w.dimension_weight(ddx, dx));
  if (has_y) p.weff_y = w.domain_weight(ddy) * std::sqrt(w.dimension_weight(ddy, dy));
  p.same_domain = has_x && has_y && ddx == ddy;
  if (p.same_domain) {
    p.dom_weight = w.domain_weight(ddx);
    p.wdx = w.dimension_weight(ddx, dx);
    p.wdy = w.dimension_weight(ddx, dy);
  }
  for (const Cuboid& box : s.core().cuboids())
    p.boxes.push_back({box.lo()[dx], box.hi()[dx], box.lo()[dy], box.hi()[dy]});
  return p;
}

struct Window {
  double x0, x1, y0, y1;
};

using Point = std::pair<double, double>;
using Polyline = std::vector<Point>;

void append_point(Polyline& line, const Point& p) {
  if (!line.empty() && line.back() == p) return;
  line.push_back(p);
}

/// Exact α-cut outline of one fuzzified rectangle: straight edges offset by
/// (ux, uy) plus corner joins — quarter ellipses when the two axes share a
/// domain, straight chamfers otherwise; every emitted vertex has distance
/// exactly ε from the rectangle. Sides with an infinite bound have no edge;
/// adjacent runs are clipped at the window and returned as open polylines.
std::vector<Polyline> exact_outline(const PlanarBox& b, double ux, double uy, bool same_domain,
                                    const Window& win, bool& closed, int segments = 32) {
  const bool fx0 = std::isfinite(b.x0), fx1 = std::isfinite(b.x1);
  const bool fy0 = std::isfinite(b.y0), fy1 = std::isfinite(b.y1);
  const bool corners = ux > 0.0 || uy > 0.0;

  auto corner = [&](double cx, double cy, double sx, double sy, bool x_first) {
    // Quarter turn from (cx, cy + sy·uy) to (cx + sx·ux, cy) or the reverse.
    Polyline arc;
    for (int k = 0; k <= segments; ++k) {
      const double t = static_cast<double>(k) / segments;
      double ax, ay;
      if (same_domain) {
        const double phase = t * kPi / 2.0;
        ax = x_first ? std::cos(phase) : std::sin(phase);
        ay = x_first ? std::sin(phase) : std::cos(phase);
      } else {
        ax = x_first ? 1.0 - t : t;
        ay = x_first ? t : 1.0 - t;
      }
      arc.emplace_back(cx + sx * ux * ax, cy + sy * uy * ay);
    }
    return arc;
  };

  std::vector<std::optional<Polyline>> pieces(8);
  if (fy1)
    pieces[0] = Polyline{{fx0 ? b.x0 : win.x0, b.y1 + uy}, {fx1 ? b.x1 : win.x1, b.y1 + uy}};
  if (fx1 && fy1 && corners) pieces[1] = corner(b.x1, b.y1, +1, +1, false);
  if (fx1)
    pieces[2] = Polyline{{b.x1 + ux, fy1 ? b.y1 : win.y1}, {b.x1 + ux, fy0 ? b.y0 : win.y0}};
  if (fx1 && fy0 && corners) pieces[3] = corner(b.x1, b.y0, +1, -1, true);
  if (fy0)
    pieces[4] = Polyline{{fx1 ? b.x1 : win.x1, b.y0 - uy}, {fx0 ? b.x0 : win.x0, b.y0 - uy}};
  if (fx0 && fy0 && corners) pieces[5] = corner(b.x0, b.y0, -1, -1, false);
  if (fx0)
    pieces[6] = Polyline{{b.x0 - ux, fy0 ? b.y0 : win.y0}, {b.x0 - ux, fy1 ? b.y1 : win.y1}};
  if (fx0 && fy1 && corners) pieces[7] = corner(b.x0, b.y1, -1, +1, true);

  const bool all_edges = fx0 && fx1 && fy0 && fy1;
  closed = all_edges;
  std::vector<Polyline> runs;
  if (all_edges) {
    Polyline all;
    for (const auto& piece : pieces)
      if (piece)
        for (const Point& p : *piece) append_point(all, p);
    if (all.size() > 1 && all.front() == all.back()) all.pop_back();
    runs.push_back(std::move(all));
    return runs;
  }
  int first_gap = 0;
  while (pieces[first_gap]) ++first_gap;
  Polyline run;
  for (int i = 1; i <= 8; ++i) {
    const auto& piece = pieces[(first_gap + i) % 8];
    if (!piece) {
      if (run.size() >= 2) runs.push_back(std::move(run));
      run.clear();
      continue;
    }
    for (const Point& p : *piece) append_point(run, p);
  }
  if (run.size() >= 2) runs.push_back(std::move(run));
  return runs;
}

/// α-cut boundary traced radially from an interior center: memberships of a
/// star-shaped concept decrease monotonically along rays, so bisection per
/// ray pins the level set. Requires every box bounded on both plot axes.
Polyline radial_outline(const PlanarConcept& p, double alpha, double cx, double cy, double rmax,
                        int rays) {
  Polyline poly;
  poly.reserve(rays);
  for (int k = 0; k < rays; ++k) {
    const double phi = 2.0 * kPi * k / rays;
    const double ex = std::cos(phi), ey = std::sin(phi);
    double r_in = 0.0, r_out = rmax;
    if (p.membership(cx + rmax * ex, cy + rmax * ey) >= alpha) {
      poly.emplace_back(cx + rmax * ex, cy + rmax * ey);
      continue;
    }
    for (int it = 0; it < 200 && r_out - r_in > 1e-15 * rmax; ++it) {
      const double mid = 0.5 * (r_in + r_out);
      (p.membership(cx + mid * ex, cy + mid * ey) >= alpha ? r_in : r_out) = mid;
    }
    poly.emplace_back(cx + r_in * ex, cy + r_in * ey);
  }
  return poly;
}

struct PlotData {
  SpacePtr structure;
  int dx = 0, dy = 0;
  std::vector<std::string> names;
  std::vector<PlanarConcept> planars;
  std::vector<double> alphas;
  Window win{0, 1, 0, 1};
  std::vector<PlotCurve> curves;
};

PlotData build_plot(const Space& space, std::vector<std::string> names, const std::string& dim_x,
                    const std::string& dim_y, const std::vector<double>& alphas) {
  PlotData plot;
  plot.structure = space.structure;
  if (!plot.structure) fail("plot: space has no structure");
  plot.dx = plot.structure->dimension_index(dim_x);
  plot.dy = plot.structure->dimension_index(dim_y);
  if (plot.dx == plot.dy) fail("plot: the two dimensions must differ");
  for (double a : alphas) {
    if (!(a > 0.0) || !(a <= 1.0) || !std::isfinite(a)) fail("plot: alpha must lie in (0, 1]");
  }
  plot.alphas = alphas;
  if (names.empty())
    for (const auto& [name, s] : space.concepts) names.push_back(name);
  if (names.empty()) fail("plot: no concepts to plot");
  for (const std::string& name : names) {
    auto it = space.concepts.find(name);
    if (it == space.concepts.end()) fail("unknown concept: " + name);
    plot.names.push_back(name);
    plot.planars.push_back(flatten(it->second, plot.dx, plot.dy));
  }

  // Data window: finite core extents inflated by the largest α-cut offset,
  // then padded by 10%.
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  double grow_x = 0.0, grow_y = 0.0;
  for (const PlanarConcept& p : plot.planars) {
    double eps_max = 0.0;
    for (double a : plot.alphas)
      if (a <= p.mu0) eps_max = std::max(eps_max, std::log(p.mu0 / a) / p.c);
    grow_x = std::max(grow_x, eps_max / p.weff_x);
    grow_y = std::max(grow_y, eps_max / p.weff_y);
    for (const PlanarBox& b : p.boxes) {
      for (double v : {b.x0, b.x1})
        if (std::isfinite(v)) { x0 = std::min(x0, v); x1 = std::max(x1, v); }
      for (double v : {b.y0, b.y1})
        if (std::isfinite(v)) { y0 = std::min(y0, v); y1 = std::max(y1, v); }
    }
  }
  if (!(x0 <= x1)) { x0 = 0.0; x1 = 1.0; }
  if (!(y0 <= y1)) { y0 = 0.0; y1 = 1.0; }
  x0 -= grow_x; x1 += grow_x;
  y0 -= grow_y; y1 += grow_y;
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  const double pad_x = 0.1 * (x1 - x0), pad_y = 0.1 * (y1 - y0);
  plot.win = {x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y};

  for (std::size_t i = 0; i < plot.planars.size(); ++i) {
    const PlanarConcept& p = plot.planars[i];
    for (double a : plot.alphas) {
      if (a > p.mu0) continue;  // empty α-cut, nothing to outline
      const double eps = std::log(p.mu0 / a) / p.c;
      const double ux = eps / p.weff_x;
      const double uy = eps / p.weff_y;
      const bool bounded = std::all_of(p.boxes.begin(), p.boxes.end(), [](const PlanarBox& b) {
        return std::isfinite(b.x0) && std::isfinite(b.x1) && std::isfinite(b.y0) &&
               std::isfinite(b.y1);
      });
      std::vector<Polyline> runs;
      std::vector<bool> closed_flags;
      if (p.boxes.size() == 1 || !bounded) {
        // Exact per-box outlines; with several boxes, vertices strictly
        // inside the union are dropped and the outline splits there.
        for (const PlanarBox& b : p.boxes) {
          bool closed = false;
          std::vector<Polyline> outline = exact_outline(b, ux, uy, p.same_domain, plot.win, closed);
          if (p.boxes.size() > 1) {
            const double keep = a * (1.0 + 1e-9) + 1e-15;
            for (const Polyline& line : outline) {
              std::vector<char> inside(line.size());
              bool any_drop = false;
              for (std::size_t j = 0; j < line.size(); ++j) {
                inside[j] = p.membership(line[j].first, line[j].second) > keep;
                any_drop = any_drop || inside[j];
              }
              if (!any_drop) {
                runs.push_back(line);
                closed_flags.push_back(closed && outline.size() == 1);
                continue;
              }
              // Split the (possibly cyclic) vertex sequence at dropped runs.
              const std::size_t n = line.size();
              std::size_t start = 0;
              if (closed && outline.size() == 1)
                while (start < n && !inside[start]) ++start;
              Polyline run;
              for (std::size_t step = 0; step < n; ++step) {
                const std::size_t j = (start + step + (closed ? 1 : 0)) % n;
                if (inside[j]) {
                  if (run.size() >= 2) {
                    runs.push_back(std::move(run));
                    closed_flags.push_back(false);
                  }
                  run.clear();
                } else {
                  append_point(run, line[j]);
                }
              }
              if (run.size() >= 2) {
                runs.push_back(std::move(run));
                closed_flags.push_back(false);
              }
            }
          } else {
            for (Polyline& line : outline) {
              runs.push_back(std::move(line));
              closed_flags.push_back(closed);
            }
          }
        }
      } else {
        // Several bounded boxes: trace the level set radially from the
        // central region's midpoint (star-shaped, so rays cross it once).
        double cx = 0.0, cy = 0.0;
        {
          double bx0 = -kInf, bx1 = kInf, by0 = -kInf, by1 = kInf;
          for (const PlanarBox& b : p.boxes) {
            bx0 = std::max(bx0, b.x0); bx1 = std::min(bx1, b.x1);
            by0 = std::max(by0, b.y0); by1 = std::min(by1, b.y1);
          }
          cx = 0.5 * (bx0 + bx1);
          cy = 0.5 * (by0 + by1);
        }
        const double span_x = plot.win.x1 - plot.win.x0;
        const double span_y = plot.win.y1 - plot.win.y0;
        const double rmax = 2.0 * std::hypot(span_x, span_y);
        const int rays = std::max<int>(256, 128 * static_cast<int>(p.boxes.size()));
        runs.push_back(radial_outline(p, a, cx, cy, rmax, rays));
        closed_flags.push_back(true);
      }
      for (std::size_t r = 0; r < runs.size(); ++r) {
        if (runs[r].size() < 2) continue;
        plot.curves.push_back({plot.names[i], a, std::move(runs[r]), closed_flags[r]});
      }
    }
  }
  return plot;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
const char* kDashes[] = {"none", "7,4", "2,3", "9,3,2,3"};

}  // namespace

std::vector<PlotCurve> alpha_curves(const Space& space, const std::vector<std::string>& concepts,
                                    const std::string& dim_x, const std::string& dim_y,
                                    const std::vector<double>& alphas) {
  return build_plot(space, concepts, dim_x, dim_y, alphas).curves;
}

void export_plot(const Space& space, const std::vector<std::string>& concepts,
                 const std::string& dim_x, const std::string& dim_y,
                 const std::vector<double>& alphas, const std::string& out_path, int width,
                 int height) {
  if (width < 160 || height < 160) fail("plot: image too small");
  PlotData plot = build_plot(space, concepts, dim_x, dim_y, alphas);

  const double ml = 64, mr = 16, mt = 16, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - plot.win.x0) / (plot.win.x1 - plot.win.x0) * pw; };
  auto py = [&](double y) { return mt + (plot.win.y1 - y) / (plot.win.y1 - plot.win.y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<defs><clipPath id=\"plot\"><rect x=\"" << num(ml) << "\" y=\"" << num(mt)
      << "\" width=\"" << num(pw) << "\" height=\"" << num(ph) << "\"/></clipPath></defs>\n";

  // Axes: frame, five ticks per axis, dimension names as labels.
  svg << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = plot.win.x0 + (plot.win.x1 - plot.win.x0) * t / 4.0;
    const double fy = plot.win.y0 + (plot.win.y1 - plot.win.y0) * t / 4.0;
    svg << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(px(fx))
        << "\" y2=\"" << num(mt + ph + 5) << "\" stroke=\"#444444\"/>\n";
    svg << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(mt + ph + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << num(fx)
        << "</text>\n";
    svg << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#444444\"/>\n";
    svg << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(py(fy) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(fy)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      << escape_xml(dim_x) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(mt + ph / 2) << ")\">" << escape_xml(dim_y) << "</text>\n";

  // Core rectangles (infinite sides clamped to the window).
  for (std::size_t i = 0; i < plot.planars.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    for (const PlanarBox& b : plot.planars[i].boxes) {
      const double rx0 = std::isfinite(b.x0) ? b.x0 : plot.win.x0;
      const double rx1 = std::isfinite(b.x1) ? b.x1 : plot.win.x1;
      const double ry0 = std::isfinite(b.y0) ? b.y0 : plot.win.y0;
      const double ry1 = std::isfinite(b.y1) ? b.y1 : plot.win.y1;
      svg << "<rect x=\"" << num(px(rx0)) << "\" y=\"" << num(py(ry1)) << "\" width=\""
          << num(px(rx1) - px(rx0)) << "\" height=\"" << num(py(ry0) - py(ry1)) << "\" fill=\""
          << color << "\" fill-opacity=\"0.15\" stroke=\"" << color
          << "\" stroke-opacity=\"0.55\" clip-path=\"url(#plot)\"/>\n";
    }
  }

  // α-cut boundaries.
  std::map<std::string, std::size_t> color_of;
  for (std::size_t i = 0; i < plot.names.size(); ++i) color_of[plot.names[i]] = i;
  std::map<double, std::size_t> dash_of;
  for (double a : plot.alphas) dash_of.emplace(a, dash_of.size());
  for (const PlotCurve& curve : plot.curves) {
    const char* color = kPalette[color_of[curve.concept_name] % 10];
    const char* dash = kDashes[dash_of[curve.alpha] % 4];
    svg << "<path d=\"";
    for (std::size_t j = 0; j < curve.points.size(); ++j)
      svg << (j == 0 ? 'M' : 'L') << num(px(curve.points[j].first)) << ' '
          << num(py(curve.points[j].second));
    if (curve.closed) svg << 'Z';
    svg << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
    if (std::string(dash) != "none") svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " clip-path=\"url(#plot)\"/>\n";
  }

  // Legend: concept colors, then α dash patterns.
  double ly = mt + 14;
  const double lx = ml + pw - 150;
  for (std::size_t i = 0; i < plot.names.size(); ++i) {
    const char* color = kPalette[i % 10];
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 26)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
    svg << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(plot.names[i])
        << "</text>\n";
    ly += 16;
  }
  for (const auto& [a, idx] : dash_of) {
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 26)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"#333333\" stroke-width=\"1.8\"";
    if (std::string(kDashes[idx % 4]) != "none")
      svg << " stroke-dasharray=\"" << kDashes[idx % 4] << "\"";
    svg << "/>\n";
    svg << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">&#945; = " << num(a) << "</text>\n";
    ly += 16;
  }

  svg << "</svg>\n";

  std::ofstream out(out_path);
  if (!out) fail("cannot write file: " + out_path);
  out << svg.str();
  if (!out) fail("cannot write file: " + out_path);
}

double planar_membership(const Concept& s, int dim_x, int dim_y, double x, double y) {
  const int n = s.space()->dimension_count();
  if (dim_x < 0 || dim_x >= n || dim_y < 0 || dim_y >= n || dim_x == dim_y)
    fail("planar membership: invalid dimension pair");
  return flatten(s, dim_x, dim_y).membership(x, y);
}

}  // namespace cspace
