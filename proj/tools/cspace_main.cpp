#include "cspace/measure.hpp"
#include "cspace/oracle.hpp"
#include "cspace/relations.hpp"
#include "cspace/space_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_number(double v) { std::cout << fmt(v) << '\n'; }
void print_bool(bool v) { std::cout << (v ? "true" : "false") << '\n'; }
void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw cspace::Error("cannot parse coordinate: " + item);
    }
    if (used != item.size()) throw cspace::Error("cannot parse coordinate: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw cspace::Error("--point must list coordinates v1,v2,...");
  return out;
}

/// Resolves positional arguments to (space path, names...): either the space
/// file is given explicitly as the first positional, or it comes from the
/// CS_SPACE environment variable and only the names are given.
std::vector<std::string> with_space(std::vector<std::string> args, std::size_t names,
                                    const std::string& usage) {
  if (args.size() == names + 1) return args;
  const char* env = std::getenv("CS_SPACE");
  if (args.size() == names && env != nullptr && *env != '\0') {
    args.insert(args.begin(), env);
    return args;
  }
  throw cspace::Error("usage: " + usage);
}

const cspace::Concept& find_concept(const cspace::Space& space, const std::string& name) {
  auto it = space.concepts.find(name);
  if (it == space.concepts.end()) throw cspace::Error("unknown concept: " + name);
  return it->second;
}

int resolve_dimension(const cspace::Space& space, const std::string& dim) {
  try {
    std::size_t used = 0;
    const int d = std::stoi(dim, &used);
    if (used == dim.size()) {
      if (d < 0 || d >= space.structure->dimension_count())
        throw cspace::Error("dimension index out of range: " + dim);
      return d;
    }
  } catch (const cspace::Error&) {
    throw;
  } catch (const std::exception&) {
    // not an integer: fall through to name lookup
  }
  return space.structure->dimension_index(dim);
}

void save_result(cspace::Space space, const std::string& out_path,
                 const std::vector<std::pair<std::string, cspace::Concept>>& additions) {
  for (const auto& [name, result] : additions) space.concepts.insert_or_assign(name, result);
  cspace::save_space(space, out_path);
}

void require_save_pair(const std::string& save, const std::string& out) {
  if (save.empty() != out.empty())
    throw cspace::Error("--save NAME and --out PATH must be used together");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzy conceptual space toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // validate -------------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "load a space file and report its contents");
  static std::vector<std::string> validate_args;
  validate->add_option("args", validate_args, "SPACE");
  validate->callback([&] {
    auto pos = with_space(validate_args, 0, "cspace validate SPACE");
    cspace::Space space = cspace::load_space(pos[0]);
    json summary;
    summary["ok"] = true;
    summary["dimensions"] = space.structure->dimension_names();
    json doms = json::object();
    for (const auto& [name, dims] : space.structure->domains()) doms[name] = dims;
    summary["domains"] = std::move(doms);
    json concepts = json::object();
    for (const auto& [name, s] : space.concepts) {
      json entry;
      entry["cuboids"] = s.core().cuboids().size();
      entry["mu0"] = s.mu0();
      entry["c"] = s.c();
      json domain_list = json::array();
      for (const auto& d : s.domain_set()) domain_list.push_back(d);
      entry["domains"] = std::move(domain_list);
      bool bounded = true;
      for (const auto& box : s.core().cuboids()) bounded = bounded && box.bounded();
      entry["bounded"] = bounded;
      concepts[name] = std::move(entry);
    }
    summary["concepts"] = std::move(concepts);
    print_json(summary);
  });

  // op ---------------------------------------------------------------------
  auto* op = app.add_subcommand("op", "concept-forming operations");
  op->require_subcommand(1);
  static std::string op_save, op_out;

  auto add_save_flags = [&](CLI::App* cmd) {
    cmd->add_option("--save", op_save, "store the result under this concept name");
    cmd->add_option("--out", op_out, "write the updated space to this file");
  };

  auto* op_intersect = op->add_subcommand("intersect", "intersection of two concepts");
  static std::vector<std::string> op_intersect_args;
  op_intersect->add_option("args", op_intersect_args, "SPACE A B");
  add_save_flags(op_intersect);
  op_intersect->callback([&] {
    auto pos = with_space(op_intersect_args, 2, "cspace op intersect SPACE A B");
    cspace::Space space = cspace::load_space(pos[0]);
    cspace::Concept r = cspace::intersect(find_concept(space, pos[1]), find_concept(space, pos[2]));
    print_json(cspace::concept_to_json(r));
    require_save_pair(op_save, op_out);
    if (!op_save.empty()) save_result(std::move(space), op_out, {{op_save, std::move(r)}});
  });

  auto* op_unify = op->add_subcommand("unify", "union of two concepts");
  static std::vector<std::string> op_unify_args;
  op_unify->add_option("args", op_unify_args, "SPACE A B");
  add_save_flags(op_unify);
  op_unify->callback([&] {
    auto pos = with_space(op_unify_args, 2, "cspace op unify SPACE A B");
    cspace::Space space = cspace::load_space(pos[0]);
    cspace::Concept r = cspace::unify(find_concept(space, pos[1]), find_concept(space, pos[2]));
    print_json(cspace::concept_to_json(r));
    require_save_pair(op_save, op_out);
    if (!op_save.empty()) save_result(std::move(space), op_out, {{op_save, std::move(r)}});
  });

  auto* op_project = op->add_subcommand("project", "projection onto a subset of domains");
  static std::vector<std::string> op_project_args;
  static std::string op_project_domains;
  op_project->add_option("args", op_project_args, "SPACE NAME");
  op_project->add_option("--domains", op_project_domains, "comma-separated target domains")
      ->required();
  add_save_flags(op_project);
  op_project->callback([&] {
    auto pos = with_space(op_project_args, 1, "cspace op project SPACE NAME --domains D1,D2");
    cspace::Space space = cspace::load_space(pos[0]);
    const auto names = split_list(op_project_domains);
    if (names.empty()) throw cspace::Error("--domains must list at least one domain");
    cspace::Concept r = cspace::project(find_concept(space, pos[1]),
                                        std::set<std::string>(names.begin(), names.end()));
    print_json(cspace::concept_to_json(r));
    require_save_pair(op_save, op_out);
    if (!op_save.empty()) save_result(std::move(space), op_out, {{op_save, std::move(r)}});
  });

  auto* op_cut = op->add_subcommand("cut", "split a concept at a value on one dimension");
  static std::vector<std::string> op_cut_args;
  static std::string op_cut_dim;
  static double op_cut_value = 0.0;
  op_cut->add_option("args", op_cut_args, "SPACE NAME");
  op_cut->add_option("--dim", op_cut_dim, "dimension index or name")->required();
  op_cut->add_option("--value", op_cut_value, "cut position")->required();
  add_save_flags(op_cut);
  op_cut->callback([&] {
    auto pos = with_space(op_cut_args, 1, "cspace op cut SPACE NAME --dim D --value V");
    cspace::Space space = cspace::load_space(pos[0]);
    const int d = resolve_dimension(space, op_cut_dim);
    auto [lower, upper] = cspace::cut(find_concept(space, pos[1]), d, op_cut_value);
    json out;
    out["lower"] = lower ? cspace::concept_to_json(*lower) : json(nullptr);
    out["upper"] = upper ? cspace::concept_to_json(*upper) : json(nullptr);
    print_json(out);
    require_save_pair(op_save, op_out);
    if (!op_save.empty()) {
      std::vector<std::pair<std::string, cspace::Concept>> additions;
      if (lower) additions.emplace_back(op_save + "_lower", std::move(*lower));
      if (upper) additions.emplace_back(op_save + "_upper", std::move(*upper));
      save_result(std::move(space), op_out, additions);
    }
  });

  // rel --------------------------------------------------------------------
  auto* rel = app.add_subcommand("rel", "relations between concepts");
  rel->require_subcommand(1);

  auto* rel_subsethood = rel->add_subcommand("subsethood", "degree to which A is a subset of B");
  static std::vector<std::string> rel_subsethood_args;
  rel_subsethood->add_option("args", rel_subsethood_args, "SPACE A B");
  rel_subsethood->callback([&] {
    auto pos = with_space(rel_subsethood_args, 2, "cspace rel subsethood SPACE A B");
    cspace::Space space = cspace::load_space(pos[0]);
    print_number(cspace::subsethood(find_concept(space, pos[1]), find_concept(space, pos[2])));
  });

  auto* rel_implies = rel->add_subcommand("implies", "degree to which A implies B");
  static std::vector<std::string> rel_implies_args;
  rel_implies->add_option("args", rel_implies_args, "SPACE A B");
  rel_implies->callback([&] {
    auto pos = with_space(rel_implies_args, 2, "cspace rel implies SPACE A B");
    cspace::Space space = cspace::load_space(pos[0]);
    print_number(cspace::implication(find_concept(space, pos[1]), find_concept(space, pos[2])));
  });

  auto* rel_similarity = rel->add_subcommand("similarity", "similarity of A to B");
  static std::vector<std::string> rel_similarity_args;
  rel_similarity->add_option("args", rel_similarity_args, "SPACE A B");
  rel_similarity->callback([&] {
    auto pos = with_space(rel_similarity_args, 2, "cspace rel similarity SPACE A B");
    cspace::Space space = cspace::load_space(pos[0]);
    print_number(
        cspace::concept_similarity(find_concept(space, pos[1]), find_concept(space, pos[2])));
  });

  auto* rel_between = rel->add_subcommand("between", "is B between A and C");
  static std::vector<std::string> rel_between_args;
  rel_between->add_option("args", rel_between_args, "SPACE A B C");
  rel_between->callback([&] {
    auto pos = with_space(rel_between_args, 3, "cspace rel between SPACE A B C");
    cspace::Space space = cspace::load_space(pos[0]);
    print_bool(cspace::concept_between(find_concept(space, pos[1]), find_concept(space, pos[2]),
                                       find_concept(space, pos[3])));
  });

  auto* rel_size = rel->add_subcommand("size", "measure of a concept");
  static std::vector<std::string> rel_size_args;
  static bool rel_size_verify = false;
  static std::uint64_t rel_size_samples = 1'000'000;
  static std::uint64_t rel_size_seed = 42;
  rel_size->add_option("args", rel_size_args, "SPACE NAME");
  rel_size->add_flag("--verify", rel_size_verify, "cross-check with a Monte-Carlo estimate");
  rel_size->add_option("--samples", rel_size_samples, "Monte-Carlo sample count");
  rel_size->add_option("--seed", rel_size_seed, "Monte-Carlo seed");
  rel_size->callback([&] {
    auto pos = with_space(rel_size_args, 1, "cspace rel size SPACE NAME [--verify]");
    cspace::Space space = cspace::load_space(pos[0]);
    const cspace::Concept& s = find_concept(space, pos[1]);
    const double closed = cspace::concept_size(s);
    if (!rel_size_verify) {
      print_number(closed);
      return;
    }
    cspace::McConfig cfg;
    cfg.samples = rel_size_samples;
    cfg.seed = rel_size_seed;
    const cspace::McEstimate mc = cspace::mc_measure(s, cfg);
    json out;
    out["closed_form"] = closed;
    out["mc_estimate"] = mc.estimate;
    out["stderr"] = mc.stderr_;
    out["relative_deviation"] = std::abs(mc.estimate - closed) / closed;
    out["samples"] = mc.samples;
    out["seed"] = mc.seed;
    out["rng"] = "splitmix64";
    print_json(out);
  });

  auto* rel_membership = rel->add_subcommand("membership", "membership of a point in a concept");
  static std::vector<std::string> rel_membership_args;
  static std::string rel_membership_point;
  rel_membership->add_option("args", rel_membership_args, "SPACE NAME");
  rel_membership->add_option("--point", rel_membership_point, "coordinates v1,v2,...")->required();
  rel_membership->callback([&] {
    auto pos = with_space(rel_membership_args, 1, "cspace rel membership SPACE NAME --point ...");
    cspace::Space space = cspace::load_space(pos[0]);
    const cspace::Concept& s = find_concept(space, pos[1]);
    const std::vector<double> coords = parse_point(rel_membership_point);
    const int n = space.structure->dimension_count();
    if (static_cast<int>(coords.size()) != n)
      throw cspace::Error("point has " + std::to_string(coords.size()) +
                          " coordinates, the space has " + std::to_string(n) + " dimensions");
    cspace::Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = coords[static_cast<std::size_t>(i)];
    print_number(cspace::membership(s, x));
  });

  // plot ---------------------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "export an SVG projection of concepts");
  static std::vector<std::string> plot_args;
  static std::string plot_dims, plot_concepts, plot_out;
  static std::vector<double> plot_alphas;
  plot->add_option("args", plot_args, "SPACE");
  plot->add_option("--dims", plot_dims, "two dimension names, comma-separated")->required();
  plot->add_option("--alpha", plot_alphas, "α-cut level (repeatable)");
  plot->add_option("--concepts", plot_concepts, "concept names, comma-separated (default: all)");
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->callback([&] {
    auto pos = with_space(plot_args, 0, "cspace plot SPACE --dims X,Y --out FILE");
    cspace::Space space = cspace::load_space(pos[0]);
    const auto dims = split_list(plot_dims);
    if (dims.size() != 2) throw cspace::Error("--dims needs exactly two dimension names");
    std::vector<double> alphas = plot_alphas.empty() ? std::vector<double>{0.5} : plot_alphas;
    const auto names = split_list(plot_concepts);
    cspace::export_plot(space, names, dims[0], dims[1], alphas, plot_out);
    std::size_t curves = cspace::alpha_curves(space, names, dims[0], dims[1], alphas).size();
    json out;
    out["out"] = plot_out;
    out["curves"] = curves;
    print_json(out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cspace::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
