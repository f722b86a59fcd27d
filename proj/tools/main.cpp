// holosurf: classify the restricted holonomy group of hypersurfaces in
// space forms and verify the structure identities their curvature obeys.
//
// Subcommands:
//   classify       eigenvalue clusters, holonomy algebra, verdict per point
//   verify         Codazzi / second-Bianchi / Gauss / loop-transport residuals
//   list-families  built-in chart families and their parameters
//   schema         JSON schema of the report format
//
// Exit status: 0 definite consensus (classify) or residuals within bounds
// (verify), 2 undetermined / out of bounds, 1 any error.  Errors print one
// machine-parsable line: error[<code>] <message>.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holosurf/pipeline.hpp"

namespace {

using namespace holosurf;

struct CliOptions {
  std::string family;
  int n = 0;
  int k = 0;
  double r = 0.0;
  double rho = 0.0;
  double t = 0.0;
  double nu = 0.0;
  bool has_nu = false;
  std::vector<int> grid;
  std::vector<std::string> points;
  std::string spec_file;
  RunConfig config;
};

void add_run_options(CLI::App* cmd, CliOptions& opt) {
  cmd->set_help_flag("--help", "print help");  // frees --h for the step size
  CLI::Option* family =
      cmd->add_option("--family", opt.family, "built-in chart family");
  CLI::Option* spec_file = cmd->add_option(
      "--spec-file", opt.spec_file, "surface spec file (see README)");
  family->excludes(spec_file);
  spec_file->excludes(family);
  cmd->add_option("--n", opt.n, "hypersurface dimension");
  cmd->add_option("--k", opt.k, "first factor dimension (clifford_product)");
  cmd->add_option("--r", opt.r, "first factor radius (clifford_product)");
  cmd->add_option("--rho", opt.rho, "geodesic radius (geodesic spheres)");
  cmd->add_option("--t", opt.t, "distance to the leaf (equidistant)");
  cmd->add_option("--nu", opt.nu, "ambient sectional curvature")
      ->each([&opt](const std::string&) { opt.has_nu = true; });
  cmd->add_option("--grid", opt.grid,
                  "per-axis cell counts (one value broadcasts)");
  cmd->add_option("--points", opt.points,
                  "sample points: N random, or u1,...,un per occurrence");
  cmd->add_option("--h", opt.config.h, "finite-difference step");
  cmd->add_option("--order", opt.config.order,
                  "generator order: 0 curvature, 1 adds its derivatives");
  cmd->add_option("--eps-cluster", opt.config.eps_cluster,
                  "eigenvalue clustering width");
  cmd->add_option("--tol", opt.config.tol,
                  "residual/relation tolerance override (0 = scaled)");
  cmd->add_option("--output", opt.config.output, "text or json");
  cmd->add_option("--seed", opt.config.seed, "seed for random sample points");
  cmd->add_flag("--smoke", opt.config.smoke,
                "allow n < 3; verdicts become UNDETERMINED");
}

// --points accepts either one integer (random sample count) or coordinate
// tuples u1,...,un; a chart needs n >= 2 coordinates so the forms cannot
// collide.
void resolve_points(CliOptions& opt) {
  for (const std::string& tok : opt.points) {
    if (tok.find(',') == std::string::npos) {
      char* end = nullptr;
      const long count = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0')
        throw ValidationError("--points expects an integer count or a "
                              "comma-separated coordinate tuple; got '" +
                              tok + "'");
      opt.config.point_count = static_cast<int>(count);
      continue;
    }
    std::vector<double> u;
    std::stringstream ss(tok);
    std::string part;
    while (std::getline(ss, part, ',')) {
      char* end = nullptr;
      const double x = std::strtod(part.c_str(), &end);
      if (end == part.c_str() || *end != '\0')
        throw ValidationError("--points coordinate '" + part +
                              "' is not a number");
      u.push_back(x);
    }
    opt.config.points.push_back(std::move(u));
  }
  opt.config.grid = opt.grid;
}

RunConfig build_config(CliOptions& opt) {
  if (!opt.spec_file.empty()) {
    std::ifstream in(opt.spec_file);
    if (!in)
      throw ValidationError("cannot open spec file '" + opt.spec_file + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    opt.config.surface = parse_surface_spec(buffer.str());
  } else {
    if (opt.family.empty())
      throw ValidationError("one of --family or --spec-file is required");
    FamilySpec spec;
    spec.family = family_from_name(opt.family);
    spec.n = opt.n;
    spec.k = opt.k;
    spec.r = opt.r;
    spec.rho = opt.rho;
    spec.t = opt.t;
    if (!opt.has_nu)
      throw ValidationError("--nu is required with --family");
    spec.nu = opt.nu;
    opt.config.surface.is_family = true;
    opt.config.surface.family = spec;
  }
  resolve_points(opt);
  return opt.config;
}

int emit(const RunResult& result, const std::string& output) {
  if (output == "json")
    std::printf("%s\n", canonical_json(result.report).c_str());
  else
    std::fputs(render_text(result.report).c_str(), stdout);
  return result.exit_code;
}

int run_list_families(const std::string& output) {
  struct Row {
    Family family;
    const char* params;
  };
  const Row rows[] = {
      {Family::clifford_product, "n, nu > 0, k, r"},
      {Family::geodesic_sphere_S, "n, nu > 0, rho"},
      {Family::geodesic_sphere_H, "n, nu < 0, rho"},
      {Family::horosphere, "n, nu < 0"},
      {Family::equidistant, "n, nu < 0, t"},
      {Family::totally_geodesic, "n, nu != 0"},
      {Family::graph_generic, "n, nu >= 0 (amplitude, frequency via spec file)"},
  };
  if (output == "json") {
    Json list = Json::array();
    for (const Row& row : rows) {
      Json j;
      j["family"] = family_name(row.family);
      j["parameters"] = row.params;
      list.push_back(std::move(j));
    }
    std::printf("%s\n", canonical_json(list).c_str());
  } else {
    for (const Row& row : rows)
      std::printf("%-18s %s\n", family_name(row.family), row.params);
  }
  return 0;
}

int run_schema() {
  Json schema;
  schema["$schema"] = "http://json-schema.org/draft-07/schema#";
  schema["title"] = "holosurf report";
  schema["type"] = "object";
  schema["required"] =
      Json::array({"schema_version", "config", "points", "aggregate"});
  Json props;
  props["schema_version"] = Json{{"const", 1}};
  props["config"] = Json{
      {"type", "object"},
      {"description",
       "run configuration echo; surface_spec feeds back via --spec-file"}};
  Json point;
  point["type"] = "object";
  point["description"] =
      "classify: u, clusters, algebra_dim, blocks, verdict; "
      "verify: u, residuals, bounds";
  props["points"] = Json{{"type", "array"}, {"items", std::move(point)}};
  props["aggregate"] = Json{
      {"type", "object"},
      {"description",
       "classify: consensus, split/flatness when applicable, residual_maxima, "
       "tolerances, tool_version; verify: residual_maxima, tolerances, "
       "tool_version, within_tolerances"}};
  schema["properties"] = std::move(props);
  std::printf("%s\n", canonical_json(schema).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy classification of hypersurfaces in space forms"};
  app.require_subcommand(1);

  CliOptions classify_opt;
  CLI::App* classify =
      app.add_subcommand("classify", "cluster spectra, name the holonomy group");
  add_run_options(classify, classify_opt);

  CliOptions verify_opt;
  CLI::App* verify =
      app.add_subcommand("verify", "check curvature identities and transport");
  add_run_options(verify, verify_opt);

  std::string list_output = "text";
  CLI::App* list =
      app.add_subcommand("list-families", "print built-in chart families");
  list->add_option("--output", list_output, "text or json");

  CLI::App* schema = app.add_subcommand("schema", "print the report schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (classify->parsed())
      return emit(run_classify(build_config(classify_opt)),
                  classify_opt.config.output);
    if (verify->parsed())
      return emit(run_verify(build_config(verify_opt)),
                  verify_opt.config.output);
    if (list->parsed()) return run_list_families(list_output);
    if (schema->parsed()) return run_schema();
  } catch (const SpecParseError& e) {
    std::fprintf(stderr, "error[%s] line %d, col %d: %s\n", e.code().c_str(),
                 e.line(), e.col(), e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error[%s] %s\n", e.code().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[internal] %s\n", e.what());
    return 1;
  }
  return 1;
}
