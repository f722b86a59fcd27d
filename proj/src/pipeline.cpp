#include "holosurf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "holosurf/curvature.hpp"
#include "holosurf/holonomy.hpp"
#include "holosurf/splitting.hpp"

namespace holosurf {

namespace {

std::uint64_t lcg_next(std::uint64_t& s) {
  s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  return s;
}

double uniform01(std::uint64_t& s) {
  return static_cast<double>(lcg_next(s) >> 11) * 0x1.0p-53;
}

void validate(const RunConfig& config) {
  if (!(config.h > 0.0)) throw ValidationError("h must be positive");
  if (config.order != 0 && config.order != 1)
    throw ValidationError("order must be 0 or 1");
  if (!(config.eps_cluster > 0.0))
    throw ValidationError("eps-cluster must be positive");
  if (config.tol < 0.0) throw ValidationError("tol must be nonnegative");
  if (config.tol_gen < 0.0)
    throw ValidationError("tol-gen must be nonnegative");
  if (config.point_count < 1)
    throw ValidationError("point count must be at least 1");
  if (config.output != "text" && config.output != "json")
    throw ValidationError("output must be 'text' or 'json'");
}

// Explicit points are used as given; grids sample cell centers of the box
// inset by 3h per side; random points draw uniformly from a further inset
// that keeps transport loops interior as well.
std::vector<Vec> sample_points(const ImmersionChart& chart,
                               const RunConfig& config) {
  const Box& box = chart.domain();
  const std::size_t axes = box.lo.size();
  std::vector<Vec> out;

  if (!config.points.empty()) {
    for (std::size_t p = 0; p < config.points.size(); ++p) {
      if (config.points[p].size() != axes)
        throw ValidationError("point " + std::to_string(p + 1) + " has " +
                              std::to_string(config.points[p].size()) +
                              " coordinates; the chart needs " +
                              std::to_string(axes));
      Vec u(axes);
      for (std::size_t i = 0; i < axes; ++i) u[i] = config.points[p][i];
      if (!box.contains(u))
        throw ValidationError("point " + std::to_string(p + 1) +
                              " lies outside the chart domain");
      out.push_back(std::move(u));
    }
    return out;
  }

  if (!config.grid.empty()) {
    std::vector<int> counts = config.grid;
    if (counts.size() == 1) counts.assign(axes, counts[0]);
    if (counts.size() != axes)
      throw ValidationError("grid needs 1 or n=" + std::to_string(axes) +
                            " counts");
    long total = 1;
    for (int c : counts) {
      if (c < 1) throw ValidationError("grid counts must be at least 1");
      total *= c;
      if (total > 4096)
        throw ValidationError("grid produces more than 4096 points");
    }
    std::vector<int> index(axes, 0);
    for (long p = 0; p < total; ++p) {
      Vec u(axes);
      for (std::size_t i = 0; i < axes; ++i) {
        const double lo = box.lo[i] + 3.0 * config.h;
        const double hi = box.hi[i] - 3.0 * config.h;
        u[i] = lo + (hi - lo) * (index[i] + 0.5) /
                        static_cast<double>(counts[i]);
      }
      out.push_back(std::move(u));
      for (std::size_t i = axes; i-- > 0;) {
        if (++index[i] < counts[i]) break;
        index[i] = 0;
      }
    }
    return out;
  }

  std::uint64_t state = config.seed * 2654435761ULL + 17;
  lcg_next(state);
  for (int p = 0; p < config.point_count; ++p) {
    Vec u(axes);
    for (std::size_t i = 0; i < axes; ++i) {
      const double width = box.hi[i] - box.lo[i];
      const double inset = 3.0 * config.h + 0.05 * width;
      u[i] = box.lo[i] + inset + (width - 2.0 * inset) * uniform01(state);
    }
    out.push_back(std::move(u));
  }
  return out;
}

Json json_point(const Vec& u) {
  Json a = Json::array();
  for (std::size_t i = 0; i < u.size(); ++i) a.push_back(u[i]);
  return a;
}

Json json_clusters(const std::vector<Cluster>& clusters) {
  Json a = Json::array();
  for (const Cluster& c : clusters) {
    Json j;
    j["multiplicity"] = c.multiplicity;
    j["value"] = c.value;
    a.push_back(std::move(j));
  }
  return a;
}

Json json_verdict(const GroupVerdict& v) {
  Json j;
  j["diagnostic"] = v.diagnostic;
  j["dim_expected"] = v.dim_expected;
  j["dim_found"] = v.dim_found;
  j["k"] = v.k;
  j["kind"] = verdict_name(v.kind);
  return j;
}

Json json_split(const SplitReport& rep) {
  Json j;
  j["Lambda"] = rep.Lambda;
  j["Theta"] = rep.Theta;
  j["case"] = split_case_name(rep.split_case);
  j["constancy_residual"] = rep.constancy_residual;
  j["cross_curvature_residual"] = rep.cross_curvature_residual;
  j["diagnostic"] = rep.diagnostic;
  j["en_lambda"] = rep.en_lambda;
  j["factor_curvatures"] =
      Json::array({rep.factor_curvatures.first, rep.factor_curvatures.second});
  j["gamma_aan"] = rep.gamma_aan;
  j["k"] = rep.k;
  j["parallelism_residual"] = rep.parallelism_residual;
  j["relation_residual"] = rep.relation_residual;
  return j;
}

double max_curvature(const std::vector<FramedPoint>& fps) {
  double amax = 0.0;
  for (const FramedPoint& fp : fps)
    for (std::size_t q = 0; q < fp.lambda.size(); ++q)
      amax = std::max(amax, std::abs(fp.lambda[q]));
  return amax;
}

Json report_shell(const RunConfig& config) {
  Json report;
  report["schema_version"] = 1;
  report["config"] = config_json(config);
  report["points"] = Json::array();
  report["aggregate"] = Json::object();
  return report;
}

}  // namespace

Json config_json(const RunConfig& config) {
  Json j;
  j["eps_cluster"] = config.eps_cluster;
  Json grid = Json::array();
  for (int c : config.grid) grid.push_back(c);
  j["grid"] = std::move(grid);
  j["h"] = config.h;
  j["order"] = config.order;
  j["output"] = config.output;
  j["point_count"] = config.point_count;
  Json points = Json::array();
  for (const std::vector<double>& p : config.points) {
    Json one = Json::array();
    for (double x : p) one.push_back(x);
    points.push_back(std::move(one));
  }
  j["points"] = std::move(points);
  j["seed"] = config.seed;
  j["smoke"] = config.smoke;
  j["surface_spec"] = surface_spec_text(config.surface);
  j["tol"] = config.tol;
  j["tol_gen"] = config.tol_gen;
  return j;
}

RunResult run_classify(const RunConfig& config) {
  validate(config);
  const BuiltChart built = build_surface(config.surface, config.smoke);
  const ImmersionChart& chart = built.chart;
  const int n = chart.n();
  const double nu = chart.model().nu;
  const std::vector<Vec> us = sample_points(chart, config);
  const double gen_tol = config.tol_gen > 0.0 ? config.tol_gen : 1e-8;

  Json report = report_shell(config);
  std::vector<FramedPoint> fps;
  std::vector<GroupVerdict> verdicts;
  for (const Vec& u : us) {
    FramedPoint fp = framed_point(chart, u, config.h);
    const std::vector<Cluster> clusters =
        cluster_profile(fp, config.eps_cluster);
    const HolonomyAlgebra alg =
        holonomy_algebra(generators_at(fp, nu, config.order, &chart, u,
                                       config.h),
                         n, gen_tol, config.order);
    GroupVerdict verdict = name_group(alg, clusters, n, nu);
    if (n < 3) {
      verdict.kind = VerdictKind::UNDETERMINED;
      verdict.k = 0;
      verdict.diagnostic = "smoke run below the classification dimension";
    }

    Json rec;
    rec["algebra_dim"] = alg.dim;
    Json blocks = Json::array();
    for (const std::vector<int>& b : alg.blocks) {
      Json one = Json::array();
      for (int i : b) one.push_back(i);
      blocks.push_back(std::move(one));
    }
    rec["blocks"] = std::move(blocks);
    rec["clusters"] = json_clusters(clusters);
    rec["u"] = json_point(u);
    rec["verdict"] = json_verdict(verdict);
    report["points"].push_back(std::move(rec));

    fps.push_back(std::move(fp));
    verdicts.push_back(std::move(verdict));
  }

  GroupVerdict consensus = verdicts.front();
  for (const GroupVerdict& v : verdicts) {
    if (v.kind == consensus.kind && v.k == consensus.k) continue;
    consensus = GroupVerdict{};
    consensus.kind = VerdictKind::UNDETERMINED;
    consensus.dim_expected = n * (n - 1) / 2;
    consensus.diagnostic = "per-point verdicts disagree";
    break;
  }

  const double amax = max_curvature(fps);
  const double rel_tol =
      config.tol > 0.0 ? config.tol : 1e-3 * (std::abs(nu) + amax * amax);
  Json residual_maxima = Json::object();
  Json split_json;
  Json flatness_json;

  if (consensus.kind == VerdictKind::PRODUCT_SO_K_SO_NK ||
      consensus.kind == VerdictKind::SO_N_MINUS_1) {
    SplitReport rep;
    try {
      rep = consensus.kind == VerdictKind::PRODUCT_SO_K_SO_NK
                ? check_case_a(fps, nu, rel_tol, &chart, config.h,
                               config.eps_cluster)
                : check_case_b(fps, nu, rel_tol, &chart, config.h,
                               config.eps_cluster);
    } catch (const Error& e) {
      rep.split_case = SplitCase::none;
      rep.diagnostic = e.what();
    }
    if (rep.split_case == SplitCase::none) {
      consensus.kind = VerdictKind::UNDETERMINED;
      consensus.k = 0;
      consensus.diagnostic =
          "split verification failed: " +
          (rep.diagnostic.empty() ? std::string("no certified case")
                                  : rep.diagnostic);
    } else {
      residual_maxima["cross_curvature"] = rep.cross_curvature_residual;
      residual_maxima["parallelism"] = rep.parallelism_residual;
      residual_maxima["relation"] = rep.relation_residual;
      residual_maxima["spectrum_drift"] = rep.constancy_residual;
    }
    split_json = json_split(rep);
  }

  if (consensus.kind == VerdictKind::TRIVIAL) {
    const double flat_tol =
        config.tol > 0.0 ? config.tol
                         : 1e-6 * (std::abs(nu) + amax * amax);
    const FlatnessReport flat = flatness_check(fps.front(), nu, flat_tol);
    flatness_json = Json::object();
    flatness_json["diagnostic"] = flat.diagnostic;
    flatness_json["flat"] = flat.flat;
    double margin = 0.0;
    for (const FramedPoint& fp : fps)
      margin = std::max(margin, curvature_scale(fp));
    residual_maxima["flatness_margin"] = margin;
  }

  Json aggregate;
  aggregate["consensus"] = json_verdict(consensus);
  if (!flatness_json.is_null()) aggregate["flatness"] = std::move(flatness_json);
  aggregate["residual_maxima"] = std::move(residual_maxima);
  if (!split_json.is_null()) aggregate["split"] = std::move(split_json);
  Json tolerances;
  tolerances["eps_cluster"] = config.eps_cluster;
  tolerances["gen"] = gen_tol;
  tolerances["relation"] = rel_tol;
  aggregate["tolerances"] = std::move(tolerances);
  aggregate["tool_version"] = kToolVersion;
  report["aggregate"] = std::move(aggregate);

  RunResult result;
  result.report = std::move(report);
  result.exit_code = consensus.kind == VerdictKind::UNDETERMINED ? 2 : 0;
  return result;
}

RunResult run_verify(const RunConfig& config) {
  validate(config);
  const BuiltChart built = build_surface(config.surface, config.smoke);
  const ImmersionChart& chart = built.chart;
  const int n = chart.n();
  const std::vector<Vec> us = sample_points(chart, config);
  const double loop_eps = 1e-2;

  Json report = report_shell(config);
  bool within = true;
  Json maxima;
  maxima["codazzi"] = 0.0;
  maxima["gauss_crosscheck"] = 0.0;
  maxima["loop_vs_algebra"] = 0.0;
  maxima["second_bianchi"] = 0.0;
  Json bounds_max = maxima;

  for (const Vec& u : us) {
    const FramedPoint fp = framed_point(chart, u, config.h);
    const double a2 = [&] {
      const double f = frobenius(fp.A_frame);
      return f * f;
    }();
    const double scale = curvature_scale(fp);

    Json residuals;
    residuals["codazzi"] = codazzi_residual(chart, u, config.h);
    residuals["gauss_crosscheck"] =
        gauss_crosscheck_residual(chart, u, config.h);
    double loop_max = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const SkewEndo loop = loop_holonomy(chart, u, i, j, loop_eps, 8);
        const SkewEndo endo = curvature_endo(fp, i, j);
        loop_max = std::max(loop_max, frobenius(loop.mat() - endo.mat()));
      }
    residuals["loop_vs_algebra"] = loop_max;
    residuals["second_bianchi"] = second_bianchi_residual(chart, u, config.h);

    Json bounds;
    bounds["codazzi"] =
        config.tol > 0.0 ? config.tol : 1e-3 * (1.0 + a2);
    bounds["gauss_crosscheck"] =
        config.tol > 0.0 ? config.tol : 1e-3 * (1.0 + scale);
    bounds["loop_vs_algebra"] = 5e-2 * (1.0 + scale);
    // The identity bound vanishes with R; the second term is the measured
    // noise level of the nested stencil and keeps flat charts honest.
    bounds["second_bianchi"] =
        config.tol > 0.0
            ? config.tol
            : std::max(1e-2 * scale * n, 1e-3 * n * (1.0 + a2));

    for (const auto& [name, value] : residuals.items()) {
      const double r = value.get<double>();
      const double b = bounds[name].get<double>();
      if (r > b) within = false;
      if (r > maxima[name].get<double>()) maxima[name] = r;
      if (b > bounds_max[name].get<double>()) bounds_max[name] = b;
    }

    Json rec;
    rec["bounds"] = std::move(bounds);
    rec["residuals"] = std::move(residuals);
    rec["u"] = json_point(u);
    report["points"].push_back(std::move(rec));
  }

  Json aggregate;
  aggregate["residual_maxima"] = std::move(maxima);
  aggregate["tolerances"] = std::move(bounds_max);
  aggregate["tool_version"] = kToolVersion;
  aggregate["within_tolerances"] = within;
  report["aggregate"] = std::move(aggregate);

  RunResult result;
  result.report = std::move(report);
  result.exit_code = within ? 0 : 2;
  return result;
}

}  // namespace holosurf
