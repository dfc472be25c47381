#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>

#include "lrlab/experiments.hpp"

namespace lrlab {

using nlohmann::json;

/// Config-level failure carrying the offending field path.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what) {}
};

inline const json& require_field(const json& j, const std::string& key,
                                 const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(context + "." + key, "missing");
  return *it;
}

template <typename T>
inline T get_field(const json& j, const std::string& key, const std::string& context) {
  try {
    return require_field(j, key, context).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(context + "." + key, e.what());
  }
}

template <typename T>
inline T get_field_or(const json& j, const std::string& key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

inline DecayFn parse_profile(const json& j, const std::string& context) {
  std::string type = get_field<std::string>(j, "type", context);
  if (type == "power") return DecayFn::power_law(get_field<double>(j, "alpha", context));
  if (type == "stretched")
    return DecayFn::stretched_exp(get_field<double>(j, "b", context),
                                  get_field<double>(j, "p", context));
  if (type == "finite_range") return DecayFn::finite_range(get_field<int>(j, "R", context));
  throw ConfigError(context + ".type", "unknown profile type '" + type + "'");
}

inline GraphSpec parse_graph(const json& j) {
  GraphSpec spec;
  std::string kind = get_field<std::string>(j, "kind", "graph");
  if (kind == "chain")
    spec.kind = GraphKind::Chain;
  else if (kind == "box")
    spec.kind = GraphKind::Box;
  else if (kind == "torus")
    spec.kind = GraphKind::Torus;
  else if (kind != "toric_edges")
    throw ConfigError("graph.kind", "unknown kind '" + kind + "'");
  spec.L = get_field<int>(j, "L", "graph");
  spec.D = get_field_or<int>(j, "D", 1);
  spec.q = get_field_or<int>(j, "q", 2);
  return spec;
}

inline LocalOp parse_observable(const json& j, const std::string& context) {
  int site = get_field<int>(j, "site", context);
  std::string letter = get_field<std::string>(j, "letter", context);
  if (letter.size() != 1) throw ConfigError(context + ".letter", "expected one of X/Y/Z");
  double strength = get_field_or<double>(j, "strength", 1.0);
  return dense_from_pauli(make_pauli_string({{site, letter[0]}}), strength);
}

/// Custom term list: {terms: [{support: [ints], matrix: row-major [[re,im],...]}]}.
inline Interaction parse_custom_terms(const SiteGraph& g, const json& doc) {
  Interaction psi;
  psi.graph = &g;
  const json& terms = require_field(doc, "terms", "custom");
  int idx = 0;
  for (const json& t : terms) {
    std::string ctx = "custom.terms[" + std::to_string(idx++) + "]";
    SiteSet support = get_field<SiteSet>(t, "support", ctx);
    for (int s : support)
      if (s < 0 || s >= g.size())
        throw ConfigError(ctx + ".support", "site " + std::to_string(s) + " outside the graph");
    support = sorted_unique(std::move(support));
    const json& entries = require_field(t, "matrix", ctx);
    int64_t dim = int_pow(g.q(), static_cast<int>(support.size()));
    if (static_cast<int64_t>(entries.size()) != dim * dim)
      throw ConfigError(ctx + ".matrix", "expected " + std::to_string(dim * dim) +
                                             " row-major [re, im] entries, got " +
                                             std::to_string(entries.size()));
    Matrix m(dim, dim);
    for (int64_t k = 0; k < dim * dim; ++k) {
      const json& e = entries[k];
      if (!e.is_array() || e.size() != 2) throw ConfigError(ctx + ".matrix", "entries are [re, im]");
      m(k / dim, k % dim) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    LocalOp op = make_local_op(std::move(support), std::move(m), g.q());
    if (!op.hermitian) throw ConfigError(ctx + ".matrix", "term is not Hermitian");
    psi.terms.push_back(make_term(std::move(op)));
  }
  return psi;
}

struct BuiltModel {
  Interaction psi;
  DecayFn profile;  // the profile bounds are evaluated against
};

inline BuiltModel build_model(const SiteGraph& g, const json& cfg) {
  const json& m = require_field(cfg, "model", "");
  std::string name = get_field<std::string>(m, "name", "model");
  BuiltModel out;
  if (name == "zz_long_range") {
    out.profile = parse_profile(require_field(m, "profile", "model"), "model.profile");
    out.psi = zz_long_range(g, out.profile, get_field_or<double>(m, "coupling", 1.0));
  } else if (name == "cnot_pair") {
    double alpha = get_field<double>(m, "alpha", "model");
    out.profile = DecayFn::power_law(alpha);
    out.psi = cnot_pair(g, get_field<int>(m, "x", "model"), get_field<int>(m, "y", "model"), alpha);
  } else if (name == "zz_set_protocol") {
    SiteSet X = sorted_unique(get_field<SiteSet>(m, "X", "model"));
    SiteSet Y = sorted_unique(get_field<SiteSet>(m, "Y", "model"));
    if (!set_intersection(X, Y).empty())
      throw ConfigError("model.X/model.Y", "X and Y overlap; both sets must be disjoint");
    double alpha = get_field<double>(m, "alpha", "model");
    out.profile = DecayFn::power_law(alpha);
    out.psi = zz_set_protocol(g, X, Y, alpha, get_field_or<double>(m, "C", 1.0));
  } else if (name == "zz_field") {
    out.psi = zz_field(g, get_field_or<double>(m, "J", 1.0), get_field_or<double>(m, "h", 1.0));
    out.profile = DecayFn::power_law(get_field_or<double>(m, "alpha", 2.0));
  } else if (name == "zz_field_long_range") {
    out.profile = DecayFn::power_law(get_field<double>(m, "alpha", "model"));
    out.psi = merge(zz_field(g, get_field_or<double>(m, "J", 1.0), get_field_or<double>(m, "h", 1.0)),
                    zz_long_range(g, out.profile, get_field_or<double>(m, "coupling", -0.5)));
  } else if (name == "transverse_field") {
    out.psi = transverse_field(g, get_field_or<double>(m, "h", 1.0));
    out.profile = DecayFn::power_law(2.0);
  } else if (name == "xxz") {
    out.psi = xxz_chain(g, get_field_or<double>(m, "delta", 1.0));
    out.profile = DecayFn::power_law(2.0);
  } else if (name == "toric_code_long_range") {
    double alpha = get_field_or<double>(m, "alpha", 1.0);
    out.profile = DecayFn::power_law(alpha);
    int L = get_field<int>(m, "L", "model");
    out.psi = toric_code_long_range(g, L, alpha, get_field_or<double>(m, "coupling", 0.0));
  } else if (name == "custom_terms") {
    json doc;
    if (m.contains("path")) {
      std::ifstream f(m["path"].get<std::string>());
      if (!f) throw ConfigError("model.path", "cannot open " + m["path"].get<std::string>());
      f >> doc;
    } else {
      doc = m;
    }
    out.psi = parse_custom_terms(g, doc);
    out.profile = m.contains("profile")
                      ? parse_profile(m["profile"], "model.profile")
                      : DecayFn::power_law(2.0);
  } else {
    throw ConfigError("model.name", "unknown model '" + name + "'");
  }
  if (cfg.contains("profile")) out.profile = parse_profile(cfg["profile"], "profile");
  return out;
}

inline std::vector<double> grid_of(const json& cfg, const std::string& key) {
  auto grids = cfg.find("grids");
  if (grids == cfg.end()) return {};
  auto it = grids->find(key);
  if (it == grids->end()) return {};
  return it->get<std::vector<double>>();
}

inline std::vector<double> require_grid(const json& cfg, const std::string& key) {
  std::vector<double> v = grid_of(cfg, key);
  if (v.empty()) throw ConfigError("grids." + key, "required and non-empty for this experiment");
  return v;
}

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "sharpness",         "lrb_sweep", "localization_sweep", "decay_correlations",
      "lppl",              "stability", "oracle_equivalence"};
  return names;
}

struct RunResult {
  SweepReport report;
  json summary;
  std::string csv_path;
  std::string summary_path;
};

/// Builds the graph and model from the config, dispatches the experiment and
/// writes the row file plus a JSON summary under output_dir.
inline RunResult run_config(const json& cfg, const std::string& output_dir, int threads) {
  auto start = std::chrono::steady_clock::now();
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
  std::string experiment = get_field<std::string>(cfg, "experiment", "");

  const json& gj = require_field(cfg, "graph", "");
  std::string kind = get_field<std::string>(gj, "kind", "graph");
  auto graph = std::make_unique<SiteGraph>(
      kind == "toric_edges" ? toric_edge_graph(get_field<int>(gj, "L", "graph"))
                            : build_graph(parse_graph(gj)));

  const json& tol = cfg.contains("tolerances") ? cfg["tolerances"] : json::object();
  double equality_tol = get_field_or<double>(tol, "equality", 1e-10);
  double ode_tol = get_field_or<double>(tol, "ode", 1e-8);
  if (equality_tol <= 0 || ode_tol <= 0)
    throw ConfigError("tolerances", "equality and ode tolerances must be positive");

  SweepReport report;
  if (experiment == "sharpness") {
    const json& m = require_field(cfg, "model", "");
    std::string name = get_field<std::string>(m, "name", "model");
    SharpnessParams p;
    p.t_grid = require_grid(cfg, "t");
    p.alpha = get_field<double>(m, "alpha", "model");
    if (name == "zz_set_protocol") {
      p.X = sorted_unique(get_field<SiteSet>(m, "X", "model"));
      p.Y = sorted_unique(get_field<SiteSet>(m, "Y", "model"));
      p.C = get_field_or<double>(m, "C", 1.0);
      if (!set_intersection(p.X, p.Y).empty())
        throw ConfigError("model.X/model.Y", "X and Y overlap; both sets must be disjoint");
      report = run_sharpness(*graph, SharpnessProto::ZzSets, p, threads);
    } else if (name == "cnot_pair") {
      p.X = {get_field<int>(m, "x", "model")};
      p.Y = {get_field<int>(m, "y", "model")};
      report = run_sharpness(*graph, SharpnessProto::CnotPair, p, threads);
    } else {
      throw ConfigError("model.name", "sharpness needs zz_set_protocol or cnot_pair");
    }
  } else if (experiment == "lrb_sweep") {
    BuiltModel bm = build_model(*graph, cfg);
    report = run_lrb_sweep(bm.psi, bm.profile, require_grid(cfg, "t"), threads);
  } else if (experiment == "localization_sweep") {
    BuiltModel bm = build_model(*graph, cfg);
    report = run_localization_sweep(bm.psi, bm.profile, require_grid(cfg, "t"), threads);
  } else if (experiment == "decay_correlations") {
    BuiltModel bm = build_model(*graph, cfg);
    const json& obs = require_field(cfg, "observables", "");
    LocalOp A = parse_observable(require_field(obs, "A", "observables"), "observables.A");
    std::string bl = get_field<std::string>(obs, "B_letter", "observables");
    std::vector<LocalOp> Bs;
    for (int site : get_field<SiteSet>(obs, "B_sites", "observables"))
      Bs.push_back(dense_from_pauli(make_pauli_string({{site, bl[0]}})));
    report = run_decay_correlations(bm.psi, A, Bs, bm.profile);
  } else if (experiment == "lppl") {
    BuiltModel bm = build_model(*graph, cfg);
    LocalOp V = parse_observable(require_field(cfg, "perturbation", ""), "perturbation");
    LocalOp B = parse_observable(require_field(cfg, "observable", ""), "observable");
    report = run_lppl(bm.psi, V, B, require_grid(cfg, "lambda"), bm.profile,
                      grid_of(cfg, "t"), get_field_or<double>(cfg, "required_gap", 0.0));
  } else if (experiment == "stability") {
    BuiltModel bm = build_model(*graph, cfg);
    json phij = cfg.contains("phi") ? cfg["phi"] : json{{"name", "transverse_field"}};
    BuiltModel phi = build_model(*graph, json{{"model", std::move(phij)}});
    int R = get_field_or<int>(cfg, "range", 1);
    report = run_stability(bm.psi, phi.psi, R, bm.profile, require_grid(cfg, "t"),
                           get_field_or<double>(tol, "residual", 1e-8), ode_tol);
    std::vector<double> deltas = grid_of(cfg, "delta");
    if (!deltas.empty()) report.append(run_xxz_curves(*graph, deltas, require_grid(cfg, "t")));
  } else if (experiment == "oracle_equivalence") {
    uint64_t seed = get_field_or<uint64_t>(cfg, "seed", 1);
    int n_models = get_field_or<int>(cfg, "n_models", 100);
    report = run_oracle_equivalence(*graph, seed, n_models, require_grid(cfg, "t"), equality_tol,
                                    threads);
  } else {
    std::string known;
    for (const auto& n : experiment_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("experiment", "unknown '" + experiment + "'; known: " + known);
  }

  RunResult res;
  res.report = std::move(report);

  const json& out = cfg.contains("output") ? cfg["output"] : json::object();
  std::string fmt = get_field_or<std::string>(out, "format", "csv");
  if (fmt != "csv" && fmt != "json") throw ConfigError("output.format", "csv or json");
  std::string path = get_field_or<std::string>(out, "path", experiment + "." + fmt);
  std::filesystem::path dir(output_dir.empty() ? "." : output_dir);
  std::filesystem::create_directories(dir);
  res.csv_path = (dir / path).string();
  if (fmt == "csv")
    write_file(res.csv_path, to_csv(res.report));
  else
    write_file(res.csv_path, to_json(res.report).dump(2) + "\n");

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.summary = json{{"config", cfg},
                     {"min_slack", res.report.min_slack},
                     {"violations", res.report.violations},
                     {"wall_time_seconds", wall}};
  std::filesystem::path stem = std::filesystem::path(path).stem();
  res.summary_path = (dir / (stem.string() + "_summary.json")).string();
  write_file(res.summary_path, res.summary.dump(2) + "\n");
  return res;
}

}  // namespace lrlab
