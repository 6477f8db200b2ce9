#include "agler/cli.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "agler/io.hpp"

namespace agler::cli {

namespace {

using io::Json;

struct RunConfig {
  std::string command;
  std::string example;
  std::string input;
  std::string output;
  std::optional<double> feas_tol;
  std::optional<long> max_iter;
  std::optional<unsigned long long> seed;
  bool quiet = false;
  int threads = 1;
};

struct Outcome {
  Json report;
  int code = kOk;
};

Json header(const RunConfig& cfg) {
  Json j;
  j["schema"] = io::kSchema;
  j["command"] = cfg.command;
  if (cfg.seed) j["seed"] = *cfg.seed;
  return j;
}

SolverParams solver_params(const Json& in, const RunConfig& cfg) {
  SolverParams p;
  if (in.contains("solver")) {
    const Json& s = in["solver"];
    if (s.contains("feas_tol")) p.feas_tol = s["feas_tol"].get<double>();
    if (s.contains("max_iter")) p.max_iter = s["max_iter"].get<long>();
  }
  if (cfg.feas_tol) p.feas_tol = *cfg.feas_tol;
  if (cfg.max_iter) p.max_iter = *cfg.max_iter;
  require(p.feas_tol > 0.0, "feas_tol must be positive");
  require(p.max_iter > 0, "max_iter must be positive");
  return p;
}

int status_code(Status s) {
  switch (s) {
    case Status::kFeasible: return kOk;
    case Status::kInfeasible: return kInfeasible;
    case Status::kUnresolved: return kUnresolved;
  }
  return kUnresolved;
}

struct Problem {
  SamplePtr sample;
  std::optional<FunctionSample> phi;
  Preordering order = Preordering::classical(1);
  double c = 1.0;
};

Problem problem_from(const Json& in) {
  Problem p;
  p.sample = io::sample_from(io::field(in, "points", ""), "points");
  p.phi.emplace(p.sample, io::matrices_from(io::field(in, "phi", ""), p.sample->size(), "phi"));
  p.order = io::preordering_from(io::field(in, "preordering", ""), "preordering");
  if (in.contains("c")) {
    if (!in["c"].is_number()) throw Error("field 'c': expected a number");
    p.c = in["c"].get<double>();
  }
  return p;
}

/// Re-runs the soundness checks; anything that fails them is downgraded.
void revalidate(DecomposeResult& r, const PointSample& sample, const Preordering& order, const CMatrix& target,
                double feas_tol) {
  if (r.certificate && !certificate_valid(*r.certificate, sample, target, feas_tol)) {
    r.certificate.reset();
    r.status = Status::kUnresolved;
  }
  if (r.witness && !witness_valid(*r.witness, order, target, feas_tol)) {
    r.witness.reset();
    r.status = Status::kUnresolved;
  }
}

void put_result(Json& j, const DecomposeResult& r) {
  j["status"] = to_string(r.status);
  j["certificate"] = r.certificate ? io::to_json(*r.certificate) : Json::object();
  if (r.witness) j["witness"] = io::to_json(*r.witness);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
}

// ------------------------------------------------------------- subcommands

Outcome cmd_check_kernel(const Json& in, const RunConfig& cfg) {
  const auto k = io::kernel_from(in, "");
  const auto order = io::preordering_from(io::field(in, "preordering", ""), "preordering");
  const double tol = in.value("tol", 1e-10);
  Outcome o{header(cfg)};
  const auto psd = psd_check(k, tol);
  o.report["psd"] = {{"is_psd", psd.is_psd}, {"min_eigenvalue", psd.min_eigenvalue}};
  o.report["admissibility"] = io::to_json(is_admissible(k, order, tol));
  if (in.contains("reference")) {
    const auto ref = io::kernel_from(in["reference"], "reference");
    const auto sub = is_subordinate(k, HermitianKernel(k.sample(), ref.block_dim(), ref.matrix()), tol);
    o.report["subordination"] = {{"subordinate", sub.subordinate}, {"min_eigenvalue", sub.min_eigenvalue}};
  }
  return o;
}

Outcome cmd_aux(const Json& in, const RunConfig& cfg) {
  auto sample = io::sample_from(io::field(in, "points", ""), "points");
  const auto lambda = io::multi_index_from(io::field(in, "lambda", ""), "lambda");
  const std::string mode = in.value("mode", std::string("raw"));
  Outcome o{header(cfg)};
  if (mode == "raw") {
    o.report["aux"] = io::to_json(aux_function(*sample, lambda));
    const HermitianKernel k = in.contains("kernel")
                                  ? HermitianKernel(sample, 1, io::kernel_from(in["kernel"], "kernel").matrix())
                                  : szego_kernel(sample, lambda, 1);
    o.report["defect_identity_residual"] = verify_defect_identity(*sample, lambda, k);
  } else if (mode == "extended") {
    const auto order = in.contains("preordering") ? io::preordering_from(in["preordering"], "preordering")
                                                  : Preordering::standard_ample(sample->dim());
    const auto ext = extend_aux_finite(*sample, lambda, order);
    o.report["aux"] = io::to_json(ext.aux);
    o.report["g_norm"] = ext.g_norm;
    o.report["range_residual"] = ext.range_residual;
    o.report["contractive_min_eigenvalue"] = ext.contractive_min_eigenvalue;
    o.report["blockwise_min_eigenvalue"] = ext.blockwise_min_eigenvalue;
    o.report["boundary_points"] = ext.boundary_points;
  } else {
    throw Error("field 'mode': expected \"raw\" or \"extended\"");
  }
  return o;
}

Outcome cmd_decompose(const Json& in, const RunConfig& cfg) {
  const auto p = problem_from(in);
  const auto params = solver_params(in, cfg);
  auto r = agler_decompose(*p.phi, p.order, p.c, params);
  revalidate(r, *p.sample, p.order, agler_target(*p.phi, p.c), params.feas_tol);
  Outcome o{header(cfg)};
  o.report["c"] = p.c;
  put_result(o.report, r);
  o.code = status_code(r.status);
  return o;
}

Outcome cmd_realize(const Json& in, const RunConfig& cfg) {
  const auto p = problem_from(in);
  const auto params = solver_params(in, cfg);
  auto r = agler_decompose(*p.phi, p.order, p.c, params);
  revalidate(r, *p.sample, p.order, agler_target(*p.phi, p.c), params.feas_tol);
  Outcome o{header(cfg)};
  o.report["c"] = p.c;
  put_result(o.report, r);
  o.code = status_code(r.status);
  if (!r.certificate) return o;
  try {
    const auto real = lurking_isometry(*r.certificate, *p.phi, params.feas_tol);
    double err = 0.0;
    const Eigen::Index m = p.phi->rows(), k = p.phi->cols();
    for (std::size_t x = 0; x < p.sample->size(); ++x) {
      const CMatrix w = eval_transfer(real.colligation, (*p.sample)[x]);
      err = std::max(err, max_abs(w.topLeftCorner(m, k) - p.phi->values[x] / p.c));
    }
    o.report["colligation"] = io::to_json(real.colligation);
    o.report["gram_defect"] = real.gram_defect;
    o.report["unitarity_defect"] = real.colligation.unitarity_defect();
    o.report["roundtrip_error"] = err;
  } catch (const Error& e) {
    o.report["status"] = to_string(Status::kUnresolved);
    o.report["realization_error"] = e.what();
    o.code = kUnresolved;
  }
  return o;
}

Outcome cmd_eval(const Json& in, const RunConfig& cfg) {
  const auto sigma = io::colligation_from(io::field(in, "colligation", ""), "colligation");
  const auto sample = io::sample_from(io::field(in, "points", ""), "points");
  Outcome o{header(cfg)};
  Json values = Json::array();
  for (std::size_t x = 0; x < sample->size(); ++x) {
    const CMatrix w = eval_transfer(sigma, (*sample)[x]);
    values.push_back({{"value", io::to_json(w)}, {"norm", spectral_norm(w)}});
  }
  o.report["values"] = std::move(values);
  return o;
}

Outcome cmd_norm(const Json& in, const RunConfig& cfg) {
  const auto p = problem_from(in);
  const auto params = solver_params(in, cfg);
  const double tol = in.value("tol", 1e-4);
  auto n = schur_agler_norm(*p.phi, p.order, tol, params);
  Outcome o{header(cfg)};
  o.report["lo"] = n.lo;
  o.report["hi"] = n.hi;
  o.report["resolved"] = n.resolved;
  o.report["evaluations"] = n.evaluations;
  if (n.certificate && certificate_valid(*n.certificate, *p.sample, agler_target(*p.phi, n.hi), params.feas_tol))
    o.report["certificate"] = io::to_json(*n.certificate);
  else
    o.report["certificate"] = Json::object();
  if (n.witness && witness_valid(*n.witness, p.order, agler_target(*p.phi, n.lo), params.feas_tol))
    o.report["witness"] = io::to_json(*n.witness);
  o.code = n.resolved ? kOk : kUnresolved;
  if (in.contains("c")) {
    auto r = agler_decompose(*p.phi, p.order, p.c, params);
    revalidate(r, *p.sample, p.order, agler_target(*p.phi, p.c), params.feas_tol);
    o.report["c"] = p.c;
    o.report["status_at_c"] = to_string(r.status);
    if (r.witness) o.report["witness_at_c"] = io::to_json(*r.witness);
    o.code = status_code(r.status);
  }
  return o;
}

Outcome cmd_brehmer(const Json& in, const RunConfig& cfg) {
  const auto t = io::tuple_from(in, "");
  const auto order = io::preordering_from(io::field(in, "preordering", ""), "preordering");
  const auto rep = is_brehmer(t, order, in.value("tol", 1e-10));
  Outcome o{header(cfg)};
  o.report["brehmer"] = rep.brehmer;
  Json entries = Json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"lambda", io::to_json(e.lambda)}, {"min_eigenvalue", e.min_eigenvalue}});
  o.report["entries"] = std::move(entries);
  o.report["commutator_norm"] = t.commutator_norm();
  o.report["max_norm"] = t.max_norm();
  return o;
}

Outcome cmd_vn(const Json& in, const RunConfig& cfg) {
  const auto sigma = io::colligation_from(io::field(in, "colligation", ""), "colligation");
  const auto t = io::tuple_from(io::field(in, "tuple", ""), "tuple");
  const auto ev = eval_colligation_at_tuple(sigma, t, in.value("rescale", false));
  Outcome o{header(cfg)};
  o.report["value"] = io::to_json(ev.value);
  o.report["norm"] = ev.norm;
  o.report["rescale"] = ev.rescale;
  o.report["unitarity_defect"] = sigma.unitarity_defect();
  o.report["bound_holds"] = ev.norm <= 1.0 + 1e-9;
  return o;
}

Outcome cmd_pick(const Json& in, const RunConfig& cfg) {
  auto nodes = io::sample_from(io::field(in, "points", ""), "points");
  auto a = io::matrices_from(io::field(in, "a", ""), nodes->size(), "a");
  auto b = io::matrices_from(io::field(in, "b", ""), nodes->size(), "b");
  const auto order = io::preordering_from(io::field(in, "preordering", ""), "preordering");
  const auto params = solver_params(in, cfg);
  PickProblem prob(nodes, std::move(a), std::move(b), order);
  auto f = pick_feasible(prob, params);
  const CMatrix target = pick_target(prob);
  if (f.certificate && !certificate_valid(*f.certificate, *nodes, target, params.feas_tol)) {
    f.certificate.reset();
    f.status = Status::kUnresolved;
  }
  if (f.witness && !witness_valid(*f.witness, order, target, params.feas_tol)) {
    f.witness.reset();
    f.status = Status::kUnresolved;
  }
  Outcome o{header(cfg)};
  o.report["status"] = to_string(f.status);
  o.report["szego_path"] = f.szego_path;
  if (f.szego_path) o.report["min_eigenvalue"] = f.min_eigenvalue;
  o.report["certificate"] = f.certificate ? io::to_json(*f.certificate) : Json::object();
  if (f.witness) o.report["witness"] = io::to_json(*f.witness);
  o.code = status_code(f.status);
  if (!f.certificate) return o;
  try {
    const auto sol = pick_solve(prob, *f.certificate, params.feas_tol);
    o.report["colligation"] = io::to_json(sol.realization.colligation);
    o.report["node_residual"] = sol.node_residual;
    if (in.contains("eval_points")) {
      const auto pts = io::sample_from(in["eval_points"], "eval_points");
      Json values = Json::array();
      for (const auto& x : pts->points()) {
        const CMatrix w = sol.evaluate(x);
        values.push_back({{"value", io::to_json(w)}, {"norm", spectral_norm(w)}});
      }
      o.report["evaluations"] = std::move(values);
    }
  } catch (const Error& e) {
    o.report["status"] = to_string(Status::kUnresolved);
    o.report["realization_error"] = e.what();
    o.code = kUnresolved;
  }
  return o;
}

Outcome cmd_example(const RunConfig& cfg) {
  Outcome o{header(cfg)};
  o.report["example"] = cfg.example;
  Json verify;
  if (cfg.example == "parrott") {
    CMatrix u(2, 2), v(2, 2);
    u << 1, 0, 0, -1;
    v << 0, 1, 1, 0;
    const auto t = parrott_tuple(u, v);
    double products = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) products = std::max(products, max_abs(t[j] * t[k]));
    o.report["tuple"] = io::to_json(t);
    verify["commutator_norm"] = t.commutator_norm();
    verify["anticommutation_residual"] = max_abs(u * v + v * u);
    verify["max_pairwise_product"] = products;
    verify["commutant_dimension"] = commutant_dimension(t);
    verify["forced_zero_null_dimension"] = parrott_forced_zero(u, v, 2).null_dimension;
  } else if (cfg.example == "gkvw") {
    const double h = std::sqrt(3.0) / 2.0;
    const Eigen::Vector2d u1(0.0, 1.0), u2(h, -0.5), u3(-h, -0.5);
    const auto t = gkvw_tuple(u1, u2, u3);
    double triples = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) triples = std::max(triples, max_abs(t[i] * t[j] * t[k]));
    o.report["tuple"] = io::to_json(t);
    verify["sum_residual"] = (u1 + u2 + u3).norm();
    verify["unit_residual"] = std::max({std::abs(u1.norm() - 1.0), std::abs(u2.norm() - 1.0), std::abs(u3.norm() - 1.0)});
    verify["commutator_norm"] = t.commutator_norm();
    verify["max_triple_product"] = triples;
    verify["commutant_dimension"] = commutant_dimension(t);
  } else {
    const auto t = kv_tuple();
    o.report["tuple"] = io::to_json(t);
    verify["commutator_norm"] = t.commutator_norm();
    Json norms = Json::array();
    for (const auto& m : t.matrices()) norms.push_back(spectral_norm(m));
    verify["norms"] = std::move(norms);
    verify["commutant_dimension"] = commutant_dimension(t);
    verify["polynomial_norm_at_tuple"] = spectral_norm(eval_polynomial(kv_polynomial(), t));
    verify["polynomial_norm_at_scaled_tuple"] = spectral_norm(eval_polynomial(kv_polynomial(), t.scaled(0.999)));
  }
  o.report["verify"] = std::move(verify);
  return o;
}

int parse_threads(const char* env) {
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw Error("AGLER_LAB_THREADS must be a positive integer");
  return static_cast<int>(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Schur-Agler class workbench on finite point samples", "agler-lab"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> commands = {
      {"check-kernel", "positivity and admissibility of a kernel"},
      {"aux", "auxiliary test functions and identity residuals"},
      {"decompose", "Agler decomposition feasibility"},
      {"realize", "decomposition plus transfer-function realization"},
      {"eval", "evaluate a colligation at points"},
      {"norm", "bisection for the sample Schur-Agler norm"},
      {"brehmer", "hereditary positivity of a commuting tuple"},
      {"vn", "evaluate a classical colligation at a tuple"},
      {"pick", "Agler-Pick interpolation"},
      {"example", "built-in tuples: parrott, gkvw, kv"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    if (name == "example")
      sub->add_option("name", cfg.example, "example name")->required()->check(CLI::IsMember({"parrott", "gkvw", "kv"}));
    else
      sub->add_option("--input,-i", cfg.input, "input JSON file")->required();
    sub->add_option("--output,-o", cfg.output, "output JSON file (default: stdout)");
    sub->add_option("--feas-tol", cfg.feas_tol, "decomposition residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iter, "solver iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed recorded in the report");
    sub->add_flag("--quiet,-q", cfg.quiet, "suppress the status line on stderr");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "agler-lab: " << e.what() << "\n";
    return kUsage;
  }

  try {
    cfg.threads = parse_threads(std::getenv("AGLER_LAB_THREADS"));
    Outcome o;
    if (cfg.command == "example") {
      o = cmd_example(cfg);
    } else {
      const Json in = io::read_file(cfg.input);
      if (!in.is_object()) throw Error("input must be a JSON object");
      static const std::map<std::string, std::function<Outcome(const Json&, const RunConfig&)>> table = {
          {"check-kernel", cmd_check_kernel}, {"aux", cmd_aux},         {"decompose", cmd_decompose},
          {"realize", cmd_realize},           {"eval", cmd_eval},       {"norm", cmd_norm},
          {"brehmer", cmd_brehmer},           {"vn", cmd_vn},           {"pick", cmd_pick},
      };
      o = table.at(cfg.command)(in, cfg);
    }
    const std::string text = io::dump(o.report);
    if (cfg.output.empty())
      out << text;
    else
      io::write_atomic(cfg.output, text);
    if (!cfg.quiet) {
      err << "agler-lab " << cfg.command << ": "
          << (o.code == kOk ? "ok" : o.code == kInfeasible ? "infeasible" : "unresolved") << "\n";
    }
    return o.code;
  } catch (const std::exception& e) {
    err << "agler-lab: " << e.what() << "\n";
    return kUsage;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace agler::cli
