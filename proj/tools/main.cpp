// Command-line front end: load matrix pairs, run checks, emit reports,
// traces, and certificates.
//
// Exit codes: 0 ok/holds, 1 violated/failed certification, 2 input error,
// 3 precondition not met.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wielandt/equality.hpp"
#include "wielandt/io.hpp"

namespace {

using wielandt::io::json;

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;

struct RunConfig {
  wielandt::Tolerances tol;
  int grid_size = 201;
  double t_lo = 0.0;
  double t_hi = 1.0;
  double t_cap = 16.0;
  int scan_cap = 14;
  int samples = 9;
  bool refine = true;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string indices_arg;

  json to_json() const {
    return json{{"seed", seed},
                {"tolerances",
                 {{"hermiticity", tol.hermiticity},
                  {"cluster", tol.cluster},
                  {"residual", tol.residual}}},
                {"grid", grid_size},
                {"t_cap", t_cap},
                {"scan_cap", scan_cap}};
  }
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--tol", cfg.tol.residual, "residual/equality tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cluster-tol", cfg.tol.cluster, "eigenvalue cluster tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--herm-tol", cfg.tol.hermiticity, "hermiticity tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", cfg.format, "output format: json | csv | human")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&cfg](const std::uint64_t& s) {
        cfg.seed = s;
        cfg.seed_given = true;
      },
      "random seed (falls back to WIELANDT_SEED, then 0)");
  cmd->add_option("--out", cfg.out, "output file or prefix");
}

void resolve_seed(RunConfig& cfg) {
  if (cfg.seed_given) return;
  if (const char* env = std::getenv("WIELANDT_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (...) {
      throw wielandt::ParseError("WIELANDT_SEED is not an unsigned integer");
    }
  }
}

std::vector<int> parse_indices(const std::string& arg) {
  std::vector<int> out;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw wielandt::ParseError("cannot parse index '" + tok + "'");
    }
  }
  if (out.empty()) throw wielandt::ParseError("--indices must list at least one index");
  return out;
}

void emit(const RunConfig& cfg, const json& j) {
  if (cfg.format == "human")
    std::cout << wielandt::io::render_human(j);
  else
    std::cout << j.dump(2) << "\n";
}

// csv rendering is only offered for flat tabular reports
void emit_report_line(std::ostream& os, const wielandt::InequalityReport& r) {
  os << "\"";
  const auto& idx = r.indices.indices();
  for (size_t i = 0; i < idx.size(); ++i) os << (i ? " " : "") << idx[i];
  os << "\"," << r.lhs << "," << r.rhs << "," << r.slack << ","
     << to_string(r.verdict) << "\n";
}

int cmd_check(const std::string& file_a, const std::string& file_b,
              const RunConfig& cfg) {
  auto a = wielandt::io::load_matrix_file(file_a, cfg.tol.hermiticity);
  auto b = wielandt::io::load_matrix_file(file_b, cfg.tol.hermiticity);
  wielandt::IndexSet s(a.n(), parse_indices(cfg.indices_arg));
  auto rep = wielandt::wielandt_check(a, b, s, cfg.tol);
  if (cfg.format == "csv") {
    std::cout << "indices,lhs,rhs,slack,verdict\n";
    emit_report_line(std::cout, rep);
  } else {
    json j = wielandt::io::report_to_json(rep);
    j["config"] = cfg.to_json();
    emit(cfg, j);
  }
  return rep.verdict == wielandt::Verdict::Violated ? kExitViolated : kExitOk;
}

int cmd_scan(const std::string& file_a, const std::string& file_b,
             const RunConfig& cfg) {
  auto a = wielandt::io::load_matrix_file(file_a, cfg.tol.hermiticity);
  auto b = wielandt::io::load_matrix_file(file_b, cfg.tol.hermiticity);
  auto reports = wielandt::wielandt_scan(a, b, std::nullopt, cfg.tol, cfg.scan_cap);
  auto lidskii = wielandt::lidskii_check(a, b, cfg.tol);
  if (cfg.format == "csv") {
    std::cout << "indices,lhs,rhs,slack,verdict\n";
    for (const auto& r : reports) emit_report_line(std::cout, r);
    return kExitOk;
  }
  json arr = json::array();
  bool violated = false;
  for (const auto& r : reports) {
    arr.push_back(wielandt::io::report_to_json(r));
    violated = violated || r.verdict == wielandt::Verdict::Violated;
  }
  json j{{"reports", std::move(arr)},
         {"lidskii", wielandt::io::majorization_to_json(lidskii)},
         {"config", cfg.to_json()}};
  emit(cfg, j);
  return violated || !lidskii.holds ? kExitViolated : kExitOk;
}

int cmd_trace(const std::string& file_a, const std::string& file_b,
              const RunConfig& cfg) {
  auto a = wielandt::io::load_matrix_file(file_a, cfg.tol.hermiticity);
  auto b = wielandt::io::load_matrix_file(file_b, cfg.tol.hermiticity);
  auto trace = wielandt::trace_pencil(a, b, cfg.t_lo, cfg.t_hi, cfg.grid_size,
                                      cfg.refine, cfg.tol);
  const std::string prefix = cfg.out.empty() ? "trace" : cfg.out;
  {
    std::ofstream csv(prefix + ".csv");
    if (!csv) throw wielandt::Error("cannot write " + prefix + ".csv");
    wielandt::io::write_trace_csv(csv, trace);
  }
  wielandt::io::save_json(prefix + ".crossings.json",
                          wielandt::io::crossings_to_json(trace));
  json j{{"csv", prefix + ".csv"},
         {"crossings", prefix + ".crossings.json"},
         {"samples", trace.samples()},
         {"crossing_count", trace.crossings.size()},
         {"config", cfg.to_json()}};
  emit(cfg, j);
  return kExitOk;
}

json conditions_to_json(const wielandt::ConditionReport& rep) {
  json j{{"consistent", rep.consistent},
         {"condition1_present", rep.condition1.has_value()},
         {"condition2_present", rep.condition2.has_value()},
         {"condition3_present", rep.condition3.has_value()},
         {"t1_used", rep.t1_used}};
  if (rep.condition2) j["condition2_p"] = rep.condition2->p;
  if (rep.condition3) {
    j["condition3_p"] = rep.condition3->p;
    j["condition3_achieved"] = rep.condition3->achieved;
    j["condition3_target"] = rep.condition3->target;
  }
  return j;
}

int cmd_certify(const std::string& file_a, const std::string& file_b,
                const RunConfig& cfg) {
  auto a = wielandt::io::load_matrix_file(file_a, cfg.tol.hermiticity);
  auto b = wielandt::io::load_matrix_file(file_b, cfg.tol.hermiticity);
  wielandt::IndexSet s(a.n(), parse_indices(cfg.indices_arg));

  auto rep = wielandt::check_equality(a, b, s, cfg.tol);
  json conditions =
      conditions_to_json(wielandt::equivalence_report(a, b, s, cfg.tol));
  auto t1 = wielandt::maximal_t1(a, b, s, cfg.tol, cfg.t_cap);
  json t1_json{{"value", t1.value}, {"infinite", t1.infinite},
               {"t_cap", cfg.t_cap}};

  if (rep.verdict != wielandt::Verdict::Equality) {
    json j{{"error", "equality not detected"},
           {"report", wielandt::io::report_to_json(rep)},
           {"conditions", std::move(conditions)},
           {"maximal_t1", std::move(t1_json)},
           {"config", cfg.to_json()}};
    emit(cfg, j);
    return kExitPrecondition;
  }
  try {
    auto cert = wielandt::certify(a, b, s, cfg.tol, cfg.samples);
    json j = wielandt::io::certificate_to_json(cert);
    j["conditions"] = std::move(conditions);
    j["maximal_t1"] = std::move(t1_json);
    j["config"] = cfg.to_json();
    if (!cfg.out.empty()) wielandt::io::save_json(cfg.out, j);
    emit(cfg, j);
    return kExitOk;
  } catch (const wielandt::CertificationFailure& e) {
    json j{{"error", "certification failed"},
           {"detail", e.what()},
           {"conditions", std::move(conditions)},
           {"config", cfg.to_json()}};
    emit(cfg, j);
    return kExitViolated;
  }
}

int cmd_verify_cert(const std::string& file_a, const std::string& file_b,
                    const std::string& cert_file, const RunConfig& cfg) {
  auto a = wielandt::io::load_matrix_file(file_a, cfg.tol.hermiticity);
  auto b = wielandt::io::load_matrix_file(file_b, cfg.tol.hermiticity);
  auto cert = wielandt::io::certificate_from_json(
      wielandt::io::load_json_file(cert_file));
  auto ver = wielandt::verify_certificate(a, b, cert, cfg.tol, cfg.samples);
  json residuals = json::array();
  for (const auto& r : ver.residuals)
    residuals.push_back(json{{"curve_match", r.curve_match},
                             {"A_invariance", r.a_invariance},
                             {"B_invariance", r.b_invariance},
                             {"top_k_B_match", r.top_k_b_match}});
  json j{{"verified", ver.ok},
         {"residuals", std::move(residuals)},
         {"config", cfg.to_json()}};
  if (!ver.ok) j["first_violation"] = ver.first_violation;
  emit(cfg, j);
  return ver.ok ? kExitOk : kExitViolated;
}

int cmd_rates(const std::string& file_a, const std::string& file_b,
              const RunConfig& cfg) {
  auto a = wielandt::io::load_matrix_file(file_a, cfg.tol.hermiticity);
  auto b = wielandt::io::load_matrix_file(file_b, cfg.tol.hermiticity);
  auto rates = wielandt::first_order_rates(a, b, cfg.tol.cluster);
  if (cfg.format == "csv") {
    std::cout << "j,nu\n";
    for (int i = 0; i < rates.nu.size(); ++i)
      std::cout << (i + 1) << "," << rates.nu(i) << "\n";
    return kExitOk;
  }
  const double h = 1e-5;
  json j = wielandt::io::rates_to_json(rates);
  j["fd_check"] =
      json{{"h", h}, {"deviation", wielandt::rate_consistency_check(a, b, h)}};
  j["config"] = cfg.to_json();
  emit(cfg, j);
  return kExitOk;
}

int cmd_gen(const std::string& kind, int n, int k, const std::string& alpha_arg,
            const std::string& beta_arg, const RunConfig& cfg) {
  const std::string prefix = cfg.out;
  json manifest{{"kind", kind}, {"seed", cfg.seed}, {"config", cfg.to_json()}};
  wielandt::HermitianMatrix a = wielandt::HermitianMatrix::identity(1);
  wielandt::HermitianMatrix b = a;

  if (kind == "random") {
    a = wielandt::random_hermitian(n, cfg.seed);
    b = wielandt::random_hermitian(n, cfg.seed + 0x9e3779b97f4a7c15ull);
    manifest["n"] = n;
  } else if (kind == "equality-block") {
    auto inst = wielandt::make_equality_block_instance(n, k, cfg.seed);
    a = inst.a;
    b = inst.b;
    manifest["n"] = n;
    manifest["k"] = k;
    json planted{{"indices", inst.indices.indices()}};
    json cols = json::array();
    for (int c = 0; c < inst.planted_subspace.cols(); ++c) {
      json vec = json::array();
      for (int i = 0; i < inst.planted_subspace.rows(); ++i)
        vec.push_back(json::array({inst.planted_subspace(i, c).real(),
                                   inst.planted_subspace(i, c).imag()}));
      cols.push_back(std::move(vec));
    }
    planted["subspace"] = std::move(cols);
    planted["expected_slack"] = 0.0;
    manifest["planted"] = std::move(planted);
  } else if (kind == "example-s4") {
    // diagonal pair A = diag(a1, a2, a3), B = diag(b3, b1, b2) with
    // a1 > a2 = a3 and b1 > b2 >= b3; equality holds for index 3 with the
    // middle coordinate line as witness
    auto parse3 = [](const std::string& s, const char* name) {
      std::stringstream ss(s);
      std::string tok;
      std::vector<double> v;
      while (std::getline(ss, tok, ',')) {
        try {
          v.push_back(std::stod(tok));
        } catch (...) {
          throw wielandt::ParseError(std::string(name) + ": bad number '" + tok + "'");
        }
      }
      if (v.size() != 3)
        throw wielandt::ParseError(std::string(name) + " must have 3 entries");
      return v;
    };
    auto al = parse3(alpha_arg, "--alpha");
    auto be = parse3(beta_arg, "--beta");
    if (!(al[0] > al[1] && al[1] == al[2]))
      throw wielandt::ParseError("--alpha must satisfy a1 > a2 = a3");
    if (!(be[0] > be[1] && be[1] >= be[2]))
      throw wielandt::ParseError("--beta must satisfy b1 > b2 >= b3");
    wielandt::Vector da(3), db(3);
    da << al[0], al[1], al[2];
    db << be[2], be[0], be[1];
    a = wielandt::HermitianMatrix::diagonal(da);
    b = wielandt::HermitianMatrix::diagonal(db);
    manifest["alpha"] = al;
    manifest["beta"] = be;
    manifest["indices"] = std::vector<int>{3};
    manifest["expected_t1"] = (al[0] - al[1]) / (be[0] - be[2]);
  } else {
    throw wielandt::ParseError("unknown kind: " + kind);
  }

  wielandt::io::save_json(prefix + "A.json", wielandt::io::matrix_to_json(a));
  wielandt::io::save_json(prefix + "B.json", wielandt::io::matrix_to_json(b));
  wielandt::io::save_json(prefix + "manifest.json", manifest);
  json j{{"A", prefix + "A.json"},
         {"B", prefix + "B.json"},
         {"manifest", prefix + "manifest.json"}};
  emit(cfg, j);
  return kExitOk;
}

int cmd_search_r(int n, int k, int trials, const RunConfig& cfg) {
  auto result = wielandt::search_r_greater_1(cfg.seed, n, k, trials, cfg.tol);
  json cands = json::array();
  for (const auto& c : result.candidates)
    cands.push_back(json{{"instance_seed", c.instance_seed},
                         {"r", c.r},
                         {"min_pairwise_sine", c.min_pairwise_sine}});
  json j{{"candidates", std::move(cands)},
         {"trials_run", result.trials_run},
         {"certify_failures", result.certify_failures},
         {"config", cfg.to_json()}};
  if (!result.rejected_reason.empty()) {
    j["rejected"] = result.rejected_reason;
    emit(cfg, j);
    return kExitPrecondition;
  }
  emit(cfg, j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wielandt: eigenvalue-sum inequality checks, pencil traces, and "
               "equality certificates for Hermitian matrix pairs"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::string file_a, file_b, cert_file, kind, alpha = "3,1,1", beta = "2,1,0";
  int n = 4, k = 2, trials = 10;

  auto* check = app.add_subcommand("check", "check the inequality for one index set");
  check->add_option("A", file_a, "matrix JSON file")->required();
  check->add_option("B", file_b, "matrix JSON file")->required();
  check->add_option("--indices", cfg.indices_arg, "comma list, 1-based")->required();
  add_common(check, cfg);

  auto* scan = app.add_subcommand("scan", "check all index sets and the majorization");
  scan->add_option("A", file_a)->required();
  scan->add_option("B", file_b)->required();
  scan->add_option("--scan-cap", cfg.scan_cap, "max dimension for the full scan");
  add_common(scan, cfg);

  auto* trace = app.add_subcommand("trace", "trace eigenvalue curves of A + tB");
  trace->add_option("A", file_a)->required();
  trace->add_option("B", file_b)->required();
  trace->add_option("--t-lo", cfg.t_lo, "interval start");
  trace->add_option("--t-hi", cfg.t_hi, "interval end");
  trace->add_option("--grid", cfg.grid_size, "base grid samples")
      ->check(CLI::Range(2, 1 << 20));
  trace->add_flag("--no-refine{false}", cfg.refine, "skip crossing refinement");
  add_common(trace, cfg);

  auto* certify = app.add_subcommand("certify", "certify the equality case");
  certify->add_option("A", file_a)->required();
  certify->add_option("B", file_b)->required();
  certify->add_option("--indices", cfg.indices_arg)->required();
  certify->add_option("--samples", cfg.samples, "verification samples per segment");
  certify->add_option("--t-cap", cfg.t_cap, "cap for the maximal-parameter search")
      ->check(CLI::PositiveNumber);
  add_common(certify, cfg);

  auto* verify = app.add_subcommand("verify-cert", "re-verify a certificate file");
  verify->add_option("A", file_a)->required();
  verify->add_option("B", file_b)->required();
  verify->add_option("CERT", cert_file, "certificate JSON")->required();
  verify->add_option("--samples", cfg.samples);
  add_common(verify, cfg);

  auto* rates = app.add_subcommand("rates", "first-order eigenvalue rates of A + tB at 0");
  rates->add_option("A", file_a)->required();
  rates->add_option("B", file_b)->required();
  add_common(rates, cfg);

  auto* gen = app.add_subcommand("gen", "generate instance files");
  gen->add_option("kind", kind, "random | equality-block | example-s4")->required();
  gen->add_option("--n", n, "dimension");
  gen->add_option("--k", k, "planted subspace dimension");
  gen->add_option("--alpha", alpha, "example-s4 alpha values");
  gen->add_option("--beta", beta, "example-s4 beta values");
  add_common(gen, cfg);

  auto* search = app.add_subcommand("search-r", "search for certificates needing r >= 2");
  search->add_option("--n", n, "dimension");
  search->add_option("--k", k, "index set size (>= 2)");
  search->add_option("--trials", trials, "instances to try");
  add_common(search, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    resolve_seed(cfg);
    if (check->parsed()) return cmd_check(file_a, file_b, cfg);
    if (scan->parsed()) return cmd_scan(file_a, file_b, cfg);
    if (trace->parsed()) return cmd_trace(file_a, file_b, cfg);
    if (certify->parsed()) return cmd_certify(file_a, file_b, cfg);
    if (verify->parsed()) return cmd_verify_cert(file_a, file_b, cert_file, cfg);
    if (rates->parsed()) return cmd_rates(file_a, file_b, cfg);
    if (gen->parsed()) return cmd_gen(kind, n, k, alpha, beta, cfg);
    if (search->parsed()) return cmd_search_r(n, k, trials, cfg);
  } catch (const wielandt::CertificationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolated;
  } catch (const wielandt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
