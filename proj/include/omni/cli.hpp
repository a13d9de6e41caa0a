#pragma once

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omni/asymptotic.hpp"
#include "omni/json_io.hpp"
#include "omni/lexlp.hpp"
#include "omni/netcode.hpp"
#include "omni/predict.hpp"

namespace omni::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitMismatch = 2;

namespace detail {

inline Instance read_instance(const std::string& path) {
  nlohmann::json j;
  try {
    if (path == "-") {
      j = nlohmann::json::parse(std::cin);
    } else {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
      j = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInstance, std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

struct Solved {
  RateMatrix rates;
  std::string method_used;
  std::optional<std::string> fallback_reason;
};

/// Runs the requested predictor and falls back to the LP when it cannot
/// produce a valid allocation for this instance.
inline Solved solve_with(const Instance& inst, Mode mode, const std::string& method) {
  const ConstraintSet cs = build_constraints(inst, mode);
  if (method != "lp") {
    try {
      RateMatrix rates;
      if (method == "sle")
        rates = sle_solve(inst, mode);
      else
        rates = mode == Mode::Slo ? slo_closed_form(inst) : sgo_closed_form(inst);
      if (satisfies(cs, rates)) return {std::move(rates), method, std::nullopt};
      Solved s{solve_lex(cs).rates, "lp", std::string("InfeasibleRates")};
      return s;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NegativeRate && e.code() != ErrorCode::SingularSystem) throw;
      return {solve_lex(cs).rates, "lp", std::string(to_string(e.code()))};
    }
  }
  return {solve_lex(cs).rates, "lp", std::nullopt};
}

inline nlohmann::json verify_mode(const Instance& inst, Mode mode, bool& consistent) {
  const ConstraintSet cs = build_constraints(inst, mode);
  const LexResult lex = solve_lex(cs);
  nlohmann::json j{{"mode", std::string(to_string(mode))}, {"lp_round_sums", rationals_to_json(lex.round_sums)}};
  bool ok = false;
  try {
    const RateMatrix sle = sle_solve(inst, mode);
    const bool feasible = satisfies(cs, sle);
    const bool equal = sle.round_sums() == lex.round_sums;
    j["sle_round_sums"] = rationals_to_json(sle.round_sums());
    j["sle_feasible"] = feasible;
    j["round_sums_equal"] = equal;
    ok = feasible && equal;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NegativeRate && e.code() != ErrorCode::SingularSystem) throw;
    j["sle_error"] = std::string(to_string(e.code()));
    j["round_sums_equal"] = false;
  }
  if (mode == Mode::Slo && inst.rounds() == 2) {
    const auto cert = slo_dual_certificate(inst, lex);
    j["dual_certificate"] = {{"stage1_feasible", cert.stage1.feasible},
                             {"stage1_objective", to_fraction_string(cert.stage1.objective)},
                             {"stage2_feasible", cert.stage2.feasible},
                             {"stage2_objective", to_fraction_string(cert.stage2.objective)},
                             {"verified", cert.verified}};
    ok = ok && cert.verified;
  }
  j["consistent"] = ok;
  consistent = consistent && ok;
  return j;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p,n,n1,e_slo,e_sgo\n";
  std::ostringstream line;
  line << std::setprecision(12);
  for (const auto& r : rows) {
    line.str("");
    line << r.p << ',' << r.n << ',' << r.n1 << ',' << r.e_slo << ',' << r.e_sgo << '\n';
    out << line.str();
  }
}

}  // namespace detail

/// Entry point of the command-line tool. Exit codes: 0 success, 1 invalid
/// input, 2 verification or simulation mismatch.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Successive local / global omniscience solver"};
  app.require_subcommand(1);

  int n = 0, k = 0;
  double p = 0.5;
  std::vector<int> groups;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a random instance as JSON");
  gen->add_option("--n", n, "Number of users")->required();
  gen->add_option("--k", k, "Number of packets")->required();
  gen->add_option("--p", p, "Probability a user holds a packet")->required();
  gen->add_option("--groups", groups, "Nested group sizes, e.g. 2,3")->delimiter(',')->required();
  gen->add_option("--seed", seed, "Random seed");

  std::string mode_name = "slo", input, method = "lp";
  auto* solve = app.add_subcommand("solve", "Compute per-round minimum sum rates");
  solve->add_option("--mode", mode_name, "slo or sgo")->required();
  solve->add_option("--in", input, "Instance JSON file ('-' for stdin)")->required();
  solve->add_option("--method", method, "lp, sle or closed")->check(CLI::IsMember({"lp", "sle", "closed"}));

  std::string verify_mode = "both";
  auto* verify = app.add_subcommand("verify", "Cross-check the LP against the linear-equation predictor");
  verify->add_option("--in", input, "Instance JSON file")->required();
  verify->add_option("--mode", verify_mode, "slo, sgo or both")->check(CLI::IsMember({"slo", "sgo", "both"}));

  std::string rate_source = "lp";
  std::int64_t chunks = 0;
  auto* simulate = app.add_subcommand("simulate", "Simulate coded exchange at optimal rates");
  simulate->add_option("--in", input, "Instance JSON file")->required();
  simulate->add_option("--mode", mode_name, "slo or sgo")->required();
  simulate->add_option("--seed", seed, "Coding seed");
  simulate->add_option("--rates", rate_source, "Rate source: lp or sle")->check(CLI::IsMember({"lp", "sle"}));
  simulate->add_option("--chunks", chunks, "Chunks per packet (default: least that works)");

  int sweep_n = 6, steps = 99;
  std::vector<int> n1_values{2, 3, 4, 5};
  double pmin = 0.01, pmax = 0.99;
  auto* sweep = app.add_subcommand("sweep", "Excess rates over single-round exchange as CSV");
  sweep->add_option("--n", sweep_n, "Number of users");
  sweep->add_option("--n1", n1_values, "First group sizes, e.g. 2,3,4,5")->delimiter(',');
  sweep->add_option("--pmin", pmin);
  sweep->add_option("--pmax", pmax);
  sweep->add_option("--steps", steps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidInput;
  }

  try {
    if (gen->parsed()) {
      out << instance_to_json(random_instance(n, k, p, groups, seed)).dump() << '\n';
      return kExitOk;
    }
    if (solve->parsed()) {
      const Mode mode = parse_mode(mode_name);
      const Instance inst = detail::read_instance(input);
      auto solved = detail::solve_with(inst, mode, method);
      nlohmann::json j{{"mode", std::string(to_string(mode))},
                       {"method_requested", method},
                       {"method_used", solved.method_used},
                       {"fallback_reason", nullptr},
                       {"round_sums", rationals_to_json(solved.rates.round_sums())},
                       {"rates", rates_to_json(solved.rates)}};
      if (solved.fallback_reason) j["fallback_reason"] = *solved.fallback_reason;
      out << j.dump() << '\n';
      return kExitOk;
    }
    if (verify->parsed()) {
      const Instance inst = detail::read_instance(input);
      bool consistent = true;
      nlohmann::json modes = nlohmann::json::array();
      if (verify_mode != "sgo") modes.push_back(detail::verify_mode(inst, Mode::Slo, consistent));
      if (verify_mode != "slo") modes.push_back(detail::verify_mode(inst, Mode::Sgo, consistent));
      out << nlohmann::json{{"consistent", consistent}, {"modes", std::move(modes)}}.dump() << '\n';
      return consistent ? kExitOk : kExitMismatch;
    }
    if (simulate->parsed()) {
      const Mode mode = parse_mode(mode_name);
      const Instance inst = detail::read_instance(input);
      const RateMatrix rates =
          rate_source == "sle" ? sle_solve(inst, mode) : solve_lex(build_constraints(inst, mode)).rates;
      const SimReport rep = simulate_exchange(inst, rates, mode, seed, chunks);
      out << report_to_json(rep).dump() << '\n';
      return rep.all_achieved() ? kExitOk : kExitMismatch;
    }
    if (sweep->parsed()) {
      detail::write_sweep_csv(out, excess_sweep(sweep_n, n1_values, pmin, pmax, steps));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const bool mismatch = e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::Unbounded ||
                          e.code() == ErrorCode::NegativeRate || e.code() == ErrorCode::SingularSystem;
    return mismatch ? kExitMismatch : kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace omni::cli
