#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "gptwb/errors.hpp"
#include "report.hpp"

namespace {

constexpr int kInputError = 3;
constexpr int kUnsupported = 4;
constexpr int kInternalError = 5;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GPTWB_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw gptwb::InvalidArgument(std::string("GPTWB_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gptwb::cli;

  CLI::App app{"Measurement relations, monotones and reference tables for finite-dimensional GPTs", "gptwb"};
  app.fallthrough();
  app.require_subcommand(1);

  double tolerance = 1e-9;
  std::optional<std::uint64_t> seed;
  std::string backend = "float";
  std::string format = "json";
  std::string out;
  app.add_option("--tolerance", tolerance, "Numerical tolerance eps")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "RNG seed for randomized searches (env GPTWB_SEED)");
  app.add_option("--backend", backend, "Arithmetic backend")->check(CLI::IsMember({"float", "exact"}));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", out, "Write the report to this file instead of stdout");

  std::function<Outcome(const RunConfig&)> action;

  auto* tables = app.add_subcommand("tables", "Reproduce a reference table");
  std::string which;
  tables->add_option("table", which, "dims | irreducibles | noise_bounds")->required();
  tables->callback([&] { action = [&](const RunConfig& c) { return cmd_tables(which, c); }; });

  std::string file_a, file_b;
  std::vector<std::string> files, simulators;

  auto add_sim = [&](CLI::App* parent, const char* name, const char* help) {
    auto* s = parent->add_subcommand(name, help);
    s->add_option("observable", file_a, "Observable JSON")->required();
    s->add_option("--simulators", simulators, "Observable JSON file(s) or irr(<space>)")->required();
    s->callback([&] { action = [&](const RunConfig& c) { return cmd_check_sim(file_a, simulators, c); }; });
  };
  auto add_compat = [&](CLI::App* parent, const char* name, const char* help) {
    auto* s = parent->add_subcommand(name, help);
    s->add_option("observables", files, "Observable JSON files (each one observable or a list)")->required();
    s->callback([&] { action = [&](const RunConfig& c) { return cmd_check_compat(files, c); }; });
  };

  auto* check = app.add_subcommand("check", "Decide a relation; exit 0 yes, 1 no, 2 inconclusive");
  check->require_subcommand(1);
  auto* pp = check->add_subcommand("postprocess", "Is B a post-processing of A?");
  pp->add_option("a", file_a, "Observable JSON A")->required();
  pp->add_option("b", file_b, "Observable JSON B")->required();
  pp->callback([&] { action = [&](const RunConfig& c) { return cmd_check_postprocess(file_a, file_b, c); }; });
  add_sim(check, "sim", "Is the observable simulable by the simulators?");
  add_compat(check, "compat", "Are the observables jointly measurable?");
  auto* uw = check->add_subcommand("ultraweak", "Is D = L C R for row-stochastic L, R?");
  uw->add_option("d", file_a, "CommMatrix D (CSV or JSON)")->required();
  uw->add_option("c", file_b, "CommMatrix C (CSV or JSON)")->required();
  uw->callback([&] { action = [&](const RunConfig& c) { return cmd_check_ultraweak(file_a, file_b, c); }; });

  add_sim(&app, "sim", "Same as check sim");
  add_compat(&app, "compat", "Same as check compat");

  auto* comm = app.add_subcommand("comm", "Monotones of a communication matrix");
  comm->add_option("matrix", file_a, "CommMatrix (CSV or JSON)");
  auto* compare = comm->add_subcommand("compare", "Ultraweak majorization verdict for D and C");
  compare->add_option("d", file_a, "CommMatrix D")->required();
  compare->add_option("c", file_b, "CommMatrix C")->required();
  compare->callback([&] { action = [&](const RunConfig& c) { return cmd_check_ultraweak(file_a, file_b, c); }; });
  comm->callback([&] {
    if (compare->parsed()) return;
    if (file_a.empty()) throw CLI::RequiredError("matrix");
    action = [&](const RunConfig& c) { return cmd_comm(file_a, c); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    RunConfig cfg;
    cfg.tol.eps = tolerance;
    cfg.seed = resolve_seed(seed, cfg.seed);
    cfg.exact = backend == "exact";
    const auto fmt = parse_format(format);
    const auto result = action(cfg);
    emit(render(result.report, fmt), out);
    return result.exit_code;
  } catch (const gptwb::Unsupported& e) {
    std::cerr << "gptwb: unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const gptwb::Error& e) {
    std::cerr << "gptwb: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "gptwb: internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
