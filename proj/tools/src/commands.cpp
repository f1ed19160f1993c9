#include "commands.hpp"

#include <cmath>
#include <future>

#include "gptwb/communication.hpp"
#include "gptwb/compatibility.hpp"
#include "gptwb/io.hpp"
#include "gptwb/postprocess.hpp"

namespace gptwb::cli {

using json = nlohmann::ordered_json;

namespace {

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return 0;
    case Verdict::No:
      return 1;
    case Verdict::Inconclusive:
      break;
  }
  return 2;
}

// Float round-off below this magnitude is reported as an exact zero.
constexpr double kDisplayZero = 1e-12;

template <Field T>
json value(const T& x) {
  if constexpr (is_exact_v<T>)
    return format_scalar(x);
  else
    return std::abs(x) < kDisplayZero ? 0.0 : x;
}

/// Reads and parses a file, naming it in any schema diagnostic.
template <typename Parse>
auto load(const std::string& path, Parse parse) {
  const auto text = read_file(path);
  try {
    return parse(text);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

template <Field T>
json vector_json(const Vector<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(value(x));
  return out;
}

template <Field T>
json matrix_json(const Matrix<T>& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(value(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

template <Field T>
json observable_json(const Observable<T>& a) {
  json effects = json::array();
  for (const auto& e : a.effects()) effects.push_back(vector_json(e));
  return {{"space_ref", a.space().name()}, {"outcomes", a.labels()}, {"effects", effects}};
}

std::vector<std::size_t> polygon_orders(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> n;
  for (std::size_t k = lo; k <= hi; ++k) n.push_back(k);
  return n;
}

json dims_row(const SpacePtr<double>& s, bool classical, const Tolerance& tol) {
  const auto d = space_dims(s, tol);
  const char* bound = classical ? "exact" : "lower";
  return {{"space", s->name()}, {"d_op", d.d_op},       {"lambda_max", d.lambda_max}, {"d_lin", d.d_lin},
          {"d_cl", d.d_cl_lo},  {"d_cl_bound", bound}, {"d_q", d.d_q_lo},            {"d_q_bound", bound}};
}

json irreducibles_row(std::size_t n, const Tolerance& tol) {
  const auto irr = enumerate_irreducibles<double>(make_polygon(n), tol);
  std::size_t dich = 0, trich = 0, other = 0;
  for (const auto& a : irr) {
    if (a.size() == 2)
      ++dich;
    else if (a.size() == 3)
      ++trich;
    else
      ++other;
  }
  std::size_t want_dich = 0, want_trich = 0;
  if (n % 2 == 0) {
    const std::size_t m = n / 2;
    want_dich = m;
    want_trich = m * (m - 1) * (m - 2) / 3;
  } else {
    const std::size_t m = (n - 1) / 2;
    want_trich = m * (m + 1) * (2 * m + 1) / 6;
  }
  return {{"n", n},
          {"dichotomic", dich},
          {"trichotomic", trich},
          {"other", other},
          {"formula_dichotomic", want_dich},
          {"formula_trichotomic", want_trich},
          {"match", dich == want_dich && trich == want_trich && other == 0}};
}

template <typename Fn>
json fan_out(std::size_t count, Fn row) {
  std::vector<std::future<json>> jobs;
  for (std::size_t i = 0; i < count; ++i) jobs.push_back(std::async(std::launch::async, row, i));
  json rows = json::array();
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

template <Field T>
std::vector<Observable<T>> load_simulators(const std::string& source) {
  if (source.rfind("irr(", 0) == 0 && source.back() == ')')
    return enumerate_irreducibles<T>(parse_space_literal<T>(source.substr(4, source.size() - 5)));
  return load(source, parse_observable_list_json<T>);
}

template <Field T>
Outcome check_postprocess(const std::string& fa, const std::string& fb, const RunConfig& cfg) {
  auto a = load(fa, parse_observable_json<T>);
  auto b = load(fb, parse_observable_json<T>);
  auto nu = find_postprocessing(a, b, cfg.tol);
  json r{{"relation", "postprocess"}, {"verdict", nu ? "yes" : "no"}};
  if (nu) r["postprocessing"] = matrix_json(*nu);
  return {r, nu ? 0 : 1};
}

template <Field T>
Outcome check_sim(const std::string& fa, const std::vector<std::string>& sources, const RunConfig& cfg) {
  auto a = load(fa, parse_observable_json<T>);
  std::vector<Observable<T>> sims;
  for (const auto& s : sources) {
    auto more = load_simulators<T>(s);
    sims.insert(sims.end(), more.begin(), more.end());
  }
  if (sims.empty()) throw InvalidArgument("no simulators given");
  auto w = is_simulable(a, sims, cfg.tol);
  json r{{"relation", "sim"}, {"verdict", w ? "yes" : "no"}, {"simulators", sims.size()}};
  if (w) {
    json parts = json::array();
    for (const auto& p : w->parts) parts.push_back(matrix_json(p));
    r["witness"] = {{"weights", vector_json(w->weights)}, {"parts", parts}};
  }
  return {r, w ? 0 : 1};
}

template <Field T>
Outcome check_compat(const std::vector<std::string>& files, const RunConfig& cfg) {
  std::vector<Observable<T>> obs;
  for (const auto& f : files) {
    auto more = load(f, parse_observable_list_json<T>);
    obs.insert(obs.end(), more.begin(), more.end());
  }
  if (obs.size() < 2) throw InvalidArgument("compat needs at least two observables");
  for (std::size_t i = 1; i < obs.size(); ++i) require_same_space(obs[0], obs[i], "compat");

  json criteria = json::object();
  const auto noise = noise_sufficient_compat(obs, cfg.tol);
  criteria["noise_content_sum"] = value(noise.w_sum);
  criteria["noise_content_threshold"] = obs.size() - 1;

  std::optional<PsymResult> psym;
  const auto& space = obs[0].space();
  if constexpr (std::is_same_v<T, double>) {
    if (space.is_point_symmetric() && obs.size() == 2 && obs[0].size() == 2 && obs[1].size() == 2) {
      const auto fa = bloch_form(obs[0].effect(0));
      const auto fb = bloch_form(obs[1].effect(0));
      psym = psym_compat_test(space, fa.a, fa.alpha, fb.a, fb.alpha);
      criteria["norm_criterion"] = psym->criterion;
      criteria["norm_verdict"] = to_string(psym->verdict);
      criteria["boundary"] = psym->boundary;
    }
  }

  json r{{"relation", "compat"}};
  Verdict v = Verdict::Inconclusive;
  if (space.kind() == SpaceKind::Polytopic) {
    auto joint = are_compatible(obs, cfg.tol);
    v = joint ? Verdict::Yes : Verdict::No;
    if (joint) r["joint"] = observable_json(joint->joint);
  } else if (psym) {
    if (psym->verdict == PsymVerdict::Incompatible)
      v = Verdict::No;
    else if (psym->verdict == PsymVerdict::IffCompatible)
      v = Verdict::Yes;
  } else if (noise.verdict == Verdict::Yes) {
    v = Verdict::Yes;
  }
  r["verdict"] = to_string(v);
  r["criterion_values"] = criteria;
  return {r, exit_code(v)};
}

void require_float(const RunConfig& cfg, const char* what) {
  if (cfg.exact) throw Unsupported(std::string(what) + " is available with the float backend only");
}

}  // namespace

Outcome cmd_tables(const std::string& which, const RunConfig& cfg) {
  require_float(cfg, "tables");
  const Tolerance tol = cfg.tol;
  if (which == "dims") {
    auto rows = fan_out(12, [tol](std::size_t i) {
      return i < 5 ? dims_row(make_classical<double>(i + 1), true, tol) : dims_row(make_polygon(i - 2), false, tol);
    });
    return {{{"table", "dims"}, {"rows", rows}}, 0};
  }
  if (which == "irreducibles") {
    const auto ns = polygon_orders(4, 9);
    auto rows = fan_out(ns.size(), [&ns, tol](std::size_t i) { return irreducibles_row(ns[i], tol); });
    return {{{"table", "irreducibles"}, {"rows", rows}}, 0};
  }
  if (which == "noise_bounds") {
    json rows = json::array();
    for (std::size_t n = 5; n <= 13; n += 2) rows.push_back({{"n", n}, {"lower_bound", fc_noise_lower_bound(n)}});
    return {{{"table", "noise_bounds"}, {"rows", rows}}, 0};
  }
  throw InvalidArgument("unknown table '" + which + "' (expected dims, irreducibles or noise_bounds)");
}

Outcome cmd_check_postprocess(const std::string& a, const std::string& b, const RunConfig& cfg) {
  return cfg.exact ? check_postprocess<Rational>(a, b, cfg) : check_postprocess<double>(a, b, cfg);
}

Outcome cmd_check_sim(const std::string& a, const std::vector<std::string>& simulators, const RunConfig& cfg) {
  return cfg.exact ? check_sim<Rational>(a, simulators, cfg) : check_sim<double>(a, simulators, cfg);
}

Outcome cmd_check_compat(const std::vector<std::string>& files, const RunConfig& cfg) {
  return cfg.exact ? check_compat<Rational>(files, cfg) : check_compat<double>(files, cfg);
}

Outcome cmd_check_ultraweak(const std::string& d, const std::string& c, const RunConfig& cfg) {
  require_float(cfg, "ultraweak majorization");
  const auto dm = load(d, parse_comm_matrix);
  const auto cm = load(c, parse_comm_matrix);
  SearchConfig search;
  search.seed = cfg.seed;
  const auto res = ultraweak_leq(dm, cm, search, cfg.tol);
  json r{{"relation", "ultraweak"}, {"verdict", to_string(res.verdict)}, {"method", res.method}};
  if (res.verdict == Verdict::No) r["violated"] = res.violated;
  if (res.left && res.right) {
    r["left"] = matrix_json(*res.left);
    r["right"] = matrix_json(*res.right);
    r["residual"] = res.residual;
  }
  return {r, exit_code(res.verdict)};
}

Outcome cmd_comm(const std::string& c, const RunConfig& cfg) {
  require_float(cfg, "communication monotones");
  const auto m = load(c, parse_comm_matrix);
  if (!is_row_stochastic(m, cfg.tol)) throw InvalidArgument("communication matrix rows must be probability vectors");
  SearchConfig search;
  search.seed = cfg.seed;
  const auto rep = monotones(m, search, cfg.tol);
  json r{{"rows_count", m.rows()},
         {"cols_count", m.cols()},
         {"iota", rep.iota},
         {"lambda_max", rep.lambda_max},
         {"lambda_min", rep.lambda_min},
         {"rank", rep.rank},
         {"nn_rank", {{"lo", rep.nn_rank.lo}, {"hi", rep.nn_rank.hi}}},
         {"psd_rank", {{"lo", rep.psd_rank.lo}, {"hi", rep.psd_rank.hi}}}};
  return {r, 0};
}

}  // namespace gptwb::cli
