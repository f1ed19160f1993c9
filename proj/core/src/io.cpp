#include "gptwb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gptwb {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
}

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError("at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(path, std::string("missing key '") + key + "'");
  return *it;
}

std::size_t parse_size(std::string_view s, const std::string& what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw InvalidArgument("bad " + what + " in space literal: '" + std::string(s) + "'");
  return v;
}

template <Field T>
T number(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
    if (j.is_number_integer()) return parse_scalar<T>(std::to_string(j.get<long long>()));
    if (j.is_number_unsigned()) return parse_scalar<T>(std::to_string(j.get<unsigned long long>()));
    if (j.is_number_float()) return parse_scalar<T>(format_scalar(j.get<double>()));
  } catch (const SchemaError& e) {
    schema_fail(path, e.what());
  } catch (const InvalidArgument& e) {
    schema_fail(path, e.what());
  }
  schema_fail(path, "expected a number");
}

template <Field T>
Vector<T> vec(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of numbers");
  Vector<T> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number<T>(j[i], path + "/" + std::to_string(i)));
  return v;
}

template <Field T>
std::vector<Vector<T>> vec_list(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of vectors");
  std::vector<Vector<T>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec<T>(j[i], path + "/" + std::to_string(i)));
  return out;
}

template <Field T>
SpacePtr<T> polygon_literal(std::size_t n) {
  if constexpr (std::is_same_v<T, double>) {
    return make_polygon(n);
  } else {
    throw Unsupported("regular polygons have irrational vertices; use the float backend");
  }
}

template <Field T>
SpacePtr<T> ball_literal(std::size_t d) {
  if constexpr (std::is_same_v<T, double>) {
    return make_ball(d);
  } else {
    throw Unsupported("norm balls need the float backend");
  }
}

template <Field T>
SpacePtr<T> space_from_json(const json& j, const std::string& path) {
  if (j.is_string()) return parse_space_literal<T>(j.get<std::string>());
  if (!j.is_object()) schema_fail(path, "expected a space object or literal");
  if (auto it = j.find("literal"); it != j.end()) {
    if (!it->is_string()) schema_fail(path + "/literal", "expected a string");
    return parse_space_literal<T>(it->get<std::string>());
  }
  const json& kind = require(j, "kind", path);
  if (!kind.is_string()) schema_fail(path + "/kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "polytope") {
    auto vertices = vec_list<T>(require(j, "vertices", path), path + "/vertices");
    if (vertices.empty()) schema_fail(path + "/vertices", "at least one vertex required");
    Vector<T> unit;
    if (auto it = j.find("unit"); it != j.end()) {
      unit = vec<T>(*it, path + "/unit");
    } else {
      unit.assign(vertices.front().size(), T(0));
      unit.back() = T(1);
    }
    std::string name = "polytope";
    if (auto it = j.find("name"); it != j.end() && it->is_string()) name = it->get<std::string>();
    try {
      return make_polytope<T>(name, std::move(vertices), std::move(unit));
    } catch (const Error& e) {
      schema_fail(path, e.what());
    }
  }
  if (k == "ball") {
    const json& dim = require(j, "dim", path);
    if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) schema_fail(path + "/dim", "expected a positive integer");
    if (auto it = j.find("norm"); it != j.end() && (!it->is_string() || it->get<std::string>() != "euclidean"))
      throw Unsupported("only the Euclidean norm ball is supported");
    return ball_literal<T>(dim.get<std::size_t>());
  }
  if (k == "direct_sum") {
    const json& s = require(j, "summands", path);
    if (!s.is_array() || s.size() < 2) schema_fail(path + "/summands", "expected at least two summands");
    std::vector<SpacePtr<T>> parts;
    for (std::size_t i = 0; i < s.size(); ++i)
      parts.push_back(space_from_json<T>(s[i], path + "/summands/" + std::to_string(i)));
    return direct_sum<T>(parts);
  }
  schema_fail(path + "/kind", "unknown kind '" + k + "'");
}

template <Field T>
Observable<T> observable_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an observable object");
  SpacePtr<T> space;
  if (auto it = j.find("space_ref"); it != j.end()) {
    if (!it->is_string()) schema_fail(path + "/space_ref", "expected a space literal");
    space = parse_space_literal<T>(it->get<std::string>());
  } else if (auto it2 = j.find("space"); it2 != j.end()) {
    space = space_from_json<T>(*it2, path + "/space");
  } else {
    schema_fail(path, "missing key 'space_ref' or 'space'");
  }
  auto effects = vec_list<T>(require(j, "effects", path), path + "/effects");
  if (effects.empty()) schema_fail(path + "/effects", "at least one effect required");
  for (std::size_t x = 0; x < effects.size(); ++x)
    if (effects[x].size() != space->ambient_dim())
      schema_fail(path + "/effects/" + std::to_string(x),
                  "expected " + std::to_string(space->ambient_dim()) + " components");
  std::vector<std::string> labels;
  if (auto it = j.find("outcomes"); it != j.end()) {
    if (!it->is_array() || it->size() != effects.size())
      schema_fail(path + "/outcomes", "expected one label per effect");
    for (std::size_t x = 0; x < it->size(); ++x) {
      const json& l = (*it)[x];
      if (l.is_string())
        labels.push_back(l.get<std::string>());
      else if (l.is_number())
        labels.push_back(l.dump());
      else
        schema_fail(path + "/outcomes/" + std::to_string(x), "expected a label");
    }
  }
  try {
    return Observable<T>(std::move(space), std::move(effects), std::move(labels));
  } catch (const Error& e) {
    schema_fail(path, e.what());
  }
}

}  // namespace

template <Field T>
SpacePtr<T> parse_space_literal(std::string_view literal) {
  const std::string lit = trim(literal);
  if (lit.rfind("dsum:", 0) == 0) {
    std::vector<SpacePtr<T>> parts;
    std::string_view rest(lit);
    rest.remove_prefix(5);
    while (!rest.empty()) {
      auto plus = rest.find('+');
      parts.push_back(parse_space_literal<T>(rest.substr(0, plus)));
      if (plus == std::string_view::npos) break;
      rest.remove_prefix(plus + 1);
    }
    if (parts.size() < 2) throw InvalidArgument("dsum literal needs at least two summands: '" + lit + "'");
    return direct_sum<T>(parts);
  }
  if (lit == "square") return make_rational_square<T>();
  if (lit.rfind("classical:", 0) == 0) {
    auto d = parse_size(std::string_view(lit).substr(10), "dimension");
    if (d == 0) throw InvalidArgument("classical dimension must be positive");
    return make_classical<T>(d);
  }
  if (lit.rfind("polygon:", 0) == 0) return polygon_literal<T>(parse_size(std::string_view(lit).substr(8), "order"));
  if (lit.rfind("S_", 0) == 0) return polygon_literal<T>(parse_size(std::string_view(lit).substr(2), "order"));
  if (lit.rfind("ball:", 0) == 0) return ball_literal<T>(parse_size(std::string_view(lit).substr(5), "dimension"));
  throw SchemaError("unknown space literal '" + lit + "'");
}

template <Field T>
SpacePtr<T> parse_state_space_json(std::string_view text) {
  return space_from_json<T>(parse_json(text), "");
}

template <Field T>
Observable<T> parse_observable_json(std::string_view text) {
  return observable_from_json<T>(parse_json(text), "");
}

template <Field T>
std::vector<Observable<T>> parse_observable_list_json(std::string_view text) {
  const json j = parse_json(text);
  std::vector<Observable<T>> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(observable_from_json<T>(j[i], "/" + std::to_string(i)));
  } else {
    out.push_back(observable_from_json<T>(j, ""));
  }
  return out;
}

template <Field T>
MPInstrument<T> parse_instrument_json(std::string_view text) {
  const json j = parse_json(text);
  auto obs = observable_from_json<T>(require(j, "observable", ""), "/observable");
  auto prepared = vec_list<T>(require(j, "prepared_states", ""), "/prepared_states");
  SpacePtr<T> out;
  if (auto it = j.find("output_space_ref"); it != j.end()) {
    if (!it->is_string()) schema_fail("/output_space_ref", "expected a space literal");
    out = parse_space_literal<T>(it->get<std::string>());
  } else if (auto it2 = j.find("output_space"); it2 != j.end()) {
    out = space_from_json<T>(*it2, "/output_space");
  } else {
    schema_fail("", "missing key 'output_space_ref' or 'output_space'");
  }
  try {
    return MPInstrument<T>(std::move(obs), std::move(prepared), std::move(out));
  } catch (const Error& e) {
    schema_fail("", e.what());
  }
}

Matrix<double> parse_comm_matrix(std::string_view text) {
  const std::string body = trim(text);
  if (body.empty()) throw SchemaError("empty communication matrix");
  std::vector<Vector<double>> rows;
  if (body.front() == '[' || body.front() == '{') {
    json j = parse_json(body);
    const json& m = j.is_object() ? require(j, "matrix", "") : j;
    rows = vec_list<double>(m, j.is_object() ? "/matrix" : "");
  } else {
    std::istringstream in(body);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      Vector<double> row;
      std::string_view rest(t);
      while (true) {
        auto comma = rest.find(',');
        auto cell = trim(rest.substr(0, comma));
        try {
          row.push_back(parse_scalar<double>(cell));
        } catch (const InvalidArgument&) {
          throw SchemaError("line " + std::to_string(lineno) + ": bad entry '" + cell + "'");
        }
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      if (!rows.empty() && row.size() != rows.front().size())
        throw SchemaError("line " + std::to_string(lineno) + ": expected " + std::to_string(rows.front().size()) +
                          " entries, found " + std::to_string(row.size()));
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty() || rows.front().empty()) throw SchemaError("empty communication matrix");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].size() != rows.front().size()) schema_fail("/" + std::to_string(i), "ragged row");
  return Matrix<double>::from_rows(rows);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

template <Field T>
json vector_json(const Vector<T>& v) {
  json row = json::array();
  for (const auto& x : v) {
    if constexpr (is_exact_v<T>)
      row.push_back(format_scalar(x));
    else
      row.push_back(x);
  }
  return row;
}

template <Field T>
bool is_literal_name(const std::string& name) {
  try {
    parse_space_literal<T>(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

template <Field T>
std::string observable_to_json(const Observable<T>& a) {
  json j;
  const auto& s = a.space();
  if (is_literal_name<T>(s.name())) {
    j["space_ref"] = s.name();
  } else {
    json vertices = json::array();
    for (const auto& v : s.vertices()) vertices.push_back(vector_json(v));
    j["space"] = {{"kind", "polytope"}, {"name", s.name()}, {"vertices", vertices}, {"unit", vector_json(s.unit())}};
  }
  j["outcomes"] = a.labels();
  json effects = json::array();
  for (const auto& e : a.effects()) effects.push_back(vector_json(e));
  j["effects"] = std::move(effects);
  return j.dump();
}

#define GPTWB_INSTANTIATE(T)                                                                 \
  template SpacePtr<T> parse_space_literal<T>(std::string_view);                             \
  template SpacePtr<T> parse_state_space_json<T>(std::string_view);                          \
  template Observable<T> parse_observable_json<T>(std::string_view);                         \
  template std::vector<Observable<T>> parse_observable_list_json<T>(std::string_view);       \
  template MPInstrument<T> parse_instrument_json<T>(std::string_view);                       \
  template std::string observable_to_json<T>(const Observable<T>&);

GPTWB_INSTANTIATE(double)
GPTWB_INSTANTIATE(Rational)

#undef GPTWB_INSTANTIATE

}  // namespace gptwb
