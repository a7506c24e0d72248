#include "hyperorbit/config.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hyperorbit {

namespace fs = std::filesystem;

nlohmann::ordered_json module_versions() {
  return {{"group_core", "1.0"}, {"metric_lab", "1.0"}, {"cannon_automaton", "1.0"}, {"shift_analysis", "1.0"},
          {"thermo", "1.0"},     {"counting", "1.0"},   {"cli", "1.0"}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ResourceError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::vector<char> names_of(const std::string& s) {
  std::vector<char> out(s.begin(), s.end());
  return out;
}

Matrix2 parse_matrix(const nlohmann::json& m) {
  std::vector<double> v;
  if (m.is_array() && m.size() == 2 && m[0].is_array()) {
    for (const auto& row : m)
      for (const auto& x : row) v.push_back(x.get<double>());
  } else {
    v = m.get<std::vector<double>>();
  }
  if (v.size() != 4) throw InputError("matrix needs four entries");
  Matrix2 out;
  out << v[0], v[1], v[2], v[3];
  return out;
}

MetricSpec parse_metric(const nlohmann::json& j) {
  MetricSpec m;
  if (j.is_string()) {
    m.kind = j.get<std::string>();
    return m;
  }
  m.kind = get_or<std::string>(j, "kind", "word");
  m.factor = get_or(j, "factor", 1.0);
  m.absorbing_radius = get_or(j, "absorbing_radius", 11);
  if (j.contains("walk")) {
    const auto& w = j.at("walk");
    m.walk = get_or<std::vector<double>>(w, "step", {});
    m.walk_identity = get_or(w, "identity", 0.0);
  }
  return m;
}

nlohmann::json metric_json(const MetricSpec& m) {
  nlohmann::json j = {{"kind", m.kind}};
  if (m.kind == "scaled_word") j["factor"] = m.factor;
  if (m.kind == "green_numeric") {
    j["absorbing_radius"] = m.absorbing_radius;
    j["walk"] = {{"step", m.walk}, {"identity", m.walk_identity}};
  }
  return j;
}

}  // namespace

void RunConfig::validate() const {
  if (!group.is_object() || !group.contains("family")) throw InputError("config needs a group with a family");
  if (metrics.empty() || metrics.size() > 2) throw InputError("config needs one or two metrics");
  for (const auto& m : metrics) {
    static const char* kinds[] = {"word", "scaled_word", "green_closed_form", "green_numeric", "fuchsian"};
    if (std::find(std::begin(kinds), std::end(kinds), m.kind) == std::end(kinds))
      throw InputError("unknown metric kind '" + m.kind + "'");
    if (m.kind == "scaled_word" && !(m.factor > 0)) throw InputError("scaled_word factor must be positive");
  }
  if (r_cone < 1) throw InputError("r_cone must be >= 1");
  if (validate_n < 0 || n_max < 1) throw InputError("radii must be positive");
  if (depth < 1) throw InputError("depth must be >= 1");
  if (!(tol > 0) || !(eps > 0)) throw InputError("tolerances must be positive");
  if (l_max < 1 || gibbs_depth < 0) throw InputError("l_max and gibbs_depth out of range");
  if (scan_depth < 0) throw InputError("scan depth must be >= 0");
  if (scan_points < 1 || !(scan_t_max >= scan_t_min)) throw InputError("bad scan grid");
  if (count_points < 3) throw InputError("count_points must be >= 3");
}

nlohmann::json RunConfig::canonical() const {
  nlohmann::json j;
  j["group"] = group;
  j["metrics"] = nlohmann::json::array();
  for (const auto& m : metrics) j["metrics"].push_back(metric_json(m));
  j["automaton"] = {{"r_cone", r_cone}, {"validate_n", validate_n}, {"geodesic", geodesic}};
  j["thermo"] = {{"depth", depth},       {"tol", tol},           {"l_max", l_max},
                 {"gibbs_depth", gibbs_depth}, {"scan", {{"t_min", scan_t_min}, {"t_max", scan_t_max}, {"points", scan_points}, {"depth", scan_depth}}}};
  j["counting"] = {{"n_max", n_max}, {"eps", eps}, {"points", count_points}};
  j["seed"] = seed;
  return j;
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical().dump()); }

RunConfig parse_config(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  RunConfig c;
  if (!j.contains("group")) throw InputError("config needs a group");
  c.group = j.at("group");
  if (c.group.is_object() && c.group.contains("path")) {
    fs::path p = base_dir / c.group.at("path").get<std::string>();
    std::ifstream in(p);
    if (!in) throw InputError("cannot read group spec " + p.string());
    try {
      c.group = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("group spec " + p.string() + ": " + e.what());
    }
  }
  if (j.contains("metrics")) {
    for (const auto& m : j.at("metrics")) c.metrics.push_back(parse_metric(m));
  } else if (j.contains("metric")) {
    c.metrics.push_back(parse_metric(j.at("metric")));
  } else {
    c.metrics.push_back(MetricSpec{});
  }
  if (j.contains("automaton")) {
    const auto& a = j.at("automaton");
    c.r_cone = get_or(a, "r_cone", c.r_cone);
    c.validate_n = get_or(a, "validate_n", c.validate_n);
    c.geodesic = get_or(a, "geodesic", c.geodesic);
  }
  if (j.contains("thermo")) {
    const auto& t = j.at("thermo");
    c.depth = get_or(t, "depth", c.depth);
    c.tol = get_or(t, "tol", c.tol);
    c.l_max = get_or(t, "l_max", c.l_max);
    c.gibbs_depth = get_or(t, "gibbs_depth", c.gibbs_depth);
    if (t.contains("scan")) {
      const auto& s = t.at("scan");
      c.scan_t_min = get_or(s, "t_min", c.scan_t_min);
      c.scan_t_max = get_or(s, "t_max", c.scan_t_max);
      c.scan_points = get_or(s, "points", c.scan_points);
      c.scan_depth = get_or(s, "depth", c.scan_depth);
    }
  }
  if (j.contains("counting")) {
    const auto& n = j.at("counting");
    c.n_max = get_or(n, "n_max", c.n_max);
    c.eps = get_or(n, "eps", c.eps);
    c.count_points = get_or(n, "points", c.count_points);
  }
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

Presentation build_group(const nlohmann::json& spec) {
  const std::string family = get_or<std::string>(spec, "family", "");
  if (family == "free") {
    if (spec.contains("generators")) return Presentation::free_group(names_of(spec.at("generators").get<std::string>()));
    return Presentation::free_group(get_or(spec, "rank", 2));
  }
  if (family == "surface") {
    return Presentation::surface(get_or(spec, "genus", 2), names_of(get_or<std::string>(spec, "order", "")));
  }
  if (family == "small_cancellation") {
    std::vector<Matrix2> rep;
    if (spec.contains("representation"))
      for (const auto& m : spec.at("representation")) rep.push_back(parse_matrix(m));
    return Presentation::small_cancellation(names_of(get_or<std::string>(spec, "generators", "")),
                                            get_or<std::vector<std::string>>(spec, "relators", {}), rep);
  }
  if (family == "matrix") {
    std::vector<Matrix2> mats;
    for (const auto& m : spec.at("matrices")) mats.push_back(parse_matrix(m));
    std::string names = get_or<std::string>(spec, "generators", "");
    if (names.empty())
      for (std::size_t i = 0; i < mats.size(); ++i) names.push_back(static_cast<char>('a' + i));
    return Presentation::matrix_model(names_of(names), mats);
  }
  throw InputError("unknown group family '" + family + "'");
}

MetricModel build_metric(const Presentation& presentation, const MetricSpec& spec) {
  if (spec.kind == "word") return MetricModel::word(presentation);
  if (spec.kind == "scaled_word") return MetricModel::scaled_word(presentation, spec.factor);
  if (spec.kind == "green_closed_form") return MetricModel::green_closed_form(presentation);
  if (spec.kind == "fuchsian") return MetricModel::fuchsian(presentation);
  if (spec.kind == "green_numeric") {
    WalkSpec walk = WalkSpec::uniform(presentation);
    if (!spec.walk.empty()) {
      walk.step = spec.walk;
      walk.identity = spec.walk_identity;
    }
    return MetricModel::green_numeric(presentation, walk, spec.absorbing_radius);
  }
  throw InputError("unknown metric kind '" + spec.kind + "'");
}

}  // namespace hyperorbit
