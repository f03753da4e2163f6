#pragma once

// Minimal TOML-style config reader for the solve pipeline.  Supported syntax:
// [section] headers, key = value lines, # comments, and values that are
// numbers, booleans, quoted strings, or (nested) arrays.  That is the whole
// grammar the solve configs need; anything fancier is rejected loudly.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdlab/green.hpp"
#include "mdlab/io.hpp"
#include "mdlab/solver.hpp"

namespace mdlab {

struct ConfigValue {
  enum class Kind { number, boolean, string, array };
  Kind kind = Kind::number;
  double num = 0.0;
  bool flag = false;
  std::string str;
  std::vector<ConfigValue> items;

  double as_number() const {
    if (kind != Kind::number) throw std::invalid_argument("config: expected a number");
    return num;
  }
  bool as_bool() const {
    if (kind != Kind::boolean) throw std::invalid_argument("config: expected a boolean");
    return flag;
  }
  const std::string& as_string() const {
    if (kind != Kind::string) throw std::invalid_argument("config: expected a string");
    return str;
  }
  const std::vector<ConfigValue>& as_array() const {
    if (kind != Kind::array) throw std::invalid_argument("config: expected an array");
    return items;
  }
  std::vector<double> as_numbers() const {
    std::vector<double> out;
    for (const auto& v : as_array()) out.push_back(v.as_number());
    return out;
  }
};

class Config {
 public:
  using Table = std::map<std::string, ConfigValue>;

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
  }
  const ConfigValue& at(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
      throw std::invalid_argument("config: missing " + section + "." + key);
    return s->second.at(key);
  }
  double number_or(const std::string& section, const std::string& key, double dflt) const {
    return has(section, key) ? at(section, key).as_number() : dflt;
  }
  bool flag_or(const std::string& section, const std::string& key, bool dflt) const {
    return has(section, key) ? at(section, key).as_bool() : dflt;
  }
  std::string string_or(const std::string& section, const std::string& key,
                        const std::string& dflt) const {
    return has(section, key) ? at(section, key).as_string() : dflt;
  }
  Table& section(const std::string& name) { return sections_[name]; }

 private:
  std::map<std::string, Table> sections_;
};

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline ConfigValue parse_value(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw std::invalid_argument("config: missing value");
  ConfigValue v;
  if (s[i] == '"') {
    v.kind = ConfigValue::Kind::string;
    const auto end = s.find('"', i + 1);
    if (end == std::string::npos) throw std::invalid_argument("config: unterminated string");
    v.str = s.substr(i + 1, end - i - 1);
    i = end + 1;
    return v;
  }
  if (s[i] == '[') {
    v.kind = ConfigValue::Kind::array;
    ++i;
    skip_ws(s, i);
    if (i < s.size() && s[i] == ']') {
      ++i;
      return v;
    }
    for (;;) {
      v.items.push_back(parse_value(s, i));
      skip_ws(s, i);
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == ']') {
        ++i;
        return v;
      }
      throw std::invalid_argument("config: malformed array");
    }
  }
  if (s.compare(i, 4, "true") == 0 || s.compare(i, 5, "false") == 0) {
    v.kind = ConfigValue::Kind::boolean;
    v.flag = s[i] == 't';
    i += v.flag ? 4 : 5;
    return v;
  }
  char* end = nullptr;
  v.num = std::strtod(s.c_str() + i, &end);
  if (end == s.c_str() + i) throw std::invalid_argument("config: unparsable value near '" + s.substr(i) + "'");
  v.kind = ConfigValue::Kind::number;
  i = static_cast<std::size_t>(end - s.c_str());
  return v;
}

inline std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace detail

inline Config parse_config(const std::string& text) {
  Config cfg;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  // Multi-line arrays: keep appending lines until brackets balance.
  std::string pending;
  auto bracket_balance = [](const std::string& s) {
    int b = 0;
    bool in_str = false;
    for (char c : s) {
      if (c == '"') in_str = !in_str;
      if (in_str) continue;
      if (c == '[') ++b;
      if (c == ']') --b;
    }
    return b;
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (!pending.empty()) {
      pending += " " + line;
      if (bracket_balance(pending) > 0) continue;
      line = pending;
      pending.clear();
    } else if (line.empty()) {
      continue;
    }
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw std::invalid_argument("config: empty section name");
      cfg.section(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    if (bracket_balance(line) > 0) {
      pending = line;
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
    std::size_t i = eq + 1;
    const ConfigValue v = detail::parse_value(line, i);
    detail::skip_ws(line, i);
    if (i != line.size())
      throw std::invalid_argument("config: trailing characters at line " + std::to_string(lineno));
    cfg.section(section.empty() ? "" : section)[key] = v;
  }
  if (!pending.empty()) throw std::invalid_argument("config: unterminated array");
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ------------------------------------------------------------ problem -----

struct SolveConfig {
  ProblemSpec spec;
  SolverOptions options;
  int k = 8;  // mollification index for the approximating solve
};

inline GridPtr build_grid(const Config& cfg) {
  const std::string type = cfg.string_or("grid", "type", "ball");
  const int dim = static_cast<int>(cfg.number_or("grid", "dim", 2));
  const Index n = static_cast<Index>(cfg.number_or("grid", "n", 129));
  if (cfg.has("grid", "extents")) {
    // explicit lattice: extents + h + origin (+ mask = "all" | "disk")
    const auto ext = cfg.at("grid", "extents").as_numbers();
    if (ext.size() != 2 && ext.size() != 3)
      throw std::invalid_argument("config: grid.extents needs 2 or 3 entries");
    const double h = cfg.at("grid", "h").as_number();
    const auto org = cfg.at("grid", "origin").as_numbers();
    if (org.size() != ext.size())
      throw std::invalid_argument("config: grid.origin must match extents");
    auto g = std::make_shared<Grid>();
    g->dim = static_cast<int>(ext.size());
    g->h = h;
    for (std::size_t d = 0; d < ext.size(); ++d) {
      g->ext[d] = static_cast<Index>(ext[d]);
      g->origin[d] = org[d];
    }
    for (int d = g->dim; d < 3; ++d) {
      g->ext[d] = 1;
      g->origin[d] = 0.0;
    }
    g->mask.assign(static_cast<std::size_t>(g->size()), 1);
    const std::string mask = cfg.string_or("grid", "mask", "all");
    if (mask == "disk") {
      const Eigen::Vector3d c = g->center();
      double R = 1e300;
      for (int d = 0; d < g->dim; ++d)
        R = std::min(R, 0.5 * g->h * static_cast<double>(g->ext[d] - 1));
      for (Index i = 0; i < g->size(); ++i)
        g->mask[static_cast<std::size_t>(i)] =
            (g->pos(i) - c).squaredNorm() < R * R ? 1 : 0;
    } else if (mask != "all") {
      throw std::invalid_argument("config: grid.mask must be \"all\" or \"disk\"");
    }
    return g;
  }
  if (type == "ball") return make_ball_grid(dim, n, cfg.number_or("grid", "radius", 1.0));
  if (type == "box")
    return make_box_grid(dim, n, cfg.number_or("grid", "lo", -1.0),
                         cfg.number_or("grid", "hi", 1.0));
  throw std::invalid_argument("config: grid.type must be \"ball\" or \"box\"");
}

inline DiscreteMeasure build_measure(const Config& cfg, GridPtr grid) {
  DiscreteMeasure mu;
  mu.dim = grid->dim;
  if (cfg.has("measure", "atoms")) {
    for (const auto& row : cfg.at("measure", "atoms").as_array()) {
      const auto xs = row.as_numbers();
      if (static_cast<int>(xs.size()) != grid->dim + 1)
        throw std::invalid_argument("config: each atom is [coords..., weight]");
      Eigen::Vector3d x = Eigen::Vector3d::Zero();
      for (int d = 0; d < grid->dim; ++d) x[d] = xs[static_cast<std::size_t>(d)];
      mu.atoms.push_back({x, xs.back()});
    }
  }
  if (cfg.has("measure", "density_alpha")) {
    const auto dens = radial_singular_density(cfg.at("measure", "density_alpha").as_number(),
                                              grid);
    mu.density = dens.density;
  } else if (cfg.has("measure", "density_file")) {
    const auto file = read_grid_binary(cfg.at("measure", "density_file").as_string());
    if (file.grid->size() != grid->size() || file.values.cols() != 1)
      throw std::invalid_argument("config: density file does not match the grid");
    mu.density = to_function(file);
  }
  return mu;
}

inline SolveConfig load_solve_config(const Config& cfg) {
  SolveConfig sc;
  sc.spec.grid = build_grid(cfg);
  sc.spec.p = cfg.number_or("problem", "p", 2.0);
  sc.spec.s = cfg.number_or("problem", "s", 0.0);
  sc.spec.nu = cfg.number_or("problem", "nu", 1.0);
  sc.spec.L = cfg.number_or("problem", "L", 1.0);
  if (sc.spec.p < 2.0) throw std::domain_error("config: problem.p must be >= 2");
  if (!(sc.spec.nu > 0.0) || sc.spec.L < sc.spec.nu)
    throw std::domain_error("config: need 0 < nu <= L");
  sc.spec.mu = build_measure(cfg, sc.spec.grid);
  sc.options.max_iter = static_cast<int>(cfg.number_or("solver", "max_iter", 500));
  sc.options.tol_scale = cfg.number_or("solver", "tol", 1e-10);
  sc.options.warm_start_quadratic = cfg.flag_or("solver", "warm_start", true);
  sc.k = static_cast<int>(cfg.number_or("solver", "k", 8));
  if (sc.k < 1) throw std::domain_error("config: solver.k must be >= 1");
  return sc;
}

}  // namespace mdlab
