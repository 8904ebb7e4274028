#include "warpcurv/manifest.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "warpcurv/parse.hpp"

namespace warpcurv {

ManifestError::ManifestError(const std::string& file, int line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), file_(file), line_(line) {}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

const std::regex kRational(R"(-?\d+(/\d+)?)");
const std::regex kIdent(R"([A-Za-z_][A-Za-z0-9_]*)");

Rational parse_rational(const std::string& s) {
  if (!std::regex_match(s, kRational)) throw std::invalid_argument("not a rational number: '" + s + "'");
  Rational r(s);
  return r;
}

struct Parser {
  const std::string& file;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ManifestError(file, line, msg); }

  std::pair<std::string, std::string> key_value(const std::string& s) const {
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
  }

  int index(const std::string& s, int dim) const {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      fail("bad index '" + s + "'");
    }
    if (v < 1 || (dim > 0 && v > dim)) fail("index " + s + " out of range 1.." + std::to_string(dim));
    return v - 1;
  }
};

}  // namespace

Interval parse_interval(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    Rational v = parse_rational(trim(text));
    return {v, v};
  }
  Rational lo = parse_rational(trim(text.substr(0, dots)));
  Rational hi = parse_rational(trim(text.substr(dots + 2)));
  if (lo > hi) throw std::invalid_argument("empty interval '" + text + "'");
  return {lo, hi};
}

Manifest parse_manifest(const std::string& text, const std::string& file, const std::filesystem::path& dir) {
  Manifest m;
  m.file = file;
  Parser p{file};
  std::istringstream in(text);
  std::string section;
  std::vector<std::pair<std::vector<std::string>, int>> pending_metric;
  for (std::string raw; std::getline(in, raw);) {
    ++p.line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') p.fail("unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> known = {"parameters", "box", "metric", "analyses", "expect"};
      if (!known.count(section)) p.fail("unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) {
      auto [key, value] = p.key_value(s);
      if (key == "kind") {
        if (value != "chart" && value != "warped") p.fail("kind must be 'chart' or 'warped'");
        m.kind = value;
      } else if (key == "name") {
        m.name = value;
      } else if (key == "coordinates") {
        m.coordinates = split_ws(value);
        for (const auto& c : m.coordinates) {
          if (!std::regex_match(c, kIdent)) p.fail("bad coordinate name '" + c + "'");
        }
      } else if (key == "seed") {
        try {
          std::size_t used = 0;
          m.seed = std::stoull(value, &used, 0);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          p.fail("bad seed '" + value + "'");
        }
      } else if (key == "points") {
        m.points = p.index(value, 0) + 1;
      } else if (key == "orientation") {
        if (value == "reversed") m.orientation = Orientation::reversed;
        else if (value == "geometric") m.orientation = Orientation::geometric;
        else p.fail("orientation must be 'reversed' or 'geometric'");
      } else if (key == "projective") {
        if (value == "n-2") m.projective = ProjectiveCoefficient::n_minus_2;
        else if (value == "n-1") m.projective = ProjectiveCoefficient::n_minus_1;
        else p.fail("projective must be 'n-2' or 'n-1'");
      } else if (key == "base") {
        m.base = {value, p.line};
      } else if (key == "fiber") {
        m.fiber = {value, p.line};
      } else if (key == "warping") {
        m.warping = {value, p.line};
      } else {
        p.fail("unknown key '" + key + "'");
      }
      continue;
    }
    if (section == "parameters" || section == "box") {
      auto [key, value] = p.key_value(s);
      if (!std::regex_match(key, kIdent)) p.fail("bad name '" + key + "'");
      try {
        parse_interval(value);
      } catch (const std::invalid_argument& e) {
        p.fail(e.what());
      }
      auto& target = section == "parameters" ? m.parameters : m.box;
      if (target.count(key)) p.fail("duplicate entry for '" + key + "'");
      target[key] = {value, p.line};
    } else if (section == "metric") {
      auto [key, value] = p.key_value(s);
      std::vector<std::string> words = split_ws(key);
      words.push_back(value);
      pending_metric.emplace_back(std::move(words), p.line);
    } else if (section == "analyses") {
      std::vector<std::string> parts = split(s, '|');
      Analysis a;
      a.line = p.line;
      const std::string head = parts[0];
      if (head.rfind("check", 0) == 0) {
        a.kind = "check";
        a.name = trim(head.substr(5));
        try {
          catalog_entry(a.name);
        } catch (const UnknownCondition& e) {
          p.fail(e.what());
        }
      } else if (head == "verify") {
        a.kind = "verify";
      } else {
        p.fail("analysis must start with 'check' or 'verify'");
      }
      for (std::size_t i = 1; i < parts.size(); ++i) {
        auto [key, value] = p.key_value(parts[i]);
        a.scalars[key] = {value, p.line};
      }
      m.analyses.push_back(std::move(a));
    } else if (section == "expect") {
      auto [key, value] = p.key_value(s);
      std::vector<std::string> words = split_ws(key);
      Expectation e;
      e.what = words.empty() ? "" : words[0];
      e.expr = {value, p.line};
      const std::size_t want = e.what == "scalar" ? 0 : e.what == "R" ? 4 : e.what == "S" ? 2 : 99;
      if (want == 99) p.fail("expectation must be 'scalar', 'R i j k l' or 'S i j'");
      if (words.size() != want + 1) p.fail("wrong number of indices for " + e.what);
      for (std::size_t i = 1; i < words.size(); ++i) e.index.push_back(p.index(words[i], 0));
      m.expectations.push_back(std::move(e));
    }
  }
  p.line = 0;
  if (m.kind.empty()) p.fail("missing 'kind'");
  if (m.kind == "chart") {
    if (m.coordinates.empty()) p.fail("chart manifest needs 'coordinates'");
    const int n = static_cast<int>(m.coordinates.size());
    for (auto& [words, line] : pending_metric) {
      p.line = line;
      if (words.size() != 3) p.fail("metric entries are 'i j = expr'");
      const int i = p.index(words[0], n);
      const int j = p.index(words[1], n);
      if (i > j) p.fail("metric entries must be in the upper triangle (i <= j)");
      if (m.metric.count({i, j})) p.fail("duplicate metric entry");
      m.metric[{i, j}] = {words[2], line};
    }
    for (const auto& [name, l] : m.box) {
      if (std::find(m.coordinates.begin(), m.coordinates.end(), name) == m.coordinates.end()) {
        throw ManifestError(file, l.line, "box entry for unknown coordinate '" + name + "'");
      }
    }
    // Parse every expression now so errors point at the manifest line.
    build_chart(m);
  } else {
    if (m.base.text.empty() || m.fiber.text.empty() || m.warping.text.empty()) {
      p.fail("warped manifest needs 'base', 'fiber' and 'warping'");
    }
    if (!pending_metric.empty()) throw ManifestError(file, pending_metric.front().second, "warped manifests have no [metric]");
    auto load_ref = [&](const Located& ref) {
      const std::filesystem::path path = dir / ref.text;
      if (!std::filesystem::exists(path)) throw ManifestError(file, ref.line, "referenced file not found: " + path.string());
      auto sub = std::make_shared<Manifest>(load_manifest(path));
      if (sub->kind != "chart") throw ManifestError(file, ref.line, ref.text + " is not a chart manifest");
      return std::shared_ptr<const Manifest>(sub);
    };
    m.base_manifest = load_ref(m.base);
    m.fiber_manifest = load_ref(m.fiber);
    build_warped(m);
  }
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError(path.string(), 0, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.string(), path.parent_path());
}

Expr parse_located(const Manifest& m, const Located& l, const Symbols& symbols) {
  try {
    return parse(l.text, symbols);
  } catch (const ParseError& e) {
    throw ManifestError(m.file, l.line, std::string(e.what()));
  }
}

namespace {

std::map<std::string, Interval> parameters_of(const Manifest& m, const ParameterOverrides& overrides) {
  std::map<std::string, Interval> out;
  for (const auto& [name, l] : m.parameters) out[name] = parse_interval(l.text);
  for (const auto& [name, text] : overrides) {
    if (out.count(name)) out[name] = parse_interval(text);
  }
  return out;
}

}  // namespace

ChartPtr build_chart(const Manifest& m, const ParameterOverrides& overrides) {
  if (m.kind != "chart") throw std::invalid_argument(m.file + " is not a chart manifest");
  const int n = static_cast<int>(m.coordinates.size());
  std::map<std::string, Interval> params = parameters_of(m, overrides);
  Symbols symbols;
  symbols.coordinates.insert(m.coordinates.begin(), m.coordinates.end());
  for (const auto& [name, _] : params) symbols.parameters.insert(name);
  std::vector<std::vector<Expr>> metric(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (const auto& [ij, l] : m.metric) {
    const Expr e = parse_located(m, l, symbols);
    metric[static_cast<std::size_t>(ij.first)][static_cast<std::size_t>(ij.second)] = e;
    metric[static_cast<std::size_t>(ij.second)][static_cast<std::size_t>(ij.first)] = e;
  }
  std::map<std::string, Interval> box;
  for (const auto& [name, l] : m.box) box[name] = parse_interval(l.text);
  return make_chart(m.name, m.coordinates, std::move(metric), std::move(params), std::move(box));
}

WarpedSpec build_warped(const Manifest& m, const ParameterOverrides& overrides) {
  if (m.kind != "warped") throw std::invalid_argument(m.file + " is not a warped manifest");
  // Parameters declared in the warped manifest override those of its parts.
  ParameterOverrides merged;
  for (const auto& [name, l] : m.parameters) merged[name] = l.text;
  for (const auto& [name, text] : overrides) merged[name] = text;
  WarpedSpec spec;
  spec.name = m.name;
  spec.base = build_chart(*m.base_manifest, merged);
  spec.fiber = build_chart(*m.fiber_manifest, merged);
  Symbols symbols = spec.base->symbols();
  for (const auto& [name, _] : spec.fiber->parameters) symbols.parameters.insert(name);
  spec.warping = parse_located(m, m.warping, symbols);
  return spec;
}

}  // namespace warpcurv
