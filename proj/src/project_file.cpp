#include "schedrisk/project_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "schedrisk/csv.hpp"
#include "schedrisk/error.hpp"

namespace schedrisk {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t from = 0;
  while (true) {
    const auto at = s.find(sep, from);
    parts.push_back(trim(s.substr(from, at == std::string_view::npos ? at : at - from)));
    if (at == std::string_view::npos) break;
    from = at + 1;
  }
  return parts;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t j = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > j) out.push_back(s.substr(j, i - j));
  }
  return out;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && end == s.data() + s.size() && std::isfinite(out);
}

class Located {
 public:
  Located(std::string_view source, std::size_t line) : source_(source), line_(line) {}

  [[noreturn]] void fail(ErrorCode code, const std::string& msg,
                         const std::string& subject = {}) const {
    throw Error(code, source_ + ":" + std::to_string(line_) + ": " + msg, subject);
  }

  double number(std::string_view text, std::string_view what) const {
    double v = 0.0;
    if (!parse_double(text, v))
      fail(ErrorCode::Syntax, std::string(what) + " is not a number: '" + std::string(text) + "'");
    return v;
  }

 private:
  std::string source_;
  std::size_t line_;
};

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string kind;
  std::string id;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

const std::map<std::string, std::set<std::string>, std::less<>> kFields = {
    {"activity", {"name", "duration", "fixed_cost", "variable_cost_rate"}},
    {"risk", {"name", "probability", "kind", "target", "impact"}},
};

}  // namespace

Distribution parse_distribution(std::string_view text) {
  const std::string_view s = trim(text);
  auto fail = [&](const std::string& msg) -> Distribution {
    throw Error(ErrorCode::Syntax, "distribution '" + std::string(s) + "': " + msg);
  };
  double bare = 0.0;
  if (parse_double(s, bare)) return PointDist{bare};

  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') return fail("expected name(args)");
  const std::string_view name = trim(s.substr(0, open));
  const std::string_view inner = s.substr(open + 1, s.size() - open - 2);
  const auto args = split(inner, ',');

  if (name == "discrete") {
    DiscreteDist d;
    for (auto a : args) {
      const auto colon = a.find(':');
      double v = 0.0, p = 0.0;
      if (colon == std::string_view::npos || !parse_double(a.substr(0, colon), v) ||
          !parse_double(a.substr(colon + 1), p))
        return fail("atom '" + std::string(a) + "' is not value:probability");
      d.atoms.emplace_back(v, p);
    }
    return d;
  }

  std::vector<double> xs;
  for (auto a : args) {
    double v = 0.0;
    if (!parse_double(a, v)) return fail("argument '" + std::string(a) + "' is not a number");
    xs.push_back(v);
  }
  auto want = [&](std::size_t n) {
    if (xs.size() != n) fail("expects " + std::to_string(n) + " arguments");
  };
  if (name == "point") return want(1), Distribution{PointDist{xs[0]}};
  if (name == "uniform") return want(2), Distribution{UniformDist{xs[0], xs[1]}};
  if (name == "triangular") return want(3), Distribution{TriangularDist{xs[0], xs[1], xs[2]}};
  if (name == "normal") return want(2), Distribution{NormalDist{xs[0], xs[1]}};
  if (name == "pert") return want(3), Distribution{PertDist{xs[0], xs[1], xs[2]}};
  return fail("unknown law '" + std::string(name) + "'");
}

ProjectSpec parse_project_text(std::string_view text, std::string_view source) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const Located at(source, line_no);
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') at.fail(ErrorCode::Syntax, "unterminated section header");
      const auto parts = words(line.substr(1, line.size() - 2));
      if (parts.empty()) at.fail(ErrorCode::Syntax, "empty section header");
      Section sec{std::string(parts[0]), {}, line_no, {}};
      if (sec.kind == "activity" || sec.kind == "risk") {
        if (parts.size() != 2 || !valid_id(parts[1]))
          at.fail(ErrorCode::Syntax, "expected [" + sec.kind + " ID]");
        sec.id = std::string(parts[1]);
      } else if (sec.kind == "precedence" || sec.kind == "matrix") {
        if (parts.size() != 1) at.fail(ErrorCode::Syntax, "[" + sec.kind + "] takes no id");
      } else {
        at.fail(ErrorCode::UnknownField, "unknown section '" + sec.kind + "'", sec.kind);
      }
      sections.push_back(std::move(sec));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) at.fail(ErrorCode::Syntax, "expected key = value");
    if (sections.empty()) at.fail(ErrorCode::Syntax, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) at.fail(ErrorCode::Syntax, "missing key before '='");
    Section& sec = sections.back();
    for (const auto& e : sec.entries)
      if (e.key == key && sec.kind != "precedence")
        at.fail(ErrorCode::Syntax, "key '" + key + "' repeated (first on line " +
                                       std::to_string(e.line) + ")", key);
    if (auto f = kFields.find(sec.kind); f != kFields.end() && !f->second.contains(key))
      at.fail(ErrorCode::UnknownField, "unknown field '" + key + "' in [" + sec.kind + "]", key);
    sec.entries.push_back({key, std::string(trim(line.substr(eq + 1))), line_no});
  }

  ProjectSpec spec;
  std::map<std::string, std::size_t, std::less<>> seen;
  bool have_links = false;
  for (const Section& sec : sections) {
    const Located head(source, sec.line);
    auto get = [&](std::string_view key) -> const Entry* {
      for (const auto& e : sec.entries)
        if (e.key == key) return &e;
      return nullptr;
    };
    auto require = [&](std::string_view key) -> const Entry& {
      const Entry* e = get(key);
      if (!e)
        head.fail(ErrorCode::Syntax,
                  "[" + sec.kind + " " + sec.id + "] is missing '" + std::string(key) + "'",
                  sec.id);
      return *e;
    };
    auto law = [&](const Entry& e) {
      try {
        return parse_distribution(e.value);
      } catch (const Error& err) {
        const std::string_view what = err.what();
        Located(source, e.line)
            .fail(ErrorCode::Syntax, std::string(what.substr(what.find(": ") + 2)), sec.id);
      }
    };
    auto number = [&](std::string_view key, double fallback) {
      const Entry* e = get(key);
      return e ? Located(source, e->line).number(e->value, key) : fallback;
    };

    if (sec.kind == "activity" || sec.kind == "risk") {
      if (auto it = seen.find(sec.id); it != seen.end())
        head.fail(ErrorCode::DuplicateId,
                  "id '" + sec.id + "' already defined on line " + std::to_string(it->second),
                  sec.id);
      seen.emplace(sec.id, sec.line);
    }

    if (sec.kind == "activity") {
      Activity a;
      a.id = sec.id;
      if (const Entry* e = get("name")) a.name = e->value;
      a.duration = law(require("duration"));
      a.fixed_cost = number("fixed_cost", 0.0);
      a.variable_cost_rate = number("variable_cost_rate", 0.0);
      spec.activities.push_back(std::move(a));
    } else if (sec.kind == "risk") {
      RiskEvent r;
      r.id = sec.id;
      if (const Entry* e = get("name")) r.name = e->value;
      const Entry& p = require("probability");
      r.probability = Located(source, p.line).number(p.value, "probability");
      if (const Entry* k = get("kind")) {
        if (k->value == "duration")
          r.kind = RiskKind::duration;
        else if (k->value == "cost")
          r.kind = RiskKind::cost;
        else
          Located(source, k->line)
              .fail(ErrorCode::Syntax, "kind must be duration or cost", sec.id);
      }
      r.target = require("target").value;
      r.impact = law(require("impact"));
      spec.risks.push_back(std::move(r));
    } else if (sec.kind == "precedence") {
      if (have_links) head.fail(ErrorCode::Syntax, "precedence given more than once");
      have_links = true;
      for (const auto& e : sec.entries) {
        if (!valid_id(e.key)) Located(source, e.line).fail(ErrorCode::Syntax, "bad id", e.key);
        for (auto pred : words(e.value)) {
          if (!valid_id(pred))
            Located(source, e.line).fail(ErrorCode::Syntax, "bad id", std::string(pred));
          spec.precedence.push_back({e.key, std::string(pred)});
        }
      }
    } else if (sec.kind == "matrix") {
      if (have_links) head.fail(ErrorCode::Syntax, "precedence given more than once");
      have_links = true;
      if (sec.entries.empty() || sec.entries.front().key != "columns")
        head.fail(ErrorCode::Syntax, "[matrix] must start with 'columns ='");
      PrecedenceMatrix m;
      std::map<std::string, std::size_t, std::less<>> col;
      for (auto id : words(sec.entries.front().value)) {
        const Located at(source, sec.entries.front().line);
        if (!valid_id(id)) at.fail(ErrorCode::Syntax, "bad id", std::string(id));
        if (!col.emplace(std::string(id), m.ids.size()).second)
          at.fail(ErrorCode::DuplicateId, "column '" + std::string(id) + "' repeated",
                  std::string(id));
        m.ids.emplace_back(id);
      }
      const std::size_t n = m.ids.size();
      m.cells.assign(n, std::vector<std::uint8_t>(n, 0));
      std::vector<std::size_t> row_line(n, 0);
      for (std::size_t r = 1; r < sec.entries.size(); ++r) {
        const Entry& e = sec.entries[r];
        const Located at(source, e.line);
        const auto it = col.find(e.key);
        if (it == col.end())
          at.fail(ErrorCode::Syntax, "row '" + e.key + "' is not a matrix column", e.key);
        const auto cells = words(e.value);
        if (cells.size() != n)
          at.fail(ErrorCode::Syntax,
                  "row '" + e.key + "' has " + std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(n),
                  e.key);
        for (std::size_t j = 0; j < n; ++j) {
          if (cells[j] != "0" && cells[j] != "1")
            at.fail(ErrorCode::Syntax, "row '" + e.key + "' cell must be 0 or 1", e.key);
          m.cells[it->second][j] = cells[j] == "1";
        }
        row_line[it->second] = e.line;
      }
      for (std::size_t i = 0; i < n; ++i)
        if (!row_line[i])
          head.fail(ErrorCode::Syntax, "matrix row '" + m.ids[i] + "' is missing", m.ids[i]);
      apply_matrix(spec, m);
    }
  }
  return spec;
}

void apply_matrix(ProjectSpec& spec, const PrecedenceMatrix& matrix) {
  spec.precedence.clear();
  for (std::size_t i = 0; i < matrix.ids.size(); ++i)
    for (std::size_t j = 0; j < matrix.ids.size(); ++j)
      if (matrix.cells[i][j]) spec.precedence.push_back({matrix.ids[i], matrix.ids[j]});
  spec.matrix_columns = matrix.ids;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string(), path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "error reading " + path.string(), path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string(), path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "error writing " + path.string(), path.string());
}

ProjectSpec parse_project(const std::filesystem::path& path) {
  return parse_project_text(read_text_file(path), path.string());
}

namespace {

// Matrix form is only lossless when the pairs come out of apply_matrix unchanged.
bool matrix_round_trips(const ProjectSpec& spec) {
  if (!spec.matrix_columns) return false;
  const auto& ids = *spec.matrix_columns;
  std::set<std::string_view> unique(ids.begin(), ids.end());
  if (unique.size() != ids.size() || !std::all_of(ids.begin(), ids.end(), valid_id)) return false;
  PrecedenceMatrix m{ids, std::vector<std::vector<std::uint8_t>>(
                              ids.size(), std::vector<std::uint8_t>(ids.size(), 0))};
  for (const auto& p : spec.precedence) {
    const auto i = std::find(ids.begin(), ids.end(), p.successor);
    const auto j = std::find(ids.begin(), ids.end(), p.predecessor);
    if (i == ids.end() || j == ids.end()) return false;
    m.cells[i - ids.begin()][j - ids.begin()] = 1;
  }
  ProjectSpec probe;
  apply_matrix(probe, m);
  return probe.precedence == spec.precedence;
}

}  // namespace

std::string render_project(const ProjectSpec& spec) {
  std::string out;
  for (const auto& a : spec.activities) {
    out += "[activity " + a.id + "]\n";
    out += "name = " + a.name + "\n";
    out += "duration = " + render(a.duration) + "\n";
    out += "fixed_cost = " + format_number(a.fixed_cost) + "\n";
    out += "variable_cost_rate = " + format_number(a.variable_cost_rate) + "\n\n";
  }
  for (const auto& r : spec.risks) {
    out += "[risk " + r.id + "]\n";
    out += "name = " + r.name + "\n";
    out += "probability = " + format_number(r.probability) + "\n";
    out += std::string("kind = ") + (r.kind == RiskKind::duration ? "duration" : "cost") + "\n";
    out += "target = " + r.target + "\n";
    out += "impact = " + render(r.impact) + "\n\n";
  }
  if (matrix_round_trips(spec)) {
    const auto& ids = *spec.matrix_columns;
    out += "[matrix]\ncolumns =";
    for (const auto& id : ids) out += " " + id;
    out += "\n";
    for (const auto& row : ids) {
      out += row + " =";
      for (const auto& c : ids) {
        const bool on = std::find(spec.precedence.begin(), spec.precedence.end(),
                                  Precedence{row, c}) != spec.precedence.end();
        out += on ? " 1" : " 0";
      }
      out += "\n";
    }
    return out;
  }
  out += "[precedence]\n";
  for (std::size_t i = 0; i < spec.precedence.size();) {
    const std::string& succ = spec.precedence[i].successor;
    out += succ + " =";
    std::string sep = " ";
    for (; i < spec.precedence.size() && spec.precedence[i].successor == succ; ++i) {
      out += sep + spec.precedence[i].predecessor;
      sep = ", ";
    }
    out += "\n";
  }
  return out;
}

PrecedenceMatrix parse_matrix_csv(std::string_view text, std::string_view source) {
  const CsvTable t = parse_csv(text, source);
  if (t.header.size() < 2)
    throw Error(ErrorCode::Syntax, std::string(source) + ":1: matrix header needs column ids");
  PrecedenceMatrix m;
  for (std::size_t j = 1; j < t.header.size(); ++j) {
    const auto w = words(t.header[j]);
    if (w.empty()) throw Error(ErrorCode::Syntax, std::string(source) + ":1: empty column id");
    m.ids.emplace_back(w.back());
  }
  const std::size_t n = m.ids.size();
  m.cells.assign(n, std::vector<std::uint8_t>(n, 0));
  std::vector<bool> filled(n, false);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Located at(source, r + 2);
    const auto& row = t.rows[r];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    const auto label = words(row.empty() ? std::string_view{} : std::string_view(row[0]));
    if (label.empty()) at.fail(ErrorCode::Syntax, "row without id");
    const std::string id(label.back());
    const auto it = std::find(m.ids.begin(), m.ids.end(), id);
    if (it == m.ids.end()) at.fail(ErrorCode::Syntax, "row '" + id + "' is not a column", id);
    const auto i = static_cast<std::size_t>(it - m.ids.begin());
    if (filled[i]) at.fail(ErrorCode::DuplicateId, "row '" + id + "' repeated", id);
    filled[i] = true;
    if (row.size() > n + 1)
      at.fail(ErrorCode::Syntax, "row '" + id + "' has more cells than columns", id);
    for (std::size_t j = 1; j < row.size(); ++j) {
      const auto cell = trim(row[j]);
      if (cell.empty() || cell == "0") continue;
      if (cell != "1") at.fail(ErrorCode::Syntax, "row '" + id + "' cell must be 0, 1 or blank", id);
      m.cells[i][j - 1] = 1;
    }
  }
  return m;
}

}  // namespace schedrisk
