#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "diagram.hpp"
#include "homology.hpp"
#include "version.hpp"

namespace kht {

enum class TableKind { framed, classical, reduced };

inline const char* kind_name(TableKind k) {
  switch (k) {
    case TableKind::framed: return "framed";
    case TableKind::classical: return "classical";
    default: return "reduced";
  }
}

inline std::optional<TableKind> kind_from(const std::string& s) {
  if (s == "framed") return TableKind::framed;
  if (s == "classical") return TableKind::classical;
  if (s == "reduced") return TableKind::reduced;
  return std::nullopt;
}

struct GroupCell {
  int g1 = 0, g2 = 0;  // (a, b) for framed tables, (i, j) otherwise
  AbelianGroup group;
};

struct ResultRecord {
  int schema = 1;
  std::string id;
  std::string word;
  TableKind kind = TableKind::framed;
  int strands = 0;
  int writhe = 0;
  int components = 0;
  int crossings = 0;
  int basepoint = 0;  // strand carrying the marked point of a reduced table
  bool complete = true;
  std::vector<GroupCell> cells;
  long long wall_time_ms = 0;
  std::string engine = engine_version;

  const AbelianGroup* cell(int g1, int g2) const {
    for (const GroupCell& c : cells)
      if (c.g1 == g1 && c.g2 == g2) return &c.group;
    return nullptr;
  }
};

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string record_key(TableKind kind, const std::string& word, int basepoint) {
  std::string key = std::string(kind_name(kind)) + "|" + word;
  if (kind == TableKind::reduced) key += "|bp" + std::to_string(basepoint);
  return key;
}

namespace detail {

inline void fill_diagram_fields(ResultRecord& r, const SmoothedBraidWord& w) {
  const DiagramStats st = stats(w);
  r.word = render_word(w);
  r.strands = w.strands;
  r.writhe = st.oriented_writhe;
  r.components = st.components;
  r.crossings = st.crossings;
}

inline void push_sorted_cells(ResultRecord& r,
                              const std::map<std::pair<int, int>, AbelianGroup>& groups) {
  for (const auto& [key, g] : groups) r.cells.push_back({key.first, key.second, g});
}

}  // namespace detail

inline ResultRecord make_record(const SmoothedBraidWord& w, const FramedHomologyTable& t,
                                long long wall_time_ms) {
  ResultRecord r;
  r.kind = TableKind::framed;
  detail::fill_diagram_fields(r, w);
  r.complete = t.complete;
  detail::push_sorted_cells(r, t.groups);
  r.wall_time_ms = wall_time_ms;
  r.id = hex64(fnv1a64(record_key(r.kind, r.word, 0)));
  return r;
}

inline ResultRecord make_record(const SmoothedBraidWord& w, const ClassicalHomologyTable& t,
                                long long wall_time_ms, int basepoint = 0) {
  ResultRecord r;
  r.kind = t.reduced ? TableKind::reduced : TableKind::classical;
  detail::fill_diagram_fields(r, w);
  r.basepoint = t.reduced ? basepoint : 0;
  r.complete = t.complete;
  detail::push_sorted_cells(r, t.groups);
  r.wall_time_ms = wall_time_ms;
  r.id = hex64(fnv1a64(record_key(r.kind, r.word, r.basepoint)));
  return r;
}

inline nlohmann::json to_json(const ResultRecord& r) {
  nlohmann::json j;
  j["schema"] = r.schema;
  j["id"] = r.id;
  j["word"] = r.word;
  j["kind"] = kind_name(r.kind);
  j["strands"] = r.strands;
  j["writhe"] = r.writhe;
  j["components"] = r.components;
  j["crossings"] = r.crossings;
  if (r.kind == TableKind::reduced) j["basepoint"] = r.basepoint;
  j["complete"] = r.complete;
  nlohmann::json cells = nlohmann::json::array();
  const bool framed = r.kind == TableKind::framed;
  for (const GroupCell& c : r.cells) {
    nlohmann::json jc;
    jc[framed ? "a" : "i"] = c.g1;
    jc[framed ? "b" : "j"] = c.g2;
    jc["free_rank"] = c.group.free_rank;
    nlohmann::json inv = nlohmann::json::array();
    for (const Int& d : c.group.torsion) inv.push_back(d.str());
    jc["invariant_factors"] = inv;
    nlohmann::json prim = nlohmann::json::array();
    for (const Int& q : c.group.primary()) prim.push_back(q.str());
    jc["primary"] = prim;
    cells.push_back(jc);
  }
  j["groups"] = cells;
  j["wall_time_ms"] = r.wall_time_ms;
  j["engine"] = r.engine;
  return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.schema = j.value("schema", 1);
  r.id = j.value("id", std::string{});
  r.word = j.value("word", std::string{});
  if (const auto k = kind_from(j.value("kind", std::string{"framed"}))) r.kind = *k;
  r.strands = j.value("strands", 0);
  r.writhe = j.value("writhe", 0);
  r.components = j.value("components", 0);
  r.crossings = j.value("crossings", 0);
  r.basepoint = j.value("basepoint", 0);
  r.complete = j.value("complete", true);
  r.wall_time_ms = j.value("wall_time_ms", 0ll);
  r.engine = j.value("engine", std::string{});
  const bool framed = r.kind == TableKind::framed;
  if (j.contains("groups")) {
    for (const auto& jc : j["groups"]) {
      GroupCell c;
      c.g1 = jc.value(framed ? "a" : "i", 0);
      c.g2 = jc.value(framed ? "b" : "j", 0);
      c.group.free_rank = jc.value("free_rank", 0);
      if (jc.contains("invariant_factors"))
        for (const auto& d : jc["invariant_factors"])
          c.group.torsion.push_back(Int(d.get<std::string>()));
      r.cells.push_back(c);
    }
  }
  return r;
}

// append-only JSONL store of computed tables, deduplicated by record id
class Store {
 public:
  explicit Store(std::string path) : path_(std::move(path)) { load(); }

  // explicit flag wins over KHT_STORE, which wins over the default file
  static std::string resolve_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("KHT_STORE"); env && *env) return env;
    return "kht_store.jsonl";
  }

  const std::string& path() const { return path_; }
  const std::vector<ResultRecord>& records() const { return records_; }

  const ResultRecord* find(const std::string& id_or_prefix) const {
    const ResultRecord* hit = nullptr;
    for (const ResultRecord& r : records_) {
      if (r.id.rfind(id_or_prefix, 0) != 0) continue;
      if (r.id == id_or_prefix) return &r;
      if (hit && hit->id != r.id) return nullptr;  // ambiguous prefix
      hit = &r;
    }
    return hit;
  }

  // appends unless an identical record is already present; rewrites nothing
  bool upsert(const ResultRecord& r) {
    if (const auto it = by_id_.find(r.id); it != by_id_.end()) {
      const ResultRecord& have = records_[it->second];
      if (same_payload(have, r)) return false;
    }
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open store " + path_);
    out << to_json(r).dump() << "\n";
    remember(r);
    return true;
  }

 private:
  static bool same_payload(const ResultRecord& x, const ResultRecord& y) {
    if (x.complete != y.complete || x.cells.size() != y.cells.size()) return false;
    for (size_t i = 0; i < x.cells.size(); ++i) {
      const GroupCell &a = x.cells[i], &b = y.cells[i];
      if (a.g1 != b.g1 || a.g2 != b.g2 || !(a.group == b.group)) return false;
    }
    return true;
  }

  void remember(const ResultRecord& r) {
    if (const auto it = by_id_.find(r.id); it != by_id_.end()) {
      records_[it->second] = r;  // newest line wins
    } else {
      by_id_[r.id] = records_.size();
      records_.push_back(r);
    }
  }

  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        remember(record_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception&) {
        // skip unreadable lines rather than refusing the whole store
      }
    }
  }

  std::string path_;
  std::vector<ResultRecord> records_;
  std::map<std::string, size_t> by_id_;
};

// grid rendering: second grading descending down the rows, first ascending across
inline std::string render_markdown(const ResultRecord& r) {
  std::ostringstream os;
  os << "### " << kind_name(r.kind) << " " << r.word;
  if (r.kind == TableKind::reduced) os << " (basepoint strand " << r.basepoint << ")";
  os << "\n";
  os << "writhe " << r.writhe << ", components " << r.components << ", crossings " << r.crossings;
  if (!r.complete) os << ", PARTIAL";
  os << "\n\n";
  if (r.cells.empty()) {
    os << "(no homology)\n";
    return os.str();
  }
  std::vector<int> cols;
  std::vector<int> rows;
  for (const GroupCell& c : r.cells) {
    cols.push_back(c.g1);
    rows.push_back(c.g2);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  std::sort(rows.begin(), rows.end(), std::greater<int>());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  const bool framed = r.kind == TableKind::framed;
  os << (framed ? "| b\\a |" : "| j\\i |");
  for (int c : cols) os << " " << c << " |";
  os << "\n|---|";
  for (size_t i = 0; i < cols.size(); ++i) os << "---|";
  os << "\n";
  for (int row : rows) {
    os << "| " << row << " |";
    for (int col : cols) {
      const AbelianGroup* g = r.cell(col, row);
      os << " " << (g ? g->str() : "") << " |";
    }
    os << "\n";
  }
  return os.str();
}

inline std::string render_csv(const ResultRecord& r) {
  std::ostringstream os;
  os << "# id=" << r.id << " kind=" << kind_name(r.kind) << " word=" << r.word;
  if (r.kind == TableKind::reduced) os << " basepoint=" << r.basepoint;
  os << "\n";
  const bool framed = r.kind == TableKind::framed;
  os << (framed ? "a,b,group\n" : "i,j,group\n");
  for (const GroupCell& c : r.cells) os << c.g1 << "," << c.g2 << "," << c.group.str() << "\n";
  return os.str();
}

inline std::optional<ResultRecord> parse_csv(const std::string& text) {
  ResultRecord r;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  bool meta_kind = false;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "id") r.id = val;
        if (key == "word") r.word = val;
        if (key == "basepoint") r.basepoint = std::stoi(val);
        if (key == "kind")
          if (const auto k = kind_from(val)) {
            r.kind = *k;
            meta_kind = true;
          }
      }
      continue;
    }
    if (!have_header) {
      if (line != "a,b,group" && line != "i,j,group") return std::nullopt;
      if (!meta_kind) r.kind = line[0] == 'a' ? TableKind::framed : TableKind::classical;
      have_header = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return std::nullopt;
    GroupCell cell;
    try {
      cell.g1 = std::stoi(line.substr(0, c1));
      cell.g2 = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
      cell.group = parse_group(line.substr(c2 + 1));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    r.cells.push_back(cell);
  }
  if (!have_header) return std::nullopt;
  return r;
}

struct DiffCell {
  int g1 = 0, g2 = 0;  // bidegree in the left record
  std::string lhs, rhs;
};

struct DiffResult {
  int d1 = 0, d2 = 0;
  std::vector<DiffCell> diffs;
  bool equal() const { return diffs.empty(); }
};

// compares A at (g1, g2) against B at (g1 + d1, g2 + d2) over both supports
inline DiffResult diff_records(const ResultRecord& A, const ResultRecord& B, int d1, int d2) {
  DiffResult res;
  res.d1 = d1;
  res.d2 = d2;
  std::set<std::pair<int, int>> support;
  for (const GroupCell& c : A.cells) support.insert({c.g1, c.g2});
  for (const GroupCell& c : B.cells) support.insert({c.g1 - d1, c.g2 - d2});
  const AbelianGroup zero{};
  for (const auto& [g1, g2] : support) {
    const AbelianGroup* pa = A.cell(g1, g2);
    const AbelianGroup* pb = B.cell(g1 + d1, g2 + d2);
    const AbelianGroup& ga = pa ? *pa : zero;
    const AbelianGroup& gb = pb ? *pb : zero;
    if (!(ga == gb)) res.diffs.push_back({g1, g2, ga.str(), gb.str()});
  }
  return res;
}

}  // namespace kht
