#include "omlkit/builders.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "omlkit/error.hpp"

namespace omlkit {

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& s : names) {
    if (!out.empty()) out += "+";
    out += s;
  }
  return out;
}

void reject_unless_verified(const Lattice& l, const std::string& what) {
  VerifyReport rep = verify(l);
  if (const AxiomCheck* f = rep.first_failure())
    throw StructuralError(what + " rejected: " + f->axiom + " fails (" + f->witness + ")");
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Lattice boolean_algebra(int atom_count) {
  if (atom_count < 1 || atom_count > 16)
    throw InputError("boolean_algebra: atom count must be in 1..16, got " +
                     std::to_string(atom_count));
  const int n = 1 << atom_count;
  const int full = n - 1;
  std::vector<DynBitset> up(n, DynBitset(n));
  for (int m = 0; m < n; ++m) {
    int s = m;
    while (true) {
      up[m].set(s);
      if (s == full) break;
      s = (s + 1) | m;
    }
  }
  std::vector<int> ortho(n);
  for (int m = 0; m < n; ++m) ortho[m] = full ^ m;
  std::vector<std::string> labels(n);
  for (int m = 0; m < n; ++m) {
    if (m == 0) {
      labels[m] = "0";
    } else if (m == full) {
      labels[m] = "1";
    } else {
      std::vector<std::string> parts;
      for (int i = 0; i < atom_count; ++i)
        if (m >> i & 1) parts.push_back("p" + std::to_string(i + 1));
      labels[m] = join_names(parts);
    }
  }
  return Lattice::from_order(std::move(up), std::move(ortho), std::move(labels));
}

Lattice mo(int pair_count) {
  if (pair_count < 1) throw InputError("mo: pair count must be >= 1");
  const int n = 2 * pair_count + 2;
  const int top = n - 1;
  std::vector<DynBitset> up(n, DynBitset(n));
  for (int a = 0; a < n; ++a) {
    up[a].set(a);
    up[a].set(top);
  }
  for (int a = 0; a < n; ++a) up[0].set(a);
  std::vector<int> ortho(n);
  ortho[0] = top;
  ortho[top] = 0;
  std::vector<std::string> labels(n);
  labels[0] = "0";
  labels[top] = "1";
  for (int i = 0; i < pair_count; ++i) {
    int a = 1 + 2 * i, b = 2 + 2 * i;
    ortho[a] = b;
    ortho[b] = a;
    labels[a] = "a" + std::to_string(i + 1);
    labels[b] = "a" + std::to_string(i + 1) + "'";
  }
  return Lattice::from_order(std::move(up), std::move(ortho), std::move(labels));
}

void validate_greechie(const GreechieDiagram& g) {
  const int na = int(g.atoms.size());
  if (na == 0) throw InputError("greechie diagram has no atoms");
  {
    std::set<std::string> seen;
    for (const auto& s : g.atoms) {
      if (s.empty()) throw InputError("greechie diagram has an empty atom name");
      if (!seen.insert(s).second) throw InputError("duplicate atom name '" + s + "'");
    }
  }
  if (g.blocks.empty()) throw InputError("greechie diagram has no blocks");
  std::vector<char> used(na, 0);
  for (const auto& blk : g.blocks) {
    if (blk.size() < 2) throw InputError("greechie block with fewer than 2 atoms");
    if (blk.size() > 20) throw InputError("greechie block larger than 20 atoms");
    std::set<int> distinct;
    for (int a : blk) {
      if (a < 0 || a >= na) throw InputError("greechie block references unknown atom");
      if (!distinct.insert(a).second)
        throw InputError("greechie block repeats atom '" + g.atoms[a] + "'");
      used[a] = 1;
    }
  }
  for (int a = 0; a < na; ++a)
    if (!used[a]) throw InputError("atom '" + g.atoms[a] + "' appears in no block");
  for (std::size_t i = 0; i < g.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < g.blocks.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(g.blocks[i].begin(), g.blocks[i].end(), g.blocks[j].begin(),
                            g.blocks[j].end(), std::back_inserter(common));
      if (common.size() > 1)
        throw InputError("blocks " + std::to_string(i) + " and " + std::to_string(j) +
                         " share more than one atom");
    }
}

Lattice from_greechie(const GreechieDiagram& g_in) {
  GreechieDiagram g = g_in;
  for (auto& blk : g.blocks) std::sort(blk.begin(), blk.end());
  validate_greechie(g);

  const int nb = int(g.blocks.size());
  // flat index per (block, subset mask)
  std::vector<int> base(nb + 1, 0);
  for (int b = 0; b < nb; ++b) base[b + 1] = base[b] + (1 << g.blocks[b].size());
  const int total = base[nb];

  auto atom_set = [&](int b, int mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < g.blocks[b].size(); ++i)
      if (mask >> i & 1) s.push_back(g.blocks[b][i]);
    return s;
  };

  // one element per class: equal atom sets coincide, and so do subsets whose
  // in-block complements carry equal atom sets (this is what glues the tops
  // and the shared coatoms)
  Dsu dsu(total);
  std::map<std::vector<int>, int> by_set, by_complement;
  for (int b = 0; b < nb; ++b) {
    const int full = (1 << g.blocks[b].size()) - 1;
    for (int m = 0; m <= full; ++m) {
      int idx = base[b] + m;
      auto s = atom_set(b, m);
      auto c = atom_set(b, full ^ m);
      auto [it1, fresh1] = by_set.emplace(s, idx);
      if (!fresh1) dsu.unite(idx, it1->second);
      auto [it2, fresh2] = by_complement.emplace(c, idx);
      if (!fresh2) dsu.unite(idx, it2->second);
    }
  }

  // class representatives, keyed by their smallest member atom set
  std::map<int, std::vector<int>> rep_set;  // root -> canonical atom set
  for (int b = 0; b < nb; ++b) {
    const int full = (1 << g.blocks[b].size()) - 1;
    for (int m = 0; m <= full; ++m) {
      int root = dsu.find(base[b] + m);
      auto s = atom_set(b, m);
      auto it = rep_set.find(root);
      if (it == rep_set.end()) {
        rep_set.emplace(root, std::move(s));
      } else {
        auto key = [](const std::vector<int>& v) { return std::pair(v.size(), v); };
        if (key(s) < key(it->second)) it->second = std::move(s);
      }
    }
  }

  const int bottom_root = dsu.find(base[0] + 0);
  const int top_root = dsu.find(base[0] + (1 << g.blocks[0].size()) - 1);
  if (bottom_root == top_root)
    throw StructuralError("greechie pasting collapses bottom and top");

  std::vector<std::pair<std::vector<int>, int>> middles;  // (canonical set, root)
  for (const auto& [root, s] : rep_set)
    if (root != bottom_root && root != top_root) middles.push_back({s, root});
  std::sort(middles.begin(), middles.end(), [](const auto& x, const auto& y) {
    return std::pair(x.first.size(), x.first) < std::pair(y.first.size(), y.first);
  });

  const int n = int(middles.size()) + 2;
  std::map<int, int> id_of_root;
  id_of_root[bottom_root] = 0;
  id_of_root[top_root] = n - 1;
  for (std::size_t i = 0; i < middles.size(); ++i) id_of_root[middles[i].second] = int(i) + 1;
  auto elem = [&](int b, int m) { return id_of_root.at(dsu.find(base[b] + m)); };

  // order: blockwise subset inclusion, then the transitive closure
  std::vector<DynBitset> up(n, DynBitset(n));
  for (int a = 0; a < n; ++a) up[a].set(a);
  for (int b = 0; b < nb; ++b) {
    const int full = (1 << g.blocks[b].size()) - 1;
    for (int m = 0; m <= full; ++m) {
      int lo = elem(b, m);
      for (int sup = m;; sup = (sup + 1) | m) {
        up[lo].set(elem(b, sup));
        if (sup == full) break;
      }
    }
  }
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      if (up[a].test(k)) up[a] |= up[k];

  std::vector<int> ortho(n, -1);
  for (int b = 0; b < nb; ++b) {
    const int full = (1 << g.blocks[b].size()) - 1;
    for (int m = 0; m <= full; ++m) {
      int e = elem(b, m), oe = elem(b, full ^ m);
      if (ortho[e] >= 0 && ortho[e] != oe)
        throw StructuralError("greechie pasting gives inconsistent complements");
      ortho[e] = oe;
    }
  }

  std::vector<std::string> labels(n);
  labels[0] = "0";
  labels[n - 1] = "1";
  for (std::size_t i = 0; i < middles.size(); ++i) {
    std::vector<std::string> names;
    for (int a : middles[i].first) names.push_back(g.atoms[a]);
    labels[i + 1] = join_names(names);
  }

  Lattice l = Lattice::from_order(std::move(up), std::move(ortho), std::move(labels));
  reject_unless_verified(l, "greechie pasting");
  return l;
}

Lattice direct_product(const Lattice& a, const Lattice& b) {
  const int na = a.size(), nb = b.size(), n = na * nb;
  std::vector<DynBitset> up(n, DynBitset(n));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      DynBitset& row = up[i * nb + j];
      a.up_set(i).for_each([&](int i2) {
        b.up_set(j).for_each([&](int j2) { row.set(i2 * nb + j2); });
      });
    }
  std::vector<int> ortho(n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      ortho[i * nb + j] = a.ortho(i) * nb + b.ortho(j);
      labels[i * nb + j] = "(" + a.display_name(i) + "," + b.display_name(j) + ")";
    }
  Lattice l = Lattice::from_order(std::move(up), std::move(ortho), std::move(labels));
  reject_unless_verified(l, "direct product");
  return l;
}

Lattice horizontal_sum(const Lattice& a, const Lattice& b) {
  if (a.size() < 2 || b.size() < 2)
    throw InputError("horizontal_sum requires both lattices to have size >= 2");
  // 0, proper elements of a, proper elements of b, 1
  std::vector<int> map_a(a.size(), -1), map_b(b.size(), -1);
  int next = 1;
  for (int i = 0; i < a.size(); ++i)
    if (i != a.bottom() && i != a.top()) map_a[i] = next++;
  for (int j = 0; j < b.size(); ++j)
    if (j != b.bottom() && j != b.top()) map_b[j] = next++;
  const int n = next + 1;
  const int top = n - 1;

  std::vector<DynBitset> up(n, DynBitset(n));
  for (int e = 0; e < n; ++e) {
    up[e].set(e);
    up[e].set(top);
    up[0].set(e);
  }
  for (int i = 0; i < a.size(); ++i) {
    if (map_a[i] < 0) continue;
    a.up_set(i).for_each([&](int i2) {
      if (map_a[i2] >= 0) up[map_a[i]].set(map_a[i2]);
    });
  }
  for (int j = 0; j < b.size(); ++j) {
    if (map_b[j] < 0) continue;
    b.up_set(j).for_each([&](int j2) {
      if (map_b[j2] >= 0) up[map_b[j]].set(map_b[j2]);
    });
  }

  std::vector<int> ortho(n);
  ortho[0] = top;
  ortho[top] = 0;
  std::vector<std::string> labels(n);
  labels[0] = "0";
  labels[top] = "1";
  auto inner_name = [](const Lattice& l, int e) {
    return l.has_labels() && !l.label(e).empty() ? l.label(e) : std::to_string(e);
  };
  for (int i = 0; i < a.size(); ++i)
    if (map_a[i] >= 0) {
      ortho[map_a[i]] = map_a[a.ortho(i)];
      labels[map_a[i]] = "l." + inner_name(a, i);
    }
  for (int j = 0; j < b.size(); ++j)
    if (map_b[j] >= 0) {
      ortho[map_b[j]] = map_b[b.ortho(j)];
      labels[map_b[j]] = "r." + inner_name(b, j);
    }
  Lattice l = Lattice::from_order(std::move(up), std::move(ortho), std::move(labels));
  reject_unless_verified(l, "horizontal sum");
  return l;
}

std::string serialize_oml(const Lattice& l) {
  std::ostringstream out;
  out << "oml 1\n";
  out << "size " << l.size() << "\n";
  if (l.has_labels())
    for (int a = 0; a < l.size(); ++a)
      if (!l.label(a).empty()) out << "label " << a << " " << l.label(a) << "\n";
  for (int a = 0; a < l.size(); ++a) {
    out << "up " << a << " :";
    std::vector<int> cov = l.covers_up(a);
    std::sort(cov.begin(), cov.end());
    for (int b : cov) out << " " << b;
    out << "\n";
  }
  out << "ortho :";
  for (int a = 0; a < l.size(); ++a) out << " " << l.ortho(a);
  out << "\n";
  out << "bottom " << l.bottom() << "\n";
  out << "top " << l.top() << "\n";
  return out.str();
}

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string raw(text.substr(pos, end - pos));
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream in(raw);
    Line line{number, {}};
    std::string tok;
    while (in >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}

long long parse_int(const Line& line, const std::string& tok) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    parse_fail(line.number, "expected an integer, got '" + tok + "'");
  }
}

int parse_id(const Line& line, const std::string& tok, int size) {
  long long v = parse_int(line, tok);
  if (v < 0 || v >= size)
    parse_fail(line.number, "element id " + tok + " out of range (size " +
                                std::to_string(size) + ")");
  return int(v);
}

}  // namespace

Lattice parse_oml(std::string_view text, Validate mode) {
  std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError("line 1: empty input, expected 'oml 1' header");
  if (lines[0].tokens.size() != 2 || lines[0].tokens[0] != "oml" || lines[0].tokens[1] != "1")
    parse_fail(lines[0].number, "expected 'oml 1' header");

  int size = -1;
  for (const auto& line : lines) {
    if (line.tokens[0] != "size") continue;
    if (size >= 0) parse_fail(line.number, "duplicate size line");
    if (line.tokens.size() != 2) parse_fail(line.number, "size takes one value");
    long long v = parse_int(line, line.tokens[1]);
    if (v < 1 || v > 1'000'000) parse_fail(line.number, "size out of range");
    size = int(v);
  }
  if (size < 0) throw ParseError("line 1: missing size line");

  std::vector<std::vector<int>> covers(size);
  std::vector<char> have_up(size, 0);
  std::vector<int> ortho;
  std::vector<std::string> labels(size);
  bool any_label = false;
  int bottom = -1, top = -1;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    const std::string& key = line.tokens[0];
    if (key == "size") continue;
    if (key == "label") {
      if (line.tokens.size() != 3) parse_fail(line.number, "label takes an id and a name");
      int a = parse_id(line, line.tokens[1], size);
      labels[a] = line.tokens[2];
      any_label = true;
    } else if (key == "up") {
      if (line.tokens.size() < 3 || line.tokens[2] != ":")
        parse_fail(line.number, "expected 'up <id> : <covers...>'");
      int a = parse_id(line, line.tokens[1], size);
      if (have_up[a]) parse_fail(line.number, "duplicate up line for element " +
                                                  std::to_string(a));
      have_up[a] = 1;
      for (std::size_t t = 3; t < line.tokens.size(); ++t)
        covers[a].push_back(parse_id(line, line.tokens[t], size));
    } else if (key == "ortho") {
      if (!ortho.empty()) parse_fail(line.number, "duplicate ortho line");
      if (line.tokens.size() != std::size_t(size) + 2 || line.tokens[1] != ":")
        parse_fail(line.number, "expected 'ortho :' followed by " + std::to_string(size) +
                                    " ids");
      for (int a = 0; a < size; ++a)
        ortho.push_back(parse_id(line, line.tokens[a + 2], size));
      for (int a = 0; a < size; ++a)
        if (ortho[ortho[a]] != a)
          parse_fail(line.number, "ortho is not involutive at element " + std::to_string(a));
    } else if (key == "bottom" || key == "top") {
      if (line.tokens.size() != 2) parse_fail(line.number, key + " takes one id");
      int a = parse_id(line, line.tokens[1], size);
      int& slot = key == "bottom" ? bottom : top;
      if (slot >= 0) parse_fail(line.number, "duplicate " + key + " line");
      slot = a;
    } else {
      parse_fail(line.number, "unknown keyword '" + key + "'");
    }
  }

  for (int a = 0; a < size; ++a)
    if (!have_up[a])
      throw ParseError("line 1: no up line for element " + std::to_string(a));
  if (ortho.empty()) throw ParseError("line 1: missing ortho line");
  if (bottom < 0) throw ParseError("line 1: missing bottom line");
  if (top < 0) throw ParseError("line 1: missing top line");

  Lattice l = Lattice::from_covers(size, covers, std::move(ortho),
                                   any_label ? std::move(labels)
                                             : std::vector<std::string>{});
  if (l.bottom() != bottom)
    throw StructuralError("declared bottom " + std::to_string(bottom) +
                          " does not match the order (bottom is " +
                          std::to_string(l.bottom()) + ")");
  if (l.top() != top)
    throw StructuralError("declared top " + std::to_string(top) +
                          " does not match the order (top is " + std::to_string(l.top()) +
                          ")");
  if (mode == Validate::Full) {
    VerifyReport rep = verify(l);
    if (const AxiomCheck* f = rep.first_failure())
      throw StructuralError("parsed lattice fails verification: " + f->axiom + " (" +
                            f->witness + ")");
  }
  return l;
}

GreechieDiagram parse_greechie(std::string_view text) {
  std::vector<Line> lines = tokenize(text);
  GreechieDiagram g;
  std::map<std::string, int> atom_id;
  bool have_atoms = false;
  for (const auto& line : lines) {
    const std::string& key = line.tokens[0];
    if (key == "atoms:") {
      if (have_atoms) parse_fail(line.number, "duplicate atoms line");
      have_atoms = true;
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        if (!atom_id.emplace(line.tokens[t], int(g.atoms.size())).second)
          parse_fail(line.number, "duplicate atom name '" + line.tokens[t] + "'");
        g.atoms.push_back(line.tokens[t]);
      }
    } else if (key == "block:") {
      if (!have_atoms) parse_fail(line.number, "block before atoms line");
      std::vector<int> blk;
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        auto it = atom_id.find(line.tokens[t]);
        if (it == atom_id.end())
          parse_fail(line.number, "unknown atom '" + line.tokens[t] + "'");
        blk.push_back(it->second);
      }
      std::sort(blk.begin(), blk.end());
      g.blocks.push_back(std::move(blk));
    } else {
      parse_fail(line.number, "unknown keyword '" + key + "'");
    }
  }
  if (!have_atoms) throw ParseError("line 1: missing atoms line");
  validate_greechie(g);
  return g;
}

std::string serialize_greechie(const GreechieDiagram& g) {
  std::ostringstream out;
  out << "atoms:";
  for (const auto& a : g.atoms) out << " " << a;
  out << "\n";
  for (const auto& blk : g.blocks) {
    out << "block:";
    for (int a : blk) out << " " << g.atoms[a];
    out << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

GreechieDiagram bowtie_diagram() {
  return GreechieDiagram{{"a", "b", "c", "d", "e"}, {{0, 1, 2}, {2, 3, 4}}};
}

GreechieDiagram chain3_diagram() {
  return GreechieDiagram{{"a", "b", "c", "d", "e", "f", "g"},
                         {{0, 1, 2}, {2, 3, 4}, {4, 5, 6}}};
}

struct FamilyParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw InputError("bad family expression '" + s + "': " + msg);
  }

  Lattice expr() {
    std::string head = word();
    if (head.empty()) fail("expected a family name");
    if (head == "product" || head == "hsum") {
      if (!eat('(')) fail("expected '(' after " + head);
      Lattice a = expr();
      if (!eat(',')) fail("expected ',' inside " + head);
      Lattice b = expr();
      if (!eat(')')) fail("expected ')' closing " + head);
      return head == "product" ? direct_product(a, b) : horizontal_sum(a, b);
    }
    if (head == "bowtie") return from_greechie(bowtie_diagram());
    if (head == "chain3") return from_greechie(chain3_diagram());
    if (head == "boolean" || head == "mo") {
      if (!eat(':')) fail("expected ':' after " + head);
      std::string num = word();
      if (num.empty()) fail("expected a number after " + head + ":");
      int v = 0;
      try {
        v = std::stoi(num);
      } catch (...) {
        fail("bad number '" + num + "'");
      }
      return head == "boolean" ? boolean_algebra(v) : mo(v);
    }
    if (head == "greechie" || head == "oml") {
      if (!eat(':')) fail("expected ':' after " + head);
      skip_ws();
      std::size_t start = pos;
      while (pos < s.size() && s[pos] != ',' && s[pos] != ')' &&
             !std::isspace(static_cast<unsigned char>(s[pos])))
        ++pos;
      std::string path = s.substr(start, pos - start);
      if (path.empty()) fail("expected a path after " + head + ":");
      std::string text = read_text_file(path);
      return head == "greechie" ? from_greechie(parse_greechie(text)) : parse_oml(text);
    }
    fail("unknown family '" + head + "'");
  }
};

}  // namespace

Lattice build_family(const std::string& expr) {
  FamilyParser p{expr};
  Lattice l = p.expr();
  p.skip_ws();
  if (p.pos != expr.size()) p.fail("trailing input");
  return l;
}

}  // namespace omlkit
