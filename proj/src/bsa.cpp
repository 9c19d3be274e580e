#include "omlkit/bsa.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <sstream>

#include "omlkit/error.hpp"

namespace omlkit {

bool is_orthopartition(const Lattice& l, const OrthoPartition& p) {
  if (p.blocks.empty()) return false;
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    int a = p.blocks[i];
    if (a < 0 || a >= l.size() || a == l.bottom()) return false;
    if (i > 0 && p.blocks[i - 1] >= a) return false;  // sorted, distinct
    for (std::size_t j = i + 1; j < p.blocks.size(); ++j)
      if (!l.orthogonal(a, p.blocks[j])) return false;
  }
  int total = l.bottom();
  for (int a : p.blocks) total = l.join(total, a);
  return total == l.top();
}

DynBitset subalgebra_elements(const Lattice& l, const OrthoPartition& p) {
  std::vector<int> elems = {l.bottom()};
  for (int b : p.blocks) {
    std::size_t count = elems.size();
    for (std::size_t i = 0; i < count; ++i) elems.push_back(l.join(elems[i], b));
  }
  DynBitset out(l.size());
  for (int e : elems) out.set(e);
  return out;
}

BsaPoset enumerate_bsas(const Lattice& l, const Budget& budget) {
  if (l.size() < 2) throw InputError("enumerate_bsas requires a lattice of size >= 2");
  const int n = l.size();

  // orth[a] = nonzero elements orthogonal to a
  std::vector<DynBitset> orth(n);
  for (int a = 0; a < n; ++a) {
    orth[a] = l.down_set(l.ortho(a));
    orth[a].reset(l.bottom());
  }

  std::vector<std::vector<int>> found;
  std::vector<int> chosen;
  std::uint64_t states = 0;

  auto rec = [&](auto&& self, int joined, const DynBitset& cands) -> void {
    if (++states > budget.enumeration_states)
      throw ResourceError("enumeration budget exceeded after " + std::to_string(states) +
                          " partial states (set OMLKIT_BUDGET to raise)");
    if (joined == l.top()) {
      found.push_back(chosen);
      return;
    }
    cands.for_each([&](int b) {
      DynBitset next = cands;
      next &= orth[b];
      next.clear_through(b);
      chosen.push_back(b);
      self(self, l.join(joined, b), next);
      chosen.pop_back();
    });
  };

  DynBitset initial(n);
  for (int a = 0; a < n; ++a)
    if (a != l.bottom()) initial.set(a);
  rec(rec, l.bottom(), initial);

  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });

  BsaPoset poset;
  poset.nodes.reserve(found.size());
  for (auto& blocks : found) poset.nodes.push_back(OrthoPartition{std::move(blocks)});
  const int m = poset.size();
  assert(m >= 1 && poset.dim(0) == 1);
  poset.bottom = 0;

  poset.elem_sets.reserve(m);
  for (const auto& node : poset.nodes)
    poset.elem_sets.push_back(subalgebra_elements(l, node));

  poset.incl.assign(m, DynBitset(m));
  for (int i = 0; i < m; ++i) {
    poset.incl[i].set(i);
    for (int j = 0; j < m; ++j)
      if (i != j && poset.elem_sets[i].is_subset_of(poset.elem_sets[j]))
        poset.incl[i].set(j);
  }

  // covers: minimal strict superalgebras; (dim, id) order is a linear extension
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  poset.covers_up.assign(m, {});
  poset.covers_down.assign(m, {});
  DynBitset blocked(m);
  for (int i = 0; i < m; ++i) {
    blocked.clear();
    for (int j : order) {
      if (j == i || !poset.incl[i].test(j) || blocked.test(j)) continue;
      poset.covers_up[i].push_back(j);
      poset.covers_down[j].push_back(i);
      blocked |= poset.incl[j];
    }
  }
  for (auto& v : poset.covers_down) std::sort(v.begin(), v.end());
  return poset;
}

void annotate_ground_truth(const Lattice& l, BsaPoset& poset) {
  const int m = poset.size();
  poset.gt_mbsa.assign(m, 0);
  poset.gt_sub_mbsa.assign(m, 0);
  poset.gt_spiked.assign(m, 0);
  poset.gt_leading.assign(m, -1);
  for (int v = 0; v < m; ++v) {
    std::vector<int> non_atoms;
    for (int b : poset.nodes[v].blocks)
      if (!l.is_atom(b)) non_atoms.push_back(b);
    if (non_atoms.empty()) {
      poset.gt_mbsa[v] = 1;
      poset.gt_spiked[v] = 1;
    } else if (non_atoms.size() == 1) {
      poset.gt_spiked[v] = 1;
      poset.gt_leading[v] = non_atoms[0];
      if (l.height(non_atoms[0]) == 2) poset.gt_sub_mbsa[v] = 1;
    }
  }
  poset.annotated = true;
}

const std::vector<int>& successors(const BsaPoset& poset, int v) {
  return poset.covers_up[v];
}

std::vector<int> double_successors(const BsaPoset& poset, int v) {
  std::set<int> out;
  for (int s : poset.covers_up[v])
    for (int t : poset.covers_up[s]) out.insert(t);
  return {out.begin(), out.end()};
}

AbstractPoset to_abstract(const BsaPoset& poset) {
  AbstractPoset out;
  out.size = poset.size();
  for (int i = 0; i < poset.size(); ++i)
    for (int j : poset.covers_up[i]) out.covers.push_back({i, j});
  std::sort(out.covers.begin(), out.covers.end());
  return out;
}

AnonymizedPoset anonymize(const BsaPoset& poset, std::uint64_t seed) {
  const int m = poset.size();
  std::vector<int> anon_of(m);
  for (int i = 0; i < m; ++i) anon_of[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = m - 1; i > 0; --i) {
    int j = int(rng() % std::uint64_t(i + 1));
    std::swap(anon_of[i], anon_of[j]);
  }
  AnonymizedPoset out;
  out.poset.size = m;
  for (int i = 0; i < m; ++i)
    for (int j : poset.covers_up[i]) out.poset.covers.push_back({anon_of[i], anon_of[j]});
  std::sort(out.poset.covers.begin(), out.poset.covers.end());
  out.original_node.assign(m, -1);
  for (int i = 0; i < m; ++i) out.original_node[anon_of[i]] = i;
  return out;
}

namespace {

void write_poset_header(std::ostringstream& out, int size) {
  out << "poset 1\n";
  out << "size " << size << "\n";
}

}  // namespace

std::string serialize_poset(const BsaPoset& poset) {
  std::ostringstream out;
  write_poset_header(out, poset.size());
  for (int i = 0; i < poset.size(); ++i) out << "dim " << i << " " << poset.dim(i) << "\n";
  for (int i = 0; i < poset.size(); ++i)
    for (int j : poset.covers_up[i]) out << "cover " << i << " " << j << "\n";
  return out.str();
}

std::string serialize_poset(const AbstractPoset& poset) {
  std::ostringstream out;
  write_poset_header(out, poset.size);
  auto covers = poset.covers;
  std::sort(covers.begin(), covers.end());
  for (auto [i, j] : covers) out << "cover " << i << " " << j << "\n";
  return out.str();
}

AbstractPoset parse_poset(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  bool have_header = false;
  int size = -1;
  std::vector<std::pair<int, int>> covers;

  auto fail = [&](const std::string& msg) -> void {
    throw ParseError("line " + std::to_string(number) + ": " + msg);
  };

  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "poset" || tok[1] != "1")
        fail("expected 'poset 1' header");
      have_header = true;
      continue;
    }
    auto as_id = [&](const std::string& s) {
      long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
      } catch (...) {
        fail("expected an integer, got '" + s + "'");
      }
      if (size < 0) fail("id before size line");
      if (v < 0 || v >= size) fail("node id " + s + " out of range (size " +
                                   std::to_string(size) + ")");
      return int(v);
    };
    if (tok[0] == "size") {
      if (size >= 0) fail("duplicate size line");
      if (tok.size() != 2) fail("size takes one value");
      long long v = 0;
      try {
        v = std::stoll(tok[1]);
      } catch (...) {
        fail("bad size value");
      }
      if (v < 1 || v > 10'000'000) fail("size out of range");
      size = int(v);
    } else if (tok[0] == "cover") {
      if (tok.size() != 3) fail("cover takes two node ids");
      int i = as_id(tok[1]), j = as_id(tok[2]);
      if (i == j) fail("self-cover on node " + tok[1]);
      covers.push_back({i, j});
    } else if (tok[0] == "dim") {
      if (tok.size() != 3) fail("dim takes a node id and a value");
      as_id(tok[1]);  // annotation; validated but not consumed
    } else {
      fail("unknown keyword '" + tok[0] + "'");
    }
  }
  if (!have_header) throw ParseError("line 1: empty input, expected 'poset 1' header");
  if (size < 0) throw ParseError("line 1: missing size line");
  std::sort(covers.begin(), covers.end());
  covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
  return AbstractPoset{size, std::move(covers)};
}

}  // namespace omlkit
