#include "omlkit/reconstruct.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <numeric>
#include <set>
#include <sstream>

#include "omlkit/error.hpp"

namespace omlkit {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

PosetAnalysis::PosetAnalysis(const AbstractPoset& p) {
  n_ = p.size;
  if (n_ <= 0) throw ReconstructionError("grade", "poset is empty");
  up_.assign(n_, {});
  down_.assign(n_, {});
  for (auto [i, j] : p.covers) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j)
      throw ReconstructionError("grade", "cover (" + std::to_string(i) + ", " +
                                             std::to_string(j) + ") out of range");
    up_[i].push_back(j);
    down_[j].push_back(i);
  }
  for (auto& v : up_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (auto& v : down_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  // Kahn topological order; incomplete order means a cycle
  std::vector<int> indeg(n_, 0), topo;
  for (int v = 0; v < n_; ++v) indeg[v] = int(down_[v].size());
  for (int v = 0; v < n_; ++v)
    if (indeg[v] == 0) topo.push_back(v);
  for (std::size_t head = 0; head < topo.size(); ++head)
    for (int w : up_[topo[head]])
      if (--indeg[w] == 0) topo.push_back(w);
  if (int(topo.size()) != n_)
    throw ReconstructionError("grade", "cover relation contains a cycle");

  above_.assign(n_, DynBitset(n_));
  below_.assign(n_, DynBitset(n_));
  for (int v : topo) {
    below_[v].set(v);
    for (int u : down_[v]) below_[v] |= below_[u];
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    above_[*it].set(*it);
    for (int w : up_[*it]) above_[*it] |= above_[w];
  }

  int minimal_count = 0;
  for (int v = 0; v < n_; ++v)
    if (down_[v].empty()) {
      ++minimal_count;
      bottom_ = v;
    }
  if (minimal_count != 1)
    throw ReconstructionError("grade", "not a BSA poset: " + std::to_string(minimal_count) +
                                           " minimal nodes, expected 1");

  dim_.assign(n_, 0);
  for (int v : topo) {
    int d = 1;
    for (int u : down_[v]) d = std::max(d, dim_[u] + 1);
    dim_[v] = d;
  }
  for (int v = 0; v < n_; ++v)
    for (int w : up_[v])
      if (dim_[w] != dim_[v] + 1)
        throw ReconstructionError(
            "grade", "not a BSA poset: cover from node " + std::to_string(v) + " (dim " +
                         std::to_string(dim_[v]) + ") to node " + std::to_string(w) +
                         " (dim " + std::to_string(dim_[w]) + ") is not graded");

  for (int v = 0; v < n_; ++v) {
    if (dim_[v] == 2) two_dim_.push_back(v);
    if (up_[v].empty()) maximal_.push_back(v);
  }

  spiked_.assign(n_, 0);
  for (int v = 0; v < n_; ++v)
    spiked_[v] = is_maximal(v) || detect_sub_mbsa(v) || triple_successor_rule(v);
}

bool PosetAnalysis::detect_sub_mbsa(int v) const {
  if (is_maximal(v)) return false;
  for (int s : up_[v])
    if (!is_maximal(s)) return false;
  return true;
}

std::vector<int> PosetAnalysis::double_successors(int v) const {
  std::set<int> out;
  for (int s : up_[v])
    for (int t : up_[s]) out.insert(t);
  return {out.begin(), out.end()};
}

bool PosetAnalysis::triple_successor_rule(int v) const {
  for (int t : double_successors(v)) {
    int inside = 0;
    for (int s : up_[v])
      if (above_[s].test(t)) ++inside;
    if (inside != 3) return false;
  }
  return true;
}

TwoDimClass PosetAnalysis::two_dim_class(int v) const {
  if (dim_[v] != 2) return TwoDimClass::NotTwoDim;
  if (is_maximal(v)) return TwoDimClass::BothAtoms;
  for (int s : up_[v])
    if (is_maximal(s)) return TwoDimClass::AtomPlusHeightTwo;
  return triple_successor_rule(v) ? TwoDimClass::AtomPlusTall : TwoDimClass::NoAtoms;
}

NodeProfile PosetAnalysis::profile(int v) const {
  NodeProfile p;
  p.node = v;
  p.dimension = dim_[v];
  p.is_maximal = is_maximal(v);
  p.is_sub_mbsa = detect_sub_mbsa(v);
  p.is_spiked = detect_spiked(v);
  p.two_dim_class = two_dim_class(v);
  return p;
}

std::vector<int> grade(const AbstractPoset& p) { return PosetAnalysis(p).dims(); }

std::vector<int> minimal_spiked_superalgebras(const PosetAnalysis& pa, int v,
                                              MvCase* case_out) {
  if (pa.dim(v) != 2) throw InputError("minimal_spiked_superalgebras: node is not 2-dim");
  MvCase mc;
  std::vector<int> m;
  if (pa.is_maximal(v)) {
    mc = MvCase::MaximalPair;
    m = {v};
  } else if (pa.detect_spiked(v)) {
    mc = pa.detect_sub_mbsa(v) ? MvCase::SpikedSubMaximal : MvCase::SpikedTall;
    for (int w : pa.maximal_nodes())
      if (pa.leq(v, w)) m.push_back(w);
    m.push_back(v);
    std::sort(m.begin(), m.end());
  } else {
    mc = MvCase::NonSpiked;
    std::vector<int> spiked_above;
    DynBitset bits(pa.size());
    pa.above(v).for_each([&](int w) {
      if (w != v && pa.detect_spiked(w)) {
        spiked_above.push_back(w);
        bits.set(w);
      }
    });
    for (int w : spiked_above) {
      DynBitset strictly_below = pa.below(w);
      strictly_below.reset(w);
      strictly_below &= bits;
      if (strictly_below.none()) m.push_back(w);
    }
  }
  if (case_out) *case_out = mc;
  return m;
}

MvSets compute_mv_sets(const PosetAnalysis& pa) {
  MvSets mv;
  mv.mv_case.assign(pa.size(), MvCase::NonSpiked);
  mv.m_set.assign(pa.size(), {});
  for (int v : pa.two_dim_nodes())
    mv.m_set[v] = minimal_spiked_superalgebras(pa, v, &mv.mv_case[v]);
  return mv;
}

namespace {

std::array<std::vector<int>, 2> cells_from_components(int v, const std::vector<int>& m,
                                                      Dsu& dsu, const char* rule_name) {
  std::map<int, std::vector<int>> comp;
  for (std::size_t i = 0; i < m.size(); ++i) comp[dsu.find(int(i))].push_back(m[i]);
  if (comp.size() != 2)
    throw ReconstructionError(
        "partition", "node " + std::to_string(v) + ": " + rule_name + " yields " +
                         std::to_string(comp.size()) + " classes, expected 2 (input is " +
                         "not the BSA poset of an orthomodular lattice)");
  std::array<std::vector<int>, 2> cells;
  int k = 0;
  for (auto& [root, members] : comp) {
    std::sort(members.begin(), members.end());
    cells[k++] = std::move(members);
  }
  return cells;
}

}  // namespace

std::array<std::vector<int>, 2> partition_classes(const PosetAnalysis& pa, const MvSets& mv,
                                                  int v, SplitRule* rule_out) {
  const std::vector<int>& m = mv.m_set[v];
  MvCase mc = mv.mv_case[v];
  auto set_rule = [&](SplitRule r) {
    if (rule_out) *rule_out = r;
  };

  if (mc == MvCase::MaximalPair) {
    set_rule(SplitRule::AtomPair);
    return {std::vector<int>{v}, std::vector<int>{v}};
  }
  if (mc == MvCase::SpikedTall || mc == MvCase::SpikedSubMaximal) {
    set_rule(SplitRule::SpikedOwner);
    std::vector<int> maximal_side;
    for (int w : m)
      if (w != v) maximal_side.push_back(w);
    return {std::move(maximal_side), std::vector<int>{v}};
  }

  // non-spiked owner
  std::vector<int> subs, threes;
  for (int w : m) {
    if (pa.detect_sub_mbsa(w)) subs.push_back(w);
    if (pa.dim(w) == 3) threes.push_back(w);
  }

  if (subs.empty()) {
    // both generators of height >= 3: relate members through inclusion
    // witnesses in the minimal spiked sets of other non-spiked owners
    set_rule(SplitRule::WitnessSearch);
    Dsu dsu(int(m.size()));
    auto contained_in_some = [&](int a, const std::vector<int>& mw) {
      for (int c : mw)
        if (pa.leq(a, c)) return true;
      return false;
    };
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        bool related = false;
        for (int w : pa.two_dim_nodes()) {
          if (w == v || pa.detect_spiked(w)) continue;
          if (contained_in_some(m[i], mv.m_set[w]) && contained_in_some(m[j], mv.m_set[w])) {
            related = true;
            break;
          }
        }
        if (related) dsu.unite(int(i), int(j));
      }
    return cells_from_components(v, m, dsu, "witness relation");
  }

  bool all_sub_and_three = true;
  for (int w : m)
    if (!pa.detect_sub_mbsa(w) || pa.dim(w) != 3) all_sub_and_three = false;

  if (all_sub_and_three) {
    // both generators are joins of two atoms; members with opposite leading
    // elements always share a maximal upper bound, members with the same
    // leading never do
    set_rule(SplitRule::BothHeightTwo);
    std::vector<DynBitset> maxima_above;
    DynBitset maximal_bits(pa.size());
    for (int w : pa.maximal_nodes()) maximal_bits.set(w);
    for (int w : m) {
      DynBitset bits = pa.above(w);
      bits &= maximal_bits;
      maxima_above.push_back(std::move(bits));
    }
    Dsu dsu(int(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        if (!maxima_above[i].intersects(maxima_above[j])) dsu.unite(int(i), int(j));
    return cells_from_components(v, m, dsu, "shared-maximal-bound relation");
  }

  set_rule(SplitRule::MixedHeights);
  std::vector<int> both;
  std::set_intersection(subs.begin(), subs.end(), threes.begin(), threes.end(),
                        std::back_inserter(both));
  if (!both.empty() || subs.size() + threes.size() != m.size() || threes.empty())
    throw ReconstructionError(
        "partition", "node " + std::to_string(v) +
                         ": sub-mBSA members and 3-dimensional members do not split the " +
                         "minimal spiked set into two cells");
  return {std::move(subs), std::move(threes)};
}

std::map<char, int> Reconstruction::case_histogram() const {
  std::map<char, int> hist = {{'a', 0}, {'b', 0}, {'c', 0}, {'d', 0}};
  for (const auto& info : two_dim) ++hist[char(info.mv_case)];
  return hist;
}

std::string Reconstruction::report() const {
  std::ostringstream out;
  out << "nodes: " << profiles.size() << "\n";
  out << "two-dim nodes: " << two_dim.size();
  auto hist = case_histogram();
  out << " (";
  bool first = true;
  for (auto [c, k] : hist) {
    if (!first) out << " ";
    first = false;
    out << c << "=" << k;
  }
  out << ")\n";
  out << "elements: " << elements.size() << "\n";
  out << "gap rule: " << (gap_rule_enabled ? "on" : "off") << ", relations added: "
      << gap_added.size() << "\n";
  out << "class table:\n";
  for (const auto& info : two_dim) {
    out << "  node " << info.node << ": case " << char(info.mv_case) << " rule "
        << int(info.rule);
    if (info.mv_case == MvCase::MaximalPair) {
      out << " atom-pair\n";
      continue;
    }
    for (int side = 0; side < 2; ++side) {
      out << (side == 0 ? "  cells {" : " / {");
      for (std::size_t i = 0; i < info.cells[side].size(); ++i)
        out << (i ? " " : "") << info.cells[side][i];
      out << "}";
    }
    out << "\n";
  }
  out << "stage timings:";
  for (const auto& [name, ms] : timings_ms) {
    std::ostringstream v;
    v.setf(std::ios::fixed);
    v.precision(2);
    v << ms;
    out << " " << name << "=" << v.str() << "ms";
  }
  out << "\n";
  return out.str();
}

Reconstruction reconstruct(const AbstractPoset& p, const ReconstructOptions& opts) {
  auto t0 = Clock::now();
  std::vector<std::pair<std::string, double>> timings;

  PosetAnalysis pa(p);
  timings.push_back({"grade", ms_since(t0)});
  t0 = Clock::now();

  std::vector<NodeProfile> profiles;
  profiles.reserve(pa.size());
  for (int v = 0; v < pa.size(); ++v) profiles.push_back(pa.profile(v));
  MvSets mv = compute_mv_sets(pa);
  timings.push_back({"classify", ms_since(t0)});
  t0 = Clock::now();

  std::vector<TwoDimNodeInfo> two_dim;
  for (int v : pa.two_dim_nodes()) {
    TwoDimNodeInfo info;
    info.node = v;
    info.mv_case = mv.mv_case[v];
    info.m_set = mv.m_set[v];
    info.cells = partition_classes(pa, mv, v, &info.rule);
    two_dim.push_back(std::move(info));
  }
  timings.push_back({"partition", ms_since(t0)});
  t0 = Clock::now();

  // element table: 0, 1, then a complementary pair per 2-dim node
  std::vector<ClassElement> elements;
  elements.push_back({ClassElement::Kind::Zero, -1, {}, 0});
  elements.push_back({ClassElement::Kind::One, -1, {}, 0});
  for (auto& info : two_dim) {
    if (info.mv_case == MvCase::MaximalPair) {
      for (int k = 0; k < 2; ++k) {
        info.elem[k] = int(elements.size());
        elements.push_back({ClassElement::Kind::ApairAtom, info.node, {}, k + 1});
      }
      continue;
    }
    int order[2] = {0, 1};
    if (info.cells[1].front() < info.cells[0].front()) std::swap(order[0], order[1]);
    for (int k : {0, 1}) {
      int side = order[k];
      info.elem[side] = int(elements.size());
      elements.push_back({ClassElement::Kind::Class, info.node, info.cells[side], 0});
    }
  }
  const int ne = int(elements.size());
  assert(ne == 2 + 2 * int(two_dim.size()));

  std::vector<DynBitset> rel(ne, DynBitset(ne));
  for (int e = 0; e < ne; ++e) {
    rel[e].set(e);
    rel[0].set(e);
    rel[e].set(1);
  }

  std::vector<const TwoDimNodeInfo*> spiked_owners, plain_owners;
  for (const auto& info : two_dim) {
    if (info.mv_case == MvCase::SpikedTall || info.mv_case == MvCase::SpikedSubMaximal)
      spiked_owners.push_back(&info);
    else if (info.mv_case == MvCase::NonSpiked)
      plain_owners.push_back(&info);
  }

  // classes of non-spiked owners: X <= Y when some member of X contains
  // some member of Y
  for (const auto* x : plain_owners)
    for (const auto* y : plain_owners)
      for (int sx = 0; sx < 2; ++sx)
        for (int sy = 0; sy < 2; ++sy) {
          bool related = false;
          for (int a : x->cells[sx]) {
            for (int b : y->cells[sy])
              if (pa.leq(b, a)) {
                related = true;
                break;
              }
            if (related) break;
          }
          if (related) rel[x->elem[sx]].set(y->elem[sy]);
        }

  // spiked owner v against non-spiked owner w: when v sits inside a member
  // of one cell of w, the atom of v lies below the other cell and that
  // member's cell lies below the coatom of v
  for (const auto* sv : spiked_owners) {
    int atom_elem = sv->elem[0], coatom_elem = sv->elem[1];
    for (const auto* w : plain_owners)
      for (int side = 0; side < 2; ++side) {
        int other = 1 - side;
        bool witness = false;
        for (int a : w->cells[other])
          if (pa.leq(sv->node, a)) {
            witness = true;
            break;
          }
        if (witness) {
          rel[atom_elem].set(w->elem[side]);
          rel[w->elem[other]].set(coatom_elem);
        }
      }
  }

  // gap rule: distinct spiked owners sharing a maximal node have orthogonal
  // atoms, so each atom lies below the other owner's coatom
  std::vector<std::pair<int, int>> gap_added;
  if (opts.gap_rule) {
    DynBitset maximal_bits(pa.size());
    for (int w : pa.maximal_nodes()) maximal_bits.set(w);
    for (const auto* sv : spiked_owners)
      for (const auto* sw : spiked_owners) {
        if (sv == sw) continue;
        DynBitset shared = pa.above(sv->node);
        shared &= pa.above(sw->node);
        shared &= maximal_bits;
        if (shared.any()) {
          rel[sv->elem[0]].set(sw->elem[1]);
          gap_added.push_back({sv->node, sw->node});
        }
      }
  }

  // reflexive-transitive closure, then antisymmetry
  for (int k = 0; k < ne; ++k)
    for (int i = 0; i < ne; ++i)
      if (rel[i].test(k)) rel[i] |= rel[k];
  for (int i = 0; i < ne; ++i)
    for (int j = i + 1; j < ne; ++j)
      if (rel[i].test(j) && rel[j].test(i))
        throw ReconstructionError("order", "antisymmetry violated between elements " +
                                               std::to_string(i) + " and " +
                                               std::to_string(j));
  timings.push_back({"order", ms_since(t0)});
  t0 = Clock::now();

  std::vector<int> ortho(ne);
  ortho[0] = 1;
  ortho[1] = 0;
  std::vector<std::string> labels(ne);
  labels[0] = "0";
  labels[1] = "1";
  for (const auto& info : two_dim) {
    ortho[info.elem[0]] = info.elem[1];
    ortho[info.elem[1]] = info.elem[0];
    for (int side = 0; side < 2; ++side) {
      int e = info.elem[side];
      if (info.mv_case == MvCase::MaximalPair)
        labels[e] = "A" + std::to_string(info.node) + "." + std::to_string(side + 1);
      else
        labels[e] = "C" + std::to_string(info.node) + "." +
                    std::to_string(info.cells[side].front());
    }
  }

  Reconstruction out{Lattice::from_order(std::move(rel), std::move(ortho), std::move(labels)),
                     std::move(profiles),
                     pa.dims(),
                     std::move(two_dim),
                     std::move(elements),
                     std::move(gap_added),
                     opts.gap_rule,
                     {}};

  VerifyReport rep = verify(out.lattice);
  if (const AxiomCheck* f = rep.first_failure())
    throw ReconstructionError("assemble", "reconstructed lattice fails verification: " +
                                              f->axiom + " (" + f->witness + ")");
  timings.push_back({"assemble", ms_since(t0)});
  out.timings_ms = std::move(timings);
  return out;
}

}  // namespace omlkit
