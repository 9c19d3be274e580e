#include "omlkit/iso.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "omlkit/bsa.hpp"
#include "omlkit/error.hpp"

namespace omlkit {

Fingerprint fingerprint(const Lattice& l) {
  Fingerprint f;
  f.size = l.size();
  f.height = l.height(l.top());
  f.atom_count = int(l.atoms().size());
  f.per_height.assign(f.height + 1, 0);
  for (int a = 0; a < l.size(); ++a) ++f.per_height[l.height(a)];
  for (int a = 0; a < l.size(); ++a)
    f.per_element.push_back({l.height(a), l.up_set(a).count() - 1,
                             l.down_set(a).count() - 1, l.height(l.ortho(a))});
  std::sort(f.per_element.begin(), f.per_element.end());
  return f;
}

namespace {

std::string describe_mismatch(const Fingerprint& a, const Fingerprint& b) {
  if (a.size != b.size)
    return "sizes differ (" + std::to_string(a.size) + " vs " + std::to_string(b.size) + ")";
  if (a.height != b.height)
    return "heights differ (" + std::to_string(a.height) + " vs " +
           std::to_string(b.height) + ")";
  if (a.atom_count != b.atom_count)
    return "atom counts differ (" + std::to_string(a.atom_count) + " vs " +
           std::to_string(b.atom_count) + ")";
  if (a.per_height != b.per_height) return "per-height element counts differ";
  return "per-element invariant multisets differ";
}

struct IsoSearch {
  const Lattice& a;
  const Lattice& b;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::vector<int> map_ab, map_ba;  // -1 = unassigned
  std::vector<std::array<int, 4>> key_a, key_b;
  std::vector<int> order;  // a-elements, most constrained class first
  std::vector<int> assigned;

  IsoSearch(const Lattice& a_, const Lattice& b_, std::uint64_t budget_)
      : a(a_), b(b_), budget(budget_) {
    map_ab.assign(a.size(), -1);
    map_ba.assign(b.size(), -1);
    auto keys = [](const Lattice& l) {
      std::vector<std::array<int, 4>> k(l.size());
      for (int x = 0; x < l.size(); ++x)
        k[x] = {l.height(x), l.up_set(x).count(), l.down_set(x).count(),
                l.height(l.ortho(x))};
      return k;
    };
    key_a = keys(a);
    key_b = keys(b);
    std::map<std::array<int, 4>, int> class_size;
    for (const auto& k : key_a) ++class_size[k];
    for (int x = 0; x < a.size(); ++x) order.push_back(x);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return std::pair(class_size[key_a[x]], x) < std::pair(class_size[key_a[y]], y);
    });
  }

  bool consistent(int x, int y) const {
    if (key_a[x] != key_b[y]) return false;
    for (int z : assigned) {
      int w = map_ab[z];
      if (a.leq(x, z) != b.leq(y, w)) return false;
      if (a.leq(z, x) != b.leq(w, y)) return false;
    }
    return true;
  }

  bool assign(int x, int y) {
    if (map_ab[x] >= 0) return map_ab[x] == y;
    if (map_ba[y] >= 0) return false;
    if (!consistent(x, y)) return false;
    map_ab[x] = y;
    map_ba[y] = x;
    assigned.push_back(x);
    return true;
  }

  void undo_to(std::size_t mark) {
    while (assigned.size() > mark) {
      int x = assigned.back();
      assigned.pop_back();
      map_ba[map_ab[x]] = -1;
      map_ab[x] = -1;
    }
  }

  bool search(std::size_t pos) {
    while (pos < order.size() && map_ab[order[pos]] >= 0) ++pos;
    if (pos == order.size()) return true;
    int x = order[pos];
    for (int y = 0; y < b.size(); ++y) {
      if (++nodes > budget)
        throw ResourceError("isomorphism search budget exceeded after " +
                            std::to_string(nodes) + " nodes (set OMLKIT_BUDGET to raise)");
      if (map_ba[y] >= 0 || key_b[y] != key_a[x]) continue;
      std::size_t mark = assigned.size();
      if (assign(x, y) && assign(a.ortho(x), b.ortho(y)) && search(pos + 1)) return true;
      undo_to(mark);
    }
    return false;
  }
};

bool revalidate(const Lattice& a, const Lattice& b, const std::vector<int>& f) {
  for (int x = 0; x < a.size(); ++x) {
    if (f[x] < 0 || f[x] >= b.size()) return false;
    if (b.ortho(f[x]) != f[a.ortho(x)]) return false;
    for (int y = 0; y < a.size(); ++y)
      if (a.leq(x, y) != b.leq(f[x], f[y])) return false;
  }
  std::vector<char> hit(b.size(), 0);
  for (int x = 0; x < a.size(); ++x) {
    if (hit[f[x]]) return false;
    hit[f[x]] = 1;
  }
  return true;
}

}  // namespace

IsoResult are_isomorphic(const Lattice& a, const Lattice& b, const Budget& budget) {
  IsoResult res;
  if (a.size() != b.size()) {
    res.refutation = "sizes differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")";
    return res;
  }
  Fingerprint fa = fingerprint(a), fb = fingerprint(b);
  if (!(fa == fb)) {
    res.refutation = "fingerprint mismatch: " + describe_mismatch(fa, fb);
    return res;
  }
  IsoSearch search(a, b, budget.iso_backtracks);
  if (search.search(0)) {
    res.isomorphic = true;
    res.witness = search.map_ab;
    if (!revalidate(a, b, res.witness))
      throw StructuralError("internal: isomorphism witness failed revalidation");
    return res;
  }
  res.refutation = "search exhausted: no order- and ortho-preserving bijection";
  return res;
}

std::string RoundtripReport::to_string() const {
  std::ostringstream out;
  out << "size: " << lattice_size << "\n";
  out << "poset nodes: " << node_count << "\n";
  out << "cases:";
  for (auto [c, k] : case_hist) out << " " << c << "=" << k;
  if (case_hist.empty()) out << " -";
  out << "\n";
  out << "gap rule: " << (gap_rule_enabled ? "on" : "off") << "\n";
  if (isomorphic) {
    out << "verdict: isomorphic\n";
  } else if (stage_failure) {
    out << "verdict: reconstruction failure (" << stage << "): " << message << "\n";
  } else if (!gap_rule_enabled) {
    out << "verdict: reconstruction failure: missing atom-coatom relations\n";
  } else {
    out << "verdict: not isomorphic: " << message << "\n";
  }
  return out.str();
}

RoundtripReport check_reconstruction(const Lattice& l, std::uint64_t seed,
                                     const ReconstructOptions& opts, const Budget& budget) {
  RoundtripReport rep;
  rep.lattice_size = l.size();
  rep.gap_rule_enabled = opts.gap_rule;
  auto t0 = std::chrono::steady_clock::now();
  try {
    BsaPoset poset = enumerate_bsas(l, budget);
    rep.node_count = poset.size();
    AnonymizedPoset anon = anonymize(poset, seed);
    Reconstruction recon = reconstruct(anon.poset, opts);
    rep.case_hist = recon.case_histogram();
    IsoResult iso = are_isomorphic(l, recon.lattice, budget);
    rep.isomorphic = iso.isomorphic;
    if (!iso.isomorphic) rep.message = iso.refutation;
  } catch (const ReconstructionError& e) {
    rep.stage_failure = true;
    rep.stage = e.stage;
    rep.message = e.what();
  } catch (const ResourceError& e) {
    rep.stage_failure = true;
    rep.stage = "budget";
    rep.message = e.what();
  }
  rep.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
               .count();
  return rep;
}

}  // namespace omlkit
