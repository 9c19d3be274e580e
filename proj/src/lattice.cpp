#include "omlkit/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "omlkit/error.hpp"

namespace omlkit {

namespace {

// meet/join tables are precomputed below this size; larger lattices compute
// bounds per call
constexpr int kBoundTableLimit = 1024;

std::string id_or_label(const std::vector<std::string>& labels, int a) {
  if (!labels.empty() && !labels[a].empty()) return labels[a];
  return "#" + std::to_string(a);
}

}  // namespace

void Lattice::check_id(int a) const {
  if (a < 0 || a >= size_)
    throw InputError("element id " + std::to_string(a) + " out of range (size " +
                     std::to_string(size_) + ")");
}

bool Lattice::leq(int a, int b) const {
  check_id(a);
  check_id(b);
  return up_[a].test(b);
}

int Lattice::ortho(int a) const {
  check_id(a);
  return ortho_[a];
}

bool Lattice::orthogonal(int a, int b) const {
  check_id(a);
  check_id(b);
  return up_[a].test(ortho_[b]);
}

int Lattice::meet_or_none(int a, int b) const {
  check_id(a);
  check_id(b);
  if (tabled_) return meet_tab_[std::size_t(a) * size_ + b];
  DynBitset cand = down_[a] & down_[b];
  int best = -1, best_count = -1;
  cand.for_each([&](int c) {
    if (down_count_[c] > best_count) {
      best = c;
      best_count = down_count_[c];
    }
  });
  if (best >= 0 && down_[best] == cand) return best;
  return -1;
}

int Lattice::join_or_none(int a, int b) const {
  check_id(a);
  check_id(b);
  if (tabled_) return join_tab_[std::size_t(a) * size_ + b];
  DynBitset cand = up_[a] & up_[b];
  int best = -1, best_count = -1;
  cand.for_each([&](int c) {
    int uc = size_ - down_count_[c];  // not |up| but monotone the same way
    if (uc > best_count) {
      best = c;
      best_count = uc;
    }
  });
  // best has the fewest elements below it among candidates; confirm minimum
  if (best >= 0 && up_[best] == cand) return best;
  return -1;
}

int Lattice::meet(int a, int b) const {
  int m = meet_or_none(a, b);
  if (m < 0)
    throw StructuralError("no meet for elements " + id_or_label(labels_, a) + ", " +
                          id_or_label(labels_, b) + " (not a lattice)");
  return m;
}

int Lattice::join(int a, int b) const {
  int j = join_or_none(a, b);
  if (j < 0)
    throw StructuralError("no join for elements " + id_or_label(labels_, a) + ", " +
                          id_or_label(labels_, b) + " (not a lattice)");
  return j;
}

int Lattice::height(int a) const {
  check_id(a);
  return height_[a];
}

bool Lattice::is_atom(int a) const {
  check_id(a);
  return height_[a] == 1;
}

const std::vector<int>& Lattice::covers_up(int a) const {
  check_id(a);
  return covers_up_[a];
}

const std::vector<int>& Lattice::covers_down(int a) const {
  check_id(a);
  return covers_down_[a];
}

const DynBitset& Lattice::up_set(int a) const {
  check_id(a);
  return up_[a];
}

const DynBitset& Lattice::down_set(int a) const {
  check_id(a);
  return down_[a];
}

const std::string& Lattice::label(int a) const {
  check_id(a);
  static const std::string empty;
  return labels_.empty() ? empty : labels_[a];
}

std::string Lattice::display_name(int a) const {
  check_id(a);
  return id_or_label(labels_, a);
}

std::vector<int> Lattice::atom_decomposition(int a) const {
  check_id(a);
  if (a == bottom_) throw InputError("atom_decomposition of bottom");
  std::vector<int> parts;
  int rest = a;
  while (rest != bottom_) {
    int q = -1;
    for (int atom : atoms_) {
      if (up_[atom].test(rest)) {  // atom <= rest
        q = atom;
        break;
      }
    }
    if (q < 0)
      throw StructuralError("no atom below " + id_or_label(labels_, rest) +
                            " (input is not atomic)");
    parts.push_back(q);
    rest = meet(ortho_[q], rest);
  }
  int total = bottom_;
  for (int q : parts) total = join(total, q);
  if (total != a)
    throw StructuralError("atom decomposition of " + id_or_label(labels_, a) +
                          " joins to " + id_or_label(labels_, total) +
                          " (input is not orthomodular)");
  return parts;
}

bool Lattice::operator==(const Lattice& o) const {
  return size_ == o.size_ && up_ == o.up_ && ortho_ == o.ortho_ && bottom_ == o.bottom_ &&
         top_ == o.top_ && labels_ == o.labels_;
}

Lattice Lattice::from_order(std::vector<DynBitset> upsets, std::vector<int> ortho,
                            std::vector<std::string> labels) {
  Lattice l;
  l.size_ = int(upsets.size());
  if (l.size_ < 1) throw StructuralError("lattice must have at least one element");
  for (const auto& row : upsets)
    if (row.size_bits() != l.size_) throw StructuralError("order row of wrong width");
  if (int(ortho.size()) != l.size_) throw StructuralError("ortho map of wrong size");
  if (!labels.empty() && int(labels.size()) != l.size_)
    throw StructuralError("label list of wrong size");

  const int n = l.size_;
  for (int a = 0; a < n; ++a)
    if (!upsets[a].test(a))
      throw StructuralError("order is not reflexive at element " + std::to_string(a));
  for (int a = 0; a < n; ++a) {
    upsets[a].for_each([&](int b) {
      if (b != a && upsets[b].test(a))
        throw StructuralError("order is not antisymmetric between elements " +
                              std::to_string(a) + " and " + std::to_string(b));
      if (!upsets[b].is_subset_of(upsets[a]))
        throw StructuralError("order is not transitive at elements " + std::to_string(a) +
                              " <= " + std::to_string(b));
    });
  }
  for (int a = 0; a < n; ++a) {
    int o = ortho[a];
    if (o < 0 || o >= n)
      throw StructuralError("ortho out of range at element " + std::to_string(a));
    if (ortho[o] != a)
      throw StructuralError("ortho is not involutive at element " + std::to_string(a));
  }

  l.up_ = std::move(upsets);
  l.down_.assign(n, DynBitset(n));
  for (int a = 0; a < n; ++a)
    l.up_[a].for_each([&](int b) { l.down_[b].set(a); });

  int bottom = -1, top = -1;
  for (int a = 0; a < n; ++a) {
    if (l.up_[a].count() == n) {
      if (bottom >= 0) throw StructuralError("order has more than one bottom element");
      bottom = a;
    }
    if (l.down_[a].count() == n) {
      if (top >= 0) throw StructuralError("order has more than one top element");
      top = a;
    }
  }
  if (bottom < 0) throw StructuralError("order has no global bottom element");
  if (top < 0) throw StructuralError("order has no global top element");
  l.bottom_ = bottom;
  l.top_ = top;
  l.ortho_ = std::move(ortho);
  l.labels_ = std::move(labels);
  l.finish_construction();
  return l;
}

Lattice Lattice::from_covers(int size, const std::vector<std::vector<int>>& covers_up,
                             std::vector<int> ortho, std::vector<std::string> labels) {
  if (size < 1) throw StructuralError("lattice must have at least one element");
  if (int(covers_up.size()) != size) throw StructuralError("cover list of wrong size");
  for (int a = 0; a < size; ++a)
    for (int b : covers_up[a])
      if (b < 0 || b >= size)
        throw StructuralError("cover target " + std::to_string(b) + " out of range");

  // closure by DFS; grey nodes flag a cycle
  std::vector<DynBitset> up(size);
  std::vector<int> state(size, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> stack;
  for (int root = 0; root < size; ++root) {
    if (state[root] == 2) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      int a = stack.back();
      if (state[a] == 0) {
        state[a] = 1;
        for (int b : covers_up[a]) {
          if (state[b] == 1)
            throw StructuralError("covers contain a cycle through element " +
                                  std::to_string(b));
          if (state[b] == 0) stack.push_back(b);
        }
      } else {
        stack.pop_back();
        if (state[a] == 2) continue;
        state[a] = 2;
        up[a] = DynBitset(size);
        up[a].set(a);
        for (int b : covers_up[a]) up[a] |= up[b];
      }
    }
  }
  return from_order(std::move(up), std::move(ortho), std::move(labels));
}

void Lattice::finish_construction() {
  const int n = size_;
  down_count_.resize(n);
  for (int a = 0; a < n; ++a) down_count_[a] = down_[a].count();

  // |down| ascending is a linear extension of the order
  std::vector<int> topo(n);
  std::iota(topo.begin(), topo.end(), 0);
  std::sort(topo.begin(), topo.end(), [&](int a, int b) {
    return std::pair(down_count_[a], a) < std::pair(down_count_[b], b);
  });

  // covers = minimal elements of each strict up-set
  covers_up_.assign(n, {});
  covers_down_.assign(n, {});
  DynBitset blocked(n);
  for (int a = 0; a < n; ++a) {
    blocked.clear();
    for (int b : topo) {
      if (b == a || !up_[a].test(b)) continue;
      if (blocked.test(b)) continue;
      covers_up_[a].push_back(b);
      covers_down_[b].push_back(a);
      blocked |= up_[b];
    }
  }
  for (auto& v : covers_down_) std::sort(v.begin(), v.end());

  height_.assign(n, 0);
  for (int a : topo) {
    int h = 0;
    for (int b : covers_down_[a]) h = std::max(h, height_[b] + 1);
    height_[a] = h;
  }
  for (int a = 0; a < n; ++a)
    if (height_[a] == 1) atoms_.push_back(a);

  if (n <= kBoundTableLimit) {
    tabled_ = false;  // fill via the scan path first
    meet_tab_.assign(std::size_t(n) * n, -1);
    join_tab_.assign(std::size_t(n) * n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        int m = meet_or_none(a, b);
        int j = join_or_none(a, b);
        meet_tab_[std::size_t(a) * n + b] = meet_tab_[std::size_t(b) * n + a] = m;
        join_tab_[std::size_t(a) * n + b] = join_tab_[std::size_t(b) * n + a] = j;
      }
    tabled_ = true;
  }
}

bool VerifyReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const AxiomCheck* VerifyReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

std::string VerifyReport::to_string() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << c.axiom << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.pass && !c.witness.empty()) out << " (" << c.witness << ")";
    out << "\n";
  }
  return out.str();
}

VerifyReport verify(const Lattice& l) {
  const int n = l.size();
  VerifyReport rep;
  auto add = [&](const std::string& name, bool pass, const std::string& witness = "") {
    rep.checks.push_back({name, pass, witness});
  };
  auto name = [&](int a) { return l.display_name(a); };

  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      if (!l.leq(a, a)) {
        ok = false;
        w = name(a) + " not <= itself";
      }
    add("reflexive", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b)
        if (l.leq(a, b) && l.leq(b, a)) {
          ok = false;
          w = name(a) + " and " + name(b) + " below each other";
        }
    add("antisymmetric", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a) {
      l.up_set(a).for_each([&](int b) {
        if (!ok) return;
        if (!l.up_set(b).is_subset_of(l.up_set(a))) {
          DynBitset gap = l.up_set(b);
          gap.andnot(l.up_set(a));
          int c = gap.first();
          ok = false;
          w = name(a) + " <= " + name(b) + " <= " + name(c) + " but not " + name(a) +
              " <= " + name(c);
        }
      });
    }
    add("transitive", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a) {
      if (!l.leq(l.bottom(), a)) {
        ok = false;
        w = "bottom not below " + name(a);
      } else if (!l.leq(a, l.top())) {
        ok = false;
        w = name(a) + " not below top";
      }
    }
    add("bounded", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b)
        if (l.meet_or_none(a, b) < 0) {
          ok = false;
          w = "no meet of " + name(a) + " and " + name(b);
        }
    add("meets", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a + 1; b < n && ok; ++b)
        if (l.join_or_none(a, b) < 0) {
          ok = false;
          w = "no join of " + name(a) + " and " + name(b);
        }
    add("joins", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      if (l.ortho(l.ortho(a)) != a) {
        ok = false;
        w = "ortho(ortho(" + name(a) + ")) = " + name(l.ortho(l.ortho(a)));
      }
    add("ortho-involution", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        if (l.leq(a, b) && !l.leq(l.ortho(b), l.ortho(a))) {
          ok = false;
          w = name(a) + " <= " + name(b) + " but not " + name(l.ortho(b)) +
              " <= " + name(l.ortho(a));
        }
    add("ortho-order-reversing", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a) {
      int m = l.meet_or_none(a, l.ortho(a));
      int j = l.join_or_none(a, l.ortho(a));
      if (m != l.bottom() || j != l.top()) {
        ok = false;
        w = name(a) + " and its ortho do not complement";
      }
    }
    add("ortho-complement", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) {
        if (a == b || !l.leq(a, b)) continue;
        int m = l.meet_or_none(l.ortho(a), b);
        int j = m < 0 ? -1 : l.join_or_none(a, m);
        if (j != b) {
          ok = false;
          w = name(a) + " <= " + name(b) + " but join(" + name(a) + ", meet(ortho(" +
              name(a) + "), " + name(b) + ")) = " + (j < 0 ? "undefined" : name(j));
          break;
        }
      }
    add("orthomodular", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    DynBitset atom_bits(n);
    for (int q : l.atoms()) atom_bits.set(q);
    for (int a = 0; a < n && ok; ++a) {
      if (a == l.bottom()) continue;
      if (!l.down_set(a).intersects(atom_bits)) {
        ok = false;
        w = "no atom below " + name(a);
      }
    }
    add("atomic", ok, w);
  }
  return rep;
}

}  // namespace omlkit
