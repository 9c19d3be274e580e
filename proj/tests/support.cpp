#include "support.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "omlkit/builders.hpp"

namespace support {

using namespace omlkit;

std::vector<NamedLattice> standard_corpus() {
  std::vector<NamedLattice> out;
  for (int n = 1; n <= 5; ++n)
    out.push_back({"boolean:" + std::to_string(n), boolean_algebra(n)});
  for (int n = 1; n <= 5; ++n) out.push_back({"mo:" + std::to_string(n), mo(n)});
  out.push_back({"bowtie", build_family("bowtie")});
  out.push_back({"chain3", build_family("chain3")});
  out.push_back({"b2xmo2", direct_product(boolean_algebra(2), mo(2))});
  out.push_back({"hsum_b3_b3", horizontal_sum(boolean_algebra(3), boolean_algebra(3))});
  return out;
}

namespace {

BsaPoset annotated_poset(const Lattice& l) {
  BsaPoset poset = enumerate_bsas(l);
  annotate_ground_truth(l, poset);
  return poset;
}

std::string fail_at(const std::string& name, int node, const std::string& what) {
  return name + ", node " + std::to_string(node) + ": " + what;
}

}  // namespace

DiffContext::DiffContext(const Lattice& l, std::uint64_t seed, const ReconstructOptions& opts)
    : lattice(l),
      poset(annotated_poset(l)),
      anon(anonymize(poset, seed)),
      analysis(anon.poset),
      recon(reconstruct(anon.poset, opts)) {}

std::vector<std::string> diff_two_dim_classification(const DiffContext& ctx,
                                                     const std::string& name) {
  std::vector<std::string> fails;
  const Lattice& l = ctx.lattice;
  for (int v = 0; v < ctx.analysis.size(); ++v) {
    int o = ctx.orig(v);
    if (ctx.analysis.dim(v) != ctx.poset.dim(o)) {
      fails.push_back(fail_at(name, v, "grading disagrees with block count"));
      continue;
    }
    if (ctx.analysis.dim(v) != 2) continue;
    const auto& blocks = ctx.poset.nodes[o].blocks;
    int lo = std::min(l.height(blocks[0]), l.height(blocks[1]));
    int hi = std::max(l.height(blocks[0]), l.height(blocks[1]));
    TwoDimClass expected;
    if (lo == 1 && hi == 1) expected = TwoDimClass::BothAtoms;
    else if (lo == 1 && hi == 2) expected = TwoDimClass::AtomPlusHeightTwo;
    else if (lo == 1) expected = TwoDimClass::AtomPlusTall;
    else expected = TwoDimClass::NoAtoms;
    TwoDimClass got = ctx.analysis.two_dim_class(v);
    if (got != expected)
      fails.push_back(fail_at(name, v,
                              "two-dim class " + std::to_string(int(got)) +
                                  " but generator heights are (" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + ")"));
  }
  return fails;
}

std::vector<std::string> diff_spiked(const DiffContext& ctx, const std::string& name) {
  std::vector<std::string> fails;
  for (int v = 0; v < ctx.analysis.size(); ++v) {
    int o = ctx.orig(v);
    bool got = ctx.analysis.detect_spiked(v);
    bool want = ctx.poset.gt_spiked[o];
    if (got != want)
      fails.push_back(fail_at(name, v,
                              std::string("detect_spiked = ") + (got ? "true" : "false") +
                                  " but ground truth says " + (want ? "true" : "false")));
    bool got_sub = ctx.analysis.detect_sub_mbsa(v);
    bool want_sub = ctx.poset.gt_sub_mbsa[o];
    if (got_sub != want_sub)
      fails.push_back(fail_at(name, v, "sub-mBSA detection disagrees with ground truth"));
    if (ctx.analysis.is_maximal(v) != bool(ctx.poset.gt_mbsa[o]))
      fails.push_back(fail_at(name, v, "maximality disagrees with ground truth"));
  }
  // the successor-count identity behind the detector, on every double
  // successor of every spiked 2-dim node
  for (int v = 0; v < ctx.analysis.size(); ++v) {
    if (ctx.analysis.dim(v) != 2 || !ctx.poset.gt_spiked[ctx.orig(v)]) continue;
    for (int t : ctx.analysis.double_successors(v)) {
      int inside = 0;
      for (int s : ctx.analysis.successors(v))
        if (ctx.analysis.leq(s, t)) ++inside;
      if (inside != 3)
        fails.push_back(fail_at(name, v,
                                "double successor " + std::to_string(t) + " contains " +
                                    std::to_string(inside) + " successors, expected 3"));
    }
  }
  return fails;
}

std::vector<std::string> diff_minimal_spiked_sets(const DiffContext& ctx,
                                                  const std::string& name) {
  std::vector<std::string> fails;
  MvSets mv = compute_mv_sets(ctx.analysis);
  for (int v : ctx.analysis.two_dim_nodes()) {
    int o = ctx.orig(v);
    std::vector<int> got;
    for (int w : mv.m_set[v]) got.push_back(ctx.orig(w));
    std::sort(got.begin(), got.end());

    std::vector<int> want;
    if (ctx.poset.gt_mbsa[o]) {
      want = {o};
      if (mv.mv_case[v] != MvCase::MaximalPair)
        fails.push_back(fail_at(name, v, "maximal pair not tagged as case d"));
    } else if (ctx.poset.gt_spiked[o]) {
      for (int w = 0; w < ctx.poset.size(); ++w)
        if (ctx.poset.gt_mbsa[w] && ctx.poset.incl[o].test(w)) want.push_back(w);
      want.push_back(o);
      std::sort(want.begin(), want.end());
      if (mv.mv_case[v] != MvCase::SpikedTall && mv.mv_case[v] != MvCase::SpikedSubMaximal)
        fails.push_back(fail_at(name, v, "spiked owner not tagged as case b/c"));
    } else {
      std::vector<int> spiked_above;
      for (int w = 0; w < ctx.poset.size(); ++w)
        if (w != o && ctx.poset.gt_spiked[w] && ctx.poset.incl[o].test(w))
          spiked_above.push_back(w);
      for (int w : spiked_above) {
        bool minimal = true;
        for (int u : spiked_above)
          if (u != w && ctx.poset.incl[u].test(w)) minimal = false;
        if (minimal) want.push_back(w);
      }
      std::sort(want.begin(), want.end());
      if (mv.mv_case[v] != MvCase::NonSpiked)
        fails.push_back(fail_at(name, v, "non-spiked owner not tagged as case a"));
      // every member's leading element is one of the two generators
      for (int w : want) {
        int lead = ctx.poset.gt_leading[w];
        const auto& blocks = ctx.poset.nodes[o].blocks;
        if (lead != blocks[0] && lead != blocks[1])
          fails.push_back(fail_at(name, v,
                                  "member " + std::to_string(w) +
                                      " has leading element outside the generator pair"));
      }
    }
    if (got != want) {
      std::ostringstream os;
      os << "minimal spiked set {";
      for (int w : got) os << " " << w;
      os << " } differs from lattice-side {";
      for (int w : want) os << " " << w;
      os << " }";
      fails.push_back(fail_at(name, v, os.str()));
    }
  }
  return fails;
}

std::vector<std::string> diff_partition(const DiffContext& ctx, const std::string& name) {
  std::vector<std::string> fails;
  const Lattice& l = ctx.lattice;
  for (const auto& info : ctx.recon.two_dim) {
    int o = ctx.orig(info.node);
    const auto& blocks = ctx.poset.nodes[o].blocks;
    if (info.mv_case == MvCase::MaximalPair) {
      if (!(l.is_atom(blocks[0]) && l.is_atom(blocks[1])))
        fails.push_back(fail_at(name, info.node, "case d but generators are not atoms"));
      continue;
    }
    if (info.mv_case == MvCase::SpikedTall || info.mv_case == MvCase::SpikedSubMaximal) {
      for (int w : info.cells[0])
        if (!ctx.poset.gt_mbsa[ctx.orig(w)])
          fails.push_back(fail_at(name, info.node, "maximal-side cell holds a non-mBSA"));
      if (info.cells[1] != std::vector<int>{info.node})
        fails.push_back(fail_at(name, info.node, "owner-side cell is not the owner"));
      continue;
    }
    // case a: cells must name the two generators through their leading elements
    int lo = std::min(l.height(blocks[0]), l.height(blocks[1]));
    int hi = std::max(l.height(blocks[0]), l.height(blocks[1]));
    SplitRule expected_rule = lo >= 3  ? SplitRule::WitnessSearch
                              : hi == 2 ? SplitRule::BothHeightTwo
                                        : SplitRule::MixedHeights;
    if (info.rule != expected_rule)
      fails.push_back(fail_at(name, info.node,
                              "rule " + std::to_string(int(info.rule)) +
                                  " used but generator heights are (" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + ")"));
    std::set<int> leads_seen;
    bool cells_ok = true;
    for (int side = 0; side < 2; ++side) {
      std::set<int> leads;
      for (int w : info.cells[side]) leads.insert(ctx.poset.gt_leading[ctx.orig(w)]);
      if (leads.size() != 1) {
        cells_ok = false;
        fails.push_back(fail_at(name, info.node,
                                "cell " + std::to_string(side) +
                                    " mixes members with different leading elements"));
      } else {
        leads_seen.insert(*leads.begin());
      }
    }
    if (cells_ok && leads_seen != std::set<int>{blocks[0], blocks[1]})
      fails.push_back(
          fail_at(name, info.node, "cell leading elements are not the generator pair"));
  }
  return fails;
}

std::vector<std::string> diff_cardinality_and_ortho(const DiffContext& ctx,
                                                    const std::string& name) {
  std::vector<std::string> fails;
  const Lattice& c = ctx.recon.lattice;
  if (c.size() != ctx.lattice.size())
    fails.push_back(name + ": |C(L)| = " + std::to_string(c.size()) + " but |L| = " +
                    std::to_string(ctx.lattice.size()));
  VerifyReport rep = verify(c);
  if (const AxiomCheck* f = rep.first_failure())
    fails.push_back(name + ": reconstructed lattice fails " + f->axiom + " (" + f->witness +
                    ")");
  if (c.ortho(0) != 1 || c.ortho(1) != 0)
    fails.push_back(name + ": bounds are not orthocomplements of each other");
  for (const auto& info : ctx.recon.two_dim) {
    if (c.ortho(info.elem[0]) != info.elem[1] || c.ortho(info.elem[1]) != info.elem[0])
      fails.push_back(fail_at(name, info.node, "ortho does not swap the paired cells"));
  }
  int expected = 2 + 2 * int(ctx.recon.two_dim.size());
  if (int(ctx.recon.elements.size()) != expected)
    fails.push_back(name + ": element table size is not 2 + 2 * (two-dim nodes)");
  return fails;
}

std::vector<std::string> diff_gap_rule_safety(const DiffContext& ctx,
                                              const std::string& name) {
  std::vector<std::string> fails;
  const Lattice& l = ctx.lattice;
  for (auto [v, w] : ctx.recon.gap_added) {
    int ov = ctx.orig(v), ow = ctx.orig(w);
    int atom_v = -1;
    for (int b : ctx.poset.nodes[ov].blocks)
      if (l.is_atom(b)) atom_v = b;
    int lead_w = ctx.poset.gt_leading[ow];
    if (atom_v < 0 || lead_w < 0) {
      fails.push_back(fail_at(name, v, "gap relation added between non-spiked owners"));
      continue;
    }
    if (!l.leq(atom_v, lead_w))
      fails.push_back(fail_at(name, v,
                              "gap relation atom " + l.display_name(atom_v) +
                                  " <= " + l.display_name(lead_w) + " is false in L"));
  }
  return fails;
}

}  // namespace support
