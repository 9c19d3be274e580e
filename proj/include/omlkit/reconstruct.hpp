#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "omlkit/bsa.hpp"
#include "omlkit/lattice.hpp"

namespace omlkit {

// Classification of a 2-dimensional node by the shape of its two generating
// elements, read off the poset alone.
enum class TwoDimClass {
  NotTwoDim,
  BothAtoms,          // maximal node: two complementary atoms
  AtomPlusHeightTwo,  // has a maximal successor: atom + join of two atoms
  AtomPlusTall,       // atom generator present, complement of height >= 3
  NoAtoms,            // neither generator is an atom
};

struct NodeProfile {
  int node = -1;
  int dimension = 0;
  bool is_maximal = false;
  bool is_sub_mbsa = false;
  bool is_spiked = false;
  TwoDimClass two_dim_class = TwoDimClass::NotTwoDim;
};

// Order-only view of an abstract poset: cover adjacency, reachability,
// grading, and the spikedness detectors. Construction fails fast with
// "not a BSA poset" diagnostics (cycle, several minimal nodes, ungraded).
class PosetAnalysis {
public:
  explicit PosetAnalysis(const AbstractPoset& p);

  int size() const { return n_; }
  int bottom() const { return bottom_; }
  const std::vector<int>& dims() const { return dim_; }
  int dim(int v) const { return dim_[v]; }
  bool leq(int a, int b) const { return above_[a].test(b); }
  const DynBitset& above(int v) const { return above_[v]; }
  const DynBitset& below(int v) const { return below_[v]; }
  const std::vector<int>& successors(int v) const { return up_[v]; }
  const std::vector<int>& predecessors(int v) const { return down_[v]; }
  std::vector<int> double_successors(int v) const;

  bool is_maximal(int v) const { return up_[v].empty(); }
  bool detect_mbsa(int v) const { return is_maximal(v); }
  // non-maximal and every successor maximal
  bool detect_sub_mbsa(int v) const;
  // maximal, sub-mBSA, or every double successor contains exactly three
  // successors of v
  bool detect_spiked(int v) const { return spiked_[v] != 0; }
  TwoDimClass two_dim_class(int v) const;
  NodeProfile profile(int v) const;

  const std::vector<int>& two_dim_nodes() const { return two_dim_; }
  const std::vector<int>& maximal_nodes() const { return maximal_; }

private:
  bool triple_successor_rule(int v) const;

  int n_ = 0;
  int bottom_ = -1;
  std::vector<std::vector<int>> up_, down_;
  std::vector<DynBitset> above_, below_;
  std::vector<int> dim_;
  std::vector<std::uint8_t> spiked_;
  std::vector<int> two_dim_, maximal_;
};

// grading alone: dimension per node (1 + longest chain from the bottom)
std::vector<int> grade(const AbstractPoset& p);

enum class MvCase : char {
  NonSpiked = 'a',         // minimal spiked superalgebras of a non-spiked node
  SpikedTall = 'b',        // spiked: all maximal nodes above, plus the node
  SpikedSubMaximal = 'c',  // same set, for a sub-mBSA owner
  MaximalPair = 'd',       // maximal 2-dim node: the node itself
};

// Per 2-dim node: its minimal spiked superalgebra set. case_out receives the
// MvCase tag.
std::vector<int> minimal_spiked_superalgebras(const PosetAnalysis& pa, int v,
                                              MvCase* case_out = nullptr);

struct MvSets {
  std::vector<MvCase> mv_case;          // indexed by node; valid on 2-dim nodes
  std::vector<std::vector<int>> m_set;  // ditto
};
MvSets compute_mv_sets(const PosetAnalysis& pa);

enum class SplitRule {
  AtomPair = 1,       // maximal owner: fresh orthocomplementary atom pair
  SpikedOwner = 2,    // maximal nodes above vs the owner itself
  MixedHeights = 3,   // sub-mBSA members vs 3-dimensional members
  BothHeightTwo = 4,  // components of the no-shared-maximal-bound relation
  WitnessSearch = 5,  // inclusion witnesses through other non-spiked owners
};

// Splits the minimal spiked superalgebra set of a 2-dim node into the two
// cells naming its complementary generators. Throws ReconstructionError when
// no rule yields exactly two cells.
std::array<std::vector<int>, 2> partition_classes(const PosetAnalysis& pa,
                                                  const MvSets& mv, int v,
                                                  SplitRule* rule_out = nullptr);

struct ClassElement {
  enum class Kind { Zero, One, ApairAtom, Class };
  Kind kind = Kind::Zero;
  int owner = -1;            // 2-dim node id for ApairAtom/Class
  std::vector<int> members;  // the cell, for Kind::Class
  int apair_index = 0;       // 1 or 2, for Kind::ApairAtom
};

struct TwoDimNodeInfo {
  int node = -1;
  MvCase mv_case = MvCase::NonSpiked;
  SplitRule rule = SplitRule::AtomPair;
  std::vector<int> m_set;
  std::array<std::vector<int>, 2> cells;  // for spiked owners: [0]=maximal side, [1]={v}
  std::array<int, 2> elem = {-1, -1};     // lattice element ids, aligned with cells
};

struct ReconstructOptions {
  // adds atom-below-coatom relations between distinct spiked owners sharing
  // a maximal node; required for lattices of height 3
  bool gap_rule = true;
};

struct Reconstruction {
  Lattice lattice;
  std::vector<NodeProfile> profiles;
  std::vector<int> dims;
  std::vector<TwoDimNodeInfo> two_dim;        // ascending node id
  std::vector<ClassElement> elements;         // index == lattice element id
  std::vector<std::pair<int, int>> gap_added;  // (v, w): atom of v placed below coatom of w
  bool gap_rule_enabled = true;
  std::vector<std::pair<std::string, double>> timings_ms;

  std::map<char, int> case_histogram() const;
  std::string report() const;
};

// The full pipeline on an anonymized poset: grade, profile, build the
// minimal spiked superalgebra sets, split them into generator cells, impose
// the order, and assemble a verified lattice.
Reconstruction reconstruct(const AbstractPoset& p, const ReconstructOptions& opts = {});

}  // namespace omlkit
