#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "omlkit/budget.hpp"
#include "omlkit/lattice.hpp"

namespace omlkit {

// A family of pairwise orthogonal nonzero elements with join 1, stored as a
// sorted id list. It generates a Boolean subalgebra whose atoms are the
// blocks; the family size is the subalgebra's dimension.
struct OrthoPartition {
  std::vector<int> blocks;
  bool operator==(const OrthoPartition&) const = default;
};

bool is_orthopartition(const Lattice& l, const OrthoPartition& p);

// all 2^dim joins of sub-families of blocks, as a bitset over element ids
DynBitset subalgebra_elements(const Lattice& l, const OrthoPartition& p);

// The inclusion poset of all Boolean subalgebras of a finite atomic
// orthomodular lattice, each identified with its orthopartition of
// generators. Nodes are sorted by (dimension, blocks); the trivial
// subalgebra {0,1} is node 0 and the unique poset bottom.
struct BsaPoset {
  std::vector<OrthoPartition> nodes;
  std::vector<DynBitset> elem_sets;        // per node, over lattice ids
  std::vector<DynBitset> incl;             // incl[i] = {j : node i included in j}, with i
  std::vector<std::vector<int>> covers_up;
  std::vector<std::vector<int>> covers_down;
  int bottom = -1;

  // ground-truth annotations computed lattice-side by annotate_ground_truth;
  // used only for differential testing, never by reconstruction
  bool annotated = false;
  std::vector<std::uint8_t> gt_mbsa, gt_sub_mbsa, gt_spiked;
  std::vector<int> gt_leading;  // element id of the unique non-atom block, -1 if none

  int size() const { return int(nodes.size()); }
  int dim(int v) const { return int(nodes[v].blocks.size()); }
};

// Enumerates every orthopartition of 1 by depth-first extension in ascending
// block-id order. The partial-state budget aborts runaway inputs.
BsaPoset enumerate_bsas(const Lattice& l, const Budget& budget = {});

// Tags every node with maximality/spikedness data read off the lattice:
// a node is an mBSA when all blocks are atoms, spiked when at most one block
// is a non-atom (the leading element), and a sub-mBSA when the single
// non-atom block has height 2.
void annotate_ground_truth(const Lattice& l, BsaPoset& poset);

const std::vector<int>& successors(const BsaPoset& poset, int v);
std::vector<int> double_successors(const BsaPoset& poset, int v);

// Relabeled cover relation only; what reconstruction is allowed to see.
struct AbstractPoset {
  int size = 0;
  std::vector<std::pair<int, int>> covers;  // (i, j): i is covered by j
};

struct AnonymizedPoset {
  AbstractPoset poset;
  std::vector<int> original_node;  // anonymized id -> BsaPoset node; test-harness only
};

AbstractPoset to_abstract(const BsaPoset& poset);
AnonymizedPoset anonymize(const BsaPoset& poset, std::uint64_t seed);

std::string serialize_poset(const BsaPoset& poset);     // with dim annotations
std::string serialize_poset(const AbstractPoset& poset);  // covers only
AbstractPoset parse_poset(std::string_view text);

}  // namespace omlkit
