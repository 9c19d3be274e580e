#pragma once

#include <string>
#include <vector>

#include "omlkit/bitset.hpp"

namespace omlkit {

// Finite bounded ortholattice candidate.
//
// Construction validates only the structural core: leq is a reflexive,
// antisymmetric, transitive relation with a unique global bottom and top,
// and ortho is an involutive permutation. The algebraic axioms (lattice,
// ortholattice, orthomodular, atomic) are checked by verify(), so defective
// inputs can still be represented and reported on.
//
// Convention: up_set(a) is the bitset {b : a <= b}; down_set(a) is its
// transpose {b : b <= a}. Values are immutable after construction and safe
// to share across threads.
class Lattice {
public:
  // upsets[a] = {b : a <= b}; must already be reflexive and transitive.
  static Lattice from_order(std::vector<DynBitset> upsets, std::vector<int> ortho,
                            std::vector<std::string> labels = {});
  // covers_up[a] lists the strict upper covers of a; the order is the
  // reflexive-transitive closure.
  static Lattice from_covers(int size, const std::vector<std::vector<int>>& covers_up,
                             std::vector<int> ortho, std::vector<std::string> labels = {});

  int size() const { return size_; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }

  bool leq(int a, int b) const;
  int ortho(int a) const;
  bool orthogonal(int a, int b) const;  // a <= ortho(b)

  // greatest lower / least upper bound; StructuralError when none exists
  int meet(int a, int b) const;
  int join(int a, int b) const;
  // -1 instead of throwing; used by verify and other probing callers
  int meet_or_none(int a, int b) const;
  int join_or_none(int a, int b) const;

  // length of the longest chain from bottom
  int height(int a) const;
  bool is_atom(int a) const;
  const std::vector<int>& atoms() const { return atoms_; }

  const std::vector<int>& covers_up(int a) const;
  const std::vector<int>& covers_down(int a) const;
  const DynBitset& up_set(int a) const;
  const DynBitset& down_set(int a) const;

  // pairwise orthogonal atoms whose join is a, greedily taking the lowest
  // atom id each step; StructuralError when the joins do not close up
  std::vector<int> atom_decomposition(int a) const;

  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(int a) const;
  std::string display_name(int a) const;  // label, or "#id" when unlabeled

  bool operator==(const Lattice& o) const;

private:
  Lattice() = default;
  void check_id(int a) const;
  void finish_construction();  // covers, heights, atoms, bound tables

  int size_ = 0;
  std::vector<DynBitset> up_, down_;
  std::vector<int> ortho_;
  int bottom_ = -1, top_ = -1;
  std::vector<std::string> labels_;
  std::vector<int> height_;
  std::vector<int> down_count_;
  std::vector<std::vector<int>> covers_up_, covers_down_;
  std::vector<int> atoms_;
  bool tabled_ = false;
  std::vector<int> meet_tab_, join_tab_;
};

struct AxiomCheck {
  std::string axiom;
  bool pass = true;
  std::string witness;
};

struct VerifyReport {
  std::vector<AxiomCheck> checks;
  bool all_pass() const;
  const AxiomCheck* first_failure() const;
  std::string to_string() const;  // one line per axiom, stable order
};

// Checks, with counterexample witnesses: partial order, bounds, existence of
// all meets and joins, ortho involution / order reversal / complement law,
// the orthomodular law, and atomicity.
VerifyReport verify(const Lattice& l);

}  // namespace omlkit
