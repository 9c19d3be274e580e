#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "omlkit/budget.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/reconstruct.hpp"

namespace omlkit {

// Relabeling-invariant summary: equal lattices have equal fingerprints, so a
// mismatch refutes isomorphism cheaply.
struct Fingerprint {
  int size = 0;
  int height = 0;
  int atom_count = 0;
  std::vector<int> per_height;  // element counts by height
  // sorted (height, up-degree, down-degree, ortho height) per element
  std::vector<std::array<int, 4>> per_element;
  bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(const Lattice& l);

struct IsoResult {
  bool isomorphic = false;
  std::vector<int> witness;  // element map from the first lattice into the second
  std::string refutation;    // which invariant or search refuted it
};

// Backtracking search over height-class-respecting bijections with ortho
// equivariance enforced during search (mapping a forces mapping ortho(a)).
// Sound and complete; the budget bounds backtrack nodes and overruns raise
// ResourceError rather than returning a verdict.
IsoResult are_isomorphic(const Lattice& a, const Lattice& b, const Budget& budget = {});

struct RoundtripReport {
  int lattice_size = 0;
  int node_count = 0;
  std::map<char, int> case_hist;
  bool isomorphic = false;
  bool stage_failure = false;
  std::string stage;
  std::string message;
  bool gap_rule_enabled = true;
  double ms = 0;
  std::string to_string() const;
};

// enumerate -> anonymize(seed) -> reconstruct -> compare with the original;
// stage failures are folded into the report instead of propagating
RoundtripReport check_reconstruction(const Lattice& l, std::uint64_t seed,
                                     const ReconstructOptions& opts = {},
                                     const Budget& budget = {});

}  // namespace omlkit
