#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "omlkit/lattice.hpp"

namespace omlkit {

// A pasting diagram: named atoms plus the atom set of each maximal Boolean
// block. Blocks are stored as sorted index lists into `atoms`.
struct GreechieDiagram {
  std::vector<std::string> atoms;
  std::vector<std::vector<int>> blocks;
};

// Throws InputError unless: every atom lies in at least one block, every
// block has >= 2 atoms, and two distinct blocks share at most one atom.
void validate_greechie(const GreechieDiagram& g);

// power-set lattice on n atoms (1 <= n <= 16); element ids are atom masks
Lattice boolean_algebra(int atom_count);

// 2n+2 elements: bottom, top, and n orthocomplementary atom pairs that are
// only comparable with the bounds
Lattice mo(int pair_count);

// Pastes the diagram's Boolean blocks along shared atoms and identified
// complements, then brute-force verifies every axiom; diagrams whose pasting
// violates an axiom (e.g. 3-loops) are rejected with the failing witness.
Lattice from_greechie(const GreechieDiagram& g);

Lattice direct_product(const Lattice& a, const Lattice& b);

// Glues two lattices at bottom and top; both sizes must be >= 2. The result
// is verified on construction.
Lattice horizontal_sum(const Lattice& a, const Lattice& b);

enum class Validate {
  Structural,  // well-formed order, bounds, involution only
  Full,        // additionally every verify() axiom must pass
};

std::string serialize_oml(const Lattice& l);
Lattice parse_oml(std::string_view text, Validate mode = Validate::Full);

GreechieDiagram parse_greechie(std::string_view text);
std::string serialize_greechie(const GreechieDiagram& g);

// Family expressions name corpus lattices compactly:
//   boolean:N  mo:N  bowtie  chain3  greechie:PATH  oml:PATH
//   product(EXPR,EXPR)  hsum(EXPR,EXPR)
Lattice build_family(const std::string& expr);

std::string read_text_file(const std::string& path);

}  // namespace omlkit
