#pragma once

// Corpus construction and the differential checks shared by the unit tests
// and the acceptance suite. Each differential compares a poset-only result
// against lattice-side ground truth through the hidden anonymization mapping
// and returns human-readable failure strings (empty = pass).

#include <cstdint>
#include <string>
#include <vector>

#include "omlkit/bsa.hpp"
#include "omlkit/iso.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/reconstruct.hpp"

namespace support {

struct NamedLattice {
  std::string name;
  omlkit::Lattice lattice;
};

// {2^n : n=1..5} + {MO(n) : n=1..5} + bowtie, chain3, 2^2 x MO(2),
// hsum(2^3, 2^3)
std::vector<NamedLattice> standard_corpus();

// everything needed to line up a reconstruction run with its ground truth
struct DiffContext {
  omlkit::Lattice lattice;
  omlkit::BsaPoset poset;  // annotated
  omlkit::AnonymizedPoset anon;
  omlkit::PosetAnalysis analysis;
  omlkit::Reconstruction recon;

  DiffContext(const omlkit::Lattice& l, std::uint64_t seed,
              const omlkit::ReconstructOptions& opts = {});
  int orig(int anon_node) const { return anon.original_node[anon_node]; }
};

std::vector<std::string> diff_two_dim_classification(const DiffContext& ctx,
                                                     const std::string& name);
std::vector<std::string> diff_spiked(const DiffContext& ctx, const std::string& name);
std::vector<std::string> diff_minimal_spiked_sets(const DiffContext& ctx,
                                                  const std::string& name);
std::vector<std::string> diff_partition(const DiffContext& ctx, const std::string& name);
std::vector<std::string> diff_cardinality_and_ortho(const DiffContext& ctx,
                                                    const std::string& name);
std::vector<std::string> diff_gap_rule_safety(const DiffContext& ctx,
                                              const std::string& name);

}  // namespace support
