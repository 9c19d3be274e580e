#include <numeric>

#include "doctest.h"
#include "omlkit/builders.hpp"
#include "omlkit/error.hpp"
#include "omlkit/iso.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace omlkit;

TEST_CASE("fingerprints separate equal-size non-isomorphic lattices") {
  Fingerprint b3 = fingerprint(boolean_algebra(3));
  Fingerprint m3 = fingerprint(mo(3));
  CHECK(b3.size == 8);
  CHECK(m3.size == 8);
  CHECK_FALSE(b3 == m3);
  CHECK(b3.atom_count == 3);
  CHECK(m3.atom_count == 6);

  Fingerprint m2 = fingerprint(mo(2));
  CHECK(m2.size == 6);
  CHECK(m2.atom_count == 4);
  CHECK(m2.height == 2);
}

TEST_CASE("fingerprints are relabeling-invariant") {
  for (const Lattice& l : {boolean_algebra(4), mo(3), build_family("bowtie")}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      Lattice moved =
          oracles::relabel_lattice(l, oracles::random_permutation(l.size(), seed));
      CHECK(fingerprint(moved) == fingerprint(l));
    }
  }
}

TEST_CASE("isomorphic relabelings are found with validated witnesses") {
  Lattice b3 = boolean_algebra(3);
  Lattice moved = oracles::relabel_lattice(b3, oracles::random_permutation(8, 99));
  IsoResult r = are_isomorphic(b3, moved);
  REQUIRE(r.isomorphic);
  REQUIRE(r.witness.size() == 8);
  for (int a = 0; a < 8; ++a) {
    CHECK(moved.ortho(r.witness[a]) == r.witness[b3.ortho(a)]);
    for (int b = 0; b < 8; ++b)
      CHECK(b3.leq(a, b) == moved.leq(r.witness[a], r.witness[b]));
  }
}

TEST_CASE("non-isomorphic pairs are refuted") {
  IsoResult r = are_isomorphic(boolean_algebra(3), mo(3));
  CHECK_FALSE(r.isomorphic);
  CHECK(r.refutation.find("fingerprint mismatch") != std::string::npos);
  // heights refute first here; atom counts 3 vs 6 also separate the pair
  CHECK(fingerprint(boolean_algebra(3)).atom_count !=
        fingerprint(mo(3)).atom_count);

  IsoResult size = are_isomorphic(boolean_algebra(2), mo(2));
  CHECK_FALSE(size.isomorphic);
  CHECK(size.refutation.find("sizes differ") != std::string::npos);
}

TEST_CASE("the oracle behaves like an equivalence") {
  auto corpus = support::standard_corpus();
  for (const auto& [name, l] : corpus) CHECK(are_isomorphic(l, l).isomorphic);
  for (std::size_t i = 0; i < corpus.size(); i += 3)
    for (std::size_t j = 0; j < corpus.size(); j += 4) {
      bool ij = are_isomorphic(corpus[i].lattice, corpus[j].lattice).isomorphic;
      bool ji = are_isomorphic(corpus[j].lattice, corpus[i].lattice).isomorphic;
      CHECK(ij == ji);
    }
}

TEST_CASE("agreement with the all-bijections oracle on small lattices") {
  std::vector<Lattice> small = {boolean_algebra(1), boolean_algebra(2), boolean_algebra(3),
                                mo(1), mo(2), mo(3), mo(4), oracles::make_o6()};
  for (std::size_t i = 0; i < small.size(); ++i)
    for (std::size_t j = i; j < small.size(); ++j) {
      bool fast = are_isomorphic(small[i], small[j]).isomorphic;
      bool slow = oracles::brute_force_isomorphic(small[i], small[j]);
      CHECK_MESSAGE(fast == slow, "pair (" << i << ", " << j << ")");
    }
}

TEST_CASE("constructor identities via the oracle") {
  CHECK(are_isomorphic(horizontal_sum(boolean_algebra(2), boolean_algebra(2)), mo(2))
            .isomorphic);
  CHECK(are_isomorphic(direct_product(boolean_algebra(2), boolean_algebra(1)),
                       boolean_algebra(3))
            .isomorphic);
}

TEST_CASE("search budget exhaustion raises a resource error") {
  Budget tiny;
  tiny.iso_backtracks = 2;
  Lattice b4 = boolean_algebra(4);
  Lattice moved = oracles::relabel_lattice(b4, oracles::random_permutation(16, 5));
  CHECK_THROWS_AS(are_isomorphic(b4, moved, tiny), ResourceError);
}

TEST_CASE("check_reconstruction reports") {
  RoundtripReport b4 = check_reconstruction(boolean_algebra(4), 3);
  CHECK(b4.isomorphic);
  CHECK(b4.node_count == 15);
  CHECK(b4.lattice_size == 16);

  RoundtripReport m5 = check_reconstruction(mo(5), 3);
  CHECK(m5.isomorphic);
  CHECK(m5.node_count == 6);
  CHECK(m5.case_hist.at('d') == 5);

  RoundtripReport bow = check_reconstruction(build_family("bowtie"), 3);
  CHECK(bow.isomorphic);
  CHECK(bow.node_count == 8);
  CHECK(bow.case_hist.at('c') == 5);
  CHECK(bow.to_string().find("verdict: isomorphic") != std::string::npos);
}

TEST_CASE("roundtrip verdicts agree across seeds") {
  Lattice bow = build_family("bowtie");
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    CHECK(check_reconstruction(bow, seed).isomorphic);
}
