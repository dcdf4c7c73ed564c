#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qaoamps/problems.hpp"
#include "qaoamps/rng.hpp"

using namespace qaoamps;

namespace {

MaxCutInstance triangle() {
  MaxCutInstance inst;
  inst.n = 3;
  inst.adjacency = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  return inst;
}

MaxCutInstance path3() {  // edges (0,1), (1,2)
  MaxCutInstance inst;
  inst.n = 3;
  inst.adjacency = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  return inst;
}

int cut_size(const MaxCutInstance& inst, const Bitstring& s) {
  int cut = 0;
  for (auto [i, j] : inst.edges())
    if (s[i] != s[j]) ++cut;
  return cut;
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("bitstring round trips") {
  CHECK(bits_to_string({1, 0, 1}) == "101");
  CHECK(bits_from_string("0110") == Bitstring{0, 1, 1, 0});
  CHECK(index_of_bits({0, 1}) == 1);  // qubit 1 is the most significant bit
  CHECK(bits_from_index(1, 2) == Bitstring{0, 1});
  CHECK_THROWS(bits_from_string("012"));
}

TEST_CASE("gen_maxcut_er is deterministic and well formed") {
  const auto a = gen_maxcut_er(14, 0.5, 42);
  const auto b = gen_maxcut_er(14, 0.5, 42);
  CHECK(a.adjacency == b.adjacency);
  const auto c = gen_maxcut_er(2, 0.5, 7);
  CHECK(c.adjacency[0][0] == 0);
  CHECK(c.adjacency[1][1] == 0);
  CHECK(c.adjacency[0][1] == c.adjacency[1][0]);
  CHECK_THROWS(gen_maxcut_er(1, 0.5, 0));
  CHECK_THROWS(gen_maxcut_er(4, 1.5, 0));
}

TEST_CASE("gen_maxcut_er edge count statistics") {
  // n=14, w=1/2: mean 45.5, var 91/4 per instance; the mean of 200 draws
  // should land within 3 sigma of the binomial expectation.
  double sum = 0.0;
  const int draws = 200;
  for (int seed = 0; seed < draws; ++seed)
    sum += gen_maxcut_er(14, 0.5, seed).edge_count();
  const double mean = sum / draws;
  const double sigma = std::sqrt(91.0 * 0.25 / draws);
  CHECK(std::abs(mean - 45.5) < 3.0 * sigma);
}

TEST_CASE("maxcut_to_ising matches -2 cut identity") {
  const auto tri = triangle();
  const auto model = maxcut_to_ising(tri);
  CHECK(model.constant == doctest::Approx(-3.0));

  // s = 001 cuts two edges.
  CHECK(classical_energy(model, bits_from_string("001")) ==
        doctest::Approx(-4.0));
  const auto path = maxcut_to_ising(path3());
  CHECK(classical_energy(path, bits_from_string("010")) ==
        doctest::Approx(-4.0));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 13);
    const auto inst = gen_maxcut_er(n, 0.5, seed);
    const auto m = maxcut_to_ising(inst);
    std::mt19937_64 rng(seed + 999);
    Bitstring s(n);
    for (auto& b : s) b = static_cast<std::uint8_t>(rng() & 1u);
    CHECK(classical_energy(m, s) == doctest::Approx(-2.0 * cut_size(inst, s))
                                        .epsilon(1e-12));
  }
}

TEST_CASE("empty graph encodes the zero model") {
  MaxCutInstance inst;
  inst.n = 3;
  inst.adjacency.assign(3, {0, 0, 0});
  const auto model = maxcut_to_ising(inst);
  for (std::uint64_t idx = 0; idx < 8; ++idx)
    CHECK(classical_energy(model, bits_from_index(idx, 3)) == 0.0);
}

TEST_CASE("triangle ground state") {
  const auto result = brute_force_ground(maxcut_to_ising(triangle()));
  CHECK(result.energy == doctest::Approx(-4.0));
  CHECK(result.minimizers.size() == 6);  // all but 000 and 111
}

TEST_CASE("maxcut minimizers closed under global flip") {
  const auto inst = gen_maxcut_er(10, 0.5, 3);
  const auto result = brute_force_ground(maxcut_to_ising(inst));
  std::set<Bitstring> set(result.minimizers.begin(), result.minimizers.end());
  for (auto s : result.minimizers) {
    for (auto& b : s) b ^= 1;
    CHECK(set.count(s) == 1);
  }
}

TEST_CASE("brute force rejects n beyond the enumeration limit") {
  IsingModel model;
  model.n = 25;
  model.h.assign(25, 0.0);
  CHECK_THROWS(brute_force_ground(model));
}

TEST_CASE("ec3 clause energies") {
  Ec3Instance inst;
  inst.n = 3;
  inst.clauses = {{0, 1, 2}};
  const auto model = ec3_to_ising(inst);
  CHECK(classical_energy(model, bits_from_string("100")) ==
        doctest::Approx(0.0));
  CHECK(classical_energy(model, bits_from_string("111")) ==
        doctest::Approx(4.0));
  CHECK(classical_energy(model, bits_from_string("000")) ==
        doctest::Approx(1.0));
}

TEST_CASE("ec3 energy equals sum of (popcount-1)^2") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto gen = gen_ec3(9, seed);
    const auto model = ec3_to_ising(gen.instance);
    for (std::uint64_t idx = 0; idx < (1u << 9); idx += 7) {
      const Bitstring s = bits_from_index(idx, 9);
      double expected = 0.0;
      for (const auto& c : gen.instance.clauses) {
        const int pop = s[c[0]] + s[c[1]] + s[c[2]];
        expected += (pop - 1) * (pop - 1);
      }
      CHECK(classical_energy(model, s) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("ec3_satisfied") {
  Ec3Instance inst;
  inst.n = 3;
  inst.clauses = {{0, 1, 2}};
  CHECK(ec3_satisfied(inst, bits_from_string("010")));
  CHECK_FALSE(ec3_satisfied(inst, bits_from_string("110")));
  CHECK_FALSE(ec3_satisfied(inst, bits_from_string("000")));
}

TEST_CASE("gen_ec3 produces certified-satisfiable instances") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto gen = gen_ec3(12, seed);
    CHECK_FALSE(gen.instance.clauses.empty());
    for (const auto& c : gen.instance.clauses) {
      CHECK(c[0] < c[1]);
      CHECK(c[1] < c[2]);
      CHECK(c[2] < 12);
    }
    const auto witness = exact_cover_solve(12, gen.instance.clauses);
    REQUIRE(witness.has_value());
    CHECK(ec3_satisfied(gen.instance, *witness));

    // The rejected clause must make the set unsatisfiable again.
    if (gen.dropped_clause) {
      auto clauses = gen.instance.clauses;
      clauses.push_back(*gen.dropped_clause);
      CHECK_FALSE(exact_cover_solve(12, clauses).has_value());
    }

    const auto again = gen_ec3(12, seed);
    CHECK(again.instance.clauses == gen.instance.clauses);
  }
}

TEST_CASE("satisfiable ec3 ground energy is zero") {
  const auto gen = gen_ec3(10, 5);
  const auto result = brute_force_ground(ec3_to_ising(gen.instance));
  CHECK(result.energy == doctest::Approx(0.0));
  for (const auto& s : result.minimizers)
    CHECK(ec3_satisfied(gen.instance, s));
}

TEST_CASE("exact cover solver on hand instances") {
  // Two clauses sharing two variables force x0 or a unique pattern.
  std::vector<std::array<int, 3>> clauses = {{0, 1, 2}, {1, 2, 3}};
  const auto s = exact_cover_solve(4, clauses);
  REQUIRE(s.has_value());
  Ec3Instance inst;
  inst.n = 4;
  inst.clauses = clauses;
  CHECK(ec3_satisfied(inst, *s));

  // Unsatisfiable: three clauses pairwise overlapping on {0,1}.
  std::vector<std::array<int, 3>> bad = {{0, 1, 2}, {0, 1, 3}, {2, 3, 0}};
  bool any = false;
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    Ec3Instance check;
    check.n = 4;
    check.clauses = bad;
    if (ec3_satisfied(check, bits_from_index(idx, 4))) any = true;
  }
  CHECK(exact_cover_solve(4, bad).has_value() == any);
}

TEST_CASE("classical_energy validates length") {
  const auto model = maxcut_to_ising(triangle());
  CHECK_THROWS(classical_energy(model, bits_from_string("01")));
}

TEST_CASE("local search certificate is witness-consistent") {
  const auto inst = gen_maxcut_er(16, 0.5, 11);
  const auto model = maxcut_to_ising(inst);
  const auto cert = local_search_certificate(model, 32, 123);
  CHECK(classical_energy(model, cert.witness) == doctest::Approx(cert.energy));
  CHECK_FALSE(cert.optimal);
  const auto exact = brute_force_ground(model);
  CHECK(cert.energy >= exact.energy - 1e-12);
  // On a 16-vertex instance a few dozen restarts should land on the optimum.
  CHECK(cert.energy == doctest::Approx(exact.energy));
}

}  // TEST_SUITE
