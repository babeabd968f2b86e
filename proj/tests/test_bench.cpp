#include <doctest.h>

#include "helpers.hpp"
#include "smc/bench.hpp"
#include "smc/engines_base.hpp"

using namespace smc;

TEST_CASE("counter generator parameter checks") {
  CHECK_THROWS_AS(gen_counter(3, 8, 6), std::invalid_argument);
  CHECK_NOTHROW(gen_counter(3, 4, 6));
}

TEST_CASE("counter reachability matches the construction") {
  SUBCASE("(3,4,6): safe, reachable 0..4") {
    OracleResult o = bfs_reachable(gen_counter(3, 4, 6));
    CHECK(o.safe);
    CHECK(o.reachable == std::vector<uint64_t>{0, 1, 2, 3, 4});
  }
  SUBCASE("(8,64,65): still safe, reachable max is 64") {
    OracleResult o = bfs_reachable(gen_counter(8, 64, 65));
    CHECK(o.safe);
    CHECK(o.num_reachable == 65);
  }
  SUBCASE("(8,64,66) is 2-inductive") {
    CheckResult r = kind(gen_counter(8, 64, 66), 5);
    REQUIRE(r.verdict == Verdict::safe);
    CHECK(r.stats.converged_k == 2);
  }
}

TEST_CASE("shift family: safe with k-inductive depth equal to the width") {
  for (int w = 1; w <= 8; ++w) {
    TransitionSystem ts = gen_shift(w);
    OracleResult o = bfs_reachable(ts);
    CHECK(o.safe);
    CheckResult r = kind(ts, w + 3);
    REQUIRE(r.verdict == Verdict::safe);
    CHECK(r.stats.converged_k == w);
  }
}

TEST_CASE("random generator is deterministic and byte-identical") {
  TransitionSystem a = gen_random_aig(42, 5, 20, 2);
  TransitionSystem b = gen_random_aig(42, 5, 20, 2);
  CHECK(to_aiger_ascii(a) == to_aiger_ascii(b));
  TransitionSystem c = gen_random_aig(43, 5, 20, 2);
  CHECK(to_aiger_ascii(a) != to_aiger_ascii(c));
}

TEST_CASE("random family has both safe and unsafe members") {
  int safe = 0, unsafe = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    OracleResult o = bfs_reachable(gen_random_aig(seed, 5, 20, 2));
    (o.safe ? safe : unsafe)++;
  }
  CHECK(safe >= 10);
  CHECK(unsafe >= 10);
}

TEST_CASE("degenerate zero-gate sample runs through parsing and the oracle") {
  TransitionSystem ts = gen_random_aig(1, 2, 0, 1);
  TransitionSystem back = parse_aiger(to_aiger_ascii(ts));
  CHECK(structurally_equal(ts, back));
  CHECK_NOTHROW(bfs_reachable(ts));
}

TEST_CASE("oracle refuses over-budget systems") {
  TransitionSystem big = gen_counter(22, 100, 200);
  CHECK_THROWS_AS(bfs_reachable(big, 20), std::invalid_argument);
}

TEST_CASE("oracle: toggle reaches both states; shortest cex counts frames") {
  OracleResult o = bfs_reachable(test::toggle_unsafe());
  CHECK(o.reachable == std::vector<uint64_t>{0, 1});
  CHECK(!o.safe);
  CHECK(o.shortest_cex == 1);
  OracleResult p = bfs_reachable(test::passthrough());
  CHECK(!p.safe);
  CHECK(p.shortest_cex == 0);
}
