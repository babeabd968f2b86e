#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "smc/certify.hpp"
#include "smc/cnf.hpp"
#include "smc/kavy.hpp"

using namespace smc;

namespace {

// Safe systems paired with traces harvested from engine iterations: run
// the loop and capture the trace before each extension.
struct Harvested {
  TransitionSystem ts;
  InductiveTrace trace;
};

std::vector<Harvested> harvest_traces(int count, uint64_t seed0) {
  std::vector<Harvested> out;
  uint64_t seed = seed0;
  while (static_cast<int>(out.size()) < count) {
    TransitionSystem ts = gen_random_aig(seed++, 4, 14, 1);
    OracleResult o = bfs_reachable(ts);
    if (!o.safe) continue;
    EngineOptions opts;
    FormulaStore store;
    InductiveTrace tr = InductiveTrace::initial(ts);
    for (int n = 0; n < 4 && static_cast<int>(out.size()) < count; ++n) {
      CharChecker chk(ts, tr, nullptr);
      if (chk.counterexample_check()) break;
      out.push_back({ts, tr});
      Sel sel = max_sel_topdown(chk, tr.size());
      EngineStats st;
      tr = kavy_extend(tr, sel, ts, opts, st, store);
      pdr_push(tr, ts);
      if (is_closed(tr, ts)) break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("max sel on the worked trace is exactly (1,2)") {
  TransitionSystem ts = test::paper_counter();
  InductiveTrace tr = test::paper_trace();
  CharChecker c1(ts, tr, nullptr);
  CHECK(max_sel_topdown(c1, tr.size()) == Sel{1, 2});
  CharChecker c2(ts, tr, nullptr);
  CHECK(max_sel_bottomup(c2, tr.size()) == Sel{1, 2});
  CharChecker c3(ts, tr, nullptr);
  CHECK(max_sel_exhaustive(c3, tr.size()) == Sel{1, 2});
}

TEST_CASE("stuck-at trace prefers the higher level with depth 1") {
  TransitionSystem ts = test::stuck_at0();
  std::vector<std::vector<StateClause>> frames(2);
  frames[0] = {StateClause{state_lit(0, true)}};
  frames[1] = {StateClause{state_lit(0, true)}};
  InductiveTrace tr = InductiveTrace::from_frames(frames);
  CharChecker chk(ts, tr, nullptr);
  CHECK(max_sel_topdown(chk, tr.size()) == Sel{1, 1});
}

TEST_CASE("sel searches agree with exhaustive enumeration on random traces") {
  auto cases = harvest_traces(40, 5000);
  for (auto& h : cases) {
    CharChecker c1(h.ts, h.trace, nullptr);
    CharChecker c2(h.ts, h.trace, nullptr);
    CharChecker c3(h.ts, h.trace, nullptr);
    Sel td = max_sel_topdown(c1, h.trace.size());
    Sel bu = max_sel_bottomup(c2, h.trace.size());
    Sel ex = max_sel_exhaustive(c3, h.trace.size());
    CHECK(td == bu);
    CHECK(td == ex);
  }
}

TEST_CASE("sel search query budgets hold on harvested traces") {
  auto cases = harvest_traces(30, 9000);
  for (auto& h : cases) {
    int N = h.trace.size();
    CharChecker c1(h.ts, h.trace, nullptr);
    SelSearchStats td;
    max_sel_topdown(c1, N, &td);
    CHECK(td.suffix_queries <= static_cast<uint64_t>(N + 1));
    CharChecker c2(h.ts, h.trace, nullptr);
    SelSearchStats bu;
    max_sel_bottomup(c2, N, &bu);
    CHECK(bu.total() <= static_cast<uint64_t>(3 * std::max(N, 1)));
  }
}

TEST_CASE("lemma: the max sel level dominates the max extension level") {
  auto cases = harvest_traces(30, 7000);
  for (auto& h : cases) {
    CharChecker c1(h.ts, h.trace, nullptr);
    Sel sel = max_sel_topdown(c1, h.trace.size());
    auto ext = max_extension_level(h.trace, h.ts);
    REQUIRE(ext.has_value());
    CHECK(sel.i >= *ext);
  }
}

TEST_CASE("bottom-up intermediate value equals the plain extension level") {
  auto cases = harvest_traces(20, 11000);
  for (auto& h : cases) {
    CharChecker chk(h.ts, h.trace, nullptr);
    int lvl = max_extension_level_search(chk, h.trace.size());
    auto ref = max_extension_level(h.trace, h.ts);
    REQUIRE(ref.has_value());
    CHECK(lvl == *ref);
  }
}

TEST_CASE("kavy_extend on the worked trace yields the published shape") {
  TransitionSystem ts = test::paper_counter();
  InductiveTrace tr = test::paper_trace();
  EngineOptions opts;
  opts.indgen = false;  // the theorem's no-generalization mode
  EngineStats st;
  FormulaStore store;
  InductiveTrace g = kavy_extend(tr, Sel{1, 2}, ts, opts, st, store);
  CHECK(g.size() == 2);
  CHECK(is_trace(g, ts));
  CHECK(is_monotone(g, ts));
  CHECK(is_safe(g, ts));
  CHECK(is_stronger(g, tr, ts));
  // G_2 implies c < 66 and is 2-inductive relative to F_1: the published
  // instance is [c=0, (c!=65)&(c<66), c<66]; ours must be equal or
  // stronger semantically.
  auto g2 = g.frame_clauses(2);
  for (uint64_t s = 66; s < 256; ++s) CHECK(!test::eval_clauses(g2, s));
  {
    FormulaStore fs;
    FormulaRef phi = fs.from_clauses(g2);
    CHECK(test::k_inductive_relative(fs, phi, tr.frame_clauses(1), ts, 2));
  }
}

TEST_CASE("depth-1 sel extension has an empty first phase") {
  // With k = 1 the loop bounds of phase 1 are vacuous; extension still
  // produces a monotone clausal safe trace one longer.
  TransitionSystem ts = test::stuck_at0();
  InductiveTrace tr = InductiveTrace::initial(ts);
  EngineOptions opts;
  EngineStats st;
  FormulaStore store;
  REQUIRE(is_sel(tr, ts, 0, 1));
  InductiveTrace g = kavy_extend(tr, Sel{0, 1}, ts, opts, st, store);
  CHECK(g.size() == 1);
  CHECK(is_trace(g, ts));
  CHECK(is_safe(g, ts));
}

TEST_CASE("theorem-2 mode: strong extension traces on random systems") {
  // With generalization off, every extension output must be a monotone,
  // clausal, safe trace of size N+1, stronger than its input, whose frame
  // i+1 is k-inductive relative to the input's frame i.
  std::mt19937_64 rng(31);
  int done = 0;
  uint64_t seed = 20000;
  while (done < 25) {
    TransitionSystem ts = gen_random_aig(seed++, 4, 14, 1);
    OracleResult o = bfs_reachable(ts);
    if (!o.safe) continue;
    EngineOptions opts;
    opts.indgen = false;
    FormulaStore store;
    InductiveTrace tr = InductiveTrace::initial(ts);
    for (int n = 0; n < 3; ++n) {
      CharChecker chk(ts, tr, nullptr);
      if (chk.counterexample_check()) break;
      Sel sel = max_sel_topdown(chk, tr.size());
      EngineStats st;
      InductiveTrace g = kavy_extend(tr, sel, ts, opts, st, store);
      REQUIRE(g.size() == tr.size() + 1);
      CHECK(is_trace(g, ts));
      CHECK(is_monotone(g, ts));
      CHECK(is_safe(g, ts));
      CHECK(is_stronger(g, tr, ts));
      // G_{i+1} is k-inductive relative to the input F_i.
      {
        FormulaStore fs;
        FormulaRef phi = fs.from_clauses(g.frame_clauses(sel.i + 1));
        CHECK(test::k_inductive_relative(fs, phi, tr.frame_clauses(sel.i), ts,
                                         sel.k));
      }
      ++done;
      tr = g;
      pdr_push(tr, ts);
      if (is_closed(tr, ts)) break;
    }
  }
}

TEST_CASE("kavy engine on the stock instances") {
  EngineOptions opts;
  SUBCASE("paper counter: safe within 3 iterations, invariant as published") {
    TransitionSystem ts = test::paper_counter();
    CheckResult r = kavy_engine(ts, opts);
    REQUIRE(r.verdict == Verdict::safe);
    CHECK(r.stats.iterations <= 3);
    REQUIRE(r.invariant.has_value());
    CHECK(check_invariant(*r.invariant, ts));
    // Inv => c < 66 and Inv => c != 65, semantically.
    for (uint64_t s = 65; s < 256; ++s)
      CHECK(!test::eval_clauses(*r.invariant, s));
  }
  SUBCASE("shift width 8 closes with at most 3 frames") {
    CheckResult r = kavy_engine(gen_shift(8), opts);
    REQUIRE(r.verdict == Verdict::safe);
    CHECK(r.stats.frames <= 3);
  }
  SUBCASE("counter with bad = 3: unsafe with a length-3 witness") {
    TransitionSystem ts = gen_counter(8, 64, 3);
    CheckResult r = kavy_engine(ts, opts);
    REQUIRE(r.verdict == Verdict::unsafe);
    CHECK(r.witness->depth() == 3);
    CHECK(check_witness(*r.witness, ts));
  }
  SUBCASE("bottom-up strategy gives the same verdicts") {
    EngineOptions bu = opts;
    bu.sel = SelStrategy::bottomup;
    CHECK(kavy_engine(test::paper_counter(), bu).verdict == Verdict::safe);
    CHECK(kavy_engine(gen_counter(8, 64, 3), bu).verdict == Verdict::unsafe);
  }
  SUBCASE("debug-checks mode holds the loop invariant") {
    EngineOptions dbg = opts;
    dbg.debug_checks = true;
    CHECK(kavy_engine(gen_counter(5, 20, 24), dbg).verdict == Verdict::safe);
    CHECK(kavy_engine(gen_shift(5), dbg).verdict == Verdict::safe);
  }
}

TEST_CASE("vanilla engine agrees with kavy and the oracle") {
  EngineOptions opts;
  SUBCASE("paper counter") {
    CheckResult r = vanilla_engine(test::paper_counter(), opts);
    REQUIRE(r.verdict == Verdict::safe);
    CHECK(check_invariant(*r.invariant, test::paper_counter()));
  }
  SUBCASE("shift width 8: safe, never fewer frames than kavy") {
    CheckResult v = vanilla_engine(gen_shift(8), opts);
    CheckResult k = kavy_engine(gen_shift(8), opts);
    REQUIRE(v.verdict == Verdict::safe);
    CHECK(k.stats.frames <= v.stats.frames);
  }
  SUBCASE("unsafe instances match") {
    TransitionSystem ts = gen_counter(8, 64, 3);
    CheckResult r = vanilla_engine(ts, opts);
    REQUIRE(r.verdict == Verdict::unsafe);
    CHECK(check_witness(*r.witness, ts));
  }
}
