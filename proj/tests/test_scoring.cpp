#include <gtest/gtest.h>

#include <algorithm>

#include "instgen/errors.hpp"
#include "instgen/scoring.hpp"
#include "support.hpp"

using namespace instgen;

namespace {

ComparableRecord cr(bool solved, double time, std::optional<std::int64_t> q = std::nullopt, bool optimal = false,
                    ProblemKind kind = ProblemKind::Decision) {
  return {solved, optimal, q, time, kind};
}

}  // namespace

TEST(IsBetter, Examples) {
  EXPECT_TRUE(is_better(cr(true, 5), cr(false, 100)));
  EXPECT_FALSE(is_better(cr(false, 100), cr(true, 5)));
  const auto a = cr(true, 50, 8, true, ProblemKind::Minimise);
  const auto b = cr(true, 10, 8, false, ProblemKind::Minimise);
  EXPECT_TRUE(is_better(a, b));
  EXPECT_FALSE(is_better(b, a));
  EXPECT_FALSE(is_better(a, a));
  EXPECT_FALSE(is_better(b, b));
}

TEST(IsBetter, QualityDirection) {
  EXPECT_TRUE(is_better(cr(true, 9, 3, false, ProblemKind::Minimise), cr(true, 1, 4, false, ProblemKind::Minimise)));
  EXPECT_TRUE(is_better(cr(true, 9, 4, false, ProblemKind::Maximise), cr(true, 1, 3, false, ProblemKind::Maximise)));
  EXPECT_FALSE(is_better(cr(true, 9, 4, false, ProblemKind::Maximise), cr(true, 1, 4, false, ProblemKind::Maximise)));
}

TEST(MinizincScore, Examples) {
  EXPECT_EQ(minizinc_score(cr(true, 10), cr(true, 30)), (PairScore{0.75, 0.25}));
  EXPECT_EQ(minizinc_score(cr(true, 20), cr(true, 20)), (PairScore{0.5, 0.5}));
  EXPECT_EQ(minizinc_score(cr(false, 100), cr(false, 100)), (PairScore{0, 0}));
  EXPECT_EQ(minizinc_score(cr(true, 0), cr(true, 0)), (PairScore{0.5, 0.5}));
  EXPECT_EQ(minizinc_score(cr(true, 99), cr(false, 1)), (PairScore{1, 0}));
}

TEST(MinizincScore, Properties) {
  Rng rng(1);
  for (int i = 0; i < 3000; ++i) {
    const auto kind = static_cast<ProblemKind>(rng.uniform_int(0, 2));
    const auto recs = testsupport::random_records(rng, 2, kind);
    const auto a = testsupport::to_comparable(recs[0], kind);
    const auto b = testsupport::to_comparable(recs[1], kind);
    EXPECT_FALSE(is_better(a, b) && is_better(b, a));
    const auto s = minizinc_score(a, b);
    EXPECT_GE(s.a, 0.0);
    EXPECT_LE(s.a, 1.0);
    EXPECT_GE(s.b, 0.0);
    EXPECT_LE(s.b, 1.0);
    const double sum = s.a + s.b;
    EXPECT_TRUE(sum == 0.0 || std::abs(sum - 1.0) < 1e-15);
    const auto swapped = minizinc_score(b, a);
    EXPECT_EQ(swapped.a, s.b);
    EXPECT_EQ(swapped.b, s.a);

    auto a2 = a, b2 = b;
    a2.time *= 3.7;
    b2.time *= 3.7;
    const auto scaled = minizinc_score(a2, b2);
    EXPECT_NEAR(scaled.a, s.a, 1e-12);
    EXPECT_NEAR(scaled.b, s.b, 1e-12);
  }
}

TEST(Borda, Examples) {
  std::map<RecordKey, ComparableRecord> recs{{{"A", "i"}, cr(true, 5)}, {{"B", "i"}, cr(false, 100)}};
  auto t = borda_complete(recs, {"A", "B"}, {"i"});
  EXPECT_EQ(t.totals.at("A"), 1.0);
  EXPECT_EQ(t.totals.at("B"), 0.0);
  EXPECT_EQ(t.ranking(), (std::vector<std::string>{"A", "B"}));

  std::map<RecordKey, ComparableRecord> fails{
      {{"A", "i"}, cr(false, 9)}, {{"B", "i"}, cr(false, 9)}, {{"C", "i"}, cr(false, 9)}};
  t = borda_complete(fails, {"A", "B", "C"}, {"i"});
  for (const auto& s : {"A", "B", "C"}) EXPECT_EQ(t.totals.at(s), 0.0);
}

TEST(Borda, MissingRecord) {
  std::map<RecordKey, ComparableRecord> recs{{{"A", "i"}, cr(true, 5)}};
  EXPECT_THROW(borda_complete(recs, {"A", "B"}, {"i"}), MissingRecord);
}

TEST(Borda, TotalsEqualCellsAndPermutationInvariant) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kind = static_cast<ProblemKind>(rng.uniform_int(0, 2));
    std::vector<std::string> solvers{"s1", "s2", "s3", "s4"};
    std::vector<std::string> insts;
    std::map<RecordKey, ComparableRecord> recs;
    std::map<std::string, std::string> problem_of;
    for (int i = 0; i < 6; ++i) {
      insts.push_back("i" + std::to_string(i));
      problem_of[insts.back()] = i % 2 ? "odd" : "even";
      const auto rr = testsupport::random_records(rng, solvers.size(), kind);
      for (std::size_t s = 0; s < solvers.size(); ++s) recs[{solvers[s], insts.back()}] = testsupport::to_comparable(rr[s], kind);
    }
    const auto t = borda_complete(recs, solvers, insts, problem_of);
    for (const auto& s : solvers) {
      double cells = 0, probs = 0;
      for (const auto& [_, v] : t.cells.at(s)) cells += v;
      for (const auto& [_, v] : t.per_problem.at(s)) probs += v;
      EXPECT_NEAR(cells, t.totals.at(s), 1e-12);
      EXPECT_NEAR(probs, t.totals.at(s), 1e-12);
    }
    auto perm = solvers;
    std::reverse(perm.begin(), perm.end());
    const auto t2 = borda_complete(recs, perm, insts, problem_of);
    for (const auto& s : solvers) EXPECT_NEAR(t.totals.at(s), t2.totals.at(s), 1e-12);
    EXPECT_EQ(t.ranking(), t2.ranking());
  }
}

TEST(Borda, CsvAndJsonRoundTrip) {
  Rng rng(4);
  std::vector<std::string> solvers{"a,1", "b\"2", "c"};
  std::vector<std::string> insts{"x", "y"};
  std::map<RecordKey, ComparableRecord> recs;
  for (const auto& i : insts) {
    const auto rr = testsupport::random_records(rng, 3, ProblemKind::Decision);
    for (std::size_t s = 0; s < 3; ++s) recs[{solvers[s], i}] = testsupport::to_comparable(rr[s], ProblemKind::Decision);
  }
  const auto t = borda_complete(recs, solvers, insts);
  EXPECT_EQ(borda_entries_from_csv(borda_to_csv(t)), t.entries);
  const auto back = borda_from_json(borda_summary_json(t));
  EXPECT_EQ(back.totals, t.totals);
  EXPECT_EQ(back.ranking(), t.ranking());
  EXPECT_THROW(borda_entries_from_csv("wrong,header\n"), ParseError);
}
