#include <lattice_gp/constructions.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace lgp;

// --- primes ----------------------------------------------------------------

TEST(Primes, LargestPrimeLeq) {
  EXPECT_EQ(largest_prime_leq(100), 97u);
  EXPECT_EQ(largest_prime_leq(13), 13u);
  EXPECT_EQ(largest_prime_leq(2), 2u);
  EXPECT_THROW(largest_prime_leq(1), ContractViolation);
  for (std::uint64_t n = 2; n < 2000; ++n) {
    const auto p = largest_prime_leq(n);
    EXPECT_TRUE(is_prime(p));
    EXPECT_GT(2 * p, n);
    for (std::uint64_t k = p + 1; k <= n; ++k) EXPECT_FALSE(is_prime(k));
  }
}

TEST(Primes, SieveAgreesWithTrialDivision) {
  const auto sieve = prime_sieve(500);
  for (std::uint64_t k = 0; k <= 500; ++k) EXPECT_EQ(sieve[k], is_prime(k)) << k;
}

// --- grid partition and choose_D -------------------------------------------

TEST(GridPartition, Examples) {
  GridPartition gp(8, 2, 2);
  EXPECT_EQ(gp.cell_of(LatticePoint{3, 5}), (std::vector<Coord>{0, 1}));
  const auto pop = gp.populations(full_grid(2, 8));
  for (auto c : pop) EXPECT_EQ(c, 16u);
  EXPECT_EQ(gp.points_per_cell(), 16u);

  GridPartition unit(4, 2, 4);
  for (const auto& p : full_grid(2, 4)) EXPECT_EQ(unit.cell_of(p), (std::vector<Coord>{p[0] - 1, p[1] - 1}));

  EXPECT_THROW(GridPartition(8, 2, 3), ContractViolation);
  EXPECT_THROW(GridPartition(8, 2, 16), ContractViolation);
  EXPECT_THROW(GridPartition(8, 2, 0), ContractViolation);
}

TEST(GridPartition, CellBoundsContainTheirPoints) {
  GridPartition gp(12, 3, 3);
  for (const auto& p : full_grid(3, 12)) {
    const auto cell = gp.cell_of(p);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_LE(gp.low(cell, j), p[j]);
      EXPECT_GE(gp.high(cell, j), p[j]);
    }
    EXPECT_EQ(gp.cell_at(gp.linear_index(cell)), cell);
  }
}

TEST(ChooseD, RoundsUpToPowerOfTwo) {
  const Coord n = 64;
  const std::size_t d = 3;
  const double e = 11.0;
  const double s = std::exp2((12.0 / e * 6.0 - std::log2(5.1)) * e);
  const auto c = choose_D(n, d, s);
  ASSERT_TRUE(c);
  EXPECT_NEAR(c->target, 5.1, 1e-9);
  EXPECT_EQ(c->D, 8);
  EXPECT_FALSE(c->clamped);
}

TEST(ChooseD, Clamps) {
  const auto low = choose_D(64, 3, 1e30);
  ASSERT_TRUE(low);
  EXPECT_EQ(low->D, 2);
  EXPECT_TRUE(low->clamped);

  const auto high = choose_D(64, 3, 1e-30);
  ASSERT_TRUE(high);
  EXPECT_EQ(high->D, 32);
  EXPECT_TRUE(high->clamped);

  EXPECT_FALSE(choose_D(2, 3, 1.0));
  EXPECT_FALSE(choose_D(9, 3, 1.0));
}

// --- random sampling -------------------------------------------------------

TEST(RandomSample, ExtremeProbabilities) {
  EXPECT_EQ(random_sample(4, 3, Probability::one(), 5).size(), 64u);
  EXPECT_TRUE(random_sample(4, 3, Probability::zero(), 5).empty());
  EXPECT_THROW(random_sample(4, 3, Probability{3, 2}, 5), ContractViolation);
}

TEST(RandomSample, DeterministicPerSeed) {
  const Probability p{1, 3};
  EXPECT_EQ(random_sample(6, 3, p, 99), random_sample(6, 3, p, 99));
  EXPECT_NE(random_sample(6, 3, p, 99), random_sample(6, 3, p, 100));
}

TEST(RandomSample, SizesWithinThreeSigma) {
  const double mean = 512.0;
  const double sigma = std::sqrt(512.0 * 7.0 / 8.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto size = static_cast<double>(random_sample(8, 4, Probability{1, 8}, seed).size());
    EXPECT_LE(std::abs(size - mean), 3 * sigma) << "seed " << seed;
  }
}

TEST(Rng, BelowIsUniformEnough) {
  Rng rng(1, 2);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 50000; ++i) ++hits[rng.below(5)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_THROW(rng.below(0), ContractViolation);
}

// --- moment curve ----------------------------------------------------------

TEST(MomentCurve, PrimeNinetySeven) {
  const auto c = moment_curve(97, 2);
  const std::vector<LatticePoint> expect{{1, 1},  {2, 4},  {3, 9},  {4, 16}, {5, 25},  {6, 36},
                                         {7, 49}, {8, 64}, {9, 81}, {10, 3}, {11, 24}, {12, 47}};
  EXPECT_EQ(c.points.points(), expect);
  EXPECT_EQ(c.report.prime_used, 97u);
  EXPECT_EQ(c.report.final_size, 12u);
  EXPECT_TRUE(c.report.verified);
  EXPECT_TRUE(c.report.warnings.empty());
}

TEST(MomentCurve, FallsBackToPrime) {
  EXPECT_EQ(moment_curve(100, 2).points.points(), moment_curve(97, 2).points.points());
  EXPECT_EQ(moment_curve(100, 2).points.side(), 100);
}

TEST(MomentCurve, DegenerateSizesWarn) {
  const auto one = moment_curve(16, 3);
  EXPECT_EQ(one.points.points(), (std::vector<LatticePoint>{{1, 1, 1}}));
  EXPECT_EQ(one.report.final_size, 1u);
  EXPECT_FALSE(one.report.warnings.empty());
  const auto none = moment_curve(2, 2);
  EXPECT_TRUE(none.points.empty());
  EXPECT_FALSE(none.report.warnings.empty());
  EXPECT_THROW(moment_curve(1, 2), ContractViolation);
}

TEST(MomentCurve, GuaranteeAgainstBruteForce) {
  for (std::uint64_t p : primes_up_to(120)) {
    const auto ps = moment_curve(static_cast<Coord>(p), 2).points;
    EXPECT_EQ(oracle::cohyperplanar_subsets(ps, 3), 0u) << p;
    EXPECT_TRUE(oracle::violating_tuples(ps).empty()) << p;
  }
  for (std::uint64_t p : primes_up_to(110)) {
    const auto ps = moment_curve(static_cast<Coord>(p), 3).points;
    EXPECT_EQ(oracle::cohyperplanar_subsets(ps, 4), 0u) << p;
    EXPECT_TRUE(moment_guarantee_holds(ps)) << p;
  }
}

TEST(MomentCurve, GuaranteeUpToDimensionFour) {
  for (std::size_t d = 2; d <= 4; ++d)
    for (std::uint64_t p : primes_up_to(200)) {
      const auto c = moment_curve(static_cast<Coord>(p), d);
      EXPECT_TRUE(c.report.verified) << "d=" << d << " p=" << p;
      EXPECT_EQ(c.points.size(), p / (4 * d));
    }
}

// --- deletion --------------------------------------------------------------

TEST(DeletionRefine, CubeVertices) {
  const auto r = deletion_refine(full_grid(3, 2));
  EXPECT_EQ(r.points.size(), 4u);
  EXPECT_EQ(r.deleted, 4u);
  EXPECT_EQ(r.violations_found, 1u);
  EXPECT_TRUE(oracle::violating_tuples(r.points).empty());
}

TEST(DeletionRefine, CleanAndEmptyInputs) {
  PointSet clean(2, 5, {{1, 1}, {2, 3}, {5, 2}});
  const auto r = deletion_refine(clean);
  EXPECT_EQ(r.points, clean);
  EXPECT_EQ(r.deleted, 0u);
  const auto e = deletion_refine(PointSet(3, 4));
  EXPECT_TRUE(e.points.empty());
  EXPECT_EQ(e.deleted, 0u);
}

TEST(DeletionRefine, SoundOnRandomSets) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 25; ++trial) {
    const auto ps = oracle::random_points(3, 6, 9 + trial % 4, gen);
    const auto tuples = oracle::violating_tuples(ps).size();
    const auto r = deletion_refine(ps);
    EXPECT_TRUE(oracle::violating_tuples(r.points).empty());
    EXPECT_LE(r.deleted, tuples);
    EXPECT_EQ(r.points.size() + r.deleted, ps.size());
    for (const auto& p : r.points) EXPECT_TRUE(ps.contains(p));
  }
}

// --- pipeline --------------------------------------------------------------

TEST(Pipeline, SmallInstance) {
  const auto c = theorem1_pipeline(8, 3, 1);
  EXPECT_TRUE(c.report.verified);
  EXPECT_GE(c.report.final_size, 1u);
  EXPECT_EQ(c.report.sample_size, 512u);
  ASSERT_TRUE(c.report.pipeline);
  EXPECT_EQ(c.report.pipeline->stage1_probability.num, 1u);
  EXPECT_EQ(c.report.pipeline->stage1_probability.den, 1u);
  EXPECT_TRUE(c.report.pipeline->size_window_ok);
  EXPECT_LE(c.report.final_size, c.report.pipeline->subsample_size);
  EXPECT_LE(c.report.pipeline->subsample_size, *c.report.sample_size);
  EXPECT_EQ(c.report.final_size, c.points.size());
  EXPECT_TRUE(oracle::violating_tuples(c.points).empty());
}

TEST(Pipeline, RequiresDimensionThree) { EXPECT_THROW(theorem1_pipeline(8, 2, 0), ContractViolation); }

TEST(Pipeline, Deterministic) {
  const auto a = theorem1_pipeline(16, 3, 7);
  const auto b = theorem1_pipeline(16, 3, 7);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.report.final_size, b.report.final_size);
}

TEST(Pipeline, RoundsDownToPowerOfTwo) {
  const auto c = theorem1_pipeline(12, 3, 3);
  EXPECT_EQ(c.report.pipeline->n_used, 8);
  EXPECT_FALSE(c.report.warnings.empty());
  for (const auto& p : c.points) EXPECT_TRUE(p.in_cube(8));
}

TEST(Pipeline, SecondStageMeanMatchesExponent) {
  EXPECT_NEAR(stage2_probability(16, 3, 0.0), std::pow(16.0, -9.0 / 4.0), 1e-15);
  // Expected 16^3 * 16^{-9/4} = 8 points per run; the 50-run mean has
  // standard deviation sqrt(8 (1 - p) / 50).
  double total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) total += static_cast<double>(theorem1_pipeline(16, 3, seed).report.pipeline->subsample_size);
  const double p = std::pow(16.0, -9.0 / 4.0);
  EXPECT_NEAR(total / 50, 8.0, 3 * std::sqrt(8.0 * (1 - p) / 50));
}

TEST(Pipeline, ConstantOverrideLowersProbability) {
  EXPECT_LT(stage2_probability(16, 3, 1.0), stage2_probability(16, 3, 0.0));
  EXPECT_THROW(stage2_probability(2, 3, 1.0), ContractViolation);
}

TEST(Pipeline, HigherDimensionUsesRationalStageOne) {
  PipelineOptions opt;
  opt.retries = 2;
  const auto c = theorem1_pipeline(2, 4, 5, opt);
  EXPECT_EQ(c.report.pipeline->stage1_probability.den, 2u);
  EXPECT_TRUE(c.report.verified);
  EXPECT_TRUE(c.report.pipeline->max_codim2_sphere_points.has_value());
}

// --- greedy ----------------------------------------------------------------

TEST(Greedy, Examples) {
  EXPECT_EQ(greedy_construct(2, 2, 0, CandidateOrder::lex).points.size(), 3u);
  EXPECT_EQ(greedy_construct(2, 3, 0, CandidateOrder::lex).points.size(), 4u);
}

TEST(Greedy, OutputIsMaximalAndClean) {
  for (auto order : {CandidateOrder::lex, CandidateOrder::random})
    for (auto [d, n] : {std::pair<std::size_t, Coord>{2, 5}, {3, 3}}) {
      const auto c = greedy_construct(n, d, 11, order);
      EXPECT_TRUE(c.report.verified);
      EXPECT_TRUE(oracle::violating_tuples(c.points).empty());
      for (const auto& q : full_grid(d, n)) {
        if (c.points.contains(q)) continue;
        auto bigger = c.points;
        bigger.insert(q);
        EXPECT_FALSE(oracle::violating_tuples(bigger).empty());
      }
    }
}

TEST(Greedy, RandomOrderIsSeeded) {
  EXPECT_EQ(greedy_construct(5, 3, 4, CandidateOrder::random).points,
            greedy_construct(5, 3, 4, CandidateOrder::random).points);
}
