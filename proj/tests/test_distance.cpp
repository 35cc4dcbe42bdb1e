#include <gtest/gtest.h>

#include "covgame/distance.hpp"
#include "covgame/instances.hpp"
#include "covgame/lp.hpp"

using namespace covgame;

namespace {

Game
worst_case( std::size_t k, double d )
{
  return worst_case_instance( { k, d, 0, 0.0 } );
}

// Normal agent {A, C}, compromised agent {A, B}. The only optimum (A, B) needs
// B raised by 0.5, but raising C by 0.05 makes (C, A) a tied optimum that is
// already an equilibrium.
Game
off_support_game()
{
  return Game( { { "A", 1.0 }, { "B", 0.5 }, { "C", 0.45 } },
               { { "n", { 0, 2 }, false }, { "c", { 0, 1 }, true } } );
}

Game
random_game( std::uint64_t seed, std::size_t max_agents, std::size_t max_resources, std::size_t compromised )
{
  Rng               rng( derive_seed( 23, seed ) );
  const std::size_t n = std::max( compromised, 1 + rng.index( max_agents ) );
  const std::size_t k = compromised ? compromised : 1 + rng.index( n );
  return random_instance( { n, 1 + rng.index( max_resources ), k, 0.3 + 0.6 * rng.uniform01(), seed } );
}

} // namespace

TEST( MinimizeCovering, SmallKnownPrograms )
{
  // min x + y  s.t.  x + y >= 1, x - y >= 0.2  ->  1.0
  auto sol = lp::minimize_covering( { 1.0, 1.0 }, { { { 1.0, 1.0 }, 1.0 }, { { 1.0, -1.0 }, 0.2 } } );
  ASSERT_TRUE( sol );
  EXPECT_NEAR( sol->objective, 1.0, 1e-12 );
  EXPECT_GE( sol->x[0] - sol->x[1], 0.2 - 1e-12 );

  // min 2x + y  s.t.  x >= 0.3, y >= 0.5 - x  ->  x = 0.3, y = 0.2, value 0.8
  sol = lp::minimize_covering( { 2.0, 1.0 }, { { { 1.0, 0.0 }, 0.3 }, { { 1.0, 1.0 }, 0.5 } } );
  ASSERT_TRUE( sol );
  EXPECT_NEAR( sol->objective, 0.8, 1e-12 );
  EXPECT_NEAR( sol->x[0], 0.3, 1e-12 );
  EXPECT_NEAR( sol->x[1], 0.2, 1e-12 );

  // 0 >= 0.1 is infeasible.
  EXPECT_FALSE( lp::minimize_covering( { 1.0 }, { { { 0.0 }, 0.1 } } ) );
  // Only nonpositive right-hand sides: zero is optimal.
  sol = lp::minimize_covering( { 1.0, 1.0 }, { { { 1.0, -1.0 }, -0.4 } } );
  ASSERT_TRUE( sol );
  EXPECT_NEAR( sol->objective, 0.0, 1e-15 );
}

TEST( ApplyPerturbation, Examples )
{
  const Game g( { { "r0", 1.0 }, { "r1", 0.5 } }, { { "a0", { 0, 1 }, false } } );
  EXPECT_EQ( apply_perturbation( g, { { 0.0, 0.0 } } ), g );
  const auto raised = apply_perturbation( g, { { 0.0, 0.5 } } );
  EXPECT_DOUBLE_EQ( raised.value( 0 ), 1.0 );
  EXPECT_DOUBLE_EQ( raised.value( 1 ), 1.0 );
  EXPECT_DOUBLE_EQ( g.value( 1 ), 0.5 );

  EXPECT_THROW( apply_perturbation( g, { { 0.0, -0.1 } } ), ValidationError );
  EXPECT_THROW( apply_perturbation( g, { { 0.0 } } ), ValidationError );
}

TEST( ApplyPerturbation, WorstCaseBecomesFlat )
{
  for( std::size_t k : { 2u, 3u, 4u } )
    for( double d : { 0.5, 1.0 } )
    {
      const auto         g = worst_case( k, d );
      PerturbationVector p{ std::vector<double>( g.resource_count(), 0.0 ) };
      for( std::size_t i = 1; i <= k; ++i )
        p.increments[i] = d / static_cast<double>( k );
      const auto flat = apply_perturbation( g, p );
      for( ResourceIndex r = 0; r < flat.resource_count(); ++r )
        EXPECT_NEAR( flat.value( r ), 1.0, 1e-15 );
    }
}

TEST( ComputeDistance, NoCompromisedAgents )
{
  const Game g( { { "r0", 1.0 }, { "r1", 0.3 } }, { { "a0", { 0, 1 }, false }, { "a1", { 0 }, false } } );
  const auto d = compute_distance( g );
  EXPECT_EQ( d.distance, 0.0 );
  EXPECT_TRUE( d.perturbation.support().empty() );
  EXPECT_EQ( distance_oracle( g, 0.05 ).distance, 0.0 );
}

TEST( ComputeDistance, WorstCaseSmallInstance )
{
  const auto g = worst_case( 1, 0.5 );
  const auto o = distance_oracle( g, 0.05 );
  ASSERT_NEAR( o.distance, 0.5, 0.05 );

  const auto d = compute_distance( g );
  EXPECT_NEAR( d.distance, 0.5, 1e-12 );
  EXPECT_NEAR( d.perturbation.increments[1], 0.5, 1e-12 );
  EXPECT_EQ( d.perturbation.increments[0], 0.0 );
  EXPECT_EQ( d.witness_profile, ActionProfile( { 0, 1 } ) );
}

TEST( ComputeDistance, WorstCaseFamily )
{
  for( std::size_t k : { 2u, 3u } )
    for( double target : { 0.5, 1.0 } )
    {
      const auto g = worst_case( k, target );
      const auto o = distance_oracle( g, 0.05 );
      ASSERT_NEAR( o.distance, target, 0.05 * o.support_size );
      const auto d = compute_distance( g );
      EXPECT_NEAR( d.distance, target, 1e-12 );
      for( std::size_t i = 1; i <= k; ++i )
        EXPECT_NEAR( d.perturbation.increments[i], target / static_cast<double>( k ), 1e-12 );
    }
}

TEST( ComputeDistance, CheaperTargetOutsideOptimalProfiles )
{
  const auto g = off_support_game();
  const auto o = distance_oracle( g, 0.05 );
  ASSERT_NEAR( o.distance, 0.05, 1e-12 );

  EXPECT_NEAR( restricted_distance( g ).distance, 0.5, 1e-12 );
  const auto d = compute_distance( g );
  EXPECT_NEAR( d.distance, 0.05, 1e-12 );
  EXPECT_EQ( d.witness_profile, ActionProfile( { 2, 0 } ) );
  EXPECT_NEAR( d.perturbation.increments[2], 0.05, 1e-12 );
  EXPECT_GE( price_of_stability( apply_perturbation( g, d.perturbation ) ), 1.0 - kEpsilon );
}

TEST( DistanceOracle, SizeGuard )
{
  const auto g = worst_case( 4, 1.0 );
  EXPECT_THROW( distance_oracle( g, 0.01 ), ValidationError );
  EXPECT_THROW( distance_oracle( g, 0.0 ), ValidationError );
}

TEST( DistanceProperties, SoundSupportedAndOptimal )
{
  for( std::uint64_t s = 0; s < 400; ++s )
  {
    const auto g     = random_game( s, 4, 5, 0 );
    const auto exact = compute_distance( g );
    const auto restricted = restricted_distance( g );

    EXPECT_NEAR( exact.distance, exact.perturbation.l1(), 1e-12 );
    EXPECT_LE( exact.distance, restricted.distance + 1e-12 ) << "seed " << s;

    // Soundness: the witness is optimal and an equilibrium in G_p.
    const auto perturbed = apply_perturbation( g, exact.perturbation );
    EXPECT_TRUE( has_optimal_nash( perturbed ) ) << "seed " << s;
    EXPECT_TRUE( is_nash( perturbed, exact.witness_profile ) ) << "seed " << s;
    EXPECT_GE( welfare( perturbed, exact.witness_profile ), optimal_welfare( perturbed ) - kEpsilon );
    for( auto r : exact.perturbation.support() )
      EXPECT_TRUE( contains( exact.witness_profile.choices(), r ) );

    // Restricted route: support on compromised choices of an optimum of G,
    // which stays optimal after the perturbation.
    std::vector<ResourceIndex> compromised_choices;
    for( auto j : g.compromised_agents() )
      compromised_choices.push_back( restricted.witness_profile[j] );
    for( auto r : restricted.perturbation.support() )
      EXPECT_TRUE( contains( compromised_choices, r ) ) << "seed " << s;
    const auto restricted_game = apply_perturbation( g, restricted.perturbation );
    EXPECT_NEAR( welfare( g, restricted.witness_profile ), optimal_welfare( g ), kEpsilon );
    const auto optima = optimal_profiles( restricted_game );
    EXPECT_NE( std::find( optima.profiles.begin(), optima.profiles.end(), restricted.witness_profile ),
               optima.profiles.end() );
    EXPECT_TRUE( is_nash( restricted_game, restricted.witness_profile ) );

    // Zero exactly when some optimum is already an equilibrium.
    EXPECT_EQ( exact.distance <= kEpsilon, has_optimal_nash( g ) ) << "seed " << s;
  }
}

TEST( DistanceProperties, MatchesOracleWithinGridResolution )
{
  for( std::uint64_t s = 0; s < 150; ++s )
  {
    const auto g = random_game( 1000 + s, 3, 4, 1 );
    const auto o = distance_oracle( g, 0.05 );
    const auto d = compute_distance( g );
    EXPECT_LE( d.distance, o.distance + kEpsilon ) << "seed " << s;
    EXPECT_NEAR( d.distance, o.distance, 0.05 * static_cast<double>( o.support_size ) + kEpsilon ) << "seed " << s;
  }
}
