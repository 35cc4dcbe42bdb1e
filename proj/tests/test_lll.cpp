#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "covgame/instances.hpp"
#include "covgame/lll.hpp"

using namespace covgame;

namespace {

Game
worst_case( std::size_t k, double d, std::size_t z )
{
  return worst_case_instance( { k, d, z, 0.0 } );
}

double
average_at( const Game& g, double temperature, std::uint64_t seed, std::uint64_t steps = 200'000 )
{
  SimConfig config;
  config.temperature = temperature;
  config.steps       = steps;
  config.seed        = seed;
  return run_lll( g, config ).average_normalized_welfare;
}

} // namespace

TEST( ChoiceDistribution, SumsToOne )
{
  for( std::uint64_t s = 0; s < 100; ++s )
  {
    const auto g = random_instance( { 3, 5, 1, 0.6, s } );
    Rng        rng( s );
    const auto p = random_profile( g, rng );
    for( double t : { 1e-6, 0.005, 0.3, 1.0, 50.0, 1e6 } )
      for( AgentIndex i = 0; i < g.agent_count(); ++i )
      {
        const auto dist = choice_distribution( g, p, i, t );
        EXPECT_NEAR( std::accumulate( dist.begin(), dist.end(), 0.0 ), 1.0, 1e-12 );
      }
  }
}

TEST( ChoiceDistribution, LowTemperatureIsBestResponse )
{
  // Compromised agent 1 of the worst-case game: R0 (1.0) beats R1 (0.5) by 0.5.
  const auto g    = worst_case( 1, 0.5, 2 );
  const auto dist = choice_distribution( g, ActionProfile( { 0, 0 } ), 1, 1e-6 );
  EXPECT_GE( dist[0], 1.0 - 1e-9 );

  const Game h( { { "a", 0.6 }, { "b", 0.5 }, { "c", 0.1 } }, { { "x", { 0, 1, 2 }, false } } );
  EXPECT_GE( choice_distribution( h, ActionProfile( { 1 } ), 0, 1e-6 )[0], 1.0 - 1e-9 );
}

TEST( ChoiceDistribution, HighTemperatureIsUniform )
{
  const auto g    = worst_case( 3, 1.0, 3 );
  const auto dist = choice_distribution( g, ActionProfile( { 0, 0, 0, 0 } ), 2, 1e6 );
  double     tv   = 0.0;
  for( double p : dist )
    tv += std::abs( p - 1.0 / static_cast<double>( dist.size() ) );
  EXPECT_LE( 0.5 * tv, 1e-3 );
}

TEST( ChoiceDistribution, CompromisedIgnoresOthers )
{
  const auto g = worst_case( 3, 1.0, 2 );
  const auto a = choice_distribution( g, ActionProfile( { 0, 0, 0, 0 } ), 1, 0.4 );
  const auto b = choice_distribution( g, ActionProfile( { 0, 0, 2, 3 } ), 1, 0.4 );
  const auto c = choice_distribution( g, ActionProfile( { 4, 0, 8, 10 } ), 1, 0.4 );
  EXPECT_EQ( a, b );
  EXPECT_EQ( a, c );
}

TEST( ChoiceDistribution, NormalAgentSeesCoverage )
{
  const Game g( { { "r0", 1.0 }, { "r1", 0.5 } }, { { "n", { 0, 1 }, false }, { "m", { 0 }, false } } );
  // With r0 covered by agent m, r1 is worth more to agent n.
  const auto dist = choice_distribution( g, ActionProfile( { 0, 0 } ), 0, 0.01 );
  EXPECT_GE( dist[1], 1.0 - 1e-9 );
}

TEST( LllStep, RevisesOneAgentAndFollowsDistribution )
{
  const auto          g = worst_case( 2, 0.5, 1 );
  const ActionProfile start( { 0, 0, 0 } );
  Rng                 rng( 7 );
  std::map<std::pair<AgentIndex, ResourceIndex>, int> moves;
  const int trials = 60000;
  for( int t = 0; t < trials; ++t )
  {
    const auto next    = lll_step( g, start, 0.3, rng );
    int        changed = 0;
    for( AgentIndex i = 0; i < 3; ++i )
      if( next[i] != start[i] )
      {
        ++changed;
        ++moves[{ i, next[i] }];
      }
    EXPECT_LE( changed, 1 );
  }
  // Agent 1 moves to R1 with probability (1/3) * P_1(R1).
  const auto   dist     = choice_distribution( g, start, 1, 0.3 );
  const auto   acts     = g.actions( 1 );
  const auto   r1       = static_cast<std::size_t>( std::find( acts.begin(), acts.end(), 1u ) - acts.begin() );
  const double expected = dist[r1] / 3.0;
  const double observed = static_cast<double>( moves[{ 1, 1 }] ) / trials;
  EXPECT_NEAR( observed, expected, 4.0 * std::sqrt( expected * ( 1 - expected ) / trials ) );

  EXPECT_THROW( lll_step( g, start, 0.0, rng ), ValidationError );
  EXPECT_THROW( lll_step( g, start, -1.0, rng ), ValidationError );
}

TEST( RunLll, DeterministicBitForBit )
{
  const auto g = worst_case( 4, 1.0, 2 );
  SimConfig  config;
  config.temperature  = 0.3;
  config.steps        = 20000;
  config.seed         = 99;
  config.record_trace = true;
  const auto a        = run_lll( g, config );
  const auto b        = run_lll( g, config );
  EXPECT_EQ( a.average_normalized_welfare, b.average_normalized_welfare );
  EXPECT_EQ( a.trace, b.trace );
  EXPECT_EQ( a.final_profile, b.final_profile );
  config.seed = 100;
  EXPECT_NE( run_lll( g, config ).trace, a.trace );
}

TEST( RunLll, ZeroTemperatureStaysAtEquilibrium )
{
  const auto g = worst_case( 3, 1.0, 0 );
  SimConfig  config;
  config.temperature     = 1e-6;
  config.steps           = 10000;
  config.seed            = 3;
  config.record_trace    = true;
  config.initial_profile = ActionProfile( { 0, 0, 0, 0 } );
  const auto run         = run_lll( g, config );
  EXPECT_EQ( run.final_profile, ActionProfile( { 0, 0, 0, 0 } ) );
  for( double w : run.trace )
    ASSERT_NEAR( w, 1.0 / 3.0, 1e-15 );
}

TEST( RunLll, TraceInUnitIntervalAndBurnIn )
{
  const auto g = worst_case( 5, 2.0, 3 );
  SimConfig  config;
  config.temperature      = 0.8;
  config.steps            = 5000;
  config.seed             = 11;
  config.record_trace     = true;
  config.burn_in_fraction = 0.25;
  const auto run          = run_lll( g, config );
  ASSERT_EQ( run.trace.size(), 5000u );
  for( double w : run.trace )
  {
    EXPECT_GE( w, 0.0 );
    EXPECT_LE( w, 1.0 + 1e-12 );
  }
  const double tail = std::accumulate( run.trace.begin() + 1250, run.trace.end(), 0.0 ) / 3750.0;
  EXPECT_DOUBLE_EQ( run.average_normalized_welfare, tail );

  config.burn_in_fraction = 1.0;
  EXPECT_THROW( run_lll( g, config ), ValidationError );
  config.burn_in_fraction = 0.0;
  config.steps            = 0;
  EXPECT_THROW( run_lll( g, config ), ValidationError );
}

TEST( RunLll, TemperatureProfileBands )
{
  const auto   g    = worst_case( 10, 1.0, 3 );
  const double low  = average_at( g, std::pow( 10.0, -2.3 ), 1 );
  const double peak = average_at( g, std::pow( 10.0, -0.5 ), 1 );
  const double high = average_at( g, std::pow( 10.0, 2.3 ), 1 );
  EXPECT_GE( low, 0.07 );
  EXPECT_LE( low, 0.13 );
  EXPECT_GE( peak, 0.40 );
  EXPECT_LT( high, peak );
}
