#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "covgame/distance.hpp"
#include "covgame/equilibria.hpp"
#include "covgame/instances.hpp"
#include "covgame/lll.hpp"
#include "covgame/random.hpp"

namespace covgame {

enum class ExperimentKind
{
  temperature_sweep,
  distance_sweep,
  fixed_temperature,
};

inline const char*
experiment_name( ExperimentKind kind )
{
  switch( kind )
  {
  case ExperimentKind::temperature_sweep: return "temperature_sweep";
  case ExperimentKind::distance_sweep: return "distance_sweep";
  case ExperimentKind::fixed_temperature: return "fixed_temperature";
  }
  return "unknown";
}

/// Defaults: k = 10 compromised agents, three
/// dummies per agent, 47 temperatures over 10^-2.3 .. 10^2.3, 200000 steps.
struct SweepSpec
{
  ExperimentKind kind = ExperimentKind::temperature_sweep;

  std::size_t k           = 10;
  double      distance    = 1.0;
  std::size_t dummies     = 3;
  double      dummy_value = 0.0;
  /// Replaces the generated worst-case game (temperature and fixed-temperature
  /// sweeps only).
  std::optional<Game> game;

  double      temp_min_exp      = -2.3;
  double      temp_max_exp      = 2.3;
  std::size_t temp_points       = 47;
  double      fixed_temperature = 0.55;

  double                dist_min  = 0.0;
  std::optional<double> dist_max; // defaults to k - 1
  double                dist_step = 0.5;

  std::uint64_t steps   = 200'000;
  std::uint64_t seed    = 0;
  std::size_t   trials  = 1;
  std::size_t   threads = 0; // 0: COVERAGE_POA_THREADS or hardware concurrency
};

struct SweepRow
{
  ExperimentKind             kind;
  std::size_t                k;
  double                     distance;
  std::optional<std::size_t> dummies;
  double                     temperature;
  std::size_t                trial;
  std::uint64_t              steps;
  std::uint64_t              seed; // seed of this run
  double                     avg_norm_welfare;
  double                     poa_bound;      // min{1/2, 1/(1 + k - D)}
  double                     baseline_bound; // 1/(1 + k)
};

/// Per-distance min/max of the trial-averaged welfare across temperatures.
struct DistanceAggregate
{
  double distance;
  double min_avg;
  double max_avg;
  double argmin_temperature;
  double argmax_temperature;
  double poa_bound;
  double baseline_bound;
};

inline constexpr const char* kCsvHeader =
  "experiment,k,distance,z,temperature,trial,steps,seed,avg_norm_welfare,poa_bound";

namespace detail {

inline std::string
format_double( double x )
{
  if( std::isnan( x ) )
    return "nan";
  char buf[64];
  auto res = std::to_chars( buf, buf + sizeof buf, x );
  return std::string( buf, res.ptr );
}

} // namespace detail

struct SweepResult
{
  std::vector<SweepRow>          rows;
  std::vector<DistanceAggregate> aggregates;

  std::string
  to_csv() const
  {
    std::string out = std::string( kCsvHeader ) + "\n";
    for( const auto& r : rows )
    {
      out += experiment_name( r.kind );
      out += ',' + std::to_string( r.k );
      out += ',' + detail::format_double( r.distance );
      out += ',' + ( r.dummies ? std::to_string( *r.dummies ) : std::string() );
      out += ',' + detail::format_double( r.temperature );
      out += ',' + std::to_string( r.trial );
      out += ',' + std::to_string( r.steps );
      out += ',' + std::to_string( r.seed );
      out += ',' + detail::format_double( r.avg_norm_welfare );
      out += ',' + detail::format_double( r.poa_bound );
      out += '\n';
    }
    return out;
  }
};

/// Log-spaced temperatures 10^e for `temp_points` exponents from min to max.
inline std::vector<double>
temperature_grid( const SweepSpec& spec )
{
  if( spec.temp_points == 0 )
    throw ValidationError( "temperature grid needs at least one point" );
  if( spec.temp_points > 1 && !( spec.temp_min_exp < spec.temp_max_exp ) )
    throw ValidationError( "temperature exponent min must be below max" );
  std::vector<double> grid;
  for( std::size_t i = 0; i < spec.temp_points; ++i )
  {
    const double e = spec.temp_points == 1
                       ? spec.temp_min_exp
                       : spec.temp_min_exp
                           + ( spec.temp_max_exp - spec.temp_min_exp ) * static_cast<double>( i )
                               / static_cast<double>( spec.temp_points - 1 );
    grid.push_back( std::pow( 10.0, e ) );
  }
  return grid;
}

inline std::vector<double>
distance_grid( const SweepSpec& spec )
{
  const double hi = spec.dist_max.value_or( static_cast<double>( spec.k ) - 1.0 );
  if( !( spec.dist_step > 0.0 ) )
    throw ValidationError( "distance step must be positive" );
  if( spec.dist_min < 0.0 || hi < spec.dist_min )
    throw ValidationError( "distance grid is empty or negative" );
  if( hi > static_cast<double>( spec.k ) )
    throw ValidationError( "distance grid exceeds k" );
  std::vector<double> grid;
  for( std::size_t i = 0;; ++i )
  {
    const double d = spec.dist_min + spec.dist_step * static_cast<double>( i );
    if( d > hi + 1e-9 )
      break;
    grid.push_back( std::min( d, hi ) );
  }
  return grid;
}

/// Worker count: explicit value, else COVERAGE_POA_THREADS, else hardware.
inline std::size_t
worker_count( std::size_t requested )
{
  std::size_t n = requested;
  if( n == 0 )
  {
    if( const char* env = std::getenv( "COVERAGE_POA_THREADS" ) )
    {
      const long parsed = std::strtol( env, nullptr, 10 );
      if( parsed > 0 )
        n = static_cast<std::size_t>( parsed );
    }
  }
  if( n == 0 )
    n = std::max( 1u, std::thread::hardware_concurrency() );
  return n;
}

/// Runs job(i) for i in [0, count) on a bounded pool. Jobs write to their own
/// slot, so results do not depend on scheduling. Rethrows the first failure.
template <typename Job>
void
parallel_for( std::size_t count, std::size_t workers, Job&& job )
{
  workers = std::max<std::size_t>( 1, std::min( workers, count ) );
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr       failure;
  std::mutex               failure_mutex;
  auto work = [&] {
    for( std::size_t i = next++; i < count; i = next++ )
    {
      try
      {
        job( i );
      }
      catch( ... )
      {
        std::lock_guard lock( failure_mutex );
        if( !failure )
          failure = std::current_exception();
      }
    }
  };
  if( workers == 1 )
    work();
  else
  {
    std::vector<std::jthread> pool;
    for( std::size_t w = 0; w < workers; ++w )
      pool.emplace_back( work );
  }
  if( failure )
    std::rethrow_exception( failure );
}

namespace detail {

struct Cell
{
  std::size_t distance_index;
  std::size_t temperature_index;
  std::size_t trial;
};

inline std::uint64_t
cell_stream( const Cell& c )
{
  return ( static_cast<std::uint64_t>( c.distance_index ) << 40 )
         ^ ( static_cast<std::uint64_t>( c.temperature_index ) << 20 ) ^ static_cast<std::uint64_t>( c.trial );
}

struct SweepGame
{
  Game                       game;
  std::size_t                k;
  double                     distance;
  std::optional<std::size_t> dummies;
};

inline SweepGame
generated_game( const SweepSpec& spec, double distance )
{
  return { worst_case_instance( { spec.k, distance, spec.dummies, spec.dummy_value } ), spec.k, distance,
           spec.dummies };
}

inline SweepGame
file_game( const Game& game )
{
  require_valid( game );
  double d = std::nan( "" );
  try
  {
    d = compute_distance( game ).distance;
  }
  catch( const BudgetError& )
  {}
  return { game, game.compromised_count(), d, std::nullopt };
}

inline double
bound_or_nan( std::size_t k, double distance )
{
  return std::isnan( distance ) ? distance : theorem_bound( k, distance );
}

// Runs every (game, temperature, trial) cell and aggregates per game.
inline SweepResult
run_cells( const SweepSpec& spec, const std::vector<SweepGame>& games, const std::vector<double>& temperatures )
{
  if( spec.trials == 0 )
    throw ValidationError( "trials must be at least 1" );
  if( spec.steps == 0 )
    throw ValidationError( "steps must be at least 1" );
  std::vector<Cell> cells;
  for( std::size_t d = 0; d < games.size(); ++d )
    for( std::size_t t = 0; t < temperatures.size(); ++t )
      for( std::size_t trial = 0; trial < spec.trials; ++trial )
        cells.push_back( { d, t, trial } );

  SweepResult result;
  result.rows.resize( cells.size() );
  parallel_for( cells.size(), worker_count( spec.threads ), [&]( std::size_t i ) {
    const auto& c  = cells[i];
    const auto& g  = games[c.distance_index];
    SimConfig   config;
    config.temperature = temperatures[c.temperature_index];
    config.steps       = spec.steps;
    config.seed        = derive_seed( spec.seed, cell_stream( c ) );
    const auto run     = run_lll( g.game, config );
    result.rows[i]     = SweepRow{ spec.kind,
                               g.k,
                               g.distance,
                               g.dummies,
                               config.temperature,
                               c.trial,
                               spec.steps,
                               config.seed,
                               run.average_normalized_welfare,
                               bound_or_nan( g.k, g.distance ),
                               baseline_bound( g.k ) };
  } );

  for( std::size_t d = 0; d < games.size(); ++d )
  {
    DistanceAggregate agg{ games[d].distance, 0.0, 0.0, 0.0, 0.0, bound_or_nan( games[d].k, games[d].distance ),
                           baseline_bound( games[d].k ) };
    for( std::size_t t = 0; t < temperatures.size(); ++t )
    {
      double mean = 0.0;
      for( std::size_t trial = 0; trial < spec.trials; ++trial )
        mean += result.rows[( d * temperatures.size() + t ) * spec.trials + trial].avg_norm_welfare;
      mean /= static_cast<double>( spec.trials );
      if( t == 0 || mean < agg.min_avg )
      {
        agg.min_avg            = mean;
        agg.argmin_temperature = temperatures[t];
      }
      if( t == 0 || mean > agg.max_avg )
      {
        agg.max_avg            = mean;
        agg.argmax_temperature = temperatures[t];
      }
    }
    result.aggregates.push_back( agg );
  }
  return result;
}

} // namespace detail

/// Welfare against temperature on a single game.
inline SweepResult
temperature_sweep( SweepSpec spec )
{
  spec.kind = ExperimentKind::temperature_sweep;
  const auto game = spec.game ? detail::file_game( *spec.game ) : detail::generated_game( spec, spec.distance );
  return detail::run_cells( spec, { game }, temperature_grid( spec ) );
}

/// Full temperature sweep for each distance of the grid on the worst-case
/// family; aggregates hold each distance's min and max.
inline SweepResult
distance_sweep( SweepSpec spec )
{
  spec.kind = ExperimentKind::distance_sweep;
  if( spec.game )
    throw ValidationError( "distance sweep regenerates the worst-case family and cannot take a game file" );
  std::vector<detail::SweepGame> games;
  for( double d : distance_grid( spec ) )
    games.push_back( detail::generated_game( spec, d ) );
  return detail::run_cells( spec, games, temperature_grid( spec ) );
}

/// One temperature, every distance of the grid.
inline SweepResult
fixed_temperature_sweep( SweepSpec spec )
{
  spec.kind = ExperimentKind::fixed_temperature;
  check_temperature( spec.fixed_temperature );
  std::vector<detail::SweepGame> games;
  if( spec.game )
    games.push_back( detail::file_game( *spec.game ) );
  else
    for( double d : distance_grid( spec ) )
      games.push_back( detail::generated_game( spec, d ) );
  return detail::run_cells( spec, games, { spec.fixed_temperature } );
}

inline SweepResult
run_sweep( const SweepSpec& spec )
{
  switch( spec.kind )
  {
  case ExperimentKind::temperature_sweep: return temperature_sweep( spec );
  case ExperimentKind::distance_sweep: return distance_sweep( spec );
  case ExperimentKind::fixed_temperature: return fixed_temperature_sweep( spec );
  }
  throw ValidationError( "unknown experiment" );
}

// ---------------------------------------------------------------------------
// One-shot exact analysis

struct GameAnalysis
{
  AnalysisReport equilibria;
  DistanceResult distance;
  std::size_t    k           = 0;
  double         bound       = 0.0;
  bool           bound_holds = false;
  bool           tight       = false;
};

inline GameAnalysis
analyze_game( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  GameAnalysis out;
  out.equilibria  = analyze_equilibria( game, budget );
  out.distance    = compute_distance( game, budget );
  out.k           = game.compromised_count();
  out.bound       = theorem_bound( out.k, std::min( out.distance.distance, static_cast<double>( out.k ) + 1.0 ) );
  out.bound_holds = out.equilibria.poa >= out.bound - kEpsilon;
  out.tight       = std::abs( out.equilibria.poa - out.bound ) <= kEpsilon;
  return out;
}

inline constexpr const char* kAnalysisCsvHeader =
  "agents,resources,compromised,nash_count,optimal_welfare,worst_ne_welfare,best_ne_welfare,poa,pos,distance,"
  "theorem_bound,bound_holds,tight";

inline std::string
analysis_csv( const Game& game, const GameAnalysis& a )
{
  using detail::format_double;
  std::string out = std::string( kAnalysisCsvHeader ) + "\n";
  out += std::to_string( game.agent_count() ) + ',' + std::to_string( game.resource_count() ) + ','
         + std::to_string( a.k ) + ',' + std::to_string( a.equilibria.nash_profiles.size() ) + ','
         + format_double( a.equilibria.optimal_welfare ) + ',' + format_double( a.equilibria.worst_ne_welfare ) + ','
         + format_double( a.equilibria.best_ne_welfare ) + ',' + format_double( a.equilibria.poa ) + ','
         + format_double( a.equilibria.pos ) + ',' + format_double( a.distance.distance ) + ','
         + format_double( a.bound ) + ',' + ( a.bound_holds ? "true" : "false" ) + ','
         + ( a.tight ? "true" : "false" ) + "\n";
  return out;
}

inline std::string
analysis_text( const Game& game, const GameAnalysis& a )
{
  using detail::format_double;
  std::string out;
  out += "agents:            " + std::to_string( game.agent_count() ) + " (" + std::to_string( a.k )
         + " compromised)\n";
  out += "resources:         " + std::to_string( game.resource_count() ) + "\n";
  out += "nash equilibria:   " + std::to_string( a.equilibria.nash_profiles.size() ) + "\n";
  out += "optimal welfare:   " + format_double( a.equilibria.optimal_welfare ) + "\n";
  out += "worst NE welfare:  " + format_double( a.equilibria.worst_ne_welfare ) + "\n";
  out += "best NE welfare:   " + format_double( a.equilibria.best_ne_welfare ) + "\n";
  out += "PoA:               " + format_double( a.equilibria.poa ) + "\n";
  out += "PoS:               " + format_double( a.equilibria.pos ) + "\n";
  out += "distance D(G):     " + format_double( a.distance.distance ) + "\n";
  out += "bound:             " + format_double( a.bound ) + "\n";
  out += std::string( "PoA >= bound:      " ) + ( a.bound_holds ? "yes" : "NO" ) + "\n";
  out += std::string( "tight:             " ) + ( a.tight ? "yes" : "no" ) + "\n";
  return out;
}

} // namespace covgame
