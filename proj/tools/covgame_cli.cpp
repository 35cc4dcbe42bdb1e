// Command-line front end: exact analysis, instance generation and the three
// log-linear learning sweeps. Exit codes: 0 ok, 1 I/O or internal failure,
// 2 validation error, 3 enumeration budget exceeded.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "covgame/covgame.hpp"

namespace {

struct GameOptions
{
  std::size_t k           = 10;
  double      distance    = 1.0;
  std::size_t dummies     = 3;
  double      dummy_value = 0.0;
  std::string game_file;
};

void
add_game_options( CLI::App* cmd, GameOptions& g )
{
  cmd->add_option( "--k", g.k, "Compromised agents in the worst-case instance" );
  cmd->add_option( "--distance", g.distance, "Target distance D of the worst-case instance" );
  cmd->add_option( "--dummies", g.dummies, "Dummy resources per agent" );
  cmd->add_option( "--dummy-value", g.dummy_value, "Value of each dummy resource" );
  cmd->add_option( "--game", g.game_file, "Read the game from a JSON file instead of generating it" );
}

covgame::Game
resolve_game( const GameOptions& g )
{
  if( !g.game_file.empty() )
    return covgame::load_game( g.game_file );
  return covgame::worst_case_instance( { g.k, g.distance, g.dummies, g.dummy_value } );
}

void
emit( const std::string& text, const std::string& path )
{
  if( path.empty() || path == "-" )
  {
    std::cout << text;
    return;
  }
  std::ofstream out( path, std::ios::binary );
  if( !out || !( out << text ) )
    throw std::runtime_error( "cannot write " + path );
}

std::string
sweep_summary( const covgame::SweepResult& result )
{
  using covgame::detail::format_double;
  std::string out = "distance,min_avg,argmin_temperature,max_avg,argmax_temperature,poa_bound,baseline_bound\n";
  for( const auto& a : result.aggregates )
    out += format_double( a.distance ) + ',' + format_double( a.min_avg ) + ','
           + format_double( a.argmin_temperature ) + ',' + format_double( a.max_avg ) + ','
           + format_double( a.argmax_temperature ) + ',' + format_double( a.poa_bound ) + ','
           + format_double( a.baseline_bound ) + '\n';
  return out;
}

} // namespace

int
main( int argc, char** argv )
{
  CLI::App app{ "Coverage games with compromised agents: exact PoA/PoS/distance analysis and log-linear learning "
                "sweeps" };
  app.require_subcommand( 1 );

  GameOptions   game_opts;
  std::string   out_path;
  std::string   format = "text";
  std::uint64_t budget = covgame::kDefaultProfileBudget;

  // analyze
  auto* analyze = app.add_subcommand( "analyze", "Exact NE enumeration, PoA, PoS, distance and bound check" );
  add_game_options( analyze, game_opts );
  analyze->add_option( "--format", format, "text or csv" )->check( CLI::IsMember( { "text", "csv" } ) );
  analyze->add_option( "--budget", budget, "Maximum joint profiles to enumerate" );
  analyze->add_option( "--out", out_path, "Output file (default stdout)" );

  // gen
  std::string                 gen_kind = "worst-case";
  covgame::RandomGameParams   random_params;
  auto* gen = app.add_subcommand( "gen", "Write a game file" );
  add_game_options( gen, game_opts );
  gen->add_option( "--kind", gen_kind, "worst-case or random" )->check( CLI::IsMember( { "worst-case", "random" } ) );
  gen->add_option( "--agents", random_params.agents, "Random game: agents" );
  gen->add_option( "--resources", random_params.resources, "Random game: resources" );
  gen->add_option( "--compromised", random_params.compromised, "Random game: compromised agents" );
  gen->add_option( "--density", random_params.density, "Random game: action-set density in (0, 1]" );
  gen->add_option( "--seed", random_params.seed, "Random game: seed" );
  gen->add_option( "--out", out_path, "Output file (default stdout)" );

  // sweeps
  covgame::SweepSpec spec;
  double             dist_max = -1.0;
  std::string        sweep_format = "csv";
  auto add_sweep_options = [&]( CLI::App* cmd ) {
    add_game_options( cmd, game_opts );
    cmd->add_option( "--temp-min-exp", spec.temp_min_exp, "Lowest temperature exponent (base 10)" );
    cmd->add_option( "--temp-max-exp", spec.temp_max_exp, "Highest temperature exponent (base 10)" );
    cmd->add_option( "--temp-points", spec.temp_points, "Number of log-spaced temperatures" );
    cmd->add_option( "--dist-min", spec.dist_min, "Smallest distance of the grid" );
    cmd->add_option( "--dist-max", dist_max, "Largest distance of the grid (default k - 1)" );
    cmd->add_option( "--dist-step", spec.dist_step, "Distance grid step" );
    cmd->add_option( "--steps", spec.steps, "Log-linear learning steps per run" );
    cmd->add_option( "--seed", spec.seed, "Base seed" );
    cmd->add_option( "--trials", spec.trials, "Independent runs per cell" );
    cmd->add_option( "--threads", spec.threads, "Worker threads (default COVERAGE_POA_THREADS or all cores)" );
    cmd->add_option( "--out", out_path, "Output file (default stdout)" );
    cmd->add_option( "--format", sweep_format, "csv (rows) or summary (per-distance min/max)" )
      ->check( CLI::IsMember( { "csv", "summary" } ) );
  };
  auto* sweep_temp = app.add_subcommand( "sweep-temp", "Average welfare across a temperature grid" );
  add_sweep_options( sweep_temp );
  auto* sweep_dist = app.add_subcommand( "sweep-dist", "Temperature sweep for every distance of the grid" );
  add_sweep_options( sweep_dist );
  auto* fixed_temp = app.add_subcommand( "fixed-temp", "One temperature across the distance grid" );
  add_sweep_options( fixed_temp );
  fixed_temp->add_option( "--temperature", spec.fixed_temperature, "Fixed temperature" );

  try
  {
    app.parse( argc, argv );
  }
  catch( const CLI::CallForHelp& e )
  {
    return app.exit( e );
  }
  catch( const CLI::ParseError& e )
  {
    app.exit( e );
    return 2;
  }

  try
  {
    if( analyze->parsed() )
    {
      const auto game = resolve_game( game_opts );
      covgame::GameAnalysis result;
      try
      {
        result = covgame::analyze_game( game, budget );
      }
      catch( const covgame::BudgetError& e )
      {
        std::cerr << "error: " << e.what() << "; use sweep-temp to study this instance by simulation\n";
        return 3;
      }
      emit( format == "csv" ? covgame::analysis_csv( game, result ) : covgame::analysis_text( game, result ),
            out_path );
      return 0;
    }
    if( gen->parsed() )
    {
      const auto game = gen_kind == "random" ? covgame::random_instance( random_params ) : resolve_game( game_opts );
      emit( covgame::game_to_string( game ), out_path );
      return 0;
    }

    spec.k           = game_opts.k;
    spec.distance    = game_opts.distance;
    spec.dummies     = game_opts.dummies;
    spec.dummy_value = game_opts.dummy_value;
    if( !game_opts.game_file.empty() )
      spec.game = covgame::load_game( game_opts.game_file );
    if( dist_max >= 0.0 )
      spec.dist_max = dist_max;
    if( sweep_temp->parsed() )
      spec.kind = covgame::ExperimentKind::temperature_sweep;
    else if( sweep_dist->parsed() )
      spec.kind = covgame::ExperimentKind::distance_sweep;
    else
      spec.kind = covgame::ExperimentKind::fixed_temperature;
    const auto result = covgame::run_sweep( spec );
    emit( sweep_format == "summary" ? sweep_summary( result ) : result.to_csv(), out_path );
    return 0;
  }
  catch( const covgame::ValidationError& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch( const covgame::BudgetError& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  catch( const std::exception& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
