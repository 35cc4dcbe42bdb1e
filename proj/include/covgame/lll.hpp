#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <optional>
#include <vector>

#include "covgame/assignment.hpp"
#include "covgame/game.hpp"
#include "covgame/random.hpp"

namespace covgame {

struct SimConfig
{
  double        temperature      = 1.0;
  std::uint64_t steps            = 200'000;
  std::uint64_t seed             = 0;
  double        burn_in_fraction = 0.0;
  bool          record_trace     = false;
  /// a(0); drawn uniformly per agent from the seed when absent.
  std::optional<ActionProfile> initial_profile;
};

struct SimRun
{
  /// Mean of W(a(t)) / W* over the post-burn-in steps.
  double              average_normalized_welfare = 0.0;
  double              optimal_welfare            = 0.0;
  ActionProfile       final_profile;
  std::vector<double> trace;
};

inline void
check_temperature( double temperature )
{
  if( !( temperature > 0.0 ) || !std::isfinite( temperature ) )
    throw ValidationError( "temperature must be positive and finite" );
}

namespace detail {

// Fills `weights` with exp((u(a) - max u) / T) over agent i's action set and
// returns their sum. `count` excludes nobody; agent i's own choice is discounted.
inline double
logit_weights( const Game& game, AgentIndex i, ResourceIndex current, std::span<const int> count, double temperature,
               std::vector<double>& weights )
{
  const auto actions = game.actions( i );
  weights.resize( actions.size() );
  double top = -std::numeric_limits<double>::infinity();
  for( std::size_t a = 0; a < actions.size(); ++a )
  {
    const auto r = actions[a];
    double     u;
    if( game.is_compromised( i ) )
      u = game.value( r );
    else
      u = ( count[r] - ( r == current ? 1 : 0 ) ) == 0 ? game.value( r ) : 0.0;
    weights[a] = u;
    top        = std::max( top, u );
  }
  double total = 0.0;
  for( auto& w : weights )
  {
    w = std::exp( ( w - top ) / temperature );
    total += w;
  }
  return total;
}

} // namespace detail

/// Log-linear learning state: current profile plus per-resource coverage
/// counts so each revision costs O(|A_i|).
class LogLinearLearner
{
public:
  LogLinearLearner( const Game& game, ActionProfile start, double temperature )
    : game_( game )
    , temperature_( temperature )
    , choices_( start.choices().begin(), start.choices().end() )
    , count_( game.resource_count(), 0 )
  {
    check_temperature( temperature );
    check_profile( game, start );
    for( auto r : choices_ )
      ++count_[r];
    refresh_welfare();
  }

  /// Wakes one agent uniformly at random and redraws its action from the
  /// logit distribution over its full action set (current action included).
  void
  step( Rng& rng )
  {
    const AgentIndex i       = rng.index( game_.agent_count() );
    const auto       current = choices_[i];
    const double     total   = detail::logit_weights( game_, i, current, count_, temperature_, weights_ );
    const double     x       = rng.uniform01() * total;
    const auto       actions = game_.actions( i );
    std::size_t      pick    = actions.size() - 1;
    double           acc     = 0.0;
    for( std::size_t a = 0; a < actions.size(); ++a )
    {
      acc += weights_[a];
      if( x < acc )
      {
        pick = a;
        break;
      }
    }
    const auto next = actions[pick];
    if( next == current )
      return;
    choices_[i] = next;
    const bool vacated = --count_[current] == 0;
    const bool entered = count_[next]++ == 0;
    if( vacated || entered )
      refresh_welfare();
  }

  double        welfare() const { return welfare_; }
  ActionProfile profile() const { return ActionProfile( choices_ ); }

private:
  void
  refresh_welfare()
  {
    welfare_ = 0.0;
    for( ResourceIndex r = 0; r < count_.size(); ++r )
      if( count_[r] > 0 )
        welfare_ += game_.value( r );
  }

  const Game&                game_;
  double                     temperature_;
  std::vector<ResourceIndex> choices_;
  std::vector<int>           count_;
  std::vector<double>        weights_;
  double                     welfare_ = 0.0;
};

/// Probability of each action in agent i's action set (action-set order) when
/// agent i revises at temperature T against `profile`.
inline std::vector<double>
choice_distribution( const Game& game, const ActionProfile& profile, AgentIndex agent, double temperature )
{
  check_temperature( temperature );
  check_profile( game, profile );
  check_agent( game, agent );
  std::vector<int> count( game.resource_count(), 0 );
  for( auto r : profile.choices() )
    ++count[r];
  std::vector<double> weights;
  const double        total = detail::logit_weights( game, agent, profile[agent], count, temperature, weights );
  for( auto& w : weights )
    w /= total;
  return weights;
}

/// One log-linear learning revision.
inline ActionProfile
lll_step( const Game& game, const ActionProfile& profile, double temperature, Rng& rng )
{
  LogLinearLearner learner( game, profile, temperature );
  learner.step( rng );
  return learner.profile();
}

inline ActionProfile
random_profile( const Game& game, Rng& rng )
{
  std::vector<ResourceIndex> choices( game.agent_count() );
  for( AgentIndex i = 0; i < game.agent_count(); ++i )
    choices[i] = game.actions( i )[rng.index( game.actions( i ).size() )];
  return ActionProfile( std::move( choices ) );
}

/// Runs `steps` revisions from a(0) and averages W(a(t)) / W* over
/// t = 1..steps after the burn-in window. Deterministic in (game, config).
inline SimRun
run_lll( const Game& game, const SimConfig& config )
{
  require_valid( game );
  check_temperature( config.temperature );
  if( config.steps == 0 )
    throw ValidationError( "steps must be at least 1" );
  if( !( config.burn_in_fraction >= 0.0 ) || config.burn_in_fraction >= 1.0 )
    throw ValidationError( "burn-in fraction must lie in [0, 1)" );

  SimRun run;
  run.optimal_welfare = optimal_welfare( game );
  if( run.optimal_welfare <= kEpsilon )
    throw ValidationError( "optimal welfare is zero; normalized welfare is undefined" );

  Rng  rng( config.seed );
  auto start = config.initial_profile ? *config.initial_profile : random_profile( game, rng );
  LogLinearLearner learner( game, std::move( start ), config.temperature );

  const auto first = static_cast<std::uint64_t>(
    std::floor( config.burn_in_fraction * static_cast<double>( config.steps ) ) );
  if( config.record_trace )
    run.trace.reserve( config.steps );
  double sum = 0.0;
  for( std::uint64_t t = 0; t < config.steps; ++t )
  {
    learner.step( rng );
    const double normalized = learner.welfare() / run.optimal_welfare;
    if( config.record_trace )
      run.trace.push_back( normalized );
    if( t >= first )
      sum += normalized;
  }
  run.average_normalized_welfare = sum / static_cast<double>( config.steps - first );
  run.final_profile              = learner.profile();
  return run;
}

} // namespace covgame
