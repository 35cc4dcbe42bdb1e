#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covgame/errors.hpp"

namespace covgame {

/// Absolute tolerance for every value comparison (ties, argmax, NE checks).
inline constexpr double kEpsilon = 1e-9;

using ResourceIndex = std::size_t;
using AgentIndex    = std::size_t;

struct Resource
{
  std::string id;
  double      value = 0.0;

  friend bool operator==( const Resource&, const Resource& ) = default;
};

struct Agent
{
  std::string                id;
  std::vector<ResourceIndex> actions;
  bool                       compromised = false;

  friend bool operator==( const Agent&, const Agent& ) = default;
};

/// Single-selection coverage game: every agent picks exactly one resource from
/// its action set; welfare is the summed value of the distinct covered resources.
///
/// Construction does not validate; call `validate` (or `require_valid`) before
/// trusting a game from an external source. Immutable once built.
class Game
{
public:
  Game() = default;

  Game( std::vector<Resource> resources, std::vector<Agent> agents )
    : resources_( std::move( resources ) )
    , agents_( std::move( agents ) )
  {
    values_.reserve( resources_.size() );
    for( const auto& r : resources_ )
      values_.push_back( r.value );
    for( AgentIndex i = 0; i < agents_.size(); ++i )
      if( agents_[i].compromised )
        compromised_.push_back( i );
  }

  std::size_t resource_count() const { return resources_.size(); }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t compromised_count() const { return compromised_.size(); }

  double                   value( ResourceIndex r ) const { return values_[r]; }
  std::span<const double>  values() const { return values_; }
  const Resource&          resource( ResourceIndex r ) const { return resources_[r]; }
  const Agent&             agent( AgentIndex i ) const { return agents_[i]; }
  const std::vector<Resource>& resources() const { return resources_; }
  const std::vector<Agent>&    agents() const { return agents_; }

  std::span<const ResourceIndex> actions( AgentIndex i ) const { return agents_[i].actions; }
  bool                           is_compromised( AgentIndex i ) const { return agents_[i].compromised; }
  std::span<const AgentIndex>    compromised_agents() const { return compromised_; }

  /// Same agents and action sets, new resource values.
  Game
  with_values( std::span<const double> values ) const
  {
    if( values.size() != resources_.size() )
      throw ValidationError( "value vector has " + std::to_string( values.size() ) + " entries, game has "
                             + std::to_string( resources_.size() ) + " resources" );
    auto resources = resources_;
    for( std::size_t r = 0; r < resources.size(); ++r )
      resources[r].value = values[r];
    return Game( std::move( resources ), agents_ );
  }

  friend bool
  operator==( const Game& a, const Game& b )
  {
    return a.resources_ == b.resources_ && a.agents_ == b.agents_;
  }

private:
  std::vector<Resource>   resources_;
  std::vector<Agent>      agents_;
  std::vector<double>     values_;
  std::vector<AgentIndex> compromised_;
};

/// One resource choice per agent.
class ActionProfile
{
public:
  ActionProfile() = default;
  explicit ActionProfile( std::vector<ResourceIndex> choices )
    : choices_( std::move( choices ) )
  {}

  std::size_t                    size() const { return choices_.size(); }
  ResourceIndex                  operator[]( AgentIndex i ) const { return choices_[i]; }
  std::span<const ResourceIndex> choices() const { return choices_; }

  ActionProfile
  with_choice( AgentIndex i, ResourceIndex r ) const
  {
    auto next = choices_;
    next.at( i ) = r;
    return ActionProfile( std::move( next ) );
  }

  friend bool operator==( const ActionProfile&, const ActionProfile& ) = default;
  friend auto operator<=>( const ActionProfile&, const ActionProfile& ) = default;

private:
  std::vector<ResourceIndex> choices_;
};

inline bool
contains( std::span<const ResourceIndex> set, ResourceIndex r )
{
  return std::find( set.begin(), set.end(), r ) != set.end();
}

/// Throws ValidationError naming the first offending agent.
inline void
check_profile( const Game& game, const ActionProfile& profile )
{
  if( profile.size() != game.agent_count() )
    throw ValidationError( "profile has " + std::to_string( profile.size() ) + " choices, game has "
                           + std::to_string( game.agent_count() ) + " agents" );
  for( AgentIndex i = 0; i < profile.size(); ++i )
    if( profile[i] >= game.resource_count() || !contains( game.actions( i ), profile[i] ) )
      throw ValidationError( "agent " + std::to_string( i ) + " chose resource " + std::to_string( profile[i] )
                             + " outside its action set" );
}

inline void
check_agent( const Game& game, AgentIndex agent )
{
  if( agent >= game.agent_count() )
    throw ValidationError( "agent index " + std::to_string( agent ) + " out of range" );
}

namespace detail {

// Sum of values of distinct resources in `choices`, skipping position `skip`.
// `mark` is scratch space of size resource_count(), all false on entry and exit.
inline double
covered_value( const Game& game, std::span<const ResourceIndex> choices, std::vector<char>& mark,
               std::size_t skip = static_cast<std::size_t>( -1 ) )
{
  double total = 0.0;
  for( std::size_t i = 0; i < choices.size(); ++i )
  {
    if( i == skip || mark[choices[i]] )
      continue;
    mark[choices[i]] = 1;
    total += game.value( choices[i] );
  }
  for( std::size_t i = 0; i < choices.size(); ++i )
    mark[choices[i]] = 0;
  return total;
}

inline double
covered_value( const Game& game, std::span<const ResourceIndex> choices,
               std::size_t skip = static_cast<std::size_t>( -1 ) )
{
  std::vector<char> mark( game.resource_count(), 0 );
  return covered_value( game, choices, mark, skip );
}

} // namespace detail

/// W(a): total value of the distinct resources selected in `profile`.
inline double
welfare( const Game& game, const ActionProfile& profile )
{
  check_profile( game, profile );
  return detail::covered_value( game, profile.choices() );
}

/// Welfare with agent `agent` removed, i.e. W(emptyset, a_{-i}).
inline double
welfare_without( const Game& game, AgentIndex agent, const ActionProfile& profile )
{
  check_profile( game, profile );
  check_agent( game, agent );
  return detail::covered_value( game, profile.choices(), agent );
}

/// Marginal-contribution utility W(a) - W(emptyset, a_{-i}).
inline double
marginal_utility( const Game& game, AgentIndex agent, const ActionProfile& profile )
{
  return welfare( game, profile ) - welfare_without( game, agent, profile );
}

/// Single-selection shortcut for the marginal utility: v of the chosen resource
/// if nobody else covers it, 0 otherwise. Agrees with `marginal_utility`.
inline double
marginal_utility_fast( const Game& game, AgentIndex agent, const ActionProfile& profile )
{
  check_profile( game, profile );
  check_agent( game, agent );
  const auto mine = profile[agent];
  for( AgentIndex j = 0; j < profile.size(); ++j )
    if( j != agent && profile[j] == mine )
      return 0.0;
  return game.value( mine );
}

/// Utility of an agent that cannot observe anyone else: the raw value of its choice.
inline double
compromised_utility( const Game& game, AgentIndex agent, const ActionProfile& profile )
{
  check_profile( game, profile );
  check_agent( game, agent );
  if( !game.is_compromised( agent ) )
    throw ValidationError( "agent " + std::to_string( agent ) + " is not compromised" );
  return game.value( profile[agent] );
}

inline double
utility( const Game& game, AgentIndex agent, const ActionProfile& profile )
{
  check_agent( game, agent );
  return game.is_compromised( agent ) ? compromised_utility( game, agent, profile )
                                      : marginal_utility_fast( game, agent, profile );
}

// ---------------------------------------------------------------------------
// Validation

enum class Check
{
  structure,
  nonnegativity,
  regularity,
};

enum class Severity
{
  error,
  warning,
};

struct Issue
{
  Check       check;
  Severity    severity;
  std::string message;
};

struct ValidationReport
{
  std::vector<Issue> issues;

  bool
  ok() const
  {
    return std::none_of( issues.begin(), issues.end(),
                         []( const Issue& i ) { return i.severity == Severity::error; } );
  }

  bool
  passed( Check check ) const
  {
    return std::none_of( issues.begin(), issues.end(), [&]( const Issue& i ) { return i.check == check; } );
  }

  std::string
  summary() const
  {
    std::string out;
    for( const auto& i : issues )
    {
      if( !out.empty() )
        out += "; ";
      out += ( i.severity == Severity::error ? "error: " : "warning: " ) + i.message;
    }
    return out;
  }
};

/// Reports structural integrity and nonnegativity as errors. The regularity
/// condition (a value-1 resource inside some action set) is only a warning:
/// perturbed games exceed 1 and dummy resources sit at 0.
inline ValidationReport
validate( const Game& game )
{
  ValidationReport report;
  auto error = [&]( Check c, std::string msg ) { report.issues.push_back( { c, Severity::error, std::move( msg ) } ); };

  if( game.agent_count() == 0 )
    error( Check::structure, "game has no agents" );
  for( AgentIndex i = 0; i < game.agent_count(); ++i )
  {
    const auto& a = game.agent( i );
    if( a.actions.empty() )
      error( Check::structure, "agent " + std::to_string( i ) + " has an empty action set" );
    for( auto r : a.actions )
      if( r >= game.resource_count() )
        error( Check::structure,
               "agent " + std::to_string( i ) + " references nonexistent resource " + std::to_string( r ) );
    auto sorted = a.actions;
    std::sort( sorted.begin(), sorted.end() );
    if( std::adjacent_find( sorted.begin(), sorted.end() ) != sorted.end() )
      error( Check::structure, "agent " + std::to_string( i ) + " lists a resource twice" );
  }

  for( ResourceIndex r = 0; r < game.resource_count(); ++r )
  {
    const double v = game.value( r );
    if( !std::isfinite( v ) || v < 0.0 )
      error( Check::nonnegativity, "resource " + std::to_string( r ) + " has invalid value " + std::to_string( v ) );
  }

  bool regular = false;
  for( AgentIndex i = 0; i < game.agent_count() && !regular; ++i )
    for( auto r : game.actions( i ) )
      if( r < game.resource_count() && std::abs( game.value( r ) - 1.0 ) <= kEpsilon )
        regular = true;
  if( !regular )
    report.issues.push_back(
      { Check::regularity, Severity::warning, "no value-1 resource is available to any agent" } );
  return report;
}

/// Throws ValidationError if `validate` reports any error.
inline void
require_valid( const Game& game )
{
  auto report = validate( game );
  if( !report.ok() )
    throw ValidationError( "invalid game: " + report.summary() );
}

} // namespace covgame
