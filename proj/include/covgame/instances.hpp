#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "covgame/game.hpp"
#include "covgame/random.hpp"

namespace covgame {

/// Worst-case family: one normal agent restricted to R0, k compromised agents
/// each choosing between R0 (value 1) and a private resource valued 1 - D/k,
/// optionally padded with per-agent dummy resources.
struct WorstCaseParams
{
  std::size_t k           = 1;
  double      distance    = 0.0;
  std::size_t dummies     = 0;
  double      dummy_value = 0.0;
};

inline void
check_params( const WorstCaseParams& p )
{
  if( p.k == 0 )
    throw ValidationError( "worst-case instance needs k >= 1" );
  if( !( p.distance >= 0.0 ) || p.distance > static_cast<double>( p.k ) )
    throw ValidationError( "distance must lie in [0, k]" );
  if( !( p.dummy_value >= 0.0 ) )
    throw ValidationError( "dummy value must be nonnegative" );
}

/// Resources are ordered R0, R1..Rk, then each agent's dummies in agent order.
/// Agent 0 is the normal agent; agents 1..k are compromised.
inline Game
worst_case_instance( const WorstCaseParams& p )
{
  check_params( p );
  const std::size_t n = p.k + 1;
  std::vector<Resource> resources;
  resources.push_back( { "R0", 1.0 } );
  const double private_value = 1.0 - p.distance / static_cast<double>( p.k );
  for( std::size_t i = 1; i <= p.k; ++i )
    resources.push_back( { "R" + std::to_string( i ), private_value } );

  std::vector<Agent> agents( n );
  for( AgentIndex i = 0; i < n; ++i )
  {
    agents[i].id          = "a" + std::to_string( i );
    agents[i].compromised = i > 0;
    agents[i].actions.push_back( 0 );
    if( i > 0 )
      agents[i].actions.push_back( i );
  }
  for( AgentIndex i = 0; i < n; ++i )
    for( std::size_t d = 0; d < p.dummies; ++d )
    {
      agents[i].actions.push_back( resources.size() );
      resources.push_back( { "Z" + std::to_string( i ) + "_" + std::to_string( d ), p.dummy_value } );
    }
  return Game( std::move( resources ), std::move( agents ) );
}

/// Random property-test games. Values are uniform on [0, 1) with one resource
/// forced to 1; each resource joins each action set with probability
/// `density`. Empty action sets get one uniformly chosen resource and the
/// value-1 resource is added to a random agent if nobody can reach it.
struct RandomGameParams
{
  std::size_t   agents      = 2;
  std::size_t   resources   = 3;
  std::size_t   compromised = 1;
  double        density     = 0.5;
  std::uint64_t seed        = 0;
};

inline Game
random_instance( const RandomGameParams& p )
{
  if( p.agents == 0 || p.resources == 0 )
    throw ValidationError( "random game needs at least one agent and one resource" );
  if( p.compromised > p.agents )
    throw ValidationError( "more compromised agents than agents" );
  if( !( p.density > 0.0 ) || p.density > 1.0 )
    throw ValidationError( "density must lie in (0, 1]" );

  Rng rng( p.seed );
  std::vector<Resource> resources( p.resources );
  for( ResourceIndex r = 0; r < p.resources; ++r )
    resources[r] = { "r" + std::to_string( r ), rng.uniform01() };
  const ResourceIndex top = rng.index( p.resources );
  resources[top].value    = 1.0;

  std::vector<AgentIndex> order( p.agents );
  for( AgentIndex i = 0; i < p.agents; ++i )
    order[i] = i;
  for( std::size_t i = 0; i < p.compromised; ++i )
    std::swap( order[i], order[i + rng.index( p.agents - i )] );

  std::vector<Agent> agents( p.agents );
  for( std::size_t i = 0; i < p.compromised; ++i )
    agents[order[i]].compromised = true;
  bool reachable = false;
  for( AgentIndex i = 0; i < p.agents; ++i )
  {
    agents[i].id = "a" + std::to_string( i );
    for( ResourceIndex r = 0; r < p.resources; ++r )
      if( rng.uniform01() < p.density )
        agents[i].actions.push_back( r );
    if( agents[i].actions.empty() )
      agents[i].actions.push_back( rng.index( p.resources ) );
    reachable = reachable || contains( agents[i].actions, top );
  }
  if( !reachable )
  {
    auto& actions = agents[rng.index( p.agents )].actions;
    actions.insert( std::upper_bound( actions.begin(), actions.end(), top ), top );
  }
  return Game( std::move( resources ), std::move( agents ) );
}

// ---------------------------------------------------------------------------
// Game file format (JSON):
//   { "resources": [ {"id": "...", "value": 0.5}, ... ],
//     "agents":    [ {"id": "...", "actions": ["..."], "compromised": false}, ... ] }
// Unknown fields are rejected.

inline nlohmann::ordered_json
to_json( const Game& game )
{
  nlohmann::ordered_json doc;
  doc["resources"] = nlohmann::ordered_json::array();
  for( const auto& r : game.resources() )
    doc["resources"].push_back( { { "id", r.id }, { "value", r.value } } );
  doc["agents"] = nlohmann::ordered_json::array();
  for( const auto& a : game.agents() )
  {
    nlohmann::ordered_json actions = nlohmann::ordered_json::array();
    for( auto r : a.actions )
      actions.push_back( game.resource( r ).id );
    doc["agents"].push_back( { { "id", a.id }, { "actions", actions }, { "compromised", a.compromised } } );
  }
  return doc;
}

namespace detail {

inline void
require_keys( const nlohmann::json& obj, const std::string& where, std::initializer_list<const char*> keys )
{
  if( !obj.is_object() )
    throw ParseError( where + ": expected an object" );
  for( const char* k : keys )
    if( !obj.contains( k ) )
      throw ParseError( where + ": missing field '" + k + "'" );
  for( const auto& [key, _] : obj.items() )
  {
    bool known = false;
    for( const char* k : keys )
      known = known || key == k;
    if( !known )
      throw ParseError( where + ": unknown field '" + key + "'" );
  }
}

} // namespace detail

inline Game
game_from_json( const nlohmann::json& doc )
{
  detail::require_keys( doc, "game", { "resources", "agents" } );
  if( !doc["resources"].is_array() )
    throw ParseError( "resources: expected an array" );
  if( !doc["agents"].is_array() )
    throw ParseError( "agents: expected an array" );

  std::vector<Resource>                resources;
  std::map<std::string, ResourceIndex> index;
  for( std::size_t r = 0; r < doc["resources"].size(); ++r )
  {
    const auto&       item  = doc["resources"][r];
    const std::string where = "resources[" + std::to_string( r ) + "]";
    detail::require_keys( item, where, { "id", "value" } );
    if( !item["id"].is_string() )
      throw ParseError( where + ".id: expected a string" );
    if( !item["value"].is_number() )
      throw ParseError( where + ".value: expected a number" );
    const auto   id    = item["id"].get<std::string>();
    const double value = item["value"].get<double>();
    if( !( value >= 0.0 ) || !std::isfinite( value ) )
      throw ParseError( where + ".value: must be a finite nonnegative number" );
    if( !index.emplace( id, r ).second )
      throw ParseError( where + ".id: duplicate resource id '" + id + "'" );
    resources.push_back( { id, value } );
  }

  std::vector<Agent> agents;
  std::map<std::string, AgentIndex> agent_ids;
  for( std::size_t i = 0; i < doc["agents"].size(); ++i )
  {
    const auto&       item  = doc["agents"][i];
    const std::string where = "agents[" + std::to_string( i ) + "]";
    detail::require_keys( item, where, { "id", "actions", "compromised" } );
    if( !item["id"].is_string() )
      throw ParseError( where + ".id: expected a string" );
    if( !item["compromised"].is_boolean() )
      throw ParseError( where + ".compromised: expected a boolean" );
    if( !item["actions"].is_array() )
      throw ParseError( where + ".actions: expected an array" );
    Agent agent;
    agent.id          = item["id"].get<std::string>();
    agent.compromised = item["compromised"].get<bool>();
    if( !agent_ids.emplace( agent.id, i ).second )
      throw ParseError( where + ".id: duplicate agent id '" + agent.id + "'" );
    for( const auto& a : item["actions"] )
    {
      if( !a.is_string() )
        throw ParseError( where + ".actions: expected resource id strings" );
      auto it = index.find( a.get<std::string>() );
      if( it == index.end() )
        throw ParseError( where + ".actions: unknown resource '" + a.get<std::string>() + "'" );
      agent.actions.push_back( it->second );
    }
    agents.push_back( std::move( agent ) );
  }

  Game game( std::move( resources ), std::move( agents ) );
  auto report = validate( game );
  if( !report.ok() )
    throw ParseError( "invalid game: " + report.summary() );
  return game;
}

inline Game
game_from_string( const std::string& text )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( text );
  }
  catch( const nlohmann::json::parse_error& e )
  {
    throw ParseError( std::string( "malformed game file: " ) + e.what() );
  }
  return game_from_json( doc );
}

inline std::string
game_to_string( const Game& game )
{
  return to_json( game ).dump( 2 ) + "\n";
}

inline void
save_game( const Game& game, const std::filesystem::path& path )
{
  std::ofstream out( path );
  if( !out )
    throw std::runtime_error( "cannot open " + path.string() + " for writing" );
  out << game_to_string( game );
  if( !out )
    throw std::runtime_error( "failed writing " + path.string() );
}

inline Game
load_game( const std::filesystem::path& path )
{
  std::ifstream in( path );
  if( !in )
    throw std::runtime_error( "cannot open " + path.string() );
  std::stringstream buffer;
  buffer << in.rdbuf();
  try
  {
    return game_from_string( buffer.str() );
  }
  catch( const ParseError& e )
  {
    throw ParseError( path.string() + ": " + e.what() );
  }
}

} // namespace covgame
