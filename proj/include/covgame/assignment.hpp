#pragma once

#include <limits>
#include <vector>

#include "covgame/game.hpp"

namespace covgame {

struct OptimalCoverage
{
  double        welfare = 0.0;
  ActionProfile profile;
};

/// Maximum welfare via max-weight bipartite assignment. An optimal coverage
/// profile is a matching of agents to distinct resources plus agents whose
/// choice duplicates coverage, so each agent gets a private zero-weight "idle"
/// column. O(n^2 (m + n)); used where exhaustive enumeration is too large.
inline OptimalCoverage
optimal_coverage( const Game& game )
{
  require_valid( game );
  const std::size_t n    = game.agent_count();
  const std::size_t m    = game.resource_count();
  const std::size_t cols = m + n;

  double total = 1.0;
  for( auto v : game.values() )
    total += v;
  const double forbidden = 4.0 * total;

  // cost[i][j], 1-indexed, minimization.
  std::vector<std::vector<double>> cost( n + 1, std::vector<double>( cols + 1, forbidden ) );
  for( AgentIndex i = 0; i < n; ++i )
  {
    for( auto r : game.actions( i ) )
      cost[i + 1][r + 1] = -game.value( r );
    cost[i + 1][m + i + 1] = 0.0;
  }

  const double        inf = std::numeric_limits<double>::infinity();
  std::vector<double> u( n + 1, 0.0 ), v( cols + 1, 0.0 );
  std::vector<std::size_t> match( cols + 1, 0 ), way( cols + 1, 0 );
  for( std::size_t i = 1; i <= n; ++i )
  {
    match[0]        = i;
    std::size_t j0  = 0;
    std::vector<double> minv( cols + 1, inf );
    std::vector<char>   used( cols + 1, 0 );
    do
    {
      used[j0]           = 1;
      const std::size_t i0 = match[j0];
      double            delta = inf;
      std::size_t       j1    = 0;
      for( std::size_t j = 1; j <= cols; ++j )
      {
        if( used[j] )
          continue;
        const double cur = cost[i0][j] - u[i0] - v[j];
        if( cur < minv[j] )
        {
          minv[j] = cur;
          way[j]  = j0;
        }
        if( minv[j] < delta )
        {
          delta = minv[j];
          j1    = j;
        }
      }
      for( std::size_t j = 0; j <= cols; ++j )
      {
        if( used[j] )
        {
          u[match[j]] += delta;
          v[j] -= delta;
        }
        else
          minv[j] -= delta;
      }
      j0 = j1;
    } while( match[j0] != 0 );
    do
    {
      const std::size_t j1 = way[j0];
      match[j0]            = match[j1];
      j0                   = j1;
    } while( j0 != 0 );
  }

  std::vector<ResourceIndex> choices( n, 0 );
  std::vector<char>          assigned( n, 0 );
  for( std::size_t j = 1; j <= m; ++j )
    if( match[j] != 0 )
    {
      choices[match[j] - 1]  = j - 1;
      assigned[match[j] - 1] = 1;
    }
  // Idle agents duplicate coverage; any action keeps welfare unchanged.
  for( AgentIndex i = 0; i < n; ++i )
    if( !assigned[i] )
      choices[i] = game.actions( i ).front();

  OptimalCoverage out;
  out.profile = ActionProfile( std::move( choices ) );
  out.welfare = detail::covered_value( game, out.profile.choices() );
  return out;
}

inline double
optimal_welfare( const Game& game )
{
  return optimal_coverage( game ).welfare;
}

} // namespace covgame
