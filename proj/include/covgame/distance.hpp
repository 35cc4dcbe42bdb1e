#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "covgame/assignment.hpp"
#include "covgame/equilibria.hpp"
#include "covgame/game.hpp"
#include "covgame/lp.hpp"

namespace covgame {

/// Nonnegative increment per resource.
struct PerturbationVector
{
  std::vector<double> increments;

  double
  l1() const
  {
    return std::accumulate( increments.begin(), increments.end(), 0.0 );
  }

  /// Resources with a strictly positive increment.
  std::vector<ResourceIndex>
  support() const
  {
    std::vector<ResourceIndex> out;
    for( ResourceIndex r = 0; r < increments.size(); ++r )
      if( increments[r] > 0.0 )
        out.push_back( r );
    return out;
  }
};

struct DistanceResult
{
  double             distance = 0.0;
  PerturbationVector perturbation;
  /// Profile that is both welfare-optimal and a Nash equilibrium once the
  /// perturbation is applied.
  ActionProfile witness_profile;
};

/// G_p: same game with values v + p.
inline Game
apply_perturbation( const Game& game, const PerturbationVector& p )
{
  if( p.increments.size() != game.resource_count() )
    throw ValidationError( "perturbation has " + std::to_string( p.increments.size() ) + " entries, game has "
                           + std::to_string( game.resource_count() ) + " resources" );
  std::vector<double> values( game.values().begin(), game.values().end() );
  for( ResourceIndex r = 0; r < values.size(); ++r )
  {
    if( !( p.increments[r] >= 0.0 ) || !std::isfinite( p.increments[r] ) )
      throw ValidationError( "perturbation entry " + std::to_string( r ) + " is negative or not finite" );
    values[r] += p.increments[r];
  }
  return game.with_values( values );
}

namespace detail {

// Least p >= 0 supported on the compromised agents' choices in `target` such
// that each compromised agent's choice attains the max of v + p over its action
// set. Difference constraints with zero-weight cycles, so Bellman-Ford style
// relaxation from p = 0 reaches the least fixed point within |K| + 1 passes.
inline PerturbationVector
repair_compromised( const Game& game, const ActionProfile& target )
{
  PerturbationVector p{ std::vector<double>( game.resource_count(), 0.0 ) };
  const auto         compromised = game.compromised_agents();
  const std::size_t  max_passes  = compromised.size() + 2;
  for( std::size_t pass = 0; pass <= max_passes; ++pass )
  {
    bool changed = false;
    for( auto j : compromised )
    {
      const auto s    = target[j];
      double     best = 0.0;
      for( auto r : game.actions( j ) )
        best = std::max( best, game.value( r ) + p.increments[r] );
      const double gap = best - ( game.value( s ) + p.increments[s] );
      if( gap > 0.0 )
      {
        p.increments[s] += gap;
        changed = true;
      }
    }
    if( !changed )
      return p;
  }
  throw std::logic_error( "perturbation repair did not reach a fixed point" );
}

inline std::vector<ResourceIndex>
distinct_sorted( std::span<const ResourceIndex> choices )
{
  std::vector<ResourceIndex> s( choices.begin(), choices.end() );
  std::sort( s.begin(), s.end() );
  s.erase( std::unique( s.begin(), s.end() ), s.end() );
  return s;
}

// Minimal |p|_1 making `target` optimal and a NE of G_p, or nullopt if no
// such p exists or it cannot beat `cutoff`. Only resources covered by `target`
// are worth raising. Welfare-optimality constraints are generated lazily from
// the assignment solver on G_p.
inline std::optional<DistanceResult>
solve_target( const Game& game, const ActionProfile& target, double cutoff )
{
  const auto        covered = distinct_sorted( target.choices() );
  const std::size_t nvar    = covered.size();
  auto var_of = [&]( ResourceIndex r ) -> std::optional<std::size_t> {
    auto it = std::lower_bound( covered.begin(), covered.end(), r );
    if( it == covered.end() || *it != r )
      return std::nullopt;
    return static_cast<std::size_t>( it - covered.begin() );
  };

  std::vector<lp::Constraint> rows;
  for( auto j : game.compromised_agents() )
  {
    const auto s  = target[j];
    const auto vs = *var_of( s );
    for( auto r : game.actions( j ) )
    {
      if( r == s )
        continue;
      lp::Constraint c{ std::vector<double>( nvar, 0.0 ), game.value( r ) - game.value( s ) };
      c.coeffs[vs] = 1.0;
      if( auto vr = var_of( r ) )
        c.coeffs[*vr] = -1.0;
      rows.push_back( std::move( c ) );
    }
  }

  const double target_welfare = covered_value( game, target.choices() );
  auto add_optimality_row = [&]( const ActionProfile& other ) {
    lp::Constraint c{ std::vector<double>( nvar, 1.0 ), covered_value( game, other.choices() ) - target_welfare };
    for( auto r : other.choices() )
      if( auto v = var_of( r ) )
        c.coeffs[*v] = 0.0;
    for( const auto& existing : rows )
      if( existing.coeffs == c.coeffs && existing.rhs >= c.rhs - 1e-15 )
        return false;
    rows.push_back( std::move( c ) );
    return true;
  };
  add_optimality_row( optimal_coverage( game ).profile );

  const std::vector<double> ones( nvar, 1.0 );
  for( std::size_t iter = 0; iter < 10000; ++iter )
  {
    auto sol = lp::minimize_covering( ones, rows );
    if( !sol || sol->objective >= cutoff )
      return std::nullopt;

    PerturbationVector p{ std::vector<double>( game.resource_count(), 0.0 ) };
    for( std::size_t k = 0; k < nvar; ++k )
      p.increments[covered[k]] = sol->x[k];
    const Game perturbed = apply_perturbation( game, p );
    const auto best      = optimal_coverage( perturbed );
    const double mine    = covered_value( perturbed, target.choices() );
    if( mine >= best.welfare - 1e-12 || !add_optimality_row( best.profile ) )
    {
      if( mine < best.welfare - kEpsilon )
        return std::nullopt;
      return DistanceResult{ p.l1(), std::move( p ), target };
    }
  }
  throw std::logic_error( "constraint generation did not converge" );
}

} // namespace detail

/// Distance restricted to perturbations that only raise resources chosen by
/// compromised agents in a welfare-optimal profile of the unperturbed game.
/// Minimizes over all optimal profiles. Always an upper bound on the exact
/// distance; equal to it on the worst-case family.
inline DistanceResult
restricted_distance( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  const auto optima = optimal_profiles( game, budget );
  std::optional<DistanceResult> best;
  for( const auto& profile : optima.profiles )
  {
    auto p = detail::repair_compromised( game, profile );
    const double d = p.l1();
    if( !best || d < best->distance - kEpsilon )
      best = DistanceResult{ d, std::move( p ), profile };
    if( best->distance <= 0.0 )
      break;
  }
  return *best;
}

/// Exact D(G): the least |p|_1 over p >= 0 such that G_p has a welfare-optimal
/// Nash equilibrium.
///
/// Starts from `restricted_distance` as an upper bound U, then scans every
/// profile b with W(b) > W* - U (cheaper targets are impossible because raising
/// b's resources by |p|_1 must close the welfare gap) and solves the target LP.
/// A cheaper target is taken only if it beats U by more than kEpsilon.
inline DistanceResult
compute_distance( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  require_valid( game );
  check_budget( game, budget );
  if( game.compromised_count() == 0 )
    return DistanceResult{ 0.0, PerturbationVector{ std::vector<double>( game.resource_count(), 0.0 ) },
                           optimal_coverage( game ).profile };

  DistanceResult best = restricted_distance( game, budget );
  if( best.distance <= kEpsilon )
    return best;

  const double optimum = optimal_welfare( game );
  // Targets are equivalent when they cover the same resources and the
  // compromised agents make the same choices.
  std::set<std::vector<ResourceIndex>> seen;
  std::vector<ActionProfile>           candidates;
  for_each_profile( game, [&]( std::span<const ResourceIndex> choices ) {
    const double w = detail::covered_value( game, choices );
    if( w <= optimum - best.distance + kEpsilon )
      return;
    auto key = detail::distinct_sorted( choices );
    key.push_back( static_cast<ResourceIndex>( -1 ) );
    for( auto j : game.compromised_agents() )
      key.push_back( choices[j] );
    if( seen.insert( std::move( key ) ).second )
      candidates.emplace_back( std::vector<ResourceIndex>( choices.begin(), choices.end() ) );
  } );

  for( const auto& target : candidates )
  {
    if( detail::covered_value( game, target.choices() ) <= optimum - best.distance + kEpsilon )
      continue;
    if( auto r = detail::solve_target( game, target, best.distance - kEpsilon ) )
      best = std::move( *r );
  }
  return best;
}

struct OracleResult
{
  double             distance = 0.0;
  PerturbationVector perturbation;
  /// Number of resources the grid varies (every resource in some action set).
  std::size_t support_size = 0;
};

inline constexpr std::uint64_t kOracleGridLimit = 1'000'000;

/// Brute-force distance: grid search over perturbations of every reachable
/// resource with entries in {0, step, ..., v_max}, checking PoS(G_p) = 1 by
/// exhaustive enumeration. Grid points are visited in order of increasing
/// |p|_1, so the first feasible one is the grid minimum. Independent of the
/// solver's support restriction and LP; tiny instances only.
inline OracleResult
distance_oracle( const Game& game, double grid_step, std::uint64_t grid_limit = kOracleGridLimit )
{
  require_valid( game );
  if( !( grid_step > 0.0 ) )
    throw ValidationError( "grid step must be positive" );

  std::vector<ResourceIndex> reachable;
  for( ResourceIndex r = 0; r < game.resource_count(); ++r )
    for( AgentIndex i = 0; i < game.agent_count(); ++i )
      if( contains( game.actions( i ), r ) )
      {
        reachable.push_back( r );
        break;
      }

  const double      vmax  = *std::max_element( game.values().begin(), game.values().end() );
  const std::size_t units = static_cast<std::size_t>( std::floor( vmax / grid_step + 1e-9 ) );
  const std::size_t dims  = reachable.size();
  double            grid  = 1.0;
  for( std::size_t d = 0; d < dims; ++d )
    grid *= static_cast<double>( units + 1 );
  if( grid > static_cast<double>( grid_limit ) )
    throw ValidationError( "oracle grid of " + std::to_string( static_cast<std::uint64_t>( grid ) )
                           + " points exceeds the limit of " + std::to_string( grid_limit ) );

  std::vector<std::size_t> parts( dims, 0 );
  std::vector<double>      values( game.values().begin(), game.values().end() );

  // Enumerates compositions of `total` into `dims` parts each <= units.
  auto feasible_at = [&]( std::size_t total ) -> bool {
    auto recurse = [&]( auto& self, std::size_t d, std::size_t remaining ) -> bool {
      if( d + 1 == dims )
      {
        if( remaining > units )
          return false;
        parts[d] = remaining;
        for( std::size_t k = 0; k < dims; ++k )
          values[reachable[k]] = game.value( reachable[k] ) + static_cast<double>( parts[k] ) * grid_step;
        return has_optimal_nash( game.with_values( values ) );
      }
      for( std::size_t u = 0; u <= std::min( units, remaining ); ++u )
      {
        parts[d] = u;
        if( self( self, d + 1, remaining - u ) )
          return true;
      }
      return false;
    };
    if( dims == 0 )
      return has_optimal_nash( game );
    return recurse( recurse, 0, total );
  };

  for( std::size_t total = 0; total <= units * dims; ++total )
  {
    if( feasible_at( total ) )
    {
      OracleResult out;
      out.support_size = dims;
      out.perturbation.increments.assign( game.resource_count(), 0.0 );
      for( std::size_t k = 0; k < dims; ++k )
        out.perturbation.increments[reachable[k]] = static_cast<double>( parts[k] ) * grid_step;
      out.distance = static_cast<double>( total ) * grid_step;
      return out;
    }
  }
  throw std::runtime_error( "no grid perturbation yields an optimal equilibrium" );
}

} // namespace covgame
