#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "covgame/game.hpp"

namespace covgame {

inline constexpr std::uint64_t kDefaultProfileBudget = 100'000'000;

/// |A_1| x ... x |A_n|, saturating at uint64 max.
inline std::uint64_t
profile_count( const Game& game )
{
  std::uint64_t product = 1;
  for( AgentIndex i = 0; i < game.agent_count(); ++i )
  {
    const std::uint64_t s = game.actions( i ).size();
    if( s != 0 && product > std::numeric_limits<std::uint64_t>::max() / s )
      return std::numeric_limits<std::uint64_t>::max();
    product *= s;
  }
  return product;
}

inline void
check_budget( const Game& game, std::uint64_t budget )
{
  const auto count = profile_count( game );
  if( count > budget )
    throw BudgetError( count, budget );
}

/// Visits every joint action in lexicographic order (agent 0 most significant,
/// each agent's actions in action-set order). `fn` receives the choice vector.
template <typename Fn>
void
for_each_profile( const Game& game, Fn&& fn )
{
  const std::size_t          n = game.agent_count();
  std::vector<std::size_t>   digit( n, 0 );
  std::vector<ResourceIndex> choices( n );
  for( AgentIndex i = 0; i < n; ++i )
    choices[i] = game.actions( i ).front();
  while( true )
  {
    fn( std::span<const ResourceIndex>( choices ) );
    std::size_t i = n;
    while( i > 0 )
    {
      --i;
      if( ++digit[i] < game.actions( i ).size() )
      {
        choices[i] = game.actions( i )[digit[i]];
        break;
      }
      digit[i]   = 0;
      choices[i] = game.actions( i ).front();
      if( i == 0 )
        return;
    }
    if( n == 0 )
      return;
  }
}

namespace detail {

// `count[r]` = number of agents on r in `choices`.
inline bool
is_nash_counted( const Game& game, std::span<const ResourceIndex> choices, std::span<const int> count )
{
  for( AgentIndex i = 0; i < game.agent_count(); ++i )
  {
    const auto mine = choices[i];
    if( game.is_compromised( i ) )
    {
      for( auto r : game.actions( i ) )
        if( game.value( r ) > game.value( mine ) + kEpsilon )
          return false;
      continue;
    }
    const double current = count[mine] == 1 ? game.value( mine ) : 0.0;
    for( auto r : game.actions( i ) )
    {
      if( r == mine )
        continue;
      const double alt = count[r] == 0 ? game.value( r ) : 0.0;
      if( alt > current + kEpsilon )
        return false;
    }
  }
  return true;
}

struct CoverageScratch
{
  explicit CoverageScratch( const Game& game )
    : count( game.resource_count(), 0 )
  {}

  void
  load( std::span<const ResourceIndex> choices )
  {
    for( auto r : choices )
      ++count[r];
  }

  void
  unload( std::span<const ResourceIndex> choices )
  {
    for( auto r : choices )
      --count[r];
  }

  double
  welfare( const Game& game ) const
  {
    double total = 0.0;
    for( ResourceIndex r = 0; r < count.size(); ++r )
      if( count[r] > 0 )
        total += game.value( r );
    return total;
  }

  std::vector<int> count;
};

} // namespace detail

/// Pure Nash check. Normal agents must not gain more than kEpsilon in marginal
/// utility by any unilateral switch; compromised agents must sit on a
/// value-maximal resource of their own action set (ties allowed).
inline bool
is_nash( const Game& game, const ActionProfile& profile )
{
  check_profile( game, profile );
  detail::CoverageScratch scratch( game );
  scratch.load( profile.choices() );
  return detail::is_nash_counted( game, profile.choices(), scratch.count );
}

inline std::vector<ActionProfile>
enumerate_nash( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  require_valid( game );
  check_budget( game, budget );
  std::vector<ActionProfile> out;
  detail::CoverageScratch    scratch( game );
  for_each_profile( game, [&]( std::span<const ResourceIndex> choices ) {
    scratch.load( choices );
    if( detail::is_nash_counted( game, choices, scratch.count ) )
      out.emplace_back( std::vector<ResourceIndex>( choices.begin(), choices.end() ) );
    scratch.unload( choices );
  } );
  return out;
}

struct OptimalProfiles
{
  std::vector<ActionProfile> profiles;
  double                     welfare = 0.0;
};

/// All welfare maximizers (within kEpsilon) and the maximal welfare.
inline OptimalProfiles
optimal_profiles( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  require_valid( game );
  check_budget( game, budget );
  OptimalProfiles         out;
  out.welfare = -1.0;
  detail::CoverageScratch scratch( game );
  for_each_profile( game, [&]( std::span<const ResourceIndex> choices ) {
    scratch.load( choices );
    const double w = scratch.welfare( game );
    scratch.unload( choices );
    if( w > out.welfare + kEpsilon )
    {
      out.profiles.clear();
      out.welfare = w;
    }
    if( w >= out.welfare - kEpsilon )
    {
      out.welfare = std::max( out.welfare, w );
      out.profiles.emplace_back( std::vector<ResourceIndex>( choices.begin(), choices.end() ) );
    }
  } );
  // A later profile may have raised the maximum by less than kEpsilon.
  std::erase_if( out.profiles, [&]( const ActionProfile& p ) {
    return detail::covered_value( game, p.choices() ) < out.welfare - kEpsilon;
  } );
  return out;
}

struct AnalysisReport
{
  std::vector<ActionProfile> nash_profiles;
  std::vector<ActionProfile> optimal_profiles;
  double                     optimal_welfare  = 0.0;
  double                     worst_ne_welfare = 0.0;
  double                     best_ne_welfare  = 0.0;
  double                     poa              = 0.0;
  double                     pos              = 0.0;
};

/// Exhaustive equilibrium analysis: NE set, optima, PoA and PoS.
inline AnalysisReport
analyze_equilibria( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  require_valid( game );
  check_budget( game, budget );
  AnalysisReport report;
  report.worst_ne_welfare = std::numeric_limits<double>::infinity();
  report.best_ne_welfare  = -1.0;
  report.optimal_welfare  = -1.0;
  detail::CoverageScratch scratch( game );
  for_each_profile( game, [&]( std::span<const ResourceIndex> choices ) {
    scratch.load( choices );
    const double w = scratch.welfare( game );
    if( detail::is_nash_counted( game, choices, scratch.count ) )
    {
      report.nash_profiles.emplace_back( std::vector<ResourceIndex>( choices.begin(), choices.end() ) );
      report.worst_ne_welfare = std::min( report.worst_ne_welfare, w );
      report.best_ne_welfare  = std::max( report.best_ne_welfare, w );
    }
    if( w > report.optimal_welfare + kEpsilon )
      report.optimal_profiles.clear();
    if( w >= report.optimal_welfare - kEpsilon )
      report.optimal_profiles.emplace_back( std::vector<ResourceIndex>( choices.begin(), choices.end() ) );
    report.optimal_welfare = std::max( report.optimal_welfare, w );
    scratch.unload( choices );
  } );
  std::erase_if( report.optimal_profiles, [&]( const ActionProfile& p ) {
    return detail::covered_value( game, p.choices() ) < report.optimal_welfare - kEpsilon;
  } );

  if( report.nash_profiles.empty() )
    throw std::logic_error( "no pure Nash equilibrium found; coverage games always have one" );
  if( report.optimal_welfare <= kEpsilon )
    throw ValidationError( "optimal welfare is zero; PoA and PoS are undefined" );
  report.poa = report.worst_ne_welfare / report.optimal_welfare;
  report.pos = report.best_ne_welfare / report.optimal_welfare;
  return report;
}

inline double
price_of_anarchy( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  return analyze_equilibria( game, budget ).poa;
}

inline double
price_of_stability( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  return analyze_equilibria( game, budget ).pos;
}

/// True iff some welfare-optimal profile is a Nash equilibrium (PoS = 1 within
/// kEpsilon). Single pass, no allocation per profile.
inline bool
has_optimal_nash( const Game& game, std::uint64_t budget = kDefaultProfileBudget )
{
  check_budget( game, budget );
  double                  best_any = -1.0;
  double                  best_ne  = -1.0;
  detail::CoverageScratch scratch( game );
  for_each_profile( game, [&]( std::span<const ResourceIndex> choices ) {
    scratch.load( choices );
    const double w = scratch.welfare( game );
    best_any       = std::max( best_any, w );
    if( w > best_ne && detail::is_nash_counted( game, choices, scratch.count ) )
      best_ne = w;
    scratch.unload( choices );
  } );
  return best_ne >= best_any - kEpsilon;
}

/// Lower bound on PoA given k compromised agents and distance D:
/// min{1/2, 1/(k + 1 - D)} for k >= 1, and 1/2 for k = 0.
inline double
theorem_bound( std::size_t k, double distance )
{
  if( !( distance >= 0.0 ) )
    throw ValidationError( "distance must be nonnegative" );
  if( distance > static_cast<double>( k ) + 1.0 + kEpsilon )
    throw ValidationError( "distance exceeds k + 1" );
  if( k == 0 )
    return 0.5;
  const double denom = static_cast<double>( k ) + 1.0 - distance;
  if( denom <= 2.0 )
    return 0.5;
  return std::min( 0.5, 1.0 / denom );
}

/// Bound without distance information: 1/(1 + k), or 1/2 when k = 0.
inline double
baseline_bound( std::size_t k )
{
  return k == 0 ? 0.5 : 1.0 / ( 1.0 + static_cast<double>( k ) );
}

} // namespace covgame
