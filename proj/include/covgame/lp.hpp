#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <optional>
#include <vector>

namespace covgame::lp {

struct Constraint
{
  std::vector<double> coeffs; // one per variable
  double              rhs = 0.0;
};

struct Solution
{
  std::vector<double> x;
  double              objective = 0.0;
};

/// Solves  min c.x  s.t.  G x >= h,  x >= 0  for c >= 0.
///
/// Works on the dual  max h.y  s.t.  G^T y <= c,  y >= 0, whose slack basis is
/// feasible because c >= 0, so a single-phase tableau simplex with Bland's rule
/// suffices. Returns nullopt when the primal is infeasible (dual unbounded).
/// Sized for the handful of variables that arise per target profile.
inline std::optional<Solution>
minimize_covering( const std::vector<double>& cost, const std::vector<Constraint>& rows, double tol = 1e-12 )
{
  const std::size_t nvar = cost.size();
  const std::size_t ncon = rows.size();
  // Dual tableau: nvar rows, columns = ncon structural + nvar slacks.
  const std::size_t width = ncon + nvar;
  std::vector<std::vector<double>> tab( nvar, std::vector<double>( width, 0.0 ) );
  std::vector<double>              rhs( cost );
  std::vector<std::size_t>         basis( nvar );
  for( std::size_t i = 0; i < nvar; ++i )
  {
    for( std::size_t j = 0; j < ncon; ++j )
      tab[i][j] = rows[j].coeffs[i];
    tab[i][ncon + i] = 1.0;
    basis[i]         = ncon + i;
  }
  // Reduced costs for maximization (entering when positive).
  std::vector<double> reduced( width, 0.0 );
  for( std::size_t j = 0; j < ncon; ++j )
    reduced[j] = rows[j].rhs;
  double objective = 0.0;

  for( std::size_t iter = 0; iter < 100000; ++iter )
  {
    std::size_t enter = width;
    for( std::size_t j = 0; j < width; ++j )
      if( reduced[j] > tol )
      {
        enter = j;
        break;
      }
    if( enter == width )
    {
      Solution sol;
      sol.x.resize( nvar );
      for( std::size_t i = 0; i < nvar; ++i )
        sol.x[i] = std::max( 0.0, -reduced[ncon + i] );
      sol.objective = objective;
      return sol;
    }

    std::size_t leave = nvar;
    double      best  = 0.0;
    for( std::size_t i = 0; i < nvar; ++i )
    {
      if( tab[i][enter] <= tol )
        continue;
      const double ratio = rhs[i] / tab[i][enter];
      if( leave == nvar || ratio < best - tol || ( ratio <= best + tol && basis[i] < basis[leave] ) )
      {
        leave = i;
        best  = ratio;
      }
    }
    if( leave == nvar )
      return std::nullopt;

    const double pivot = tab[leave][enter];
    for( auto& a : tab[leave] )
      a /= pivot;
    rhs[leave] /= pivot;
    for( std::size_t i = 0; i < nvar; ++i )
    {
      if( i == leave || tab[i][enter] == 0.0 )
        continue;
      const double f = tab[i][enter];
      for( std::size_t j = 0; j < width; ++j )
        tab[i][j] -= f * tab[leave][j];
      rhs[i] -= f * rhs[leave];
    }
    const double f = reduced[enter];
    for( std::size_t j = 0; j < width; ++j )
      reduced[j] -= f * tab[leave][j];
    objective += f * rhs[leave];
    basis[leave] = enter;
  }
  throw std::runtime_error( "simplex did not terminate" );
}

} // namespace covgame::lp
