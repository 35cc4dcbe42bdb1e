#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace covgame {

/// Input rejected: malformed game, invalid profile, bad parameters.
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive scan would exceed the configured profile budget.
class BudgetError : public std::runtime_error
{
public:
  BudgetError( std::uint64_t profiles, std::uint64_t budget )
    : std::runtime_error( "instance too large: joint action space has " + std::to_string( profiles )
                          + " profiles (budget " + std::to_string( budget ) + ")" )
    , profile_count( profiles )
    , budget_limit( budget )
  {}

  std::uint64_t profile_count;
  std::uint64_t budget_limit;
};

/// Game file could not be parsed.
class ParseError : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

} // namespace covgame
