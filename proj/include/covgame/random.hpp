#pragma once

#include <cstdint>
#include <random>

namespace covgame {

/// SplitMix64 finalizer; used to derive independent per-run seeds.
inline constexpr std::uint64_t
splitmix64( std::uint64_t x )
{
  x += 0x9E3779B97F4A7C15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94D049BB133111EBull;
  return x ^ ( x >> 31 );
}

/// Seed for stream `stream` of base seed `base`. Streams are keyed by the cell
/// coordinates of a sweep, never by thread or scheduling order.
inline constexpr std::uint64_t
derive_seed( std::uint64_t base, std::uint64_t stream )
{
  return splitmix64( splitmix64( base ) ^ splitmix64( stream + 0x632BE59BD9B4E019ull ) );
}

/// std::mt19937_64 with distribution code written out explicitly, since the
/// standard library's distributions differ between implementations. Output is
/// bit-identical on every conforming platform.
class Rng
{
public:
  explicit Rng( std::uint64_t seed )
    : engine_( seed )
  {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double
  uniform01()
  {
    return static_cast<double>( engine_() >> 11 ) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., n - 1}, unbiased (rejection sampling). n > 0.
  std::uint64_t
  index( std::uint64_t n )
  {
    const std::uint64_t limit = ( ~std::uint64_t{ 0 } ) - ( ( ~std::uint64_t{ 0 } ) % n + 1 ) % n;
    std::uint64_t       x;
    do
      x = engine_();
    while( x > limit );
    return x % n;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace covgame
