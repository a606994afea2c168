#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace igmm
{

/// Default cap on the number of propositions in a set.  Valuation sets are
/// dense bitsets of 2^k bits, so this bounds their size.
inline constexpr unsigned kDefaultMaxProps = 16;

/// Absolute cap, whatever the configured limit.
inline constexpr unsigned kHardMaxProps = 24;

/// Index of a valuation: bit j is the value of proposition j.
using Valuation = std::uint32_t;

/// An ordered list of distinct proposition names.
class PropSet
{
public:
  PropSet() = default;
  explicit PropSet( std::vector<std::string> names, unsigned max_props = kDefaultMaxProps );

  /// Propositions named `<prefix>0 .. <prefix>(k-1)`.
  static PropSet numbered( unsigned k, std::string const& prefix, unsigned max_props = kDefaultMaxProps );

  unsigned arity() const { return static_cast<unsigned>( names_.size() ); }
  std::uint32_t num_valuations() const { return std::uint32_t{ 1 } << arity(); }
  std::vector<std::string> const& names() const { return names_; }

  bool operator==( PropSet const& other ) const = default;

private:
  std::vector<std::string> names_;
};

/// A conjunction of literals.  Positions outside `care` are free.
struct Cube
{
  std::uint32_t care = 0;
  std::uint32_t value = 0;

  Cube() = default;
  Cube( std::uint32_t care_mask, std::uint32_t value_mask );

  static Cube top() { return {}; }
  static Cube minterm( unsigned k, Valuation v );

  bool contains( Valuation v ) const { return ( v & care ) == value; }
  bool intersects( Cube const& other ) const { return ( ( value ^ other.value ) & care & other.care ) == 0; }

  /// `0`/`1`/`-` per position, leftmost character is proposition 0.
  std::string to_string( unsigned k ) const;
  static Cube parse( std::string const& text, unsigned k );

  bool operator==( Cube const& ) const = default;
};

/// A subset of the valuations over k propositions, stored as a 2^k bitset.
class ValuationSet
{
public:
  ValuationSet() : ValuationSet( 0 ) {}
  explicit ValuationSet( unsigned k );

  static ValuationSet empty( unsigned k ) { return ValuationSet( k ); }
  static ValuationSet full( unsigned k );
  static ValuationSet singleton( unsigned k, Valuation v );

  unsigned arity() const { return arity_; }
  std::uint32_t universe_size() const { return std::uint32_t{ 1 } << arity_; }

  bool contains( Valuation v ) const;
  void insert( Valuation v );
  void erase( Valuation v );

  bool is_empty() const;
  bool is_full() const;
  std::size_t count() const;
  bool is_subset_of( ValuationSet const& other ) const;
  bool intersects( ValuationSet const& other ) const;

  ValuationSet operator&( ValuationSet const& other ) const;
  ValuationSet operator|( ValuationSet const& other ) const;
  ValuationSet operator~() const;
  ValuationSet& operator&=( ValuationSet const& other );
  ValuationSet& operator|=( ValuationSet const& other );

  /// Members in increasing order.
  std::vector<Valuation> elements() const;
  /// Lowest member; the set must be non-empty.
  Valuation first() const;

  std::vector<std::uint64_t> const& words() const { return words_; }

  bool operator==( ValuationSet const& ) const = default;
  auto operator<=>( ValuationSet const& other ) const = default;

private:
  void check_arity( ValuationSet const& other ) const;
  void trim();

  unsigned arity_ = 0;
  std::vector<std::uint64_t> words_;
};

ValuationSet cube_to_set( Cube const& c, unsigned k );

/// Pairwise disjoint cubes whose union is `s`.  Deterministic: Shannon
/// expansion on the lowest free proposition whose cofactors differ, emitting
/// a cube as soon as the residual set is one.  Throws on an empty set.
std::vector<Cube> disjoint_cube_cover( ValuationSet const& s );

/// Head of `disjoint_cube_cover(s)`.
Cube first_cube( ValuationSet const& s );

/// True when `s` is exactly the expansion of one cube.
bool is_cube( ValuationSet const& s );

/// Human readable form, e.g. `{10|01}`; the empty set prints as `{}`.
std::string to_string( ValuationSet const& s );

} // namespace igmm
