#include "igmm/boolset.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace igmm
{

namespace
{

std::uint32_t prop_mask( unsigned k )
{
  return k >= 32 ? ~std::uint32_t{ 0 } : ( std::uint32_t{ 1 } << k ) - 1u;
}

std::size_t word_count( unsigned k )
{
  std::size_t const bits = std::size_t{ 1 } << k;
  return ( bits + 63 ) / 64;
}

/* Enumerate the valuations of cube (care, value) within k propositions. */
template<typename Fn>
void for_each_in_cube( std::uint32_t care, std::uint32_t value, unsigned k, Fn&& fn )
{
  std::uint32_t const free = prop_mask( k ) & ~care;
  std::uint32_t sub = 0;
  do
  {
    fn( value | sub );
    sub = ( sub - free ) & free;
  } while ( sub != 0 );
}

} // namespace

PropSet::PropSet( std::vector<std::string> names, unsigned max_props )
    : names_( std::move( names ) )
{
  if ( max_props > kHardMaxProps )
    throw std::invalid_argument( "proposition cap exceeds " + std::to_string( kHardMaxProps ) );
  if ( names_.size() > max_props )
    throw std::invalid_argument( "too many propositions: " + std::to_string( names_.size() ) + " > " +
                                 std::to_string( max_props ) );
  std::set<std::string> seen;
  for ( auto const& n : names_ )
  {
    if ( n.empty() )
      throw std::invalid_argument( "empty proposition name" );
    if ( !seen.insert( n ).second )
      throw std::invalid_argument( "duplicate proposition name '" + n + "'" );
  }
}

PropSet PropSet::numbered( unsigned k, std::string const& prefix, unsigned max_props )
{
  std::vector<std::string> names;
  for ( unsigned j = 0; j < k; ++j )
    names.push_back( prefix + std::to_string( j ) );
  return PropSet( std::move( names ), max_props );
}

Cube::Cube( std::uint32_t care_mask, std::uint32_t value_mask )
    : care( care_mask ), value( value_mask )
{
  if ( ( value & ~care ) != 0 )
    throw std::invalid_argument( "cube value set outside its care mask" );
}

Cube Cube::minterm( unsigned k, Valuation v )
{
  return Cube( prop_mask( k ), v & prop_mask( k ) );
}

std::string Cube::to_string( unsigned k ) const
{
  std::string s( k, '-' );
  for ( unsigned j = 0; j < k; ++j )
    if ( care >> j & 1u )
      s[j] = ( value >> j & 1u ) ? '1' : '0';
  return s;
}

Cube Cube::parse( std::string const& text, unsigned k )
{
  if ( text.size() != k )
    throw std::invalid_argument( "cube '" + text + "' does not have " + std::to_string( k ) + " positions" );
  Cube c;
  for ( unsigned j = 0; j < k; ++j )
  {
    switch ( text[j] )
    {
    case '0':
      c.care |= 1u << j;
      break;
    case '1':
      c.care |= 1u << j;
      c.value |= 1u << j;
      break;
    case '-':
      break;
    default:
      throw std::invalid_argument( std::string( "invalid cube character '" ) + text[j] + "'" );
    }
  }
  return c;
}

ValuationSet::ValuationSet( unsigned k )
    : arity_( k )
{
  if ( k > kHardMaxProps )
    throw std::invalid_argument( "valuation set arity exceeds " + std::to_string( kHardMaxProps ) );
  words_.assign( word_count( k ), 0 );
}

ValuationSet ValuationSet::full( unsigned k )
{
  ValuationSet s( k );
  std::fill( s.words_.begin(), s.words_.end(), ~std::uint64_t{ 0 } );
  s.trim();
  return s;
}

ValuationSet ValuationSet::singleton( unsigned k, Valuation v )
{
  ValuationSet s( k );
  s.insert( v );
  return s;
}

void ValuationSet::trim()
{
  std::size_t const bits = std::size_t{ 1 } << arity_;
  if ( bits < 64 )
    words_[0] &= ( std::uint64_t{ 1 } << bits ) - 1u;
}

void ValuationSet::check_arity( ValuationSet const& other ) const
{
  if ( arity_ != other.arity_ )
    throw std::invalid_argument( "valuation set arity mismatch: " + std::to_string( arity_ ) + " vs " +
                                 std::to_string( other.arity_ ) );
}

bool ValuationSet::contains( Valuation v ) const
{
  if ( v >= universe_size() )
    return false;
  return words_[v / 64] >> ( v % 64 ) & 1u;
}

void ValuationSet::insert( Valuation v )
{
  if ( v >= universe_size() )
    throw std::out_of_range( "valuation " + std::to_string( v ) + " out of range" );
  words_[v / 64] |= std::uint64_t{ 1 } << ( v % 64 );
}

void ValuationSet::erase( Valuation v )
{
  if ( v >= universe_size() )
    throw std::out_of_range( "valuation " + std::to_string( v ) + " out of range" );
  words_[v / 64] &= ~( std::uint64_t{ 1 } << ( v % 64 ) );
}

bool ValuationSet::is_empty() const
{
  return std::all_of( words_.begin(), words_.end(), []( auto w ) { return w == 0; } );
}

bool ValuationSet::is_full() const
{
  return count() == universe_size();
}

std::size_t ValuationSet::count() const
{
  std::size_t n = 0;
  for ( auto w : words_ )
    n += static_cast<std::size_t>( std::popcount( w ) );
  return n;
}

bool ValuationSet::is_subset_of( ValuationSet const& other ) const
{
  check_arity( other );
  for ( std::size_t i = 0; i < words_.size(); ++i )
    if ( words_[i] & ~other.words_[i] )
      return false;
  return true;
}

bool ValuationSet::intersects( ValuationSet const& other ) const
{
  check_arity( other );
  for ( std::size_t i = 0; i < words_.size(); ++i )
    if ( words_[i] & other.words_[i] )
      return true;
  return false;
}

ValuationSet& ValuationSet::operator&=( ValuationSet const& other )
{
  check_arity( other );
  for ( std::size_t i = 0; i < words_.size(); ++i )
    words_[i] &= other.words_[i];
  return *this;
}

ValuationSet& ValuationSet::operator|=( ValuationSet const& other )
{
  check_arity( other );
  for ( std::size_t i = 0; i < words_.size(); ++i )
    words_[i] |= other.words_[i];
  return *this;
}

ValuationSet ValuationSet::operator&( ValuationSet const& other ) const
{
  ValuationSet r = *this;
  r &= other;
  return r;
}

ValuationSet ValuationSet::operator|( ValuationSet const& other ) const
{
  ValuationSet r = *this;
  r |= other;
  return r;
}

ValuationSet ValuationSet::operator~() const
{
  ValuationSet r = *this;
  for ( auto& w : r.words_ )
    w = ~w;
  r.trim();
  return r;
}

std::vector<Valuation> ValuationSet::elements() const
{
  std::vector<Valuation> out;
  for ( std::size_t i = 0; i < words_.size(); ++i )
  {
    auto w = words_[i];
    while ( w )
    {
      auto const b = static_cast<unsigned>( std::countr_zero( w ) );
      out.push_back( static_cast<Valuation>( i * 64 + b ) );
      w &= w - 1u;
    }
  }
  return out;
}

Valuation ValuationSet::first() const
{
  for ( std::size_t i = 0; i < words_.size(); ++i )
    if ( words_[i] )
      return static_cast<Valuation>( i * 64 + static_cast<unsigned>( std::countr_zero( words_[i] ) ) );
  throw std::invalid_argument( "first() of an empty valuation set" );
}

ValuationSet cube_to_set( Cube const& c, unsigned k )
{
  if ( k > kHardMaxProps || ( ( c.care | c.value ) & ~prop_mask( k ) ) != 0 )
    throw std::invalid_argument( "cube does not fit arity " + std::to_string( k ) );
  ValuationSet s( k );
  for_each_in_cube( c.care, c.value, k, [&]( Valuation v ) { s.insert( v ); } );
  return s;
}

namespace
{

/* Smallest cube enclosing the members of `s` inside cube (care, value),
   together with the number of such members. */
struct Enclosure
{
  Cube cube;
  std::size_t members = 0;
};

Enclosure enclose( ValuationSet const& s, std::uint32_t care, std::uint32_t value, unsigned k )
{
  std::uint32_t all_and = prop_mask( k );
  std::uint32_t all_or = 0;
  std::size_t members = 0;
  for_each_in_cube( care, value, k, [&]( Valuation v ) {
    if ( s.contains( v ) )
    {
      all_and &= v;
      all_or |= v;
      ++members;
    }
  } );
  Enclosure e;
  e.members = members;
  if ( members > 0 )
  {
    std::uint32_t const fixed = ~( all_and ^ all_or ) & prop_mask( k );
    e.cube = Cube( fixed, all_and & fixed );
  }
  return e;
}

bool cofactors_differ( ValuationSet const& s, std::uint32_t care, std::uint32_t value, unsigned k, unsigned j )
{
  std::uint32_t const bit = 1u << j;
  bool differ = false;
  for_each_in_cube( care | bit, value, k, [&]( Valuation v ) {
    if ( !differ && s.contains( v ) != s.contains( v | bit ) )
      differ = true;
  } );
  return differ;
}

void shannon_cover( ValuationSet const& s, std::uint32_t care, std::uint32_t value, unsigned k,
                    std::vector<Cube>& out )
{
  auto const e = enclose( s, care, value, k );
  if ( e.members == 0 )
    return;
  auto const free_in_enclosure = static_cast<unsigned>( k - std::popcount( e.cube.care ) );
  if ( e.members == ( std::size_t{ 1 } << free_in_enclosure ) )
  {
    out.push_back( e.cube );
    return;
  }
  for ( unsigned j = 0; j < k; ++j )
  {
    std::uint32_t const bit = 1u << j;
    if ( ( care & bit ) || !cofactors_differ( s, care, value, k, j ) )
      continue;
    shannon_cover( s, care | bit, value, k, out );
    shannon_cover( s, care | bit, value | bit, k, out );
    return;
  }
  // Unreachable: a non-cube residual always has a splitting proposition.
  throw std::logic_error( "disjoint_cube_cover: no splitting proposition" );
}

} // namespace

std::vector<Cube> disjoint_cube_cover( ValuationSet const& s )
{
  if ( s.is_empty() )
    throw std::invalid_argument( "disjoint_cube_cover of an empty set" );
  std::vector<Cube> out;
  shannon_cover( s, 0, 0, s.arity(), out );
  return out;
}

Cube first_cube( ValuationSet const& s )
{
  return disjoint_cube_cover( s ).front();
}

bool is_cube( ValuationSet const& s )
{
  if ( s.is_empty() )
    return false;
  auto const e = enclose( s, 0, 0, s.arity() );
  return e.members == ( std::size_t{ 1 } << ( s.arity() - std::popcount( e.cube.care ) ) );
}

std::string to_string( ValuationSet const& s )
{
  if ( s.is_empty() )
    return "{}";
  std::string out = "{";
  bool first = true;
  for ( auto const& c : disjoint_cube_cover( s ) )
  {
    if ( !first )
      out += '|';
    out += c.to_string( s.arity() );
    first = false;
  }
  return out + "}";
}

} // namespace igmm
