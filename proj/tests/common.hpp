#pragma once

#include "igmm/kiss.hpp"
#include "igmm/verify.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testing
{

inline std::string fixture_path( std::string const& name )
{
  return std::string( FIXTURE_DIR ) + "/" + name;
}

inline std::string read_fixture( std::string const& name )
{
  std::ifstream f( fixture_path( name ) );
  if ( !f )
    throw std::runtime_error( "missing fixture " + name );
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline igmm::Igmm fixture( std::string const& name )
{
  return igmm::parse_machine( read_fixture( name ) );
}

/// Union of cubes written as `0`/`1`/`-` strings.
inline igmm::ValuationSet vset( unsigned k, std::initializer_list<char const*> cubes )
{
  igmm::ValuationSet s( k );
  for ( auto c : cubes )
    s |= igmm::cube_to_set( igmm::Cube::parse( c, k ), k );
  return s;
}

/// Shared random corpus: up to 5 states, 1-2 input and output props,
/// densities 0.5 and 1.0.
inline igmm::RandomIgmmParams corpus_params( std::uint64_t seed )
{
  igmm::RandomIgmmParams p;
  p.seed = seed;
  p.n_states = static_cast<igmm::StateId>( 1 + seed % 5 );
  p.n_in_props = 1 + ( seed / 5 ) % 2;
  p.n_out_props = 1 + ( seed / 10 ) % 2;
  p.density = ( seed / 20 ) % 2 ? 1.0 : 0.5;
  p.output_bias = 0.5;
  return p;
}

} // namespace testing
