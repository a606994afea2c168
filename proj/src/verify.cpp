#include "igmm/verify.hpp"

#include "igmm/relations.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>

namespace igmm
{

namespace
{

void require_same_props( Igmm const& a, Igmm const& b )
{
  if ( !( a.inputs() == b.inputs() ) || !( a.outputs() == b.outputs() ) )
    throw std::invalid_argument( "machines have different proposition sets" );
}

} // namespace

SpecCheck check_specialization( Igmm const& impl, Igmm const& spec )
{
  require_same_props( impl, spec );
  // An undefined impl transition moves to a virtual sink that allows every
  // output forever; index `sink` stands for it.
  StateId const sink = impl.num_states();
  auto const ns = spec.num_states();
  auto key = [&]( StateId a, StateId b ) { return static_cast<std::size_t>( a ) * ns + b; };
  auto const top = ValuationSet::full( impl.outputs().arity() );

  // Parent links rebuild the word of a failing pair.
  struct Visit
  {
    std::size_t parent;
    Valuation input;
  };
  constexpr std::size_t kRoot = ~std::size_t{ 0 };
  std::vector<std::optional<Visit>> seen( static_cast<std::size_t>( sink + 1 ) * ns );
  std::deque<std::pair<StateId, StateId>> queue;
  seen[key( impl.init(), spec.init() )] = Visit{ kRoot, 0 };
  queue.emplace_back( impl.init(), spec.init() );

  while ( !queue.empty() )
  {
    auto const [p, q] = queue.front();
    queue.pop_front();
    for ( Valuation i = 0; i < spec.num_inputs(); ++i )
    {
      auto const& se = spec.entry( q, i );
      if ( !se )
        continue;
      bool const defined = p != sink && impl.is_defined( p, i );
      auto const& out = defined ? impl.entry( p, i )->out : top;
      if ( !out.is_subset_of( se->out ) )
      {
        SpecCheck res;
        res.ok = false;
        res.impl_state = p;
        res.spec_state = q;
        res.output = ( out & ~se->out ).first();
        res.word.push_back( i );
        for ( auto k = key( p, q ); seen[k]->parent != kRoot; k = seen[k]->parent )
          res.word.push_back( seen[k]->input );
        std::reverse( res.word.begin(), res.word.end() );
        return res;
      }
      StateId const pt = defined ? impl.delta( p, i ) : sink;
      auto const next = key( pt, se->target );
      if ( !seen[next] )
      {
        seen[next] = Visit{ key( p, q ), i };
        queue.emplace_back( pt, se->target );
      }
    }
  }
  return {};
}

bool check_bisimilar( Igmm const& a, Igmm const& b )
{
  require_same_props( a, b );
  auto const na = a.num_states();
  Igmm u( a.inputs(), a.outputs(), na + b.num_states() );
  for ( StateId q = 0; q < na; ++q )
    for ( Valuation i = 0; i < a.num_inputs(); ++i )
      if ( auto const& e = a.entry( q, i ) )
        u.set_transition( q, i, e->target, e->out );
  for ( StateId q = 0; q < b.num_states(); ++q )
    for ( Valuation i = 0; i < b.num_inputs(); ++i )
      if ( auto const& e = b.entry( q, i ) )
        u.set_transition( na + q, i, na + e->target, e->out );
  auto const block = bisimulation_partition( u );
  return block[a.init()] == block[na + b.init()];
}

bool is_variation( Igmm const& m, StateId a, StateId b )
{
  auto const n = m.num_states();
  std::vector<bool> seen( static_cast<std::size_t>( n ) * n, false );
  std::deque<std::pair<StateId, StateId>> queue{ { a, b } };
  seen[static_cast<std::size_t>( a ) * n + b] = true;
  while ( !queue.empty() )
  {
    auto const [p, q] = queue.front();
    queue.pop_front();
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      auto const& ep = m.entry( p, i );
      auto const& eq = m.entry( q, i );
      if ( !ep || !eq )
        continue;
      if ( !ep->out.intersects( eq->out ) )
        return false;
      auto const k = static_cast<std::size_t>( ep->target ) * n + eq->target;
      if ( !seen[k] )
      {
        seen[k] = true;
        queue.emplace_back( ep->target, eq->target );
      }
    }
  }
  return true;
}

std::string describe( SpecCheck const& res, Igmm const& impl )
{
  if ( res.ok )
    return "ok";
  auto const ki = impl.inputs().arity();
  auto const ko = impl.outputs().arity();
  std::string s = "word:";
  for ( auto i : res.word )
    s += " " + Cube::minterm( ki, i ).to_string( ki );
  if ( res.output )
    s += " output: " + Cube::minterm( ko, *res.output ).to_string( ko );
  return s;
}

// ---------------------------------------------------------------- brute force

namespace
{

using Mask = std::uint32_t;

struct BruteForce
{
  Igmm const& m;
  std::vector<Mask> classes;        // candidate variation classes
  std::vector<std::vector<Mask>> succ; // succ[c][i]
  std::vector<Mask> chosen;

  bool closed() const
  {
    for ( auto c : chosen )
    {
      auto const idx = static_cast<std::size_t>( std::find( classes.begin(), classes.end(), c ) - classes.begin() );
      for ( auto s : succ[idx] )
        if ( s && std::none_of( chosen.begin(), chosen.end(), [s]( Mask d ) { return ( s & ~d ) == 0; } ) )
          return false;
    }
    return true;
  }

  bool search( std::size_t from, std::size_t slots, Mask covered )
  {
    Mask const all = ( Mask{ 1 } << m.num_states() ) - 1;
    if ( covered == all && closed() )
      return true;
    if ( slots == 0 )
      return false;
    // The lowest uncovered state must be picked up by some later class.
    Mask const need = covered == all ? 0 : ( ~covered & all ) & ( ~( ~covered & all ) + 1 );
    for ( auto c = from; c < classes.size(); ++c )
    {
      if ( need && std::none_of( classes.begin() + static_cast<std::ptrdiff_t>( c ), classes.end(), [need]( Mask d ) { return d & need; } ) )
        return false;
      chosen.push_back( classes[c] );
      bool const ok = search( c + 1, slots - 1, covered | classes[c] );
      chosen.pop_back();
      if ( ok )
        return true;
    }
    return false;
  }
};

} // namespace

StateId brute_force_min_size( Igmm const& m, StateId cap )
{
  auto const n = m.num_states();
  if ( n > kBruteForceMaxStates || m.num_inputs() > kBruteForceMaxInputs )
    throw std::invalid_argument( "brute_force_min_size: instance above the size guard" );
  if ( n <= 1 )
    return n;

  std::vector<std::vector<bool>> var( n, std::vector<bool>( n ) );
  for ( StateId a = 0; a < n; ++a )
    for ( StateId b = 0; b < n; ++b )
      var[a][b] = is_variation( m, a, b );

  BruteForce bf{ m, {}, {}, {} };
  for ( Mask s = 1; s < ( Mask{ 1 } << n ); ++s )
  {
    std::vector<StateId> members;
    for ( StateId q = 0; q < n; ++q )
      if ( s >> q & 1u )
        members.push_back( q );
    bool ok = true;
    for ( std::size_t x = 0; ok && x < members.size(); ++x )
      for ( std::size_t y = x + 1; ok && y < members.size(); ++y )
        ok = var[members[x]][members[y]];
    std::vector<Mask> succ( m.num_inputs(), 0 );
    for ( Valuation i = 0; ok && i < m.num_inputs(); ++i )
    {
      auto out = ValuationSet::full( m.outputs().arity() );
      for ( auto q : members )
      {
        out &= m.lambda( q, i );
        if ( auto const t = m.delta( q, i ); t != kNoState )
          succ[i] |= Mask{ 1 } << t;
      }
      ok = !out.is_empty();
    }
    if ( ok )
    {
      bf.classes.push_back( s );
      bf.succ.push_back( std::move( succ ) );
    }
  }

  for ( StateId k = 1; k < n && k <= cap; ++k )
    if ( bf.search( 0, k, 0 ) )
      return k;
  return n;
}

// ---------------------------------------------------------------- random machines

namespace
{

double unit( std::mt19937_64& rng )
{
  return static_cast<double>( rng() >> 11 ) * 0x1p-53;
}

std::uint64_t below( std::mt19937_64& rng, std::uint64_t n )
{
  return static_cast<std::uint64_t>( unit( rng ) * static_cast<double>( n ) );
}

} // namespace

Igmm random_igmm( RandomIgmmParams const& p )
{
  if ( p.n_states == 0 || p.density < 0 || p.density > 1 || p.output_bias <= 0 || p.output_bias > 1 )
    throw std::invalid_argument( "random_igmm: invalid parameters" );
  std::mt19937_64 rng( p.seed );
  Igmm m( PropSet::numbered( p.n_in_props, "i" ), PropSet::numbered( p.n_out_props, "o" ), p.n_states, 0 );
  auto const ko = m.outputs().arity();
  auto const no = m.outputs().num_valuations();
  for ( StateId q = 0; q < p.n_states; ++q )
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      if ( unit( rng ) >= p.density )
        continue;
      auto const target = static_cast<StateId>( below( rng, p.n_states ) );
      auto out = ValuationSet::empty( ko );
      while ( out.is_empty() )
        for ( Valuation o = 0; o < no; ++o )
          if ( unit( rng ) < p.output_bias )
            out.insert( o );
      m.set_transition( q, i, target, std::move( out ) );
    }
  return m;
}

} // namespace igmm
