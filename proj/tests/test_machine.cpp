#include "common.hpp"

#include "igmm/machine.hpp"
#include "igmm/verify.hpp"

#include <doctest.h>

using namespace igmm;
using testing::fixture;
using testing::vset;

namespace
{

Valuation in( char const* text, unsigned k )
{
  return Cube::parse( text, k ).value;
}

} // namespace

TEST_SUITE( "machine" )
{
  TEST_CASE( "transition table basics" )
  {
    Igmm m( PropSet( { "a" } ), PropSet( { "x" } ), 2 );
    CHECK( m.num_inputs() == 2 );
    CHECK( !m.is_defined( 0, 1 ) );
    CHECK( m.delta( 0, 1 ) == kNoState );
    CHECK( m.lambda( 0, 1 ).is_full() );
    m.set_transition( 0, 1, 1, vset( 1, { "1" } ) );
    CHECK( m.delta( 0, 1 ) == 1 );
    CHECK( m.lambda( 0, 1 ) == vset( 1, { "1" } ) );
    CHECK_THROWS_AS( m.set_transition( 0, 0, 1, ValuationSet::empty( 1 ) ), std::invalid_argument );
    CHECK_THROWS_AS( m.set_transition( 0, 0, 2, ValuationSet::full( 1 ) ), std::out_of_range );
    CHECK_THROWS_AS( m.set_transition( 0, 2, 1, ValuationSet::full( 1 ) ), std::out_of_range );
    CHECK_THROWS_AS( m.set_transition( 0, 0, 1, ValuationSet::full( 2 ) ), std::invalid_argument );
    m.clear_transition( 0, 1 );
    CHECK( m.num_defined() == 0 );
    CHECK( m.add_state( "extra" ) == 2 );
    CHECK( m.state_name( 2 ) == "extra" );
    CHECK_THROWS( Igmm( PropSet( { "a" } ), PropSet( { "x" } ), 0 ) );
  }

  TEST_CASE( "fixture outputs" )
  {
    auto const f2 = fixture( "fig2.xkiss" );
    CHECK( f2.lambda( 1, 1 ) == vset( 3, { "--0" } ) );
    CHECK( f2.lambda( 0, 0 ) == vset( 3, { "000" } ) );
    auto const f1 = fixture( "fig1.kiss" );
    CHECK( f1.lambda( 0, in( "01", 2 ) ).is_full() );
    CHECK( !f1.is_defined( 0, in( "01", 2 ) ) );
  }

  TEST_CASE( "input completeness and stats" )
  {
    auto const f1 = fixture( "fig1.kiss" );
    CHECK( !is_input_complete( f1 ) );
    auto const s1 = machine_stats( f1 );
    CHECK( s1.n_states == 3 );
    CHECK( s1.n_defined_transitions == 6 );
    CHECK( s1.n_edges_merged == 6 );

    auto const s2 = machine_stats( fixture( "fig2.xkiss" ) );
    CHECK( s2.n_states == 7 );
    CHECK( s2.n_defined_transitions == 14 );
    CHECK( s2.n_edges_merged == 12 );
    CHECK( s2.is_input_complete );
  }

  TEST_CASE( "sink completion" )
  {
    auto const f1 = fixture( "fig1.kiss" );
    auto const c = complete_with_sink( f1 );
    CHECK( c.num_states() == 4 );
    CHECK( is_input_complete( c ) );
    CHECK( c.delta( 0, in( "01", 2 ) ) == 3 );
    CHECK( c.lambda( 0, in( "01", 2 ) ).is_full() );
    CHECK( check_specialization( c, f1 ).ok );
    CHECK( check_specialization( f1, c ).ok );

    auto const f2 = fixture( "fig2.xkiss" );
    CHECK( complete_with_sink( f2 ).num_states() == 7 );
  }

  TEST_CASE( "sink name avoids clashes" )
  {
    Igmm m( PropSet( { "a" } ), PropSet( { "x" } ), 1 );
    m.set_state_name( 0, "sink" );
    CHECK( unique_state_name( m, "sink" ) == "sink_1" );
    CHECK( complete_with_sink( m ).state_name( 1 ) == "sink_1" );
  }

  TEST_CASE( "reachable prune" )
  {
    auto const f2 = fixture( "fig2.xkiss" );
    auto const [p, map] = reachable_prune( f2 );
    CHECK( p.num_states() == 7 );
    CHECK( equal_up_to_renaming( p, f2 ) );

    Igmm m( PropSet( { "a" } ), PropSet( { "x" } ), 4, 2 );
    m.set_transition( 2, 0, 3, ValuationSet::full( 1 ) );
    m.set_transition( 0, 0, 2, ValuationSet::full( 1 ) );
    auto const [q, qmap] = reachable_prune( m );
    CHECK( q.num_states() == 2 );
    CHECK( qmap == std::vector<StateId>{ kNoState, kNoState, 0, 1 } );
    CHECK( q.init() == 0 );
    CHECK( q.delta( 0, 0 ) == 1 );
  }

  TEST_CASE( "cube outputs" )
  {
    Igmm m( PropSet( { "a" } ), PropSet( { "x", "y" } ), 1 );
    m.set_transition( 0, 0, 0, vset( 2, { "10", "01" } ) );
    auto const c = with_cube_outputs( m );
    CHECK( is_cube( c.lambda( 0, 0 ) ) );
    CHECK( c.lambda( 0, 0 ).is_subset_of( m.lambda( 0, 0 ) ) );
    CHECK( check_specialization( c, m ).ok );
  }

  TEST_CASE( "equality up to renaming" )
  {
    auto const f1 = fixture( "fig1.kiss" );
    Igmm r( f1.inputs(), f1.outputs(), 3, 2 );
    std::vector<StateId> const perm{ 2, 0, 1 };
    for ( StateId q = 0; q < 3; ++q )
      for ( Valuation i = 0; i < f1.num_inputs(); ++i )
        if ( auto const& e = f1.entry( q, i ) )
          r.set_transition( perm[q], i, perm[e->target], e->out );
    CHECK( equal_up_to_renaming( f1, r ) );
    r.set_transition( perm[2], 0, perm[2], ValuationSet::full( 2 ) );
    CHECK( !equal_up_to_renaming( f1, r ) );
  }
}
