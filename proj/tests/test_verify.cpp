#include "common.hpp"

#include "igmm/reduce.hpp"
#include "igmm/satmin.hpp"

#include <doctest.h>

using namespace igmm;
using testing::corpus_params;
using testing::fixture;
using testing::vset;

TEST_SUITE( "verify" )
{
  TEST_CASE( "minimal fig2 specializes the original" )
  {
    auto const f2 = fixture( "fig2.xkiss" );
    auto const mn = fixture( "fig2_min.xkiss" );
    CHECK( check_specialization( mn, f2 ).ok );

    auto const back = check_specialization( f2, mn );
    REQUIRE( !back.ok );
    CHECK( back.impl_state == 2 );
    CHECK( back.spec_state == 2 );
    CHECK( back.word == std::vector<Valuation>{ 0, 1 } );
    REQUIRE( back.output );
    CHECK( *back.output == 0 );
    CHECK( describe( back, f2 ) == "word: 0 1 output: 000" );
    CHECK( describe( check_specialization( mn, f2 ), mn ) == "ok" );
  }

  TEST_CASE( "a forbidden output is caught on the first step" )
  {
    auto const f1 = fixture( "fig1.kiss" );
    auto bad = f1;
    bad.set_transition( 0, 0b00, 2, vset( 2, { "11" } ) );
    auto const res = check_specialization( bad, f1 );
    REQUIRE( !res.ok );
    CHECK( describe( res, bad ) == "word: 00 output: 11" );

    auto good = f1;
    good.set_transition( 0, 0b10, 0, vset( 2, { "0-" } ) );
    CHECK( check_specialization( good, f1 ).ok );
    CHECK( !check_specialization( f1, good ).ok );
  }

  TEST_CASE( "undefined implementation transitions" )
  {
    Igmm spec( PropSet( { "a" } ), PropSet( { "x" } ), 1 );
    spec.set_transition( 0, 1, 0, vset( 1, { "1" } ) );
    spec.set_transition( 0, 0, 0, ValuationSet::full( 1 ) );
    Igmm impl( PropSet( { "a" } ), PropSet( { "x" } ), 1 );
    impl.set_transition( 0, 1, 0, vset( 1, { "1" } ) );
    // after a' the spec still constrains a, the implementation does not
    auto const res = check_specialization( impl, spec );
    REQUIRE( !res.ok );
    CHECK( res.impl_state == impl.num_states() );
    CHECK( res.word == std::vector<Valuation>{ 0, 1 } );

    Igmm loose( PropSet( { "a" } ), PropSet( { "x" } ), 1 );
    loose.set_transition( 0, 0, 0, ValuationSet::full( 1 ) );
    Igmm partial( PropSet( { "a" } ), PropSet( { "x" } ), 1 );
    CHECK( check_specialization( partial, loose ).ok );
  }

  TEST_CASE( "proposition mismatch" )
  {
    Igmm a( PropSet( { "a" } ), PropSet( { "x" } ), 1 );
    Igmm b( PropSet( { "b" } ), PropSet( { "x" } ), 1 );
    CHECK_THROWS_AS( check_specialization( a, b ), std::invalid_argument );
    CHECK_THROWS_AS( check_bisimilar( a, b ), std::invalid_argument );
  }

  TEST_CASE( "reflexive and transitive on random machines" )
  {
    for ( std::uint64_t seed = 0; seed < 200; ++seed )
    {
      auto const m = random_igmm( corpus_params( seed ) );
      CHECK( check_specialization( m, m ).ok );
      CHECK( check_bisimilar( m, m ) );
      auto const oa = reduce_with_output_assignment( m );
      auto const sat = minimize( oa ).machine;
      CHECK( check_specialization( sat, oa ).ok );
      CHECK( check_specialization( oa, m ).ok );
      CHECK( check_specialization( sat, m ).ok );
    }
  }

  TEST_CASE( "bisimilarity" )
  {
    auto const f2 = fixture( "fig2.xkiss" );
    CHECK( check_bisimilar( f2, bisim_quotient( f2 ) ) );
    CHECK( !check_bisimilar( f2, fixture( "fig2_min.xkiss" ) ) );
    auto const c = complete_with_sink( fixture( "fig1.kiss" ) );
    CHECK( !check_bisimilar( c, fixture( "fig1.kiss" ) ) );
  }

  TEST_CASE( "brute force sizes" )
  {
    CHECK( brute_force_min_size( fixture( "fig1.kiss" ) ) == 1 );
    CHECK( brute_force_min_size( fixture( "fig2.xkiss" ) ) == 3 );
    CHECK( brute_force_min_size( fixture( "gadget.xkiss" ) ) == 2 );

    RandomIgmmParams big;
    big.n_states = 9;
    CHECK_THROWS_AS( brute_force_min_size( random_igmm( big ) ), std::invalid_argument );
    RandomIgmmParams wide;
    wide.n_states = 2;
    wide.n_in_props = 3;
    CHECK_THROWS_AS( brute_force_min_size( random_igmm( wide ) ), std::invalid_argument );
  }

  TEST_CASE( "random machines" )
  {
    RandomIgmmParams p;
    p.seed = 42;
    p.n_states = 6;
    p.n_in_props = 2;
    p.n_out_props = 2;
    p.density = 1.0;
    auto const a = random_igmm( p );
    CHECK( equal_up_to_renaming( a, random_igmm( p ) ) );
    CHECK( a.init() == 0 );
    CHECK( is_input_complete( a ) );
    for ( StateId q = 0; q < a.num_states(); ++q )
      for ( Valuation i = 0; i < a.num_inputs(); ++i )
        CHECK( !a.lambda( q, i ).is_empty() );

    p.density = 0.0;
    CHECK( random_igmm( p ).num_defined() == 0 );
    p.density = 1.5;
    CHECK_THROWS_AS( random_igmm( p ), std::invalid_argument );

    RandomIgmmParams other = p;
    other.density = 1.0;
    other.seed = 43;
    p.density = 1.0;
    CHECK( !equal_up_to_renaming( random_igmm( p ), random_igmm( other ) ) );
  }
}
