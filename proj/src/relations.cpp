#include "igmm/relations.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace igmm
{

namespace
{

/* preds[i][q]: states p with delta(p, i) == q. */
std::vector<std::vector<std::vector<StateId>>> predecessor_index( Igmm const& m )
{
  std::vector<std::vector<std::vector<StateId>>> preds( m.num_inputs(),
                                                       std::vector<std::vector<StateId>>( m.num_states() ) );
  for ( StateId p = 0; p < m.num_states(); ++p )
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      if ( StateId t = m.delta( p, i ); t != kNoState )
        preds[i][t].push_back( p );
  return preds;
}

} // namespace

VariationMatrix variation_matrix( Igmm const& m )
{
  StateId const n = m.num_states();
  VariationMatrix vm{ StateMatrix( n, false ) };
  std::vector<std::pair<StateId, StateId>> work;

  auto mark = [&]( StateId a, StateId b ) {
    if ( vm.mat( a, b ) )
      return;
    vm.mat.set( a, b, true );
    vm.mat.set( b, a, true );
    work.emplace_back( std::min( a, b ), std::max( a, b ) );
  };

  for ( StateId k = 0; k < n; ++k )
    for ( StateId l = k + 1; l < n; ++l )
      for ( Valuation i = 0; i < m.num_inputs(); ++i )
        if ( !m.lambda( k, i ).intersects( m.lambda( l, i ) ) )
        {
          mark( k, l );
          break;
        }

  auto const preds = predecessor_index( m );
  while ( !work.empty() )
  {
    auto const [k, l] = work.back();
    work.pop_back();
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      for ( StateId a : preds[i][k] )
        for ( StateId b : preds[i][l] )
          mark( a, b );
  }
  return vm;
}

std::vector<StateId> partial_solution( VariationMatrix const& vm )
{
  StateId const n = vm.size();
  std::vector<std::size_t> nvc( n, 0 );
  for ( StateId a = 0; a < n; ++a )
    for ( StateId b = 0; b < n; ++b )
      nvc[a] += vm.not_variation( a, b );

  std::vector<StateId> order( n );
  for ( StateId q = 0; q < n; ++q )
    order[q] = q;
  std::stable_sort( order.begin(), order.end(), [&]( StateId a, StateId b ) { return nvc[a] > nvc[b]; } );

  std::vector<StateId> picked;
  for ( StateId q : order )
    if ( std::all_of( picked.begin(), picked.end(), [&]( StateId p ) { return vm.not_variation( p, q ); } ) )
      picked.push_back( q );
  return picked;
}

SpecRelation specialization_relation( Igmm const& m )
{
  if ( !is_input_complete( m ) )
    throw std::invalid_argument( "specialization_relation requires an input-complete machine" );
  StateId const n = m.num_states();
  SpecRelation sr{ StateMatrix( n, true ) };
  std::vector<std::pair<StateId, StateId>> work;

  for ( StateId a = 0; a < n; ++a )
    for ( StateId b = 0; b < n; ++b )
      for ( Valuation i = 0; i < m.num_inputs(); ++i )
        if ( !m.lambda( a, i ).is_subset_of( m.lambda( b, i ) ) )
        {
          sr.rel.set( a, b, false );
          work.emplace_back( a, b );
          break;
        }

  // A removed pair invalidates every pair of predecessors under a common input.
  auto const preds = predecessor_index( m );
  while ( !work.empty() )
  {
    auto const [a, b] = work.back();
    work.pop_back();
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      for ( StateId pa : preds[i][a] )
        for ( StateId pb : preds[i][b] )
          if ( sr.rel( pa, pb ) )
          {
            sr.rel.set( pa, pb, false );
            work.emplace_back( pa, pb );
          }
  }
  return sr;
}

SpecGraph spec_graph( SpecRelation const& sr )
{
  StateId const n = sr.size();
  auto const& rel = sr.rel;
  for ( StateId a = 0; a < n; ++a )
  {
    if ( !rel( a, a ) )
      throw std::invalid_argument( "specialization relation is not reflexive" );
    for ( StateId b = 0; b < n; ++b )
      if ( rel( a, b ) )
        for ( StateId c = 0; c < n; ++c )
          if ( rel( b, c ) && !rel( a, c ) )
            throw std::invalid_argument( "specialization relation is not transitive" );
  }

  SpecGraph g;
  g.node_of.assign( n, SIZE_MAX );
  for ( StateId q = 0; q < n; ++q )
  {
    if ( g.node_of[q] != SIZE_MAX )
      continue;
    std::vector<StateId> members;
    for ( StateId r = q; r < n; ++r )
      if ( rel( q, r ) && rel( r, q ) )
      {
        members.push_back( r );
        g.node_of[r] = g.nodes.size();
      }
    g.nodes.push_back( std::move( members ) );
  }
  g.edges.resize( g.nodes.size() );
  for ( std::size_t a = 0; a < g.nodes.size(); ++a )
  {
    for ( std::size_t b = 0; b < g.nodes.size(); ++b )
      if ( a != b && rel( g.nodes[b].front(), g.nodes[a].front() ) )
        g.edges[a].push_back( b );
    if ( g.edges[a].empty() )
      g.leaves.push_back( a );
  }
  return g;
}

std::vector<StateId> representatives( SpecGraph const& g, RepresentativeOptions const& opts )
{
  auto excluded = [&]( StateId q ) {
    return std::find( opts.excluded.begin(), opts.excluded.end(), q ) != opts.excluded.end();
  };
  auto pick_member = [&]( std::size_t leaf ) {
    for ( StateId q : g.nodes[leaf] )
      if ( !excluded( q ) )
        return q;
    return g.nodes[leaf].front();
  };

  std::vector<StateId> r( g.node_of.size(), kNoState );
  for ( std::size_t a = 0; a < g.nodes.size(); ++a )
  {
    std::vector<std::size_t> candidates;
    if ( g.is_leaf( a ) )
      candidates.push_back( a );
    else
      for ( std::size_t b : g.edges[a] )
        if ( g.is_leaf( b ) )
          candidates.push_back( b );

    std::size_t chosen = SIZE_MAX;
    for ( StateId p : opts.preferred )
    {
      if ( p >= g.node_of.size() )
        continue;
      if ( std::find( candidates.begin(), candidates.end(), g.node_of[p] ) != candidates.end() )
      {
        chosen = g.node_of[p];
        break;
      }
    }
    if ( chosen == SIZE_MAX )
      chosen = *std::min_element( candidates.begin(), candidates.end() );
    StateId const rep = pick_member( chosen );
    for ( StateId q : g.nodes[a] )
      r[q] = rep;
  }
  return r;
}

std::vector<std::size_t> bisimulation_partition( Igmm const& m )
{
  StateId const n = m.num_states();
  constexpr std::size_t undefined = SIZE_MAX;

  std::map<ValuationSet, std::size_t> out_ids;
  std::vector<std::vector<std::size_t>> local( n );
  for ( StateId q = 0; q < n; ++q )
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      auto const& e = m.entry( q, i );
      local[q].push_back( e ? out_ids.try_emplace( e->out, out_ids.size() ).first->second : undefined );
    }

  std::vector<std::size_t> block( n, 0 );
  std::size_t n_blocks = n == 0 ? 0 : 1;
  while ( true )
  {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next( n );
    for ( StateId q = 0; q < n; ++q )
    {
      std::vector<std::size_t> sig{ block[q] };
      for ( Valuation i = 0; i < m.num_inputs(); ++i )
      {
        StateId const t = m.delta( q, i );
        sig.push_back( local[q][i] );
        sig.push_back( t == kNoState ? undefined : block[t] );
      }
      next[q] = ids.try_emplace( std::move( sig ), ids.size() ).first->second;
    }
    bool const stable = ids.size() == n_blocks;
    block = std::move( next );
    n_blocks = ids.size();
    if ( stable )
      break;
  }

  // Renumber by smallest member.
  std::vector<std::size_t> renum( n_blocks, SIZE_MAX );
  std::size_t fresh = 0;
  for ( StateId q = 0; q < n; ++q )
  {
    if ( renum[block[q]] == SIZE_MAX )
      renum[block[q]] = fresh++;
    block[q] = renum[block[q]];
  }
  return block;
}

} // namespace igmm
