#include "igmm/reduce.hpp"

#include <algorithm>

namespace igmm
{

Igmm bisim_quotient( Igmm const& m )
{
  auto const block = bisimulation_partition( m );
  std::size_t const n_blocks = block.empty() ? 0 : *std::max_element( block.begin(), block.end() ) + 1;

  std::vector<StateId> leader( n_blocks, kNoState );
  for ( StateId q = 0; q < m.num_states(); ++q )
    if ( leader[block[q]] == kNoState )
      leader[block[q]] = q;

  Igmm r( m.inputs(), m.outputs(), static_cast<StateId>( n_blocks ), static_cast<StateId>( block[m.init()] ) );
  for ( StateId b = 0; b < n_blocks; ++b )
  {
    StateId const q = leader[b];
    r.set_state_name( b, m.state_name( q ) );
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      if ( auto const& e = m.entry( q, i ) )
        r.set_transition( b, i, static_cast<StateId>( block[e->target] ), e->out );
  }
  return r;
}

std::vector<StateId> output_assignment_map( Igmm const& m, OutputAssignmentOptions const& opts )
{
  Igmm const completed = complete_with_sink( m );
  RepresentativeOptions ro;
  ro.preferred = opts.preferred;
  if ( completed.num_states() > m.num_states() )
    ro.excluded.push_back( m.num_states() );
  auto r = representatives( spec_graph( specialization_relation( completed ) ), ro );
  r.resize( m.num_states() );
  return r;
}

Igmm reduce_with_output_assignment( Igmm const& m, OutputAssignmentOptions const& opts )
{
  auto const r = output_assignment_map( m, opts );

  // The sink can only be a representative when it is forced; then it is
  // materialized as an extra state with unconstrained self-loops.
  Igmm remapped = m;
  StateId sink = kNoState;
  auto image = [&]( StateId q ) {
    if ( r[q] < m.num_states() )
      return r[q];
    if ( sink == kNoState )
    {
      sink = remapped.add_state( unique_state_name( m, "sink" ) );
      for ( Valuation i = 0; i < m.num_inputs(); ++i )
        remapped.set_transition( sink, i, sink, ValuationSet::full( m.outputs().arity() ) );
    }
    return sink;
  };

  for ( StateId q = 0; q < m.num_states(); ++q )
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      if ( auto const& e = m.entry( q, i ) )
        remapped.set_transition( q, i, image( e->target ), e->out );
  remapped.set_init( image( m.init() ) );
  return reachable_prune( remapped ).first;
}

Igmm reduce_bisim_oa( Igmm const& m )
{
  Igmm cur = bisim_quotient( reduce_with_output_assignment( m ) );
  while ( true )
  {
    Igmm next = bisim_quotient( reduce_with_output_assignment( cur ) );
    if ( next.num_states() >= cur.num_states() )
      return cur;
    cur = std::move( next );
  }
}

} // namespace igmm
