#include "igmm/machine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace igmm
{

Igmm::Igmm( PropSet inputs, PropSet outputs, StateId n_states, StateId init )
    : inputs_( std::move( inputs ) ),
      outputs_( std::move( outputs ) ),
      n_states_( n_states ),
      init_( init ),
      table_( static_cast<std::size_t>( n_states ) * inputs_.num_valuations() ),
      top_( ValuationSet::full( outputs_.arity() ) )
{
  if ( n_states == 0 )
    throw std::invalid_argument( "a machine needs at least one state" );
  if ( init >= n_states )
    throw std::invalid_argument( "initial state out of range" );
  names_.reserve( n_states );
  for ( StateId q = 0; q < n_states; ++q )
    names_.push_back( "s" + std::to_string( q ) );
}

void Igmm::check_state( StateId q ) const
{
  if ( q >= n_states_ )
    throw std::out_of_range( "state " + std::to_string( q ) + " out of range" );
}

std::size_t Igmm::slot( StateId q, Valuation i ) const
{
  check_state( q );
  if ( i >= inputs_.num_valuations() )
    throw std::out_of_range( "input valuation " + std::to_string( i ) + " out of range" );
  return static_cast<std::size_t>( q ) * inputs_.num_valuations() + i;
}

void Igmm::set_init( StateId q )
{
  check_state( q );
  init_ = q;
}

void Igmm::set_transition( StateId q, Valuation i, StateId target, ValuationSet out )
{
  auto const s = slot( q, i );
  check_state( target );
  if ( out.arity() != outputs_.arity() )
    throw std::invalid_argument( "output set arity mismatch" );
  if ( out.is_empty() )
    throw std::invalid_argument( "output set of a defined transition must be non-empty" );
  table_[s] = Transition{ target, std::move( out ) };
}

void Igmm::clear_transition( StateId q, Valuation i )
{
  table_[slot( q, i )].reset();
}

StateId Igmm::add_state( std::string name )
{
  StateId const q = n_states_++;
  table_.resize( table_.size() + inputs_.num_valuations() );
  names_.push_back( name.empty() ? "s" + std::to_string( q ) : std::move( name ) );
  return q;
}

std::optional<Transition> const& Igmm::entry( StateId q, Valuation i ) const
{
  return table_[slot( q, i )];
}

StateId Igmm::delta( StateId q, Valuation i ) const
{
  auto const& e = entry( q, i );
  return e ? e->target : kNoState;
}

ValuationSet const& Igmm::lambda( StateId q, Valuation i ) const
{
  auto const& e = entry( q, i );
  return e ? e->out : top_;
}

std::string const& Igmm::state_name( StateId q ) const
{
  check_state( q );
  return names_[q];
}

void Igmm::set_state_name( StateId q, std::string name )
{
  check_state( q );
  names_[q] = std::move( name );
}

std::size_t Igmm::num_defined() const
{
  std::size_t n = 0;
  for ( auto const& e : table_ )
    n += e.has_value();
  return n;
}

bool is_input_complete( Igmm const& m )
{
  return m.num_defined() == static_cast<std::size_t>( m.num_states() ) * m.num_inputs();
}

MachineStats machine_stats( Igmm const& m )
{
  MachineStats st;
  st.n_states = m.num_states();
  st.n_defined_transitions = m.num_defined();
  st.is_input_complete = is_input_complete( m );
  for ( StateId q = 0; q < m.num_states(); ++q )
  {
    std::map<std::pair<StateId, ValuationSet>, ValuationSet> groups;
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      auto const& e = m.entry( q, i );
      if ( !e )
        continue;
      auto [it, fresh] = groups.try_emplace( { e->target, e->out }, m.inputs().arity() );
      it->second.insert( i );
    }
    for ( auto const& [key, ins] : groups )
      st.n_edges_merged += disjoint_cube_cover( ins ).size();
  }
  return st;
}

std::string unique_state_name( Igmm const& m, std::string const& base )
{
  auto taken = [&]( std::string const& n ) {
    for ( auto const& s : m.state_names() )
      if ( s == n )
        return true;
    return false;
  };
  if ( !taken( base ) )
    return base;
  for ( unsigned k = 1;; ++k )
    if ( auto n = base + "_" + std::to_string( k ); !taken( n ) )
      return n;
}

Igmm complete_with_sink( Igmm const& m )
{
  if ( is_input_complete( m ) )
    return m;
  Igmm r = m;
  auto const top = ValuationSet::full( m.outputs().arity() );
  StateId const sink = r.add_state( unique_state_name( m, "sink" ) );
  for ( StateId q = 0; q < r.num_states(); ++q )
    for ( Valuation i = 0; i < r.num_inputs(); ++i )
      if ( !r.is_defined( q, i ) )
        r.set_transition( q, i, sink, top );
  return r;
}

std::pair<Igmm, std::vector<StateId>> reachable_prune( Igmm const& m )
{
  std::vector<StateId> map( m.num_states(), kNoState );
  std::vector<StateId> order;
  std::deque<StateId> todo{ m.init() };
  map[m.init()] = 0;
  order.push_back( m.init() );
  while ( !todo.empty() )
  {
    StateId const q = todo.front();
    todo.pop_front();
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      StateId const t = m.delta( q, i );
      if ( t != kNoState && map[t] == kNoState )
      {
        map[t] = static_cast<StateId>( order.size() );
        order.push_back( t );
        todo.push_back( t );
      }
    }
  }
  // Survivors keep their relative order.
  std::sort( order.begin(), order.end() );
  for ( StateId k = 0; k < order.size(); ++k )
    map[order[k]] = k;

  Igmm r( m.inputs(), m.outputs(), static_cast<StateId>( order.size() ), map[m.init()] );
  for ( StateId k = 0; k < order.size(); ++k )
  {
    StateId const q = order[k];
    r.set_state_name( k, m.state_name( q ) );
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      if ( auto const& e = m.entry( q, i ) )
        r.set_transition( k, i, map[e->target], e->out );
  }
  return { std::move( r ), std::move( map ) };
}

Igmm with_cube_outputs( Igmm const& m )
{
  Igmm r = m;
  unsigned const k = m.outputs().arity();
  for ( StateId q = 0; q < m.num_states(); ++q )
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      if ( auto const& e = m.entry( q, i ) )
        r.set_transition( q, i, e->target, cube_to_set( first_cube( e->out ), k ) );
  return r;
}

bool equal_up_to_renaming( Igmm const& a, Igmm const& b )
{
  if ( a.inputs() != b.inputs() || a.outputs() != b.outputs() || a.num_states() != b.num_states() )
    return false;
  std::vector<StateId> fwd( a.num_states(), kNoState ), bwd( b.num_states(), kNoState );

  auto bind = [&]( StateId p, StateId q, std::deque<std::pair<StateId, StateId>>& todo ) {
    if ( fwd[p] == kNoState && bwd[q] == kNoState )
    {
      fwd[p] = q;
      bwd[q] = p;
      todo.emplace_back( p, q );
      return true;
    }
    return fwd[p] == q;
  };
  auto explore = [&]( StateId p0, StateId q0 ) {
    std::deque<std::pair<StateId, StateId>> todo;
    if ( !bind( p0, q0, todo ) )
      return false;
    while ( !todo.empty() )
    {
      auto [p, q] = todo.front();
      todo.pop_front();
      for ( Valuation i = 0; i < a.num_inputs(); ++i )
      {
        auto const& ea = a.entry( p, i );
        auto const& eb = b.entry( q, i );
        if ( ea.has_value() != eb.has_value() )
          return false;
        if ( !ea )
          continue;
        if ( ea->out != eb->out || !bind( ea->target, eb->target, todo ) )
          return false;
      }
    }
    return true;
  };

  if ( !explore( a.init(), b.init() ) )
    return false;
  for ( StateId p = 0; p < a.num_states(); ++p )
  {
    if ( fwd[p] != kNoState )
      continue;
    for ( StateId q = 0; q < b.num_states(); ++q )
      if ( bwd[q] == kNoState && b.state_name( q ) == a.state_name( p ) )
      {
        if ( !explore( p, q ) )
          return false;
        break;
      }
  }
  for ( StateId p = 0; p < a.num_states(); ++p )
  {
    if ( fwd[p] != kNoState )
      continue;
    StateId q = 0;
    while ( q < b.num_states() && bwd[q] != kNoState )
      ++q;
    if ( q == b.num_states() || !explore( p, q ) )
      return false;
  }
  return true;
}

} // namespace igmm
