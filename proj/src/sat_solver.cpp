#include "igmm/sat_solver.hpp"

#include <algorithm>

namespace igmm::sat
{

namespace
{

std::uint64_t splitmix64( std::uint64_t x )
{
  x += 0x9e3779b97f4a7c15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

double luby( double y, int x )
{
  int size = 1;
  int seq = 0;
  while ( size < x + 1 )
  {
    ++seq;
    size = 2 * size + 1;
  }
  while ( size - 1 != x )
  {
    size = ( size - 1 ) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for ( int k = 0; k < seq; ++k )
    r *= y;
  return r;
}

} // namespace

Solver::Solver( std::uint64_t seed ) : seed_( seed ) {}

Var Solver::new_var()
{
  Var const v = static_cast<Var>( assigns_.size() );
  assigns_.push_back( 0 );
  level_.push_back( 0 );
  reason_.push_back( kNoReason );
  phase_.push_back( false );
  seen_.push_back( false );
  // A seed-dependent jitter breaks initial ties among variables.
  activity_.push_back( static_cast<double>( splitmix64( seed_ ^ ( std::uint64_t{ v } << 20 ) ) >> 11 ) * 0x1p-53 * 1e-5 );
  heap_pos_.push_back( -1 );
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert( v );
  return v;
}

bool Solver::add_clause( std::span<Lit const> lits )
{
  if ( !ok_ )
    return false;
  cancel_until( 0 );
  std::vector<Lit> c( lits.begin(), lits.end() );
  std::sort( c.begin(), c.end() );
  c.erase( std::unique( c.begin(), c.end() ), c.end() );
  std::size_t j = 0;
  for ( std::size_t i = 0; i < c.size(); ++i )
  {
    if ( i + 1 < c.size() && c[i + 1] == ~c[i] )
      return true; // tautology
    auto const v = value( c[i] );
    if ( v == 1 )
      return true;
    if ( v == 0 )
      c[j++] = c[i];
  }
  c.resize( j );
  ++n_original_;
  if ( c.empty() )
  {
    ok_ = false;
    return false;
  }
  if ( c.size() == 1 )
  {
    enqueue( c[0], kNoReason );
    if ( propagate() != kNoReason )
      ok_ = false;
    return ok_;
  }
  attach( std::move( c ), false );
  return true;
}

Solver::ClauseRef Solver::attach( std::vector<Lit> lits, bool learnt )
{
  auto const cr = static_cast<ClauseRef>( clauses_.size() );
  watches_[lits[0].code].push_back( cr );
  watches_[lits[1].code].push_back( cr );
  clauses_.push_back( { std::move( lits ), learnt } );
  return cr;
}

void Solver::enqueue( Lit l, ClauseRef reason )
{
  Var const v = l.var();
  assigns_[v] = l.negated() ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back( l );
}

Solver::ClauseRef Solver::propagate()
{
  while ( qhead_ < trail_.size() )
  {
    Lit const false_lit = ~trail_[qhead_++];
    auto& ws = watches_[false_lit.code];
    std::size_t i = 0, j = 0;
    while ( i < ws.size() )
    {
      ClauseRef const cr = ws[i++];
      auto& c = clauses_[cr].lits;
      if ( c[0] == false_lit )
        std::swap( c[0], c[1] );
      if ( value( c[0] ) == 1 )
      {
        ws[j++] = cr;
        continue;
      }
      bool moved = false;
      for ( std::size_t k = 2; k < c.size(); ++k )
        if ( value( c[k] ) != -1 )
        {
          std::swap( c[1], c[k] );
          watches_[c[1].code].push_back( cr );
          moved = true;
          break;
        }
      if ( moved )
        continue;
      ws[j++] = cr;
      if ( value( c[0] ) == -1 )
      {
        while ( i < ws.size() )
          ws[j++] = ws[i++];
        ws.resize( j );
        qhead_ = trail_.size();
        return cr;
      }
      enqueue( c[0], cr );
    }
    ws.resize( j );
  }
  return kNoReason;
}

void Solver::analyze( ClauseRef conflict, std::vector<Lit>& learnt, int& back_level )
{
  learnt.assign( 1, Lit{} );
  int open = 0;
  bool first = true;
  Lit p{};
  auto idx = static_cast<std::int64_t>( trail_.size() ) - 1;
  ClauseRef cr = conflict;
  do
  {
    auto const& c = clauses_[cr].lits;
    for ( std::size_t k = first ? 0 : 1; k < c.size(); ++k )
    {
      Var const v = c[k].var();
      if ( seen_[v] || level_[v] == 0 )
        continue;
      seen_[v] = true;
      bump( v );
      if ( level_[v] >= decision_level() )
        ++open;
      else
        learnt.push_back( c[k] );
    }
    first = false;
    while ( !seen_[trail_[static_cast<std::size_t>( idx )].var()] )
      --idx;
    p = trail_[static_cast<std::size_t>( idx-- )];
    cr = reason_[p.var()];
    seen_[p.var()] = false;
    --open;
  } while ( open > 0 );
  learnt[0] = ~p;

  back_level = 0;
  if ( learnt.size() > 1 )
  {
    std::size_t best = 1;
    for ( std::size_t k = 2; k < learnt.size(); ++k )
      if ( level_[learnt[k].var()] > level_[learnt[best].var()] )
        best = k;
    std::swap( learnt[1], learnt[best] );
    back_level = level_[learnt[1].var()];
  }
  for ( auto l : learnt )
    seen_[l.var()] = false;
}

void Solver::cancel_until( int level )
{
  if ( decision_level() <= level )
    return;
  for ( auto k = trail_.size(); k-- > trail_lim_[static_cast<std::size_t>( level )]; )
  {
    Var const v = trail_[k].var();
    phase_[v] = !trail_[k].negated();
    assigns_[v] = 0;
    reason_[v] = kNoReason;
    heap_insert( v );
  }
  trail_.resize( trail_lim_[static_cast<std::size_t>( level )] );
  trail_lim_.resize( static_cast<std::size_t>( level ) );
  qhead_ = trail_.size();
}

Lit Solver::pick_branch()
{
  while ( !heap_.empty() )
  {
    Var const v = heap_pop();
    if ( assigns_[v] == 0 )
      return phase_[v] ? Lit::positive( v ) : Lit::negative( v );
  }
  return Lit{ ~std::uint32_t{ 0 } };
}

void Solver::bump( Var v )
{
  activity_[v] += var_inc_;
  if ( activity_[v] > 1e100 )
  {
    for ( auto& a : activity_ )
      a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if ( heap_pos_[v] >= 0 )
    heap_up( static_cast<std::size_t>( heap_pos_[v] ) );
}

void Solver::decay()
{
  var_inc_ /= 0.95;
}

void Solver::heap_insert( Var v )
{
  if ( heap_pos_[v] >= 0 )
    return;
  heap_pos_[v] = static_cast<std::int64_t>( heap_.size() );
  heap_.push_back( v );
  heap_up( heap_.size() - 1 );
}

Var Solver::heap_pop()
{
  Var const top = heap_.front();
  heap_pos_[top] = -1;
  Var const last = heap_.back();
  heap_.pop_back();
  if ( !heap_.empty() )
  {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down( 0 );
  }
  return top;
}

void Solver::heap_up( std::size_t pos )
{
  Var const v = heap_[pos];
  while ( pos > 0 )
  {
    std::size_t const parent = ( pos - 1 ) / 2;
    if ( !heap_less( v, heap_[parent] ) )
      break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>( pos );
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>( pos );
}

void Solver::heap_down( std::size_t pos )
{
  Var const v = heap_[pos];
  while ( true )
  {
    std::size_t child = 2 * pos + 1;
    if ( child >= heap_.size() )
      break;
    if ( child + 1 < heap_.size() && heap_less( heap_[child + 1], heap_[child] ) )
      ++child;
    if ( !heap_less( heap_[child], v ) )
      break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>( pos );
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>( pos );
}

Status Solver::solve( Deadline const& deadline )
{
  model_.clear();
  if ( !ok_ )
    return Status::unsat;
  if ( deadline.expired() )
    return Status::timeout;
  cancel_until( 0 );
  if ( propagate() != kNoReason )
  {
    ok_ = false;
    return Status::unsat;
  }

  std::vector<Lit> learnt;
  std::uint64_t steps = 0;
  for ( int restart = 0;; ++restart )
  {
    auto const budget = static_cast<std::uint64_t>( 100 * luby( 2, restart ) );
    std::uint64_t local = 0;
    while ( true )
    {
      if ( ( ++steps & 255u ) == 0 && deadline.expired() )
      {
        cancel_until( 0 );
        return Status::timeout;
      }
      ClauseRef const conflict = propagate();
      if ( conflict != kNoReason )
      {
        ++conflicts_;
        ++local;
        if ( decision_level() == 0 )
        {
          ok_ = false;
          return Status::unsat;
        }
        int back_level = 0;
        analyze( conflict, learnt, back_level );
        cancel_until( back_level );
        if ( learnt.size() == 1 )
          enqueue( learnt[0], kNoReason );
        else
          enqueue( learnt[0], attach( learnt, true ) );
        decay();
        continue;
      }
      if ( local >= budget )
      {
        cancel_until( 0 );
        break;
      }
      Lit const next = pick_branch();
      if ( next.code == ~std::uint32_t{ 0 } )
      {
        model_.resize( assigns_.size() );
        for ( Var v = 0; v < assigns_.size(); ++v )
          model_[v] = assigns_[v] == 1;
        cancel_until( 0 );
        return Status::sat;
      }
      trail_lim_.push_back( trail_.size() );
      enqueue( next, kNoReason );
    }
  }
}

} // namespace igmm::sat
