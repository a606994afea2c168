#include "igmm/satmin.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace igmm
{

std::vector<StateId> class_succ( Igmm const& m, std::span<StateId const> cls, Valuation i )
{
  std::vector<StateId> succ;
  for ( auto q : cls )
    if ( auto const t = m.delta( q, i ); t != kNoState )
      succ.push_back( t );
  std::sort( succ.begin(), succ.end() );
  succ.erase( std::unique( succ.begin(), succ.end() ), succ.end() );
  return succ;
}

ValuationSet class_out( Igmm const& m, std::span<StateId const> cls, Valuation i )
{
  auto out = ValuationSet::full( m.outputs().arity() );
  for ( auto q : cls )
    out &= m.lambda( q, i );
  return out;
}

std::vector<Violation> check_nonemptiness( Igmm const& m, ClassSystem const& cs )
{
  std::vector<Violation> v;
  for ( std::size_t k = 0; k < cs.size(); ++k )
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
      if ( class_out( m, cs.members[k], i ).is_empty() )
        v.push_back( { k, i } );
  return v;
}

Igmm build_machine( Igmm const& m, ClassSystem const& cs )
{
  auto const n = cs.size();
  if ( n == 0 )
    throw std::logic_error( "build_machine: no classes" );

  std::vector<std::vector<bool>> in( n, std::vector<bool>( m.num_states(), false ) );
  std::vector<bool> covered( m.num_states(), false );
  for ( std::size_t k = 0; k < n; ++k )
    for ( auto q : cs.members[k] )
    {
      in[k][q] = true;
      covered[q] = true;
    }
  if ( std::find( covered.begin(), covered.end(), false ) != covered.end() )
    throw std::logic_error( "build_machine: classes do not cover the states" );

  std::size_t init = 0;
  while ( !in[init][m.init()] )
    ++init;

  Igmm r( m.inputs(), m.outputs(), static_cast<StateId>( n ), static_cast<StateId>( init ) );
  for ( std::size_t k = 0; k < n; ++k )
  {
    r.set_state_name( static_cast<StateId>( k ), "c" + std::to_string( k ) );
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      auto const succ = class_succ( m, cs.members[k], i );
      if ( succ.empty() )
        continue;
      auto const j = cs.succ_choice[k][i];
      if ( j >= n || !std::all_of( succ.begin(), succ.end(), [&]( StateId t ) { return in[j][t]; } ) )
        throw std::logic_error( "build_machine: successor class does not hold all successors" );
      auto out = class_out( m, cs.members[k], i );
      if ( out.is_empty() )
        throw std::logic_error( "build_machine: empty common output" );
      r.set_transition( static_cast<StateId>( k ), i, static_cast<StateId>( j ), std::move( out ) );
    }
  }
  return r;
}

// ---------------------------------------------------------------- CnfProblem

sat::Var CnfProblem::new_var( std::string name )
{
  names_.push_back( std::move( name ) );
  return static_cast<sat::Var>( names_.size() - 1 );
}

void CnfProblem::add_clause( std::initializer_list<Term> terms )
{
  add_clause( std::vector<Term>( terms ) );
}

void CnfProblem::add_clause( std::vector<Term> const& terms )
{
  std::vector<sat::Lit> lits;
  for ( auto const& t : terms )
  {
    if ( t.is_true() )
      return;
    if ( !t.is_false() )
      lits.push_back( t.lit );
  }
  clauses_.push_back( std::move( lits ) );
}

void CnfProblem::feed( sat::Solver& solver )
{
  for ( ; fed_vars_ < names_.size(); ++fed_vars_ )
    solver.new_var();
  for ( ; fed_clauses_ < clauses_.size(); ++fed_clauses_ )
    solver.add_clause( clauses_[fed_clauses_] );
}

void CnfProblem::write_dimacs( std::ostream& os ) const
{
  os << "p cnf " << names_.size() << ' ' << clauses_.size() << '\n';
  for ( auto const& c : clauses_ )
  {
    for ( auto l : c )
      os << l.dimacs() << ' ';
    os << "0\n";
  }
}

void CnfProblem::write_varmap( std::ostream& os ) const
{
  for ( std::size_t v = 0; v < names_.size(); ++v )
    os << v + 1 << ' ' << names_[v] << '\n';
}

// ---------------------------------------------------------------- SatEncoding

namespace
{

std::string var_name( char const* kind, std::initializer_list<std::size_t> idx )
{
  std::string s = kind;
  for ( auto k : idx )
  {
    s += '_';
    s += std::to_string( k );
  }
  return s;
}

} // namespace

SatEncoding::SatEncoding( Igmm const& m, VariationMatrix const& vm, std::span<StateId const> partial, std::size_t n_classes )
    : m_( m ), vm_( vm ), partial_( partial.begin(), partial.end() ), n_( n_classes )
{
  auto const nq = m.num_states();
  auto const ni = m.num_inputs();
  if ( partial_.size() > n_ )
    throw std::invalid_argument( "partial solution larger than the class count" );

  // Membership terms.
  s_.resize( static_cast<std::size_t>( nq ) * n_ );
  for ( StateId q = 0; q < nq; ++q )
    for ( std::size_t j = 0; j < n_; ++j )
    {
      Term t;
      if ( j < partial_.size() && q == partial_[j] )
        t = Term::constant( true );
      else if ( j < partial_.size() && vm.not_variation( q, partial_[j] ) )
        t = Term::constant( false );
      else
        t = Term::of( sat::Lit::positive( problem_.new_var( var_name( "s", { q, j } ) ) ) );
      s_[static_cast<std::size_t>( q ) * n_ + j] = t;
    }

  // Every state lies in some class.
  for ( StateId q = 0; q < nq; ++q )
  {
    std::vector<Term> c;
    for ( std::size_t j = 0; j < n_; ++j )
      c.push_back( member( q, j ) );
    problem_.add_clause( c );
  }

  // Non-variation states never share a class.
  for ( StateId q = 0; q < nq; ++q )
    for ( StateId r = q + 1; r < nq; ++r )
      if ( vm.not_variation( q, r ) )
        for ( std::size_t j = 0; j < n_; ++j )
          problem_.add_clause( { ~member( q, j ), ~member( r, j ) } );

  // Closure: the successors of class k under i all lie in one class.
  z_.resize( static_cast<std::size_t>( ni ) * n_ );
  for ( Valuation i = 0; i < ni; ++i )
    for ( std::size_t k = 0; k < n_; ++k )
    {
      std::vector<StateId> sources;
      for ( StateId q = 0; q < nq; ++q )
        if ( m.is_defined( q, i ) && !member( q, k ).is_false() )
          sources.push_back( q );
      if ( sources.empty() )
        continue;

      // A pinned state with a defined transition restricts the target class.
      StateId forced = kNoState;
      if ( k < partial_.size() )
        forced = m.delta( partial_[k], i );
      std::vector<std::size_t> candidates;
      for ( std::size_t j = 0; j < n_; ++j )
        if ( forced == kNoState || !member( forced, j ).is_false() )
          candidates.push_back( j );

      auto& zs = z_[static_cast<std::size_t>( i ) * n_ + k];
      zs.assign( n_, Term::constant( false ) );
      if ( candidates.size() == 1 )
        zs[candidates[0]] = Term::constant( true );
      else
        for ( auto j : candidates )
          zs[j] = Term::of( sat::Lit::positive( problem_.new_var( var_name( "z", { i, k, j } ) ) ) );

      problem_.add_clause( zs ); // empty when no candidate survives
      for ( auto q : sources )
      {
        StateId const t = m.delta( q, i );
        for ( auto j : candidates )
          problem_.add_clause( { ~zs[j], ~member( q, k ), member( t, j ) } );
      }
    }
}

Term SatEncoding::member( StateId q, std::size_t j ) const
{
  return s_[static_cast<std::size_t>( q ) * n_ + j];
}

Term SatEncoding::closure( Valuation i, std::size_t k, std::size_t j ) const
{
  auto const& zs = z_[static_cast<std::size_t>( i ) * n_ + k];
  return zs.empty() ? Term::constant( false ) : zs[j];
}

std::size_t SatEncoding::num_s_vars() const
{
  return static_cast<std::size_t>( std::count_if( s_.begin(), s_.end(), []( Term const& t ) { return t.kind == Term::Kind::literal; } ) );
}

bool SatEncoding::value( Term t, sat::Solver const& solver ) const
{
  if ( t.kind != Term::Kind::literal )
    return t.is_true();
  return solver.model_value( t.lit );
}

ClassSystem SatEncoding::decode( sat::Solver const& solver ) const
{
  ClassSystem cs;
  cs.members.resize( n_ );
  cs.succ_choice.assign( n_, std::vector<std::size_t>( m_.num_inputs(), kNoClass ) );
  for ( std::size_t k = 0; k < n_; ++k )
  {
    for ( StateId q = 0; q < m_.num_states(); ++q )
      if ( value( member( q, k ), solver ) )
        cs.members[k].push_back( q );
    for ( Valuation i = 0; i < m_.num_inputs(); ++i )
    {
      auto const& zs = z_[static_cast<std::size_t>( i ) * n_ + k];
      for ( std::size_t j = 0; j < zs.size(); ++j )
        if ( value( zs[j], solver ) )
        {
          cs.succ_choice[k][i] = j;
          break;
        }
    }
  }
  return cs;
}

std::vector<std::pair<Cube, sat::Var>> const& SatEncoding::activation( StateId q, Valuation i, std::size_t j )
{
  auto [it, fresh] = a_.try_emplace( { q, i, j } );
  if ( fresh )
  {
    // At least one cube of the output set is active.
    std::vector<Term> pick;
    auto const cubes = disjoint_cube_cover( m_.lambda( q, i ) );
    for ( std::size_t c = 0; c < cubes.size(); ++c )
    {
      auto const v = problem_.new_var( var_name( "a", { c, q, i, j } ) );
      it->second.emplace_back( cubes[c], v );
      pick.push_back( Term::of( sat::Lit::positive( v ) ) );
    }
    problem_.add_clause( pick );
  }
  return it->second;
}

sat::Var SatEncoding::same_class( StateId q, StateId r, std::size_t j )
{
  auto [it, fresh] = sc_.try_emplace( { q, r, j }, 0 );
  if ( fresh )
  {
    it->second = problem_.new_var( var_name( "sc", { q, r, j } ) );
    problem_.add_clause( { ~member( q, j ), ~member( r, j ), Term::of( sat::Lit::positive( it->second ) ) } );
  }
  return it->second;
}

void SatEncoding::encode_pair( StateId q, StateId r, Valuation i )
{
  if ( q > r )
    std::swap( q, r );
  if ( !triples_.insert( { q, r, i } ).second )
    return;
  for ( std::size_t j = 0; j < n_; ++j )
  {
    if ( member( q, j ).is_false() || member( r, j ).is_false() )
      continue;
    auto const sc = Term::of( sat::Lit::negative( same_class( q, r, j ) ) );
    auto const& aq = activation( q, i, j );
    auto const& ar = activation( r, i, j );
    for ( auto const& [cq, vq] : aq )
      for ( auto const& [cr, vr] : ar )
        if ( !cq.intersects( cr ) )
          problem_.add_clause( { Term::of( sat::Lit::negative( vq ) ), Term::of( sat::Lit::negative( vr ) ), sc } );
  }
}

void SatEncoding::encode_nonemptiness( ClassSystem const& cs, std::span<Violation const> violations )
{
  for ( auto const& v : violations )
  {
    std::vector<StateId> defined;
    for ( auto q : cs.members[v.cls] )
      if ( m_.is_defined( q, v.input ) )
        defined.push_back( q );
    for ( std::size_t a = 0; a < defined.size(); ++a )
      for ( std::size_t b = a + 1; b < defined.size(); ++b )
        encode_pair( defined[a], defined[b], v.input );
  }
}

void SatEncoding::encode_nonemptiness_eager()
{
  for ( Valuation i = 0; i < m_.num_inputs(); ++i )
    for ( StateId q = 0; q < m_.num_states(); ++q )
      for ( StateId r = q + 1; r < m_.num_states(); ++r )
        if ( m_.is_defined( q, i ) && m_.is_defined( r, i ) && vm_.variation( q, r ) )
          encode_pair( q, r, i );
}

// ---------------------------------------------------------------- minimize

namespace
{

void dump( MinimizeOptions const& opts, CnfProblem const& p, std::size_t n, std::size_t round )
{
  if ( !opts.dimacs_dir )
    return;
  std::filesystem::create_directories( *opts.dimacs_dir );
  auto const stem = "n" + std::to_string( n ) + "_r" + std::to_string( round );
  std::ofstream cnf( *opts.dimacs_dir / ( stem + ".cnf" ) );
  p.write_dimacs( cnf );
  std::ofstream map( *opts.dimacs_dir / ( stem + ".varmap" ) );
  p.write_varmap( map );
  if ( !cnf || !map )
    throw std::runtime_error( "cannot write DIMACS dump to " + opts.dimacs_dir->string() );
}

} // namespace

MinimizeResult minimize( Igmm const& m, MinimizeOptions const& opts )
{
  auto const start = std::chrono::steady_clock::now();
  MinimizeResult res{ opts.prune_unreachable ? reachable_prune( m ).first : m, {} };
  auto& rep = res.report;
  auto finish = [&]( RunStatus st ) {
    rep.status = st;
    rep.output_states = res.machine.num_states();
    rep.time_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
    return std::move( res );
  };

  Igmm const work = res.machine;
  rep.input_states = work.num_states();
  auto const vm = variation_matrix( work );
  auto const partial = partial_solution( vm );
  rep.partial_size = partial.size();
  std::span<StateId const> const seed = opts.seed_partial ? std::span<StateId const>( partial ) : std::span<StateId const>();
  std::size_t const first = opts.use_lower_bound ? std::max<std::size_t>( partial.size(), 1 ) : 1;

  for ( std::size_t n = first; n < work.num_states(); ++n )
  {
    if ( opts.deadline.expired() )
      return finish( RunStatus::timeout );
    ++rep.n_tried;
    SatEncoding enc( work, vm, n >= seed.size() ? seed : std::span<StateId const>(), n );
    if ( opts.eager_nonemptiness )
      enc.encode_nonemptiness_eager();
    sat::Solver solver( opts.sat_seed );
    std::size_t round = 0;
    while ( true )
    {
      auto& p = enc.problem();
      rep.sat_vars = std::max( rep.sat_vars, p.num_vars() );
      rep.sat_clauses = std::max( rep.sat_clauses, p.num_clauses() );
      dump( opts, p, n, round );
      p.feed( solver );
      auto const st = solver.solve( opts.deadline );
      if ( st == sat::Status::timeout )
        return finish( RunStatus::timeout );
      if ( st == sat::Status::unsat )
        break;
      auto const cs = enc.decode( solver );
      auto const violations = check_nonemptiness( work, cs );
      if ( violations.empty() )
      {
        res.machine = build_machine( work, cs );
        return finish( RunStatus::ok );
      }
      enc.encode_nonemptiness( cs, violations );
      ++round;
      ++rep.cegar_rounds;
      rep.max_rounds_per_n = std::max( rep.max_rounds_per_n, round );
    }
  }
  return finish( RunStatus::ok );
}

} // namespace igmm
