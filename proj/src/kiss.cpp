#include "igmm/kiss.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace igmm
{

ParseError::ParseError( std::size_t line, std::size_t column, std::string const& what )
    : std::runtime_error( std::to_string( line ) + ":" + std::to_string( column ) + ": " + what ),
      line_( line ),
      column_( column )
{
}

namespace
{

struct Token
{
  std::string_view text;
  std::size_t column = 0; // 1-based
};

std::vector<Token> tokenize( std::string_view line )
{
  std::vector<Token> out;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    while ( i < line.size() && ( line[i] == ' ' || line[i] == '\t' || line[i] == '\r' ) )
      ++i;
    if ( i >= line.size() )
      break;
    std::size_t const start = i;
    while ( i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' )
      ++i;
    out.push_back( { line.substr( start, i - start ), start + 1 } );
  }
  return out;
}

std::string_view strip_comment( std::string_view line )
{
  auto const pos = line.find( '#' );
  return pos == std::string_view::npos ? line : line.substr( 0, pos );
}

struct PendingLine
{
  std::size_t line_no = 0;
  std::vector<Token> tokens;
};

class Parser
{
public:
  Parser( Format format, ParseOptions const& opts ) : format_( format ), opts_( opts ) {}

  Igmm run( std::string_view text )
  {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while ( pos <= text.size() && !done_ )
    {
      auto const nl = text.find( '\n', pos );
      auto const raw = text.substr( pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos );
      ++line_no;
      handle_line( line_no, tokenize( strip_comment( raw ) ) );
      if ( nl == std::string_view::npos )
        break;
      pos = nl + 1;
    }
    return finish( line_no );
  }

private:
  [[noreturn]] void fail( std::size_t line, std::size_t col, std::string const& msg ) const
  {
    throw ParseError( line, col, msg );
  }

  unsigned parse_count( std::size_t line, Token const& t ) const
  {
    unsigned value = 0;
    auto const* first = t.text.data();
    auto const* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars( first, last, value );
    if ( ec != std::errc{} || ptr != last )
      fail( line, t.column, "expected a non-negative integer, got '" + std::string( t.text ) + "'" );
    return value;
  }

  void handle_directive( std::size_t line, std::vector<Token> const& tok )
  {
    auto const& d = tok[0].text;
    auto need_args = [&]( std::size_t n ) {
      if ( tok.size() != n + 1 )
        fail( line, tok[0].column, "directive " + std::string( d ) + " expects " + std::to_string( n ) + " argument(s)" );
    };
    auto check_props = [&]( unsigned k, Token const& t ) {
      if ( k > opts_.max_props )
        fail( line, t.column, "too many propositions: " + std::to_string( k ) + " > " + std::to_string( opts_.max_props ) );
    };
    if ( d == ".i" || d == ".o" )
    {
      need_args( 1 );
      if ( !lines_.empty() )
        fail( line, tok[0].column, std::string( d ) + " must precede transition lines" );
      auto& slot = d == ".i" ? n_in_ : n_out_;
      if ( slot )
        fail( line, tok[0].column, "duplicate " + std::string( d ) + " directive" );
      slot = parse_count( line, tok[1] );
      check_props( *slot, tok[1] );
    }
    else if ( d == ".s" )
    {
      need_args( 1 );
      declared_states_ = parse_count( line, tok[1] );
    }
    else if ( d == ".p" )
    {
      need_args( 1 );
      parse_count( line, tok[1] );
    }
    else if ( d == ".r" )
    {
      need_args( 1 );
      reset_ = std::string( tok[1].text );
    }
    else if ( d == ".ilb" || d == ".ob" )
    {
      auto& names = d == ".ilb" ? in_names_ : out_names_;
      names.clear();
      for ( std::size_t k = 1; k < tok.size(); ++k )
        names.emplace_back( tok[k].text );
      names_line_ = line;
    }
    else if ( d == ".e" || d == ".end" )
    {
      done_ = true;
    }
    else
    {
      fail( line, tok[0].column, "unknown directive '" + std::string( d ) + "'" );
    }
  }

  void handle_line( std::size_t line, std::vector<Token> tok )
  {
    if ( tok.empty() )
      return;
    if ( tok[0].text.front() == '.' )
    {
      handle_directive( line, tok );
      return;
    }
    if ( !n_in_ || !n_out_ )
      fail( line, tok[0].column, "transition line before .i and .o" );
    std::size_t const expected = 2 + ( *n_in_ > 0 ) + ( *n_out_ > 0 );
    if ( tok.size() != expected )
      fail( line, tok[0].column,
            "expected " + std::to_string( expected ) + " fields, got " + std::to_string( tok.size() ) );
    lines_.push_back( { line, std::move( tok ) } );
  }

  Cube parse_cube( std::size_t line, Token const& t, std::string_view text, std::size_t offset, unsigned k ) const
  {
    if ( text.size() != k )
      fail( line, t.column + offset,
            "cube '" + std::string( text ) + "' has " + std::to_string( text.size() ) + " positions, expected " +
                std::to_string( k ) );
    for ( std::size_t j = 0; j < text.size(); ++j )
      if ( text[j] != '0' && text[j] != '1' && text[j] != '-' )
        fail( line, t.column + offset + j, std::string( "invalid character '" ) + text[j] + "' in cube" );
    return Cube::parse( std::string( text ), k );
  }

  ValuationSet parse_outputs( std::size_t line, Token const& t ) const
  {
    unsigned const k = *n_out_;
    ValuationSet out( k );
    std::size_t start = 0;
    while ( true )
    {
      auto const bar = t.text.find( '|', start );
      if ( bar != std::string_view::npos && format_ == Format::kiss2 )
        fail( line, t.column + bar, "'|' output unions require XKISS" );
      auto const piece = t.text.substr( start, bar == std::string_view::npos ? std::string_view::npos : bar - start );
      out |= cube_to_set( parse_cube( line, t, piece, start, k ), k );
      if ( bar == std::string_view::npos )
        break;
      start = bar + 1;
    }
    return out;
  }

  StateId state_index( std::string_view name )
  {
    auto [it, fresh] = index_.try_emplace( std::string( name ), static_cast<StateId>( names_.size() ) );
    if ( fresh )
      names_.emplace_back( name );
    return it->second;
  }

  PropSet make_props( std::vector<std::string> const& names, unsigned k, char const* prefix ) const
  {
    try
    {
      if ( names.empty() )
        return PropSet::numbered( k, prefix, opts_.max_props );
      if ( names.size() != k )
        throw std::invalid_argument( "expected " + std::to_string( k ) + " names, got " + std::to_string( names.size() ) );
      return PropSet( names, opts_.max_props );
    }
    catch ( std::invalid_argument const& e )
    {
      fail( names_line_, 1, e.what() );
    }
  }

  Igmm finish( std::size_t last_line )
  {
    if ( !n_in_ || !n_out_ )
      fail( last_line, 1, "missing .i or .o directive" );
    unsigned const ni = *n_in_;
    unsigned const no = *n_out_;
    auto inputs = make_props( in_names_, ni, "i" );
    auto outputs = make_props( out_names_, no, "o" );

    struct Cell
    {
      StateId target;
      ValuationSet out;
      std::size_t line;
    };
    std::map<std::pair<StateId, Valuation>, Cell> cells;

    for ( auto const& pl : lines_ )
    {
      std::size_t f = 0;
      Cube in_cube;
      Token const* in_tok = nullptr;
      if ( ni > 0 )
      {
        in_tok = &pl.tokens[f++];
        in_cube = parse_cube( pl.line_no, *in_tok, in_tok->text, 0, ni );
      }
      StateId const cur = state_index( pl.tokens[f++].text );
      Token const& next_tok = pl.tokens[f++];
      ValuationSet out = ValuationSet::full( no );
      if ( no > 0 )
        out = parse_outputs( pl.line_no, pl.tokens[f] );

      if ( next_tok.text == "*" )
      {
        // Unspecified successor: only representable with unconstrained outputs.
        if ( !out.is_full() )
          fail( pl.line_no, next_tok.column, "'*' successor requires an all don't-care output" );
        continue;
      }
      StateId const next = state_index( next_tok.text );

      for ( Valuation i : cube_to_set( in_cube, ni ).elements() )
      {
        auto [it, fresh] = cells.try_emplace( { cur, i }, Cell{ next, out, pl.line_no } );
        if ( fresh )
          continue;
        if ( it->second.target != next )
          fail( pl.line_no, next_tok.column,
                "nondeterministic transition: state '" + names_[cur] + "' already moves to '" +
                    names_[it->second.target] + "' on this input (line " + std::to_string( it->second.line ) + ")" );
        it->second.out |= out;
      }
    }

    std::optional<StateId> init;
    if ( reset_ )
      init = state_index( *reset_ );
    if ( names_.empty() )
      fail( last_line, 1, "machine has no states" );
    if ( declared_states_ )
    {
      if ( names_.size() > *declared_states_ )
        fail( last_line, 1,
              ".s declares " + std::to_string( *declared_states_ ) + " states but " + std::to_string( names_.size() ) +
                  " are used" );
      // States without any line are padded so the count survives a round trip.
      for ( unsigned k = 0; names_.size() < *declared_states_; ++k )
        if ( !index_.contains( "_unused" + std::to_string( k ) ) )
          state_index( "_unused" + std::to_string( k ) );
    }

    Igmm m( std::move( inputs ), std::move( outputs ), static_cast<StateId>( names_.size() ), init.value_or( 0 ) );
    for ( StateId q = 0; q < names_.size(); ++q )
      m.set_state_name( q, names_[q] );
    for ( auto& [key, cell] : cells )
      m.set_transition( key.first, key.second, cell.target, std::move( cell.out ) );
    return m;
  }

  Format format_;
  ParseOptions opts_;
  bool done_ = false;
  std::optional<unsigned> n_in_, n_out_, declared_states_;
  std::optional<std::string> reset_;
  std::size_t names_line_ = 0;
  std::vector<std::string> in_names_, out_names_;
  std::vector<PendingLine> lines_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, StateId> index_;
};

bool is_default_names( PropSet const& p, char const* prefix )
{
  return p == PropSet::numbered( p.arity(), prefix, kHardMaxProps );
}

void check_state_name( std::string const& name )
{
  bool ok = !name.empty() && name.front() != '.' && name != "*";
  for ( char c : name )
    ok = ok && c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '#' && c != '|';
  if ( !ok )
    throw FormatError( "state name '" + name + "' cannot be written as a KISS token" );
}

std::string write_machine( Igmm const& m, bool cube_outputs )
{
  unsigned const ni = m.inputs().arity();
  unsigned const no = m.outputs().arity();
  for ( auto const& n : m.state_names() )
    check_state_name( n );

  std::vector<std::string> lines;
  for ( StateId q = 0; q < m.num_states(); ++q )
  {
    // Groups keyed by (target, outputs), emitted in order of their lowest input.
    std::map<std::pair<StateId, ValuationSet>, ValuationSet> groups;
    std::vector<std::pair<Valuation, std::pair<StateId, ValuationSet>>> order;
    for ( Valuation i = 0; i < m.num_inputs(); ++i )
    {
      auto const& e = m.entry( q, i );
      if ( !e )
        continue;
      std::pair<StateId, ValuationSet> key{ e->target, e->out };
      auto [it, fresh] = groups.try_emplace( key, ni );
      it->second.insert( i );
      if ( fresh )
        order.emplace_back( i, std::move( key ) );
    }
    for ( auto const& [first_input, key] : order )
    {
      auto const& [target, out] = key;
      std::string out_field;
      if ( no > 0 )
      {
        auto const cubes = disjoint_cube_cover( out );
        if ( cube_outputs && cubes.size() != 1 )
          throw FormatError( "state '" + m.state_name( q ) + "' has output " + to_string( out ) +
                             " which is not a single cube" );
        for ( std::size_t c = 0; c < cubes.size(); ++c )
          out_field += ( c ? "|" : "" ) + cubes[c].to_string( no );
      }
      for ( auto const& in_cube : disjoint_cube_cover( groups.at( key ) ) )
      {
        std::string l;
        if ( ni > 0 )
          l += in_cube.to_string( ni ) + ' ';
        l += m.state_name( q ) + ' ' + m.state_name( target );
        if ( no > 0 )
          l += ' ' + out_field;
        lines.push_back( std::move( l ) );
      }
    }
  }

  std::ostringstream os;
  os << ".i " << ni << '\n' << ".o " << no << '\n';
  auto join = []( std::vector<std::string> const& v ) {
    std::string s;
    for ( auto const& x : v )
      s += ' ' + x;
    return s;
  };
  if ( !is_default_names( m.inputs(), "i" ) )
    os << ".ilb" << join( m.inputs().names() ) << '\n';
  if ( !is_default_names( m.outputs(), "o" ) )
    os << ".ob" << join( m.outputs().names() ) << '\n';
  os << ".s " << m.num_states() << '\n';
  os << ".p " << lines.size() << '\n';
  os << ".r " << m.state_name( m.init() ) << '\n';
  for ( auto const& l : lines )
    os << l << '\n';
  os << ".e\n";
  return os.str();
}

} // namespace

Igmm parse_kiss2( std::string_view text, ParseOptions const& opts )
{
  return Parser( Format::kiss2, opts ).run( text );
}

Igmm parse_xkiss( std::string_view text, ParseOptions const& opts )
{
  return Parser( Format::xkiss, opts ).run( text );
}

Format detect_format( std::string_view text )
{
  std::size_t pos = 0;
  while ( pos < text.size() )
  {
    auto const nl = text.find( '\n', pos );
    auto const line = strip_comment( text.substr( pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos ) );
    auto const tok = tokenize( line );
    if ( !tok.empty() && tok[0].text.front() != '.' && line.find( '|' ) != std::string_view::npos )
      return Format::xkiss;
    if ( nl == std::string_view::npos )
      break;
    pos = nl + 1;
  }
  return Format::kiss2;
}

Igmm parse_machine( std::string_view text, Format format, ParseOptions const& opts )
{
  if ( format == Format::automatic )
    format = detect_format( text );
  return format == Format::kiss2 ? parse_kiss2( text, opts ) : parse_xkiss( text, opts );
}

std::string write_xkiss( Igmm const& m )
{
  return write_machine( m, false );
}

std::string write_kiss2( Igmm const& m )
{
  return write_machine( m, true );
}

} // namespace igmm
