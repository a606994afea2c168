#include "igmm/cli.hpp"

#include "igmm/kiss.hpp"
#include "igmm/reduce.hpp"
#include "igmm/satmin.hpp"
#include "igmm/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace igmm::cli
{

namespace
{

namespace fs = std::filesystem;

struct Settings
{
  std::string method = "sat";
  std::string format = "auto";
  bool cube_outputs = false;
  bool keep_unreachable = false;
  double timeout_s = 1800;
  std::string dimacs_dir;
  std::uint64_t seed = 0;
  unsigned max_props = kDefaultMaxProps;
};

struct InputError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string fixed3( double v )
{
  char buf[64];
  auto const r = std::to_chars( buf, buf + sizeof buf, v, std::chars_format::fixed, 3 );
  return std::string( buf, r.ptr );
}

Format format_of( std::string const& f )
{
  if ( f == "kiss2" )
    return Format::kiss2;
  if ( f == "xkiss" )
    return Format::xkiss;
  return Format::automatic;
}

Igmm load( std::string const& path, Settings const& s, std::istream& in )
{
  std::string text;
  if ( path == "-" )
  {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  else
  {
    std::ifstream f( path, std::ios::binary );
    if ( !f )
      throw InputError( path + ": cannot open file" );
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try
  {
    return parse_machine( text, format_of( s.format ), ParseOptions{ s.max_props } );
  }
  catch ( ParseError const& e )
  {
    throw InputError( path + ":" + e.what() );
  }
  catch ( std::invalid_argument const& e )
  {
    throw InputError( path + ": " + e.what() );
  }
}

struct MethodResult
{
  Igmm machine;
  RunStatus status = RunStatus::ok;
  double time_ms = 0;
  std::size_t sat_vars = 0;
  std::size_t sat_clauses = 0;
  std::size_t cegar_rounds = 0;
};

MethodResult run_method( Igmm const& input, Settings const& s )
{
  auto const start = std::chrono::steady_clock::now();
  auto const deadline = Deadline::after_seconds( s.timeout_s );
  Igmm const m = s.cube_outputs ? with_cube_outputs( input ) : input;
  MethodResult r{ m, RunStatus::ok };
  if ( deadline.expired() )
    r.status = RunStatus::timeout;
  else if ( s.method == "sat" )
  {
    MinimizeOptions o;
    o.prune_unreachable = !s.keep_unreachable;
    o.sat_seed = s.seed;
    o.deadline = deadline;
    if ( !s.dimacs_dir.empty() )
      o.dimacs_dir = s.dimacs_dir;
    auto res = minimize( m, o );
    r.machine = std::move( res.machine );
    r.status = res.report.status;
    r.sat_vars = res.report.sat_vars;
    r.sat_clauses = res.report.sat_clauses;
    r.cegar_rounds = res.report.cegar_rounds;
  }
  else
  {
    Igmm const base = s.keep_unreachable ? m : reachable_prune( m ).first;
    r.machine = s.method == "bisim" ? bisim_quotient( base ) : reduce_bisim_oa( base );
  }
  if ( s.cube_outputs )
    r.machine = with_cube_outputs( r.machine );
  r.time_ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
  return r;
}

std::string report_line( Igmm const& in, MethodResult const& r, std::string const& method )
{
  std::ostringstream os;
  os << method << ": states " << in.num_states() << " -> " << r.machine.num_states() << ", time " << fixed3( r.time_ms )
     << " ms";
  if ( method == "sat" )
    os << ", vars " << r.sat_vars << ", clauses " << r.sat_clauses << ", cegar rounds " << r.cegar_rounds;
  os << ", status " << ( r.status == RunStatus::ok ? "ok" : "timeout" );
  return os.str();
}

int cmd_transform( std::string const& in_path, std::string const& out_path, Settings const& s, std::istream& in,
                   std::ostream& out, std::ostream& err )
{
  Igmm const m = load( in_path, s, in );
  auto const r = run_method( m, s );
  std::string const text = s.cube_outputs ? write_kiss2( r.machine ) : write_xkiss( r.machine );
  if ( out_path.empty() || out_path == "-" )
  {
    out << text;
    err << report_line( m, r, s.method ) << '\n';
  }
  else
  {
    std::ofstream f( out_path, std::ios::binary );
    if ( !( f << text ) )
      throw InputError( out_path + ": cannot write file" );
    out << report_line( m, r, s.method ) << '\n';
  }
  return r.status == RunStatus::ok ? kOk : kTimeout;
}

int cmd_verify( std::string const& impl_path, std::string const& spec_path, Settings const& s, std::istream& in,
                std::ostream& out )
{
  Igmm const impl = load( impl_path, s, in );
  Igmm const spec = load( spec_path, s, in );
  SpecCheck res;
  try
  {
    res = check_specialization( impl, spec );
  }
  catch ( std::invalid_argument const& e )
  {
    throw InputError( e.what() );
  }
  if ( res.ok )
  {
    out << "ok: " << impl_path << " is a specialization of " << spec_path << '\n';
    return kOk;
  }
  std::string const impl_state = res.impl_state < impl.num_states() ? impl.state_name( res.impl_state ) : "(undefined)";
  out << "not a specialization: " << describe( res, impl ) << " (impl state " << impl_state << ", spec state "
      << spec.state_name( res.spec_state ) << ")\n";
  return kVerificationFailure;
}

int cmd_stats( std::vector<std::string> const& paths, Settings const& s, std::istream& in, std::ostream& out )
{
  for ( auto const& p : paths )
  {
    auto const st = machine_stats( load( p, s, in ) );
    if ( paths.size() > 1 )
      out << p << ": ";
    out << st.n_states << " states, " << st.n_defined_transitions
        << " defined transitions, input-complete: " << ( st.is_input_complete ? "true" : "false" ) << '\n';
    out << "merged edge lines: " << st.n_edges_merged << '\n';
  }
  return kOk;
}

std::vector<std::string> split_methods( std::string const& text )
{
  std::vector<std::string> v;
  std::stringstream ss( text );
  for ( std::string item; std::getline( ss, item, ',' ); )
  {
    if ( item != "sat" && item != "bisim" && item != "bisim-oa" )
      throw InputError( "unknown method '" + item + "'" );
    v.push_back( item );
  }
  return v;
}

std::string csv_field( std::string const& s )
{
  if ( s.find_first_of( ",\"\n\r" ) == std::string::npos )
    return s;
  std::string q = "\"";
  for ( char c : s )
  {
    if ( c == '"' )
      q += '"';
    q += c;
  }
  return q + '"';
}

int cmd_bench( std::string const& dir, std::string const& csv_path, std::string const& methods_text, unsigned jobs,
               Settings const& s, std::ostream& out )
{
  auto const methods = split_methods( methods_text );
  std::error_code ec;
  if ( !fs::is_directory( dir, ec ) )
    throw InputError( dir + ": not a directory" );
  std::vector<fs::path> files;
  for ( auto const& e : fs::directory_iterator( dir ) )
    if ( e.is_regular_file() )
      files.push_back( e.path() );
  std::sort( files.begin(), files.end() );

  bool const fresh = !fs::exists( csv_path ) || fs::file_size( csv_path ) == 0;
  std::ofstream csv( csv_path, std::ios::app | std::ios::binary );
  if ( !csv )
    throw InputError( csv_path + ": cannot open for writing" );
  if ( fresh )
    csv << kBenchHeader << '\n';

  std::mutex write_mutex;
  std::atomic<std::size_t> next{ 0 };
  std::atomic<bool> any_timeout{ false };
  auto worker = [&] {
    for ( std::size_t k = next++; k < files.size(); k = next++ )
    {
      std::string const name = files[k].filename().string();
      std::string rows;
      try
      {
        std::istringstream none;
        Igmm const m = load( files[k].string(), s, none );
        for ( auto const& method : methods )
        {
          Settings ms = s;
          ms.method = method;
          if ( !s.dimacs_dir.empty() )
            ms.dimacs_dir = ( fs::path( s.dimacs_dir ) / name ).string();
          std::ostringstream row;
          try
          {
            auto const r = run_method( m, ms );
            bool const timed_out = r.status == RunStatus::timeout;
            any_timeout = any_timeout || timed_out;
            row << csv_field( name ) << ',' << m.num_states() << ',' << m.inputs().arity() << ','
                << m.outputs().arity() << ',' << method << ',' << r.machine.num_states() << ','
                << fixed3( r.time_ms ) << ',' << r.sat_vars << ',' << r.sat_clauses << ',' << r.cegar_rounds << ','
                << ( timed_out ? "timeout" : "ok" ) << '\n';
          }
          catch ( std::exception const& )
          {
            row << csv_field( name ) << ',' << m.num_states() << ',' << m.inputs().arity() << ','
                << m.outputs().arity() << ',' << method << ",,,,,,error\n";
          }
          rows += row.str();
        }
      }
      catch ( std::exception const& )
      {
        for ( auto const& method : methods )
          rows += csv_field( name ) + ",,,," + method + ",,,,,,error\n";
      }
      std::lock_guard lock( write_mutex );
      csv << rows;
      csv.flush();
    }
  };

  std::vector<std::thread> pool;
  for ( unsigned t = 1; t < std::max( jobs, 1u ); ++t )
    pool.emplace_back( worker );
  worker();
  for ( auto& t : pool )
    t.join();

  out << files.size() << " files, " << files.size() * methods.size() << " rows written to " << csv_path << '\n';
  return kOk;
}

void add_common( CLI::App* app, Settings& s )
{
  app->add_option( "--format", s.format, "Input format" )->check( CLI::IsMember( { "auto", "kiss2", "xkiss" } ) );
  app->add_option( "--max-props", s.max_props, "Largest accepted proposition count" )->check( CLI::Range( 0u, kHardMaxProps ) );
}

void add_method_flags( CLI::App* app, Settings& s )
{
  app->add_flag( "--cube-outputs", s.cube_outputs, "Restrict outputs to their first cube and write KISS2" );
  app->add_flag( "--keep-unreachable", s.keep_unreachable, "Do not remove unreachable states first" );
  app->add_option( "--timeout-s", s.timeout_s, "Wall-clock budget per run in seconds" )->check( CLI::NonNegativeNumber );
  app->add_option( "--dimacs-dump", s.dimacs_dir, "Directory receiving one CNF per class count and refinement round" );
  app->add_option( "--seed", s.seed, "SAT solver seed" );
}

} // namespace

int run( std::vector<std::string> const& args, std::istream& in, std::ostream& out, std::ostream& err )
{
  CLI::App app( "IGMM reduction and exact minimization", "igmm" );
  app.require_subcommand( 1 );
  Settings s;
  std::string in_path, out_path, impl_path, spec_path, dir, csv_path = "bench.csv", methods = "sat,bisim-oa,bisim";
  std::vector<std::string> stat_paths;
  unsigned jobs = 1;

  auto* mini = app.add_subcommand( "minimize", "Minimize a machine (exact by default)" );
  mini->add_option( "input", in_path, "Input file, or - for stdin" )->required();
  mini->add_option( "-o,--output", out_path, "Output file (stdout by default)" );
  mini->add_option( "--method", s.method, "sat, bisim or bisim-oa" )->check( CLI::IsMember( { "sat", "bisim", "bisim-oa" } ) );
  add_method_flags( mini, s );
  add_common( mini, s );

  auto* red = app.add_subcommand( "reduce", "Reduce a machine without SAT" );
  red->add_option( "input", in_path, "Input file, or - for stdin" )->required();
  red->add_option( "-o,--output", out_path, "Output file (stdout by default)" );
  red->add_option( "--method", s.method, "bisim or bisim-oa" )->check( CLI::IsMember( { "bisim", "bisim-oa" } ) );
  add_method_flags( red, s );
  add_common( red, s );

  auto* ver = app.add_subcommand( "verify", "Check that one machine specializes another" );
  ver->add_option( "--impl", impl_path, "Candidate specialization" )->required();
  ver->add_option( "--spec", spec_path, "Specification" )->required();
  add_common( ver, s );

  auto* sta = app.add_subcommand( "stats", "Print machine statistics" );
  sta->add_option( "inputs", stat_paths, "Input files" )->required();
  add_common( sta, s );

  auto* ben = app.add_subcommand( "bench", "Run methods over a directory and append CSV rows" );
  ben->add_option( "dir", dir, "Directory of machine files" )->required();
  ben->add_option( "--csv", csv_path, "CSV file to append to" );
  ben->add_option( "--methods", methods, "Comma-separated methods" );
  ben->add_option( "--jobs", jobs, "Parallel instances" )->check( CLI::PositiveNumber );
  add_method_flags( ben, s );
  add_common( ben, s );

  try
  {
    std::vector<std::string> rev( args.rbegin(), args.rend() );
    app.parse( rev );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e, out, err );
  }
  catch ( CLI::CallForAllHelp const& e )
  {
    return app.exit( e, out, err );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e, out, err );
    return kInputError;
  }

  if ( *red && s.method == "sat" )
    s.method = "bisim-oa";

  try
  {
    if ( *mini || *red )
      return cmd_transform( in_path, out_path, s, in, out, err );
    if ( *ver )
      return cmd_verify( impl_path, spec_path, s, in, out );
    if ( *sta )
      return cmd_stats( stat_paths, s, in, out );
    return cmd_bench( dir, csv_path, methods, jobs, s, out );
  }
  catch ( InputError const& e )
  {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  catch ( FormatError const& e )
  {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  catch ( std::exception const& e )
  {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

} // namespace igmm::cli
