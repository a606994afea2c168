#include "common.hpp"

#include "igmm/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace igmm;
using testing::fixture_path;

namespace fs = std::filesystem;

namespace
{

struct Outcome
{
  int code;
  std::string out;
  std::string err;
};

Outcome run( std::vector<std::string> const& args, std::string const& stdin_text = {} )
{
  std::istringstream in( stdin_text );
  std::ostringstream out, err;
  int const code = cli::run( args, in, out, err );
  return { code, out.str(), err.str() };
}

fs::path scratch_dir( std::string const& tag )
{
  auto const p = fs::temp_directory_path() / ( "igmm_cli_" + tag );
  fs::remove_all( p );
  fs::create_directories( p );
  return p;
}

std::vector<std::vector<std::string>> read_csv( fs::path const& p )
{
  std::ifstream f( p );
  std::vector<std::vector<std::string>> rows;
  for ( std::string line; std::getline( f, line ); )
  {
    std::vector<std::string> cells;
    std::stringstream ss( line );
    for ( std::string c; std::getline( ss, c, ',' ); )
      cells.push_back( c );
    if ( !line.empty() && line.back() == ',' )
      cells.emplace_back();
    rows.push_back( cells );
  }
  return rows;
}

} // namespace

TEST_SUITE( "cli" )
{
  TEST_CASE( "minimize to a file" )
  {
    auto const dir = scratch_dir( "fig1" );
    auto const path = dir / "out.kiss";
    auto const r = run( { "minimize", fixture_path( "fig1.kiss" ), "-o", path.string() } );
    CHECK( r.code == cli::kOk );
    std::ifstream f( path );
    std::size_t lines = 0;
    bool one_state = false;
    for ( std::string line; std::getline( f, line ); )
    {
      one_state = one_state || line == ".s 1";
      lines += !line.empty() && line[0] != '.';
    }
    CHECK( one_state );
    CHECK( lines == 3 );
    fs::remove_all( dir );
  }

  TEST_CASE( "minimize writes the machine to stdout" )
  {
    auto const r = run( { "minimize", fixture_path( "fig1.kiss" ) } );
    CHECK( r.code == cli::kOk );
    auto const m = parse_machine( r.out );
    CHECK( m.num_states() == 1 );
    CHECK( r.err.find( "sat: states 3 -> 1" ) != std::string::npos );
  }

  TEST_CASE( "minimize reads stdin and honors methods" )
  {
    auto const text = testing::read_fixture( "fig2.xkiss" );
    CHECK( parse_machine( run( { "minimize", "-" }, text ).out ).num_states() == 3 );
    CHECK( parse_machine( run( { "minimize", "-", "--method", "bisim-oa" }, text ).out ).num_states() == 4 );
    CHECK( parse_machine( run( { "minimize", "-", "--method", "bisim" }, text ).out ).num_states() == 6 );
    CHECK( parse_machine( run( { "reduce", "-" }, text ).out ).num_states() == 4 );
    CHECK( run( { "minimize", "-", "--method", "fast" }, text ).code == cli::kInputError );
  }

  TEST_CASE( "output file and cube outputs" )
  {
    auto const dir = scratch_dir( "out" );
    auto const path = ( dir / "r.kiss" ).string();
    auto const r = run( { "minimize", fixture_path( "gadget.xkiss" ), "-o", path, "--cube-outputs", "--keep-unreachable" } );
    CHECK( r.code == cli::kOk );
    CHECK( r.out.find( "status ok" ) != std::string::npos );
    std::ifstream f( path );
    std::stringstream ss;
    ss << f.rdbuf();
    auto const m = parse_kiss2( ss.str() );
    CHECK( m.num_states() >= 1 );
    CHECK( check_specialization( m, testing::fixture( "gadget.xkiss" ) ).ok );
    fs::remove_all( dir );
  }

  TEST_CASE( "gadget keeps unreachable states on request" )
  {
    auto const pruned = run( { "minimize", fixture_path( "gadget.xkiss" ) } );
    CHECK( parse_machine( pruned.out ).num_states() == 1 );
    auto const kept = run( { "minimize", fixture_path( "gadget.xkiss" ), "--keep-unreachable" } );
    CHECK( parse_machine( kept.out ).num_states() == 2 );
    CHECK( kept.err.find( "cegar rounds 0" ) == std::string::npos );
  }

  TEST_CASE( "dimacs dump" )
  {
    auto const dir = scratch_dir( "dimacs" );
    auto const r = run( { "minimize", fixture_path( "fig2.xkiss" ), "--dimacs-dump", dir.string() } );
    CHECK( r.code == cli::kOk );
    CHECK( fs::exists( dir / "n3_r0.cnf" ) );
    CHECK( fs::exists( dir / "n3_r0.varmap" ) );
    fs::remove_all( dir );
  }

  TEST_CASE( "verify exit codes" )
  {
    auto const ok = run( { "verify", "--impl", fixture_path( "fig2_min.xkiss" ), "--spec", fixture_path( "fig2.xkiss" ) } );
    CHECK( ok.code == cli::kOk );
    auto const bad = run( { "verify", "--impl", fixture_path( "fig2.xkiss" ), "--spec", fixture_path( "fig2_min.xkiss" ) } );
    CHECK( bad.code == cli::kVerificationFailure );
    CHECK( bad.out.find( "word: 0 1 output: 000" ) != std::string::npos );
    auto const mismatch = run( { "verify", "--impl", fixture_path( "fig1.kiss" ), "--spec", fixture_path( "fig2.xkiss" ) } );
    CHECK( mismatch.code == cli::kInputError );
  }

  TEST_CASE( "stats" )
  {
    auto const r = run( { "stats", fixture_path( "fig2.xkiss" ) } );
    CHECK( r.code == cli::kOk );
    CHECK( r.out == "7 states, 14 defined transitions, input-complete: true\nmerged edge lines: 12\n" );
    auto const two = run( { "stats", fixture_path( "fig1.kiss" ), fixture_path( "fig2.xkiss" ) } );
    CHECK( two.out.find( "3 states, 6 defined transitions, input-complete: false" ) != std::string::npos );
  }

  TEST_CASE( "input errors carry position" )
  {
    auto const r = run( { "stats", "-" }, ".i 1\n.o 1\n1 a\n" );
    CHECK( r.code == cli::kInputError );
    CHECK( r.err.find( "-:3:" ) != std::string::npos );
    CHECK( run( { "stats", "/nonexistent/machine.kiss" } ).code == cli::kInputError );
    CHECK( run( {} ).code == cli::kInputError );
    CHECK( run( { "minimize" } ).code == cli::kInputError );
  }

  TEST_CASE( "expired budget" )
  {
    auto const r = run( { "minimize", fixture_path( "fig2.xkiss" ), "--timeout-s", "0" } );
    CHECK( r.code == cli::kTimeout );
    CHECK( r.err.find( "status timeout" ) != std::string::npos );
  }

  TEST_CASE( "bench rows" )
  {
    auto const dir = scratch_dir( "bench" );
    auto const in = dir / "in";
    fs::create_directories( in );
    fs::copy_file( fixture_path( "fig1.kiss" ), in / "fig1.kiss" );
    fs::copy_file( fixture_path( "fig2.xkiss" ), in / "fig2.xkiss" );
    auto const csv = dir / "bench.csv";
    auto const r = run( { "bench", in.string(), "--csv", csv.string(), "--jobs", "2" } );
    CHECK( r.code == cli::kOk );
    auto const rows = read_csv( csv );
    REQUIRE( rows.size() == 7 );
    std::stringstream header;
    for ( std::size_t c = 0; c < rows[0].size(); ++c )
      header << ( c ? "," : "" ) << rows[0][c];
    CHECK( header.str() == cli::kBenchHeader );

    std::map<std::pair<std::string, std::string>, int> result;
    for ( std::size_t k = 1; k < rows.size(); ++k )
    {
      REQUIRE( rows[k].size() == 11 );
      CHECK( rows[k][10] == "ok" );
      result[{ rows[k][0], rows[k][4] }] = std::stoi( rows[k][5] );
    }
    CHECK( result.at( { "fig2.xkiss", "sat" } ) == 3 );
    CHECK( result.at( { "fig2.xkiss", "bisim-oa" } ) == 4 );
    CHECK( result.at( { "fig2.xkiss", "bisim" } ) == 6 );
    CHECK( result.at( { "fig1.kiss", "sat" } ) == 1 );
    // state 0 specializes state 2, so 2 is redirected to 0
    CHECK( result.at( { "fig1.kiss", "bisim-oa" } ) == 2 );
    CHECK( result.at( { "fig1.kiss", "bisim" } ) == 3 );

    // appending keeps a single header
    CHECK( run( { "bench", in.string(), "--csv", csv.string(), "--methods", "bisim" } ).code == cli::kOk );
    CHECK( read_csv( csv ).size() == 9 );
    fs::remove_all( dir );
  }

  TEST_CASE( "bench edge cases" )
  {
    auto const dir = scratch_dir( "bench_edge" );
    auto const empty = dir / "empty";
    fs::create_directories( empty );
    auto const csv = dir / "a.csv";
    CHECK( run( { "bench", empty.string(), "--csv", csv.string() } ).code == cli::kOk );
    CHECK( read_csv( csv ).size() == 1 );

    auto const in = dir / "in";
    fs::create_directories( in );
    fs::copy_file( fixture_path( "fig2.xkiss" ), in / "fig2.xkiss" );
    {
      std::ofstream bad( in / "zz_broken.kiss" );
      bad << ".i 1\n.o 1\n1 a\n";
    }
    auto const csv2 = dir / "b.csv";
    CHECK( run( { "bench", in.string(), "--csv", csv2.string(), "--timeout-s", "0", "--methods", "sat,bisim" } ).code ==
           cli::kOk );
    auto const rows = read_csv( csv2 );
    REQUIRE( rows.size() == 5 );
    CHECK( rows[1][10] == "timeout" );
    CHECK( rows[2][10] == "timeout" );
    CHECK( rows[3][10] == "error" );
    CHECK( rows[4][10] == "error" );
    CHECK( run( { "bench", in.string(), "--methods", "sat,magic" } ).code == cli::kInputError );
    CHECK( run( { "bench", ( dir / "missing" ).string() } ).code == cli::kInputError );
    fs::remove_all( dir );
  }
}
