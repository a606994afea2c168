#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace igmm::cli
{

enum ExitCode : int
{
  kOk = 0,
  kInputError = 1,
  kTimeout = 2,
  kVerificationFailure = 3
};

/// Entry point of the command-line tool; `args` excludes the program name.
/// `in` backs the `-` path.
int run( std::vector<std::string> const& args, std::istream& in, std::ostream& out, std::ostream& err );

/// Column header of the benchmark CSV.
inline constexpr char const* kBenchHeader =
    "file,states,in_props,out_props,method,result_states,time_ms,sat_vars,sat_clauses,cegar_rounds,status";

} // namespace igmm::cli
