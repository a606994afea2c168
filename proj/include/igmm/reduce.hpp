#pragma once

#include "igmm/machine.hpp"
#include "igmm/relations.hpp"

namespace igmm
{

/// One state per bisimulation block, numbered by smallest member.
Igmm bisim_quotient( Igmm const& m );

struct OutputAssignmentOptions
{
  /// Forwarded to `representatives`; indices refer to states of the input.
  std::vector<StateId> preferred;
};

/// Redirects every transition to a minimal specialization of its target.
///
/// The machine is sink-completed to compute the preorder, each state is
/// mapped to a representative leaf member, the surviving states keep their
/// outputs and undefined transitions stay undefined.  Unreachable survivors
/// are pruned; the result is a specialization of `m`.
Igmm reduce_with_output_assignment( Igmm const& m, OutputAssignmentOptions const& opts = {} );

/// Output assignment followed by a bisimulation quotient, repeated until the
/// state count stops decreasing.  A single pass is not idempotent since
/// redirected transitions can create new specialization pairs.
Igmm reduce_bisim_oa( Igmm const& m );

/// The representative map used by `reduce_with_output_assignment`, indexed
/// by the states of `m`.
std::vector<StateId> output_assignment_map( Igmm const& m, OutputAssignmentOptions const& opts = {} );

} // namespace igmm
