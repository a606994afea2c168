#pragma once

#include "igmm/machine.hpp"

#include <cstddef>
#include <vector>

namespace igmm
{

/// Square boolean matrix over states.
class StateMatrix
{
public:
  StateMatrix() = default;
  StateMatrix( StateId n, bool value ) : n_( n ), bits_( static_cast<std::size_t>( n ) * n, value ) {}

  StateId size() const { return n_; }
  bool operator()( StateId a, StateId b ) const { return bits_[index( a, b )]; }
  void set( StateId a, StateId b, bool v ) { bits_[index( a, b )] = v; }

  bool operator==( StateMatrix const& ) const = default;

private:
  std::size_t index( StateId a, StateId b ) const { return static_cast<std::size_t>( a ) * n_ + b; }

  StateId n_ = 0;
  std::vector<bool> bits_;
};

/// `(k, l)` is set iff the two states are NOT variations of each other:
/// some input word leads them to a pair whose outputs are disjoint.
/// Symmetric with a false diagonal.
struct VariationMatrix
{
  StateMatrix mat;

  StateId size() const { return mat.size(); }
  bool not_variation( StateId a, StateId b ) const { return mat( a, b ); }
  bool variation( StateId a, StateId b ) const { return !mat( a, b ); }
};

VariationMatrix variation_matrix( Igmm const& m );

/// Greedy set of pairwise non-variation states, in insertion order.  States
/// are taken by decreasing count of non-variations (ties: lowest index) and
/// skipped when they are a variation of an inserted state.
std::vector<StateId> partial_solution( VariationMatrix const& vm );

/// `rel(a, b)` holds iff state a is a specialization of state b.
struct SpecRelation
{
  StateMatrix rel;

  StateId size() const { return rel.size(); }
  bool specializes( StateId a, StateId b ) const { return rel( a, b ); }
};

/// Greatest relation such that a ⊑ b implies, for every input, output
/// inclusion and related successors.  Requires an input-complete machine.
SpecRelation specialization_relation( Igmm const& m );

/// Condensation of the specialization preorder.
struct SpecGraph
{
  /// Mutual-specialization classes, each sorted, ordered by smallest member.
  std::vector<std::vector<StateId>> nodes;
  std::vector<std::size_t> node_of;
  /// `edges[a]` holds b iff members of b specialize members of a (a != b).
  /// The relation is transitive, so edges are already closed.
  std::vector<std::vector<std::size_t>> edges;
  /// Nodes without successors: the minimal elements.
  std::vector<std::size_t> leaves;

  bool is_leaf( std::size_t node ) const { return edges[node].empty(); }
};

/// Throws std::invalid_argument when `rel` is not reflexive and transitive.
SpecGraph spec_graph( SpecRelation const& rel );

struct RepresentativeOptions
{
  /// Leaves containing these states win, in list order, over the default
  /// rule (lowest smallest member).
  std::vector<StateId> preferred;
  /// States never chosen as a representative unless they are the only
  /// member of their leaf (the completion sink, typically).
  std::vector<StateId> excluded;
};

/// Maps each state to a member of a leaf reachable from its node.  All
/// members of a node share a representative; within the chosen leaf the
/// smallest non-excluded member is used.
std::vector<StateId> representatives( SpecGraph const& g, RepresentativeOptions const& opts = {} );

/// Coarsest partition where blockmates have equal output sets, equal
/// definedness and successors in the same block for every input.
/// Blocks are numbered by smallest member; returns the block of each state.
std::vector<std::size_t> bisimulation_partition( Igmm const& m );

} // namespace igmm
