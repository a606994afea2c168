#pragma once

#include "igmm/boolset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace igmm
{

using StateId = std::uint32_t;

inline constexpr StateId kNoState = ~StateId{ 0 };

/// A defined transition: successor and the non-empty set of allowed outputs.
struct Transition
{
  StateId target = kNoState;
  ValuationSet out;

  bool operator==( Transition const& ) const = default;
};

/// Incompletely specified generalized Mealy machine.
///
/// The transition table holds at most one entry per (state, input valuation).
/// A missing entry means the transition is undefined and the output is
/// unconstrained (lambda returns the full set).
class Igmm
{
public:
  Igmm() = default;
  Igmm( PropSet inputs, PropSet outputs, StateId n_states, StateId init = 0 );

  PropSet const& inputs() const { return inputs_; }
  PropSet const& outputs() const { return outputs_; }
  StateId num_states() const { return n_states_; }
  Valuation num_inputs() const { return inputs_.num_valuations(); }
  StateId init() const { return init_; }

  void set_init( StateId q );

  /// Defines (or redefines) the transition at (q, i).  `out` must be non-empty.
  void set_transition( StateId q, Valuation i, StateId target, ValuationSet out );
  void clear_transition( StateId q, Valuation i );

  /// Appends a state without transitions and returns its index.
  StateId add_state( std::string name = {} );

  std::optional<Transition> const& entry( StateId q, Valuation i ) const;
  bool is_defined( StateId q, Valuation i ) const { return entry( q, i ).has_value(); }
  /// Successor, or `kNoState` when undefined.
  StateId delta( StateId q, Valuation i ) const;
  /// Stored output set, or the full set when the transition is undefined.
  ValuationSet const& lambda( StateId q, Valuation i ) const;

  std::string const& state_name( StateId q ) const;
  void set_state_name( StateId q, std::string name );
  std::vector<std::string> const& state_names() const { return names_; }

  std::size_t num_defined() const;

private:
  std::size_t slot( StateId q, Valuation i ) const;
  void check_state( StateId q ) const;

  PropSet inputs_;
  PropSet outputs_;
  StateId n_states_ = 0;
  StateId init_ = 0;
  std::vector<std::optional<Transition>> table_;
  std::vector<std::string> names_;
  ValuationSet top_;
};

struct MachineStats
{
  StateId n_states = 0;
  std::size_t n_defined_transitions = 0;
  /// Lines after merging inputs that share (source, target, output set).
  std::size_t n_edges_merged = 0;
  bool is_input_complete = false;
};

bool is_input_complete( Igmm const& m );

MachineStats machine_stats( Igmm const& m );

/// `base` if no state of `m` uses it, else `base_1`, `base_2`, ...
std::string unique_state_name( Igmm const& m, std::string const& base );

/// Adds a sink with unconstrained self-loops and routes every undefined
/// transition to it.  Returns `m` unchanged when already input-complete.
Igmm complete_with_sink( Igmm const& m );

/// Keeps the states reachable from the initial state.  The mapping gives
/// the new index of every old state, or `kNoState` for removed ones.
std::pair<Igmm, std::vector<StateId>> reachable_prune( Igmm const& m );

/// Replaces every output set by the first cube of its disjoint cover.
Igmm with_cube_outputs( Igmm const& m );

/// Structural equality modulo a bijective renaming of states that maps the
/// initial states onto each other.  The renaming is forced on the reachable
/// part; unreachable states are matched by name, then transition-less
/// leftovers are paired arbitrarily.
bool equal_up_to_renaming( Igmm const& a, Igmm const& b );

} // namespace igmm
