#pragma once

#include "igmm/machine.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace igmm
{

struct SpecCheck
{
  bool ok = true;
  /// Input word leading to the failing pair; its last letter is the input
  /// under which the pair fails.
  std::vector<Valuation> word;
  /// An output the implementation allows and the specification forbids at
  /// the failing step.
  std::optional<Valuation> output;
  /// Failing pair; `impl_state` equals the state count of `impl` when the
  /// implementation already left its defined part.
  StateId impl_state = kNoState;
  StateId spec_state = kNoState;

  explicit operator bool() const { return ok; }
};

/// Checks that `impl` is a specialization of `spec` by a breadth-first walk
/// over reachable state pairs.  Where `spec` is undefined anything goes;
/// an undefined transition of `impl` behaves as a move to a state that
/// allows every output forever, so it only passes against such behavior.
/// Throws std::invalid_argument when the proposition sets differ.
SpecCheck check_specialization( Igmm const& impl, Igmm const& spec );

/// Initial states related by the largest bisimulation (equal output sets,
/// equal definedness, related successors).
bool check_bisimilar( Igmm const& a, Igmm const& b );

/// Reference variation test: a and b are variations iff no pair reachable
/// from (a, b) under commonly defined inputs has disjoint output sets.
bool is_variation( Igmm const& m, StateId a, StateId b );

/// Failing word and output as text, e.g. `word: 10 01 output: 1-0`, with
/// valuations written as minterms.
std::string describe( SpecCheck const& res, Igmm const& impl );

inline constexpr StateId kBruteForceMaxStates = 8;
inline constexpr Valuation kBruteForceMaxInputs = 4;

/// Least number of (possibly overlapping) variation classes that cover the
/// states, are closed and have non-empty common outputs, searched up to
/// `cap`.  Returns the state count when nothing smaller is found.
/// Throws std::invalid_argument above the size guards.
StateId brute_force_min_size( Igmm const& m, StateId cap = kBruteForceMaxStates );

struct RandomIgmmParams
{
  std::uint64_t seed = 0;
  StateId n_states = 1;
  unsigned n_in_props = 1;
  unsigned n_out_props = 1;
  /// Probability that a (state, input) transition is defined.
  double density = 1.0;
  /// Probability that each output valuation belongs to a defined output set
  /// (resampled when empty).
  double output_bias = 0.5;
};

/// Deterministic for a fixed parameter set; initial state 0.
Igmm random_igmm( RandomIgmmParams const& p );

} // namespace igmm
