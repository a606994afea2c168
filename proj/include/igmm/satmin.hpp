#pragma once

#include "igmm/deadline.hpp"
#include "igmm/machine.hpp"
#include "igmm/relations.hpp"
#include "igmm/sat_solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace igmm
{

inline constexpr std::size_t kNoClass = ~std::size_t{ 0 };

/// Union of the defined successors of `cls` under input `i`.
std::vector<StateId> class_succ( Igmm const& m, std::span<StateId const> cls, Valuation i );

/// Intersection of the output sets of `cls` under input `i` (undefined
/// transitions contribute the full set).
ValuationSet class_out( Igmm const& m, std::span<StateId const> cls, Valuation i );

/// A set of classes over the states of a machine, with the chosen successor
/// class for every (class, input).
struct ClassSystem
{
  std::vector<std::vector<StateId>> members;
  /// `succ_choice[k][i]`: class holding the successors of class k under i,
  /// or `kNoClass` when it has none.
  std::vector<std::vector<std::size_t>> succ_choice;

  std::size_t size() const { return members.size(); }
};

struct Violation
{
  std::size_t cls = 0;
  Valuation input = 0;

  bool operator==( Violation const& ) const = default;
};

/// Every (class, input) whose common output is empty.
std::vector<Violation> check_nonemptiness( Igmm const& m, ClassSystem const& cs );

/// Machine with one state per class.  Throws std::logic_error if the system
/// does not cover the machine, is not closed under the chosen successors or
/// has an empty common output.
Igmm build_machine( Igmm const& m, ClassSystem const& cs );

/// A constant or a solver literal, as seen by the encoder.
struct Term
{
  enum class Kind
  {
    false_,
    true_,
    literal
  };
  Kind kind = Kind::false_;
  sat::Lit lit;

  static Term constant( bool b ) { return { b ? Kind::true_ : Kind::false_, {} }; }
  static Term of( sat::Lit l ) { return { Kind::literal, l }; }
  bool is_false() const { return kind == Kind::false_; }
  bool is_true() const { return kind == Kind::true_; }
  Term operator~() const
  {
    switch ( kind )
    {
    case Kind::false_:
      return constant( true );
    case Kind::true_:
      return constant( false );
    default:
      return of( ~lit );
    }
  }
};

/// Named variables plus a growing clause list.
class CnfProblem
{
public:
  sat::Var new_var( std::string name );
  /// Drops false terms; a clause holding a true term is not emitted.
  void add_clause( std::initializer_list<Term> terms );
  void add_clause( std::vector<Term> const& terms );

  std::size_t num_vars() const { return names_.size(); }
  std::size_t num_clauses() const { return clauses_.size(); }
  std::vector<std::vector<sat::Lit>> const& clauses() const { return clauses_; }
  std::string const& var_name( sat::Var v ) const { return names_[v]; }

  /// Hands the variables and clauses added since the previous call to `solver`.
  void feed( sat::Solver& solver );

  void write_dimacs( std::ostream& os ) const;
  void write_varmap( std::ostream& os ) const;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<sat::Lit>> clauses_;
  std::size_t fed_vars_ = 0;
  std::size_t fed_clauses_ = 0;
};

/// Cover/closure encoding for a fixed class count, extended on demand with
/// nonemptiness constraints.
///
/// With seeding, the p-th state of the partial solution is pinned to class
/// p: its membership literal is the constant true and literals it forces to
/// false are never allocated.
class SatEncoding
{
public:
  SatEncoding( Igmm const& m, VariationMatrix const& vm, std::span<StateId const> partial, std::size_t n_classes );

  CnfProblem& problem() { return problem_; }
  CnfProblem const& problem() const { return problem_; }
  std::size_t num_classes() const { return n_; }

  /// Membership term s(q, j).
  Term member( StateId q, std::size_t j ) const;
  /// Closure term z(i, k, j); false when it was pruned.
  Term closure( Valuation i, std::size_t k, std::size_t j ) const;

  std::size_t num_s_vars() const;

  ClassSystem decode( sat::Solver const& solver ) const;

  /// Adds the nonemptiness constraints for the states of each violating
  /// (class, input).  Cube activation and same-class literals carry the
  /// class index, so a state may activate different cubes in different
  /// classes; a pair's constraints are emitted for every class at once.
  /// Variables and clauses are created once per (state, input, class),
  /// (pair, class) and (pair, input).
  void encode_nonemptiness( ClassSystem const& cs, std::span<Violation const> violations );
  /// Adds the nonemptiness constraints for every pair of variation states.
  void encode_nonemptiness_eager();

private:
  void encode_pair( StateId q, StateId r, Valuation i );
  std::vector<std::pair<Cube, sat::Var>> const& activation( StateId q, Valuation i, std::size_t j );
  sat::Var same_class( StateId q, StateId r, std::size_t j );
  bool value( Term t, sat::Solver const& solver ) const;

  Igmm const& m_;
  VariationMatrix const& vm_;
  std::vector<StateId> partial_;
  std::size_t n_;
  CnfProblem problem_;
  std::vector<Term> s_;                  // [q * n + j]
  std::vector<std::vector<Term>> z_;     // [i * n + k][j]; empty when (k, i) has no successors
  std::map<std::tuple<StateId, Valuation, std::size_t>, std::vector<std::pair<Cube, sat::Var>>> a_;
  std::map<std::tuple<StateId, StateId, std::size_t>, sat::Var> sc_;
  std::set<std::tuple<StateId, StateId, Valuation>> triples_;
};

enum class RunStatus
{
  ok,
  timeout
};

struct MinimizeOptions
{
  bool prune_unreachable = true;
  /// Pin the partial solution into the encoding.
  bool seed_partial = true;
  /// Start the search at the partial-solution size instead of 1.
  bool use_lower_bound = true;
  /// Emit all nonemptiness constraints up front instead of lazily.
  bool eager_nonemptiness = false;
  std::uint64_t sat_seed = 0;
  Deadline deadline = Deadline::never();
  /// Dump `n<n>_r<round>.cnf` and `.varmap` files here when set.
  std::optional<std::filesystem::path> dimacs_dir;
};

struct MinimizeReport
{
  std::string method = "sat";
  RunStatus status = RunStatus::ok;
  StateId input_states = 0;
  StateId output_states = 0;
  std::size_t partial_size = 0;
  std::size_t n_tried = 0;
  /// Largest problem seen across class counts and refinement rounds.
  std::size_t sat_vars = 0;
  std::size_t sat_clauses = 0;
  std::size_t cegar_rounds = 0;
  std::size_t max_rounds_per_n = 0;
  double time_ms = 0;
};

struct MinimizeResult
{
  Igmm machine;
  MinimizeReport report;
};

/// Exact minimization: finds a specialization of `m` with the least number
/// of states.  On timeout the (pruned) input is returned with status timeout.
MinimizeResult minimize( Igmm const& m, MinimizeOptions const& opts = {} );

} // namespace igmm
