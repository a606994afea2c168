#pragma once

#include "igmm/deadline.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace igmm::sat
{

using Var = std::uint32_t;

/// Literal: variable index times two, plus one when negated.
struct Lit
{
  std::uint32_t code = 0;

  static Lit positive( Var v ) { return Lit{ v << 1 }; }
  static Lit negative( Var v ) { return Lit{ ( v << 1 ) | 1u }; }

  Var var() const { return code >> 1; }
  bool negated() const { return code & 1u; }
  Lit operator~() const { return Lit{ code ^ 1u }; }
  /// 1-based signed DIMACS form.
  int dimacs() const { return negated() ? -static_cast<int>( var() + 1 ) : static_cast<int>( var() + 1 ); }

  auto operator<=>( Lit const& ) const = default;
};

enum class Status
{
  sat,
  unsat,
  timeout
};

/// Conflict-driven clause-learning solver: two watched literals, first-UIP
/// learning, activity-based branching with phase saving and Luby restarts.
///
/// Clauses may be added between calls to `solve`; learnt clauses are kept
/// since the clause set only grows.
class Solver
{
public:
  explicit Solver( std::uint64_t seed = 0 );

  Var new_var();
  std::size_t num_vars() const { return assigns_.size(); }
  std::size_t num_clauses() const { return n_original_; }

  /// Returns false once the clause set is known to be unsatisfiable.
  bool add_clause( std::span<Lit const> lits );
  bool add_clause( std::initializer_list<Lit> lits ) { return add_clause( std::span<Lit const>( lits.begin(), lits.size() ) ); }

  Status solve( Deadline const& deadline = Deadline::never() );

  /// Model value after `solve` returned `sat`.
  bool model_value( Var v ) const { return model_[v]; }
  bool model_value( Lit l ) const { return model_[l.var()] != l.negated(); }

  std::uint64_t conflicts() const { return conflicts_; }

private:
  using ClauseRef = std::uint32_t;
  static constexpr ClauseRef kNoReason = ~ClauseRef{ 0 };

  struct Clause
  {
    std::vector<Lit> lits;
    bool learnt = false;
  };

  std::int8_t value( Lit l ) const
  {
    auto const a = assigns_[l.var()];
    return l.negated() ? static_cast<std::int8_t>( -a ) : a;
  }
  int decision_level() const { return static_cast<int>( trail_lim_.size() ); }

  void enqueue( Lit l, ClauseRef reason );
  ClauseRef propagate();
  void analyze( ClauseRef conflict, std::vector<Lit>& learnt, int& back_level );
  void cancel_until( int level );
  ClauseRef attach( std::vector<Lit> lits, bool learnt );
  Lit pick_branch();
  void bump( Var v );
  void decay();

  void heap_insert( Var v );
  Var heap_pop();
  void heap_up( std::size_t pos );
  void heap_down( std::size_t pos );
  bool heap_less( Var a, Var b ) const { return activity_[a] > activity_[b]; }

  bool ok_ = true;
  std::uint64_t seed_;
  std::vector<Clause> clauses_;
  std::size_t n_original_ = 0;
  std::vector<std::vector<ClauseRef>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<ClauseRef> reason_;
  std::vector<bool> phase_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<Var> heap_;
  std::vector<std::int64_t> heap_pos_;
  std::vector<bool> seen_;
  std::vector<bool> model_;
  std::uint64_t conflicts_ = 0;
};

} // namespace igmm::sat
