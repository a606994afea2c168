#pragma once

#include "igmm/machine.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace igmm
{

/// KISS2 allows a single output cube per line.  XKISS additionally accepts
/// several cubes joined by `|`, meaning the union of their expansions.
enum class Format
{
  kiss2,
  xkiss,
  automatic
};

struct ParseOptions
{
  unsigned max_props = kDefaultMaxProps;
};

class ParseError : public std::runtime_error
{
public:
  ParseError( std::size_t line, std::size_t column, std::string const& what );

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised by the writers when the machine cannot be expressed in the format.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

Igmm parse_kiss2( std::string_view text, ParseOptions const& opts = {} );
Igmm parse_xkiss( std::string_view text, ParseOptions const& opts = {} );
Igmm parse_machine( std::string_view text, Format format = Format::automatic, ParseOptions const& opts = {} );

/// `xkiss` when some transition line uses `|` in its output field.
Format detect_format( std::string_view text );

std::string write_xkiss( Igmm const& m );
/// Throws FormatError if some output set is not a single cube.
std::string write_kiss2( Igmm const& m );

} // namespace igmm
