#pragma once

#include <chrono>
#include <optional>

namespace igmm
{

/// Wall-clock budget checked cooperatively by long-running operations.
class Deadline
{
public:
  using Clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline(); }
  static Deadline after_seconds( double seconds )
  {
    Deadline d;
    d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>( std::chrono::duration<double>( seconds ) );
    return d;
  }

  bool expired() const { return at_ && Clock::now() >= *at_; }

private:
  std::optional<Clock::time_point> at_;
};

/// Thrown by operations that ran out of time.
struct TimeoutError
{
};

} // namespace igmm
