#pragma once

#include <doctest.h>

#include <functional>

#include "intentbench/error.hpp"

/// Kind of the intentbench::Error thrown by `f`; fails the test when none is.
inline intentbench::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const intentbench::Error& e) {
    return e.kind();
  }
  FAIL("expected an intentbench::Error");
  return intentbench::ErrorKind::Numeric;
}
