#include <doctest.h>

#include "uavbf/verify.hpp"

using namespace uavbf;

TEST_CASE("every invariant suite passes") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    for (const auto& r : run_suite(name)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
  }
  CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
}

TEST_CASE("embedding round trip") { CHECK(embedding_roundtrip_error(77, 200) <= 1e-10); }
