#include "doctest.h"

TEST_SUITE("properties") {
  TEST_CASE("placeholder") { CHECK(true); }
}
