#include <doctest.h>
TEST_CASE("placeholder acceptance") { CHECK(true); }
