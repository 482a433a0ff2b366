#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stairloc/parallel.hpp"

using namespace stairloc;

TEST_SUITE("parallel") {

TEST_CASE("parallel map equals serial map") {
  auto fn = [](std::size_t i) { return std::sin(static_cast<double>(i)) * static_cast<double>(i); };
  for (int threads : {1, 2, 4}) {
    set_thread_count(threads);
    CHECK(thread_count() == threads);
    CHECK(parallel_map<double>(1000, fn) == serial_map<double>(1000, fn));
  }
  CHECK(parallel_map<double>(0, fn).empty());
  set_thread_count(1);
}

TEST_CASE("the first failing index is rethrown") {
  set_thread_count(4);
  auto fn = [](std::size_t i) -> int {
    if (i == 17 || i == 90) throw std::runtime_error("at " + std::to_string(i));
    return static_cast<int>(i);
  };
  try {
    parallel_map<int>(200, fn);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "at 17");
  }
  set_thread_count(1);
}

}
