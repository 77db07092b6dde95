#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"
#include "atorus/linalg.hpp"

int main(int argc, char** argv) {
  atorus::blas_runtime_guard(argc, argv);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
