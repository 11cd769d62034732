#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>

int main(int argc, char** argv) {
    // keep the BLAS behind LAPACKE single-threaded; all parallelism is ours
    setenv("OPENBLAS_NUM_THREADS", "1", 0);
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
