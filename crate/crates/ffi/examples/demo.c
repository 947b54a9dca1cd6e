/* Minimal C consumer of the luvar C ABI.
 *
 * Build (after `cargo build -p luvar-ffi --release`):
 *   cc -std=c99 -I crates/ffi/include crates/ffi/examples/demo.c \
 *      target/release/libluvar_ffi.a -lm -o demo
 */
#include <stdio.h>
#include <stdlib.h>
#include "luvar.h"

static void check(LuvarStatus s, const char *what) {
    if (s != LUVAR_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", what, luvar_status_message(s));
        exit(1);
    }
}

int main(void) {
    /* A = [[4,3],[6,3]], column-major. */
    double data[4] = {4.0, 6.0, 3.0, 3.0};
    LuvarMatrix *a = NULL;
    check(luvar_matrix_from_data(2, 2, data, &a), "from_data");

    /* Factor with the right-looking pivoted variant, unblocked. */
    LuvarPackedLu *lu = NULL;
    uintptr_t step = 0;
    LuvarStatus s = luvar_lu_piv(a, LUVAR_PIV_VARIANT_PIV5, 0, &lu, &step);
    if (s == LUVAR_STATUS_RANK_DEFICIENT_ERROR) {
        fprintf(stderr, "columns dependent at %zu\n", (size_t)step);
        return 2;
    }
    check(s, "lu_piv");

    uintptr_t p0 = 0;
    check(luvar_packed_pivot_get(lu, 0, &p0), "pivot_get");
    printf("first pivot offset: %zu\n", (size_t)p0);

    /* Solve A x = b for b = (7, 9): x = (1, 1). */
    double b[2] = {7.0, 9.0}, x[2];
    check(luvar_solve(lu, b, 2, x), "solve");
    printf("x = (%.15g, %.15g)\n", x[0], x[1]);

    /* Check the factorization against the original matrix. */
    double residual, multiplier;
    bool passed;
    check(luvar_check_postcondition(lu, a, -1.0, &residual, &multiplier, &passed),
          "check_postcondition");
    printf("postcondition: %s (residual %g, max multiplier %g)\n",
           passed ? "pass" : "FAIL", residual, multiplier);

    LuvarBackwardError be;
    check(luvar_backward_error(lu, a, &be), "backward_error");
    printf("componentwise backward-error constant: %g\n", be.componentwise_c);

    luvar_packed_free(lu);
    luvar_matrix_free(a);
    return 0;
}
