#include <stdio.h>
#include "bredon.h"

int main(void) {
    /* Delta(3,3,3): H_0 = Z^5, H_1 = Z */
    const int64_t m[9] = {1, 3, 3, 3, 1, 3, 3, 3, 1};
    BredonResult *r = NULL;
    if (bredon_compute(3, m, BREDON_METHOD_AUTO, 0, &r) != BREDON_STATUS_OK) {
        fprintf(stderr, "compute: %s\n", bredon_last_error());
        return 1;
    }
    uint64_t h0, h1, k1;
    uintptr_t t;
    bool agree = false;
    bredon_result_homology(r, 0, &h0, &t);
    bredon_result_homology(r, 1, &h1, &t);
    bredon_result_k_homology(r, 1, &k1, &t);
    bredon_result_methods_agree(r, &agree);
    printf("H_0 = Z^%llu, H_1 = Z^%llu, K_1 = Z^%llu, agree = %d\n",
           (unsigned long long)h0, (unsigned long long)h1, (unsigned long long)k1, agree);
    bredon_result_free(r);

    const int64_t bad[4] = {1, 1, 1, 1};
    BredonStatus s = bredon_compute(2, bad, BREDON_METHOD_AUTO, 0, &r);
    printf("bad matrix: status %d, handle %s\n", (int)s, r == NULL ? "null" : "set");
    return (h0 == 5 && h1 == 1 && k1 == 1 && agree && s == BREDON_STATUS_INVALID_MATRIX) ? 0 : 1;
}
