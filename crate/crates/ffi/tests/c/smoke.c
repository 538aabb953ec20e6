#include <stdio.h>
#include <string.h>

#include "liftlab.h"

#define CHECK(call)                                                      \
    do {                                                                 \
        LiftlabStatus st_ = (call);                                      \
        if (st_ != LIFTLAB_STATUS_OK) {                                  \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)st_,           \
                    liftlab_last_error() ? liftlab_last_error() : "");   \
            return 1;                                                    \
        }                                                                \
    } while (0)

int main(void) {
    LiftlabComplex *rp3 = NULL;
    CHECK(liftlab_complex_build_rp3(3, &rp3));
    size_t betti[8], len = 0;
    CHECK(liftlab_complex_betti_z2(rp3, betti, 8, &len));
    liftlab_complex_free(rp3);
    if (len != 4 || betti[0] != 1 || betti[1] != 1 || betti[2] != 1 || betti[3] != 1) {
        fprintf(stderr, "unexpected Betti numbers\n");
        return 1;
    }

    size_t profile[] = {2, 3};
    LiftlabCode *code = NULL;
    CHECK(liftlab_code_build_telescope(LIFTLAB_CODE_KIND_C, profile, 2, &code));
    size_t logical = 99;
    CHECK(liftlab_code_params(code, NULL, NULL, NULL, &logical));
    bool verified = false;
    char *report = NULL;
    CHECK(liftlab_code_solve(code, LIFTLAB_STRATEGY_GREEDY, 500, 1, true, &verified, &report));
    int ok = logical == 0 && verified && strstr(report, "\"verified\": true") != NULL;
    liftlab_string_free(report);
    liftlab_code_free(code);

    if (liftlab_code_from_json("{", &code) != LIFTLAB_STATUS_PARSE || liftlab_last_error() == NULL) {
        fprintf(stderr, "bad JSON was not rejected\n");
        return 1;
    }
    if (liftlab_complex_build_rp3(3, NULL) != LIFTLAB_STATUS_NULL_POINTER) {
        return 1;
    }
    printf("liftlab %s ok=%d\n", liftlab_version(), ok);
    return ok ? 0 : 1;
}
