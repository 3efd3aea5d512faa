#include <stdio.h>
#include <stdlib.h>

#include "tgbs.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        TgbsStatus s_ = (call);                                            \
        if (s_ != TGBS_STATUS_OK) {                                        \
            fprintf(stderr, "%s failed (%d): %s\n", #call, (int)s_,        \
                    tgbs_last_error());                                    \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    TgbsGraph *g = NULL;
    size_t planted[60];
    size_t planted_len = 0;
    CHECK(tgbs_graph_planted(60, 0.75, 0.1, 0.1, 7, planted, &planted_len, &g));

    TgbsProblem *p = NULL;
    CHECK(tgbs_embed(g, 60.0, 1.0, &p));

    TgbsSamples *s = NULL;
    CHECK(tgbs_sample(p, 20, 11, &s));

    size_t seed[60];
    size_t seed_len = 0;
    size_t row = 0;
    while (seed_len == 0 && row < tgbs_samples_realizations(s)) {
        CHECK(tgbs_samples_row_nodes(s, row++, seed, 60, &seed_len));
    }

    size_t subset[60];
    TgbsSearchResult r;
    CHECK(tgbs_densest_k(g, seed, seed_len, planted_len, subset, 60, &r));
    printf("modes %zu mean_clicks %.3f k %zu density %.3f\n", tgbs_problem_modes(p),
           tgbs_samples_mean_clicks(s), r.subset_len, r.score);

    if (tgbs_densest_k(g, seed, seed_len, 1000, subset, 60, &r) != TGBS_STATUS_INVALID_PARAMETER) {
        fprintf(stderr, "expected an invalid-parameter status\n");
        return 1;
    }

    tgbs_samples_free(s);
    tgbs_problem_free(p);
    tgbs_graph_free(g);
    return 0;
}
