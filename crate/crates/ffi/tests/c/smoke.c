#include <stdio.h>
#include <string.h>

#include "cyclesieve.h"

static int check(int ok, const char *what) {
    if (!ok) {
        const char *msg = cs_last_error();
        fprintf(stderr, "failed: %s (%s)\n", what, msg ? msg : "no message");
    }
    return ok ? 0 : 1;
}

int main(void) {
    size_t src[] = {0, 1, 2, 0};
    size_t dst[] = {1, 2, 0, 2};
    CsGraph *g = NULL;
    CsCounts *c = NULL;
    int failures = 0;

    failures += check(cs_graph_from_edges(3, true, src, dst, NULL, 4, &g) == CS_STATUS_OK,
                      "build graph");
    failures += check(cs_count_cycles(g, 3, &c) == CS_STATUS_OK, "count cycles");
    failures += check(cs_counts_len(c) == 3, "length");

    int64_t v = -1;
    failures += check(cs_counts_get_i64(c, 2, &v) == CS_STATUS_OK && v == 1, "2-cycles");
    failures += check(cs_counts_get_i64(c, 3, &v) == CS_STATUS_OK && v == 1, "3-cycles");

    char *s = cs_counts_get_string(c, 3);
    failures += check(s != NULL && strcmp(s, "1") == 0, "string count");
    cs_string_free(s);

    failures += check(cs_count_paths(g, 0, 0, 2, &c) == CS_STATUS_INVALID_ARGUMENT,
                      "equal endpoints rejected");
    failures += check(cs_last_error() != NULL, "error message set");

    cs_counts_free(c);
    cs_graph_free(g);
    printf("%s\n", failures == 0 ? "ok" : "FAILED");
    return failures;
}
