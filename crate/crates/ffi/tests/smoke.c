#include <stdio.h>
#include <string.h>

#include "blockforge.h"

#define EXPECT(cond)                                                  \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,    \
                    bf_last_error_message());                         \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    BfGroup *g = NULL;
    EXPECT(bf_group_named("S4", &g) == BF_STATUS_OK);
    EXPECT(bf_group_order(g) == 24);
    EXPECT(bf_group_class_count(g) == 5);
    bf_group_free(g);

    BfField *f = NULL;
    EXPECT(bf_field_new(2, 2, &f) == BF_STATUS_OK);
    uint32_t x = 0;
    EXPECT(bf_field_mul(f, 2, 3, &x) == BF_STATUS_OK && x == 1);
    uint32_t data[] = {1, 0, 2, 1};
    BfMatrix *m = NULL;
    EXPECT(bf_matrix_new(f, 2, 2, data, &m) == BF_STATUS_OK);
    size_t rank = 0;
    EXPECT(bf_matrix_rank(m, &rank) == BF_STATUS_OK && rank == 2);
    bf_matrix_free(m);
    bf_field_free(f);

    BfReport *r = NULL;
    const char *spec = "{\"suite\":\"geq-c\",\"instance\":\"s3-a3-p3\"}";
    EXPECT(bf_run_suite(spec, 0, &r) == BF_STATUS_OK);
    EXPECT(bf_report_ok(r));
    char *json = bf_report_json(r);
    EXPECT(json != NULL && strstr(json, "blockforge/1") != NULL);
    bf_string_free(json);
    bf_report_free(r);

    EXPECT(bf_run_suite("{\"suite\":\"nope\"}", 0, &r) == BF_STATUS_BAD_PARAMS);
    EXPECT(strstr(bf_last_error_message(), "unknown suite") != NULL);
    printf("ok\n");
    return 0;
}
