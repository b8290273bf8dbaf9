#include <stdio.h>
#include <string.h>
#include <assert.h>
#include "speiser.h"

static const char *SQUARE =
    "{\"vertices\":[{\"id\":0,\"kind\":\"circle\",\"rotation\":[0,7]},"
    "{\"id\":1,\"kind\":\"cross\",\"rotation\":[2,1]},"
    "{\"id\":2,\"kind\":\"circle\",\"rotation\":[4,3]},"
    "{\"id\":3,\"kind\":\"cross\",\"rotation\":[6,5]}],"
    "\"twins\":[[0,1],[2,3],[4,5],[6,7]]}";

int main(void) {
    printf("version %s\n", speiser_version());
    SpeiserGraph *g = speiser_graph_parse(SQUARE);
    assert(g != NULL);
    uint32_t q_min = 0;
    int64_t q_max = 0;
    assert(speiser_q_bounds(g, &q_min, &q_max) == SpeiserStatus_Ok);
    assert(q_min == 2 && q_max == 2);
    char *plan = NULL;
    assert(speiser_extend(g, 4, &plan) == SpeiserStatus_Ok);
    assert(strstr(plan, "\"q\": 4") != NULL);
    speiser_string_free(plan);
    char *report = NULL;
    assert(speiser_decompose(g, NULL, &report) == SpeiserStatus_Ok);
    assert(strstr(report, "Rational") != NULL);
    speiser_string_free(report);
    speiser_graph_free(g);
    assert(speiser_graph_parse("{nope") == NULL);
    printf("last error: %s\n", speiser_last_error());
    puts("ffi smoke ok");
    return 0;
}
