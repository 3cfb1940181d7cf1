#include <stdio.h>
#include <string.h>
#include "horco.h"

static const char *SRC =
    "sort N\n"
    "symbol 0 : N\n"
    "symbol s : N -> N\n"
    "symbol minus : N -> N -> N\n"
    "var x : N\n"
    "var y : N\n"
    "rule minus x 0 -> x\n"
    "rule minus (s x) (s y) -> minus x y\n";

int main(void) {
    HorcoSystem *sys = NULL;
    HorcoReport *rep = NULL;
    bool gt = false;
    if (horco_system_parse(SRC, &sys) != HORCO_STATUS_OK) return 10;
    if (horco_check(sys, HORCO_CRITERION_RPO, NULL, false, &rep) != HORCO_STATUS_OK) return 11;
    if (horco_report_oriented(rep) != 2 || horco_report_exit_code(rep) != 0) return 12;
    if (!strstr(horco_report_render(rep, HORCO_FORMAT_JSON), "\"version\": 1")) return 13;
    if (horco_compare(sys, HORCO_CRITERION_RCO, "s x", "x", NULL, 1, &gt) != HORCO_STATUS_OK || !gt) return 14;
    if (horco_compare(sys, HORCO_CRITERION_RCO, "s (", "x", NULL, 1, &gt) != HORCO_STATUS_PARSE) return 15;
    if (horco_last_error() == NULL) return 16;
    horco_report_free(rep);
    horco_system_free(sys);
    puts("ok");
    return 0;
}
