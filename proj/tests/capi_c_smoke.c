/* The public header must compile and link as plain C. */
#include <stdio.h>
#include <string.h>

#include "issv/issv.h"

int main(void) {
  issv_scenario* s = NULL;
  issv_report* r = NULL;
  char* hash = NULL;
  int ok = 1;

  if (issv_scenario_parse("{\"preset\":\"heat_robin\",\"solver\":{\"T\":0.05,\"n_x\":41}}", &s) != ISSV_OK) {
    fprintf(stderr, "parse: %s\n", issv_last_error());
    return 1;
  }
  if (issv_scenario_hash(s, &hash) != ISSV_OK || strlen(hash) != 16) ok = 0;
  issv_string_free(hash);
  if (issv_verify(s, &r) != ISSV_OK || !issv_report_pass(r)) ok = 0;
  issv_report_free(r);
  issv_scenario_free(s);
  if (issv_scenario_parse("{", &s) != ISSV_ERR_CONFIG) ok = 0;
  printf("%s\n", ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}
