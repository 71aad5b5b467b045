#include <stdio.h>
#include "equilib.h"

static const char *CONFIG =
    "schema_version = 1\n"
    "[system]\n"
    "[[system.species]]\nname = \"A\"\nnu = -1\nmolar_mass = 0.03\n"
    "[[system.species]]\nname = \"B\"\nnu = 1\nmolar_mass = 0.03\n"
    "[model]\nlambda = -2000.0\neps = 3000.0\nbeta = 5.0\n";

int main(void) {
    EquilibModel *model = NULL;
    if (equilib_model_from_toml(CONFIG, &model) != EQUILIB_STATUS_OK) {
        fprintf(stderr, "%s\n", equilib_last_error_message());
        return 1;
    }
    double q = 0.0;
    if (equilib_quotient(model, 298.15, 1.0e5, &q) != EQUILIB_STATUS_OK || q != 1.0) {
        return 2;
    }
    EquilibPath *path = NULL;
    if (equilib_trace_maximal(model, 300.0, 2.0e5, 0.01, 10, 1.0, &path) != EQUILIB_STATUS_OK) {
        return 3;
    }
    size_t n = equilib_path_len(path);
    equilib_path_free(path);
    if (equilib_quotient(model, -1.0, 1.0e5, &q) != EQUILIB_STATUS_DOMAIN) {
        return 4;
    }
    equilib_model_free(model);
    printf("%zu\n", n);
    return n == 11 ? 0 : 5;
}
