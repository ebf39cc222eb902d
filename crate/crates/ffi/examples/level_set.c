/* Prints the irreducible characters of the figure-eight knot at one trace
 * and checks that the reciprocal torsions over a connected sum cancel. */
#include <math.h>
#include <stdio.h>

#include "knottorsion.h"

static int report(KtStatus s) {
    const char *msg = kt_last_error_message();
    fprintf(stderr, "status %d: %s\n", (int)s, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    KtKnot fig8 = {5, 3};
    KtComplex c = {3.1, 0.2};
    KtLevelSet *ls = NULL;
    KtStatus s = kt_level_set_new(fig8, c, NULL, &ls);
    if (s != KT_STATUS_OK) return report(s);

    double sum_re = 0.0, sum_im = 0.0;
    for (size_t i = 0; i < kt_level_set_len(ls); i++) {
        KtPoint p;
        if ((s = kt_level_set_point(ls, i, &p)) != KT_STATUS_OK) return report(s);
        double n = p.torsion.re * p.torsion.re + p.torsion.im * p.torsion.im;
        sum_re += p.torsion.re / n;
        sum_im -= p.torsion.im / n;
        printf("u = %.12f%+.12fi  torsion = %.12f%+.12fi\n", p.u.re, p.u.im, p.torsion.re, p.torsion.im);
    }
    kt_level_set_free(ls);
    printf("sum of 1/torsion = %.3e\n", hypot(sum_re, sum_im));

    KtKnot factors[2] = {{5, 3}, {7, 3}};
    KtConnectedSum *cs = NULL;
    if ((s = kt_connected_sum_new(factors, 2, c, NULL, &cs)) != KT_STATUS_OK) return report(s);
    KtVanishing v;
    if ((s = kt_connected_sum_vanishing(cs, &v)) != KT_STATUS_OK) return report(s);
    printf("components = %zu  relative sum = %.3e\n", v.components, v.relative);
    kt_connected_sum_free(cs);

    KtLevelSet *bad = NULL;
    s = kt_level_set_new(fig8, (KtComplex){2.0, 0.0}, NULL, &bad);
    printf("trace 2: status %d (%s)\n", (int)s, kt_last_error_message());
    return s == KT_STATUS_NON_GENERIC && v.relative < 1e-9 ? 0 : 1;
}
