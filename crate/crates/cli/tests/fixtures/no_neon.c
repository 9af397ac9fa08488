#include <stdio.h>
#include <stdint.h>

/* Plain scalar code; nothing here should change. */
static int32_t sum(const int32_t *p, int n) {
    int32_t s = 0;
    for (int i = 0; i < n; i++)
        s += p[i];
    return s;
}

int main(void) {
    int32_t v[4] = {1, 2, 3, 4};
    printf("%d\n", sum(v, 4));
    return 0;
}
