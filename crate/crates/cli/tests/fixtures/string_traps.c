#include <arm_neon.h>
#include <stdio.h>

#define NAME "vaddq_s32"

static const char *names[] = { "vld1q_s32(p)", "int32x4_t", "escaped \"vsubq_s32(a, b)\" quote" };
static const char quote = '"';
static const char tick = '\'';

uint32x4_t mask(uint32x4_t a, uint32x4_t b) {
    printf("calling vandq_u32(%s)\n", "a, b");
    return vandq_u32(a, b);
}

int main(void) {
    printf("%s %s %c%c\n", NAME, names[0], quote, tick);
    return 0;
}
