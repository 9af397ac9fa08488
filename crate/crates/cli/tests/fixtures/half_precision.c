#include <arm_neon.h>

void copy_halves(float16_t *dst, const float16_t *src) {
    float16x8_t v = vld1q_f16(src);
    float16x4_t hi = vget_high_f16(v);
    vst1_f16(dst, hi);
    vst1_f16(dst + 4, vget_low_f16(v));
}

float16x8_t broadcast(float16_t x) {
    return vdupq_n_f16(x);
}
