#include <arm_neon.h>

void axpy3(int32_t *out, const int32_t *x, const int32_t *y) {
    vst1q_s32(out, vaddq_s32(vld1q_s32(x), vmulq_s32(vld1q_s32(y), vdupq_n_s32(3))));
}

void axpy3_u16(uint16_t *out, const uint16_t *x, const uint16_t *y) {
    uint16x8_t t = vmulq_u16(vld1q_u16(y),
                             vdupq_n_u16((uint16_t)(3)));
    vst1q_u16(out, vaddq_u16(vld1q_u16(x), t));
}
