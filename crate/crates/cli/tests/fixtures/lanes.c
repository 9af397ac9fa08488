#include <arm_neon.h>

int32_t third(int32x4_t v) {
    return vgetq_lane_s32(v, 2);
}

float32x4_t poke(float32x4_t v, float32_t x) {
    return vsetq_lane_f32(x, v, 0);
}

uint16x4_t low_half(uint16x8_t v) {
    return vget_low_u16(v);
}

int64x2_t splat(int64_t x) {
    return vdupq_n_s64(x);
}

uint8_t last_byte(uint8x8_t v) {
    return vget_lane_u8(v, 7);
}
