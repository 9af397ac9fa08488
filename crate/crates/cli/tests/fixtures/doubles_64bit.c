#include <arm_neon.h>

int64x1_t add_d(int64x1_t a, int64x1_t b) {
    return vadd_s64(a, b);
}

uint32x2_t pair_min(uint32x2_t a, uint32x2_t b) {
    return vmin_u32(a, b);
}

int8x8_t xor_bytes(int8x8_t a, int8x8_t b) {
    return veor_s8(a, b);
}

float32x2_t neg_pair(float32x2_t v) {
    return vneg_f32(v);
}
