#include <arm_neon.h>

uint32x4_t equal(int32x4_t a, int32x4_t b) {
    return vceqq_s32(a, b);
}

uint32x4_t select_bits(uint32x4_t mask, uint32x4_t a, uint32x4_t b) {
    return vorrq_u32(vandq_u32(mask, a), vbicq_u32(b, mask));
}

uint32x4_t below(int32x4_t a, int32x4_t floor) {
    return vcltq_s32(a, floor);
}

int32x4_t swap_halves(int32x4_t v) {
    return vcombine_s32(vget_high_s32(v), vget_low_s32(v));
}

uint8x16_t bytes_ge(uint8x16_t a, uint8x16_t b) {
    return vcgeq_u8(a, b);
}
