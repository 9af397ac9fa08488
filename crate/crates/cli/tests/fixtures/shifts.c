#include <arm_neon.h>

uint32x4_t scale(uint32x4_t v) {
    return vshlq_n_u32(v, 0x3);
}

int16x8_t halve(int16x8_t v) {
    return vshrq_n_s16(v, (1));
}

int32x4_t sign_fill(int32x4_t v) {
    return vshrq_n_s32(v, 32);
}

uint64x2_t clear(uint64x2_t v) {
    return vshrq_n_u64(v, 64u);
}

uint8x8_t high_nibble(uint8x8_t v) {
    return vshr_n_u8(v, 4);
}
