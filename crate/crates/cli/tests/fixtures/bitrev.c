#include <arm_neon.h>

uint8x16_t reverse_bits(uint8x16_t v) {
    return vrbitq_u8(v);
}

int8x8_t reverse_bits_d(int8x8_t v) {
    return vrbit_s8(v);
}

uint8x16_t not_reversed(uint8x16_t v) {
    return vmvnq_u8(vrbitq_u8(v));
}

void reverse_buffer(uint8_t *dst, const uint8_t *src) {
    vst1q_u8(dst, vrbitq_u8(vld1q_u8(src)));
}
