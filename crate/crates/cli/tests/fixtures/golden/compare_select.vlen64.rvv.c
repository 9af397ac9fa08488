/* Translated from NEON by neon2rvv for vlen=64,zvfh. */
#include <riscv_vector.h>
#include <stdint.h>
#include <string.h>
#if !defined(__riscv_v_fixed_vlen) || __riscv_v_fixed_vlen < 64
#error "compile with -mrvv-vector-bits=zvl and a VLEN of at least 64"
#endif
typedef vint32m1_t fixed_vint32m1_t __attribute__((riscv_rvv_vector_bits(__riscv_v_fixed_vlen)));
typedef int32_t neon2rvv_int32x4_t __attribute__((__vector_size__(16)));
typedef uint8_t neon2rvv_uint8x16_t __attribute__((__vector_size__(16)));
typedef uint32_t neon2rvv_uint32x4_t __attribute__((__vector_size__(16)));

static inline neon2rvv_uint32x4_t neon2rvv_scalar_vceqq_s32(neon2rvv_int32x4_t a, neon2rvv_int32x4_t b) {
    int32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    int32_t b_[4];
    memcpy(b_, &b, sizeof b_);
    uint32_t r_[4];
    for (int i = 0; i < 4; i++)
        r_[i] = (a_[i] == b_[i]) ? (uint32_t)-1 : 0;
    neon2rvv_uint32x4_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}

static inline neon2rvv_uint32x4_t neon2rvv_scalar_vandq_u32(neon2rvv_uint32x4_t a, neon2rvv_uint32x4_t b) {
    uint32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    uint32_t b_[4];
    memcpy(b_, &b, sizeof b_);
    uint32_t r_[4];
    for (int i = 0; i < 4; i++)
        r_[i] = a_[i] & b_[i];
    neon2rvv_uint32x4_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}

static inline neon2rvv_uint32x4_t neon2rvv_scalar_vbicq_u32(neon2rvv_uint32x4_t a, neon2rvv_uint32x4_t b) {
    uint32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    uint32_t b_[4];
    memcpy(b_, &b, sizeof b_);
    uint32_t r_[4];
    for (int i = 0; i < 4; i++)
        r_[i] = a_[i] & (uint32_t)~b_[i];
    neon2rvv_uint32x4_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}

static inline neon2rvv_uint32x4_t neon2rvv_scalar_vorrq_u32(neon2rvv_uint32x4_t a, neon2rvv_uint32x4_t b) {
    uint32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    uint32_t b_[4];
    memcpy(b_, &b, sizeof b_);
    uint32_t r_[4];
    for (int i = 0; i < 4; i++)
        r_[i] = a_[i] | b_[i];
    neon2rvv_uint32x4_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}

static inline neon2rvv_uint32x4_t neon2rvv_scalar_vcltq_s32(neon2rvv_int32x4_t a, neon2rvv_int32x4_t b) {
    int32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    int32_t b_[4];
    memcpy(b_, &b, sizeof b_);
    uint32_t r_[4];
    for (int i = 0; i < 4; i++)
        r_[i] = (a_[i] < b_[i]) ? (uint32_t)-1 : 0;
    neon2rvv_uint32x4_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}

static inline fixed_vint32m1_t neon2rvv_scalar_vget_high_s32(neon2rvv_int32x4_t a) {
    int32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    int32_t r_[2];
    for (int i = 0; i < 2; i++)
        r_[i] = a_[i + 2];
    return __riscv_vle32_v_i32m1(r_, 2);
}

static inline fixed_vint32m1_t neon2rvv_scalar_vget_low_s32(neon2rvv_int32x4_t a) {
    int32_t a_[4];
    memcpy(a_, &a, sizeof a_);
    int32_t r_[2];
    for (int i = 0; i < 2; i++)
        r_[i] = a_[i];
    return __riscv_vle32_v_i32m1(r_, 2);
}

static inline neon2rvv_int32x4_t neon2rvv_scalar_vcombine_s32(fixed_vint32m1_t low, fixed_vint32m1_t high) {
    int32_t low_[2];
    __riscv_vse32_v_i32m1(low_, low, 2);
    int32_t high_[2];
    __riscv_vse32_v_i32m1(high_, high, 2);
    int32_t r_[4];
    for (int i = 0; i < 4; i++)
        r_[i] = i < 2 ? low_[i] : high_[i - 2];
    neon2rvv_int32x4_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}

static inline neon2rvv_uint8x16_t neon2rvv_scalar_vcgeq_u8(neon2rvv_uint8x16_t a, neon2rvv_uint8x16_t b) {
    uint8_t a_[16];
    memcpy(a_, &a, sizeof a_);
    uint8_t b_[16];
    memcpy(b_, &b, sizeof b_);
    uint8_t r_[16];
    for (int i = 0; i < 16; i++)
        r_[i] = (a_[i] >= b_[i]) ? (uint8_t)-1 : 0;
    neon2rvv_uint8x16_t r;
    memcpy(&r, r_, sizeof r_);
    return r;
}



neon2rvv_uint32x4_t equal(neon2rvv_int32x4_t a, neon2rvv_int32x4_t b) {
    return neon2rvv_scalar_vceqq_s32(a, b);
}

neon2rvv_uint32x4_t select_bits(neon2rvv_uint32x4_t mask, neon2rvv_uint32x4_t a, neon2rvv_uint32x4_t b) {
    return neon2rvv_scalar_vorrq_u32(neon2rvv_scalar_vandq_u32(mask, a), neon2rvv_scalar_vbicq_u32(b, mask));
}

neon2rvv_uint32x4_t below(neon2rvv_int32x4_t a, neon2rvv_int32x4_t floor) {
    return neon2rvv_scalar_vcltq_s32(a, floor);
}

neon2rvv_int32x4_t swap_halves(neon2rvv_int32x4_t v) {
    return neon2rvv_scalar_vcombine_s32(neon2rvv_scalar_vget_high_s32(v), neon2rvv_scalar_vget_low_s32(v));
}

neon2rvv_uint8x16_t bytes_ge(neon2rvv_uint8x16_t a, neon2rvv_uint8x16_t b) {
    return neon2rvv_scalar_vcgeq_u8(a, b);
}
