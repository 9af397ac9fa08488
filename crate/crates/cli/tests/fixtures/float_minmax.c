#include <arm_neon.h>

float32x4_t clamp(float32x4_t v, float32_t lo, float32_t hi) {
    return vminq_f32(vmaxq_f32(v, vdupq_n_f32(lo)), vdupq_n_f32(hi));
}

float64x2_t fused(float64x2_t a, float64x2_t b) {
    float64x2_t s = vaddq_f64(a, b);
    return vmulq_f64(s, vnegq_f64(vsubq_f64(a, b)));
}

uint32x4_t is_nan(float32x4_t v) {
    return vmvnq_u32(vceqq_f32(v, v));
}
