/* Translated from NEON by neon2rvv for vlen=128,zvfh. */
#include <riscv_vector.h>
#include <stdint.h>
#if !defined(__riscv_v_fixed_vlen) || __riscv_v_fixed_vlen < 128
#error "compile with -mrvv-vector-bits=zvl and a VLEN of at least 128"
#endif
typedef vint32m1_t fixed_vint32m1_t __attribute__((riscv_rvv_vector_bits(__riscv_v_fixed_vlen)));

#include <stdio.h>
#define SIMDE_ENABLE_NATIVE_ALIASES


int A[] = { 0 , 1 , 2 , 3 };
int B[] = { 4 , 5 , 6 , 7 };
int main(void){
        fixed_vint32m1_t va , vb , vc;
        va = __riscv_vle32_v_i32m1(A, 4);
        vb = __riscv_vle32_v_i32m1(B, 4);
        va = __riscv_vadd_vv_i32m1(va , vb, 4);
        __riscv_vse32_v_i32m1(A , va, 4);
        printf("%d %d %d %d\n", A[0], A[1], A[2], A[3]);
        return 0;
}
