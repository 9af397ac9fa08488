use crate::isa::{ElemClass, ElementType};
use crate::value::{canonical_nan, is_nan_bits, sign_extend, VectorValue};

use super::{ArgKind, Family, NeonArg, NeonError, NeonIntrinsicId, NeonResult};

/// Evaluates one NEON intrinsic lane by lane.
///
/// Stores write exactly `lanes * elem_bytes` bytes at the address argument;
/// loads read the same span. Float lanes follow IEEE 754 binary32/64 with
/// round-to-nearest-even.
pub fn eval_neon(
    id: NeonIntrinsicId,
    args: &[NeonArg],
    memory: &mut [u8],
) -> Result<NeonResult, NeonError> {
    if !id.is_supported() {
        return Err(NeonError::UnsupportedIntrinsic(id.name()));
    }
    check_args(id, args)?;
    let t = id.vector_type();
    let e = id.elem;

    let vec = |i: usize| match &args[i] {
        NeonArg::Vector(v) => v,
        _ => unreachable!("checked by check_args"),
    };
    let scalar = |i: usize| match args[i] {
        NeonArg::Scalar(s) => s & e.lane_mask(),
        _ => unreachable!("checked by check_args"),
    };
    let imm = |i: usize| match args[i] {
        NeonArg::Immediate(n) => n,
        _ => unreachable!("checked by check_args"),
    };
    let addr = || match args[0] {
        NeonArg::Address(a) => a,
        _ => unreachable!("checked by check_args"),
    };

    let result = match id.family {
        Family::Ld1 => {
            let len = t.total_bits() as usize / 8;
            let span = mem_span(id, addr(), len, memory.len())?;
            NeonResult::Vector(VectorValue::from_le_bytes(e, &memory[span]))
        }
        Family::St1 => {
            let bytes = vec(1).to_le_bytes();
            let span = mem_span(id, addr(), bytes.len(), memory.len())?;
            memory[span].copy_from_slice(&bytes);
            NeonResult::Unit
        }
        Family::Add | Family::Sub | Family::Mul | Family::Min | Family::Max => {
            let op = id.family;
            NeonResult::Vector(zip_lanes(vec(0), vec(1), e, |a, b| arith(op, e, a, b)))
        }
        Family::And => NeonResult::Vector(zip_lanes(vec(0), vec(1), e, |a, b| a & b)),
        Family::Orr => NeonResult::Vector(zip_lanes(vec(0), vec(1), e, |a, b| a | b)),
        Family::Eor => NeonResult::Vector(zip_lanes(vec(0), vec(1), e, |a, b| a ^ b)),
        Family::Bic => NeonResult::Vector(zip_lanes(vec(0), vec(1), e, |a, b| a & !b)),
        Family::Mvn => NeonResult::Vector(map_lanes(vec(0), e, |a| !a)),
        Family::Neg => NeonResult::Vector(map_lanes(vec(0), e, |a| match e.class() {
            ElemClass::Float => a ^ (1u64 << (e.bit_width() - 1)),
            _ => a.wrapping_neg(),
        })),
        Family::Rbit => NeonResult::Vector(map_lanes(vec(0), e, |a| reverse_bits(a, e.bit_width()))),
        Family::ShlN => {
            let n = imm(1) as u32;
            NeonResult::Vector(map_lanes(vec(0), e, |a| a << n))
        }
        Family::ShrN => {
            let n = imm(1) as u32;
            let w = e.bit_width();
            NeonResult::Vector(map_lanes(vec(0), e, |a| match e.class() {
                ElemClass::SignedInt => {
                    let s = sign_extend(a, w);
                    (s >> n.min(63)) as u64
                }
                _ if n >= 64 => 0,
                _ => a >> n,
            }))
        }
        Family::Ceq | Family::Cgt | Family::Cge | Family::Clt | Family::Cle => {
            let op = id.family;
            let (a, b) = (vec(0), vec(1));
            let mask = e.lane_mask();
            let out = (0..a.lanes()).map(|i| {
                if compare(op, e, a.lane(i), b.lane(i)) {
                    mask
                } else {
                    0
                }
            });
            NeonResult::Vector(VectorValue::new(e.as_unsigned(), out))
        }
        Family::GetHigh => {
            let a = vec(0);
            let half = a.lanes() / 2;
            NeonResult::Vector(VectorValue::new(e, a.bits()[half..].iter().copied()))
        }
        Family::GetLow => {
            let a = vec(0);
            let half = a.lanes() / 2;
            NeonResult::Vector(VectorValue::new(e, a.bits()[..half].iter().copied()))
        }
        Family::Combine => NeonResult::Vector(VectorValue::new(
            e,
            vec(0).bits().iter().chain(vec(1).bits()).copied(),
        )),
        Family::DupN => NeonResult::Vector(VectorValue::new(e, vec![scalar(0); t.lanes()])),
        Family::GetLane => NeonResult::Scalar(vec(0).lane(imm(1) as usize)),
        Family::SetLane => {
            let mut v = vec(1).clone();
            v.set_lane(imm(2) as usize, scalar(0));
            NeonResult::Vector(v)
        }
    };
    Ok(result)
}

fn check_args(id: NeonIntrinsicId, args: &[NeonArg]) -> Result<(), NeonError> {
    let sig = id.signature();
    if sig.args.len() != args.len() {
        return Err(NeonError::ArityMismatch {
            name: id.name(),
            expected: sig.args.len(),
            got: args.len(),
        });
    }
    for (index, (kind, arg)) in sig.args.iter().zip(args).enumerate() {
        let ok = match (kind, arg) {
            (ArgKind::Vector(t), NeonArg::Vector(v)) => {
                v.elem() == t.elem() && v.lanes() == t.lanes()
            }
            (ArgKind::Scalar(_), NeonArg::Scalar(_)) => true,
            (ArgKind::Address(_), NeonArg::Address(_)) => true,
            (ArgKind::Immediate { min, max }, NeonArg::Immediate(n)) => {
                if n < min || n > max {
                    return Err(NeonError::ImmediateOutOfRange {
                        name: id.name(),
                        value: *n,
                        min: *min,
                        max: *max,
                    });
                }
                true
            }
            _ => false,
        };
        if !ok {
            return Err(NeonError::ArgumentMismatch {
                name: id.name(),
                index,
                expected: format!("{kind:?}"),
            });
        }
    }
    Ok(())
}

fn mem_span(
    id: NeonIntrinsicId,
    addr: usize,
    len: usize,
    size: usize,
) -> Result<std::ops::Range<usize>, NeonError> {
    match addr.checked_add(len) {
        Some(end) if end <= size => Ok(addr..end),
        _ => Err(NeonError::OutOfBounds {
            name: id.name(),
            addr,
            len,
            size,
        }),
    }
}

fn map_lanes(a: &VectorValue, e: ElementType, f: impl Fn(u64) -> u64) -> VectorValue {
    VectorValue::new(e, a.bits().iter().map(|&x| f(x)))
}

fn zip_lanes(
    a: &VectorValue,
    b: &VectorValue,
    e: ElementType,
    f: impl Fn(u64, u64) -> u64,
) -> VectorValue {
    VectorValue::new(e, a.bits().iter().zip(b.bits()).map(|(&x, &y)| f(x, y)))
}

fn reverse_bits(v: u64, width: u32) -> u64 {
    let mut out = 0;
    for bit in 0..width {
        if v >> bit & 1 == 1 {
            out |= 1 << (width - 1 - bit);
        }
    }
    out
}

fn arith(op: Family, e: ElementType, a: u64, b: u64) -> u64 {
    let w = e.bit_width();
    match e.class() {
        ElemClass::Float => float_arith(op, e, a, b),
        class => match op {
            Family::Add => a.wrapping_add(b),
            Family::Sub => a.wrapping_sub(b),
            Family::Mul => a.wrapping_mul(b),
            Family::Min | Family::Max => {
                let less = if class == ElemClass::SignedInt {
                    sign_extend(a, w) < sign_extend(b, w)
                } else {
                    a < b
                };
                match (op, less) {
                    (Family::Min, true) | (Family::Max, false) => a,
                    _ => b,
                }
            }
            _ => unreachable!("not an arithmetic family"),
        },
    }
}

/// NEON FMIN/FMAX propagate NaN and order -0 below +0.
fn float_arith(op: Family, e: ElementType, a: u64, b: u64) -> u64 {
    match e {
        ElementType::F32 => {
            let (x, y) = (f32::from_bits(a as u32), f32::from_bits(b as u32));
            let r = match op {
                Family::Add => x + y,
                Family::Sub => x - y,
                Family::Mul => x * y,
                Family::Min | Family::Max if x.is_nan() || y.is_nan() => {
                    return canonical_nan(e)
                }
                Family::Min => pick_min(x, y, x.is_sign_negative()),
                Family::Max => pick_max(x, y, x.is_sign_negative()),
                _ => unreachable!(),
            };
            r.to_bits() as u64
        }
        ElementType::F64 => {
            let (x, y) = (f64::from_bits(a), f64::from_bits(b));
            let r = match op {
                Family::Add => x + y,
                Family::Sub => x - y,
                Family::Mul => x * y,
                Family::Min | Family::Max if x.is_nan() || y.is_nan() => {
                    return canonical_nan(e)
                }
                Family::Min => pick_min(x, y, x.is_sign_negative()),
                Family::Max => pick_max(x, y, x.is_sign_negative()),
                _ => unreachable!(),
            };
            r.to_bits()
        }
        _ => unreachable!("half precision is move-only"),
    }
}

fn pick_min<F: PartialOrd + Copy>(x: F, y: F, x_neg: bool) -> F {
    // Equal operands can only differ as +0/-0; prefer the negative one.
    if x < y || (x == y && x_neg) {
        x
    } else {
        y
    }
}

fn pick_max<F: PartialOrd + Copy>(x: F, y: F, x_neg: bool) -> F {
    if x > y || (x == y && !x_neg) {
        x
    } else {
        y
    }
}

fn compare(op: Family, e: ElementType, a: u64, b: u64) -> bool {
    use std::cmp::Ordering;
    let w = e.bit_width();
    let ord = match e.class() {
        ElemClass::SignedInt => Some(sign_extend(a, w).cmp(&sign_extend(b, w))),
        ElemClass::UnsignedInt => Some(a.cmp(&b)),
        ElemClass::Float => {
            if is_nan_bits(e, a) || is_nan_bits(e, b) {
                None
            } else if e == ElementType::F32 {
                f32::from_bits(a as u32).partial_cmp(&f32::from_bits(b as u32))
            } else {
                f64::from_bits(a).partial_cmp(&f64::from_bits(b))
            }
        }
    };
    match (op, ord) {
        (_, None) => false,
        (Family::Ceq, Some(o)) => o == Ordering::Equal,
        (Family::Cgt, Some(o)) => o == Ordering::Greater,
        (Family::Cge, Some(o)) => o != Ordering::Less,
        (Family::Clt, Some(o)) => o == Ordering::Less,
        (Family::Cle, Some(o)) => o != Ordering::Greater,
        _ => unreachable!("not a comparison"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neon::catalog;
    use ElementType::*;

    fn id(name: &str) -> NeonIntrinsicId {
        NeonIntrinsicId::parse(name).unwrap()
    }

    fn v(elem: ElementType, lanes: &[i64]) -> NeonArg {
        NeonArg::Vector(VectorValue::from_i64s(elem, lanes))
    }

    fn run(name: &str, args: &[NeonArg]) -> NeonResult {
        eval_neon(id(name), args, &mut []).unwrap()
    }

    fn vec_of(r: NeonResult) -> VectorValue {
        match r {
            NeonResult::Vector(v) => v,
            other => panic!("expected vector, got {other:?}"),
        }
    }

    #[test]
    fn add_example_values() {
        let r = run("vaddq_s32", &[v(I32, &[0, 1, 2, 3]), v(I32, &[4, 5, 6, 7])]);
        assert_eq!(vec_of(r), VectorValue::from_i64s(I32, &[4, 6, 8, 10]));
    }

    #[test]
    fn get_high_and_ceq() {
        let r = run("vget_high_s32", &[v(I32, &[0, 1, 2, 3])]);
        assert_eq!(vec_of(r), VectorValue::from_i64s(I32, &[2, 3]));
        let r = run("vceqq_s32", &[v(I32, &[1, 2, 3, 4]), v(I32, &[1, 0, 3, 0])]);
        assert_eq!(vec_of(r).bits(), &[0xFFFF_FFFF, 0, 0xFFFF_FFFF, 0]);
        assert_eq!(vec_of(run("vceqq_s32", &[v(I32, &[1; 4]), v(I32, &[1; 4])])).elem(), U32);
    }

    #[test]
    fn rbit_bytes() {
        let r = run("vrbit_u8", &[v(U8, &[0x01, 0xF0, 0xAA, 0x80, 0, 0, 0, 0])]);
        assert_eq!(vec_of(r).bits(), &[0x80, 0x0F, 0x55, 0x01, 0, 0, 0, 0]);
    }

    #[test]
    fn combine_split_identity() {
        let x = v(I32, &[7, -3, 0, 2147483647]);
        let lo = vec_of(run("vget_low_s32", std::slice::from_ref(&x)));
        let hi = vec_of(run("vget_high_s32", std::slice::from_ref(&x)));
        let back = run("vcombine_s32", &[NeonArg::Vector(lo), NeonArg::Vector(hi)]);
        assert_eq!(NeonArg::Vector(vec_of(back)), x);
    }

    #[test]
    fn shifts_at_range_edges() {
        let r = run("vshr_n_s16", &[v(I16, &[-32768, 5, -1, 32767]), NeonArg::Immediate(16)]);
        assert_eq!(vec_of(r).bits(), &[0xffff, 0, 0xffff, 0]);
        let r = run("vshrq_n_u32", &[v(U32, &[-1, 8, 0, 1]), NeonArg::Immediate(32)]);
        assert_eq!(vec_of(r).bits(), &[0, 0, 0, 0]);
        let r = run("vshr_n_u64", &[v(U64, &[-1]), NeonArg::Immediate(64)]);
        assert_eq!(vec_of(r).bits(), &[0]);
        let r = run("vshl_n_s8", &[v(I8, &[1, 2, 3, 4, 5, 6, 7, -1]), NeonArg::Immediate(7)]);
        assert_eq!(vec_of(r).bits(), &[0x80, 0, 0x80, 0, 0x80, 0, 0x80, 0x80]);
        let err = eval_neon(id("vshr_n_s16"), &[v(I16, &[0; 4]), NeonArg::Immediate(0)], &mut []);
        assert!(matches!(err, Err(NeonError::ImmediateOutOfRange { .. })));
        let err = eval_neon(id("vshl_n_s16"), &[v(I16, &[0; 4]), NeonArg::Immediate(16)], &mut []);
        assert!(matches!(err, Err(NeonError::ImmediateOutOfRange { .. })));
    }

    #[test]
    fn wrapping_arithmetic() {
        let r = run("vadd_s8", &[v(I8, &[127, -128, 0, 0, 0, 0, 0, 0]), v(I8, &[1, -1, 0, 0, 0, 0, 0, 0])]);
        assert_eq!(vec_of(r).lane_i64(0), -128);
        assert_eq!(vec_of(run("vneg_s32", &[v(I32, &[i32::MIN as i64, 1])])).lane_i64(0), i32::MIN as i64);
        let r = run("vmulq_u16", &[v(U16, &[0xffff, 256, 0, 0, 0, 0, 0, 0]), v(U16, &[2, 256, 0, 0, 0, 0, 0, 0])]);
        assert_eq!(&vec_of(r).bits()[..2], &[0xfffe, 0]);
    }

    #[test]
    fn min_max_signedness() {
        let r = run("vmin_s8", &[v(I8, &[-1; 8]), v(I8, &[1; 8])]);
        assert_eq!(vec_of(r).lane_i64(0), -1);
        let r = run("vmin_u8", &[v(U8, &[-1; 8]), v(U8, &[1; 8])]);
        assert_eq!(vec_of(r).lane(0), 1);
    }

    #[test]
    fn float_semantics() {
        let nan = f32::NAN;
        let a = NeonArg::Vector(VectorValue::from_f32s(&[nan, -0.0, 1.0, 2.0]));
        let b = NeonArg::Vector(VectorValue::from_f32s(&[1.0, 0.0, nan, 2.0]));
        let min = vec_of(run("vminq_f32", &[a.clone(), b.clone()]));
        assert!(f32::from_bits(min.lane(0) as u32).is_nan());
        assert_eq!(min.lane(1), (-0.0f32).to_bits() as u64);
        assert!(f32::from_bits(min.lane(2) as u32).is_nan());
        let max = vec_of(run("vmaxq_f32", &[a.clone(), b.clone()]));
        assert_eq!(max.lane(1), 0.0f32.to_bits() as u64);
        let eq = vec_of(run("vceqq_f32", &[a.clone(), b.clone()]));
        assert_eq!(eq.bits(), &[0, 0xFFFF_FFFF, 0, 0xFFFF_FFFF]);
        let ge = vec_of(run("vcgeq_f32", &[a.clone(), b]));
        assert_eq!(ge.bits(), &[0, 0xFFFF_FFFF, 0, 0xFFFF_FFFF]);
        let neg = vec_of(run("vnegq_f32", &[a]));
        assert_eq!(neg.lane(1), 0.0f32.to_bits() as u64);
    }

    #[test]
    fn load_store_exact_span() {
        let mut mem: Vec<u8> = (0..32).collect();
        let val = v(I32, &[-1, -1, -1, -1]);
        let r = eval_neon(id("vst1q_s32"), &[NeonArg::Address(4), val.clone()], &mut mem).unwrap();
        assert_eq!(r, NeonResult::Unit);
        assert_eq!(&mem[..4], &[0, 1, 2, 3]);
        assert!(mem[4..20].iter().all(|&b| b == 0xff));
        assert_eq!(mem[20], 20);
        let r = eval_neon(id("vld1q_s32"), &[NeonArg::Address(4)], &mut mem).unwrap();
        assert_eq!(NeonArg::Vector(vec_of(r)), val);
        let err = eval_neon(id("vld1q_s32"), &[NeonArg::Address(20)], &mut mem);
        assert!(matches!(err, Err(NeonError::OutOfBounds { .. })));
    }

    #[test]
    fn lanes_and_dup() {
        let x = v(U16, &[1, 2, 3, 4]);
        assert_eq!(run("vget_lane_u16", &[x.clone(), NeonArg::Immediate(2)]), NeonResult::Scalar(3));
        let r = run("vset_lane_u16", &[NeonArg::Scalar(0x1_0009), x.clone(), NeonArg::Immediate(0)]);
        assert_eq!(vec_of(r).bits(), &[9, 2, 3, 4]);
        let r = run("vdupq_n_s8", &[NeonArg::Scalar(0xfe)]);
        assert_eq!(vec_of(r).bits(), &[0xfe; 16]);
        let err = eval_neon(id("vget_lane_u16"), &[x, NeonArg::Immediate(4)], &mut []);
        assert!(matches!(err, Err(NeonError::ImmediateOutOfRange { .. })));
    }

    #[test]
    fn argument_errors() {
        let err = eval_neon(id("vaddq_s32"), &[v(I32, &[0; 4])], &mut []);
        assert!(matches!(err, Err(NeonError::ArityMismatch { expected: 2, got: 1, .. })));
        let err = eval_neon(id("vaddq_s32"), &[v(I32, &[0; 4]), v(I32, &[0; 2])], &mut []);
        assert!(matches!(err, Err(NeonError::ArgumentMismatch { index: 1, .. })));
        let bogus = NeonIntrinsicId::new(Family::Mul, false, I64);
        assert!(matches!(
            eval_neon(bogus, &[v(I64, &[0]), v(I64, &[0])], &mut []),
            Err(NeonError::UnsupportedIntrinsic(_))
        ));
    }

    #[test]
    fn every_catalog_entry_evaluates() {
        let mut mem = vec![0u8; 32];
        for &id in catalog() {
            let args: Vec<NeonArg> = id
                .signature()
                .args
                .iter()
                .map(|k| match k {
                    ArgKind::Vector(t) => NeonArg::Vector(VectorValue::zeroed(*t)),
                    ArgKind::Scalar(_) => NeonArg::Scalar(1),
                    ArgKind::Address(_) => NeonArg::Address(0),
                    ArgKind::Immediate { min, .. } => NeonArg::Immediate(*min),
                })
                .collect();
            eval_neon(id, &args, &mut mem).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }
}
