use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::isa::{ElementType, NeonVectorType, VlenConfig};
use crate::neon::{ArgKind, Family, NeonArg, NeonIntrinsicId};
use crate::value::{canonical_nan, VectorValue};

/// Bytes of simulated memory per case.
pub const MEMORY_BYTES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct TestCase {
    pub intrinsic: NeonIntrinsicId,
    pub cfg: VlenConfig,
    pub args: Vec<NeonArg>,
    /// Initial memory image; doubles as the canary for stores.
    pub memory: Vec<u8>,
    /// Seeds the garbage placed in register tails.
    pub tail_seed: u64,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn cell_rng(id: NeonIntrinsicId, cfg: &VlenConfig, seed: u64) -> ChaCha8Rng {
    let key = format!("{id}/{cfg}");
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(key.as_bytes()))
}

/// Bit patterns every generated suite starts with, one per case.
fn edge_lanes(elem: ElementType) -> Vec<u64> {
    let mask = elem.lane_mask();
    let bits = elem.bit_width();
    let mut out = vec![0, mask];
    match elem {
        ElementType::F16 => out.extend([0x7bff, 0xfbff, 0x8000, 0x7c00, 0xfc00, canonical_nan(elem), 0x0001]),
        ElementType::F32 => out.extend([
            f32::MAX.to_bits() as u64,
            f32::MIN.to_bits() as u64,
            (-0.0f32).to_bits() as u64,
            f32::INFINITY.to_bits() as u64,
            f32::NEG_INFINITY.to_bits() as u64,
            canonical_nan(elem),
            0x0000_0001,
        ]),
        ElementType::F64 => out.extend([
            f64::MAX.to_bits(),
            f64::MIN.to_bits(),
            (-0.0f64).to_bits(),
            f64::INFINITY.to_bits(),
            f64::NEG_INFINITY.to_bits(),
            canonical_nan(elem),
            0x1,
        ]),
        e if e.class() == crate::isa::ElemClass::SignedInt => {
            out.extend([1u64 << (bits - 1), mask >> 1]);
        }
        _ => out.push(1),
    }
    out
}

fn random_lane(rng: &mut ChaCha8Rng, elem: ElementType) -> u64 {
    let edges = edge_lanes(elem);
    // Keep specials common enough that every comparison and min/max path
    // sees them against ordinary values.
    if rng.gen_ratio(1, 8) {
        edges[rng.gen_range(0..edges.len())]
    } else if elem.is_float() && rng.gen_ratio(1, 2) {
        small_float(rng, elem)
    } else {
        rng.gen::<u64>() & elem.lane_mask()
    }
}

/// Finite floats of moderate magnitude so arithmetic is not all overflow.
fn small_float(rng: &mut ChaCha8Rng, elem: ElementType) -> u64 {
    let x: f64 = rng.gen_range(-1000.0..1000.0);
    match elem {
        ElementType::F32 => (x as f32).to_bits() as u64,
        ElementType::F64 => x.to_bits(),
        _ => rng.gen::<u64>() & 0x3fff,
    }
}

struct Shape {
    vectors: Vec<NeonVectorType>,
}

fn shape(id: NeonIntrinsicId) -> Shape {
    let vectors = id
        .signature()
        .args
        .iter()
        .filter_map(|a| match a {
            ArgKind::Vector(t) => Some(*t),
            _ => None,
        })
        .collect();
    Shape { vectors }
}

/// Deterministic cases for one (intrinsic, configuration) cell.
///
/// The first cases are the mandatory edge patterns: all-zero, all-ones,
/// then per-class extremes (integer min/max; float ±0, ±inf, NaN, and a
/// denormal). Each edge case fills every lane of every operand with the
/// same pattern. A mixed case pairs different edges lane by lane. Random
/// cases follow.
pub fn gen_cases(id: NeonIntrinsicId, cfg: &VlenConfig, n: usize, seed: u64) -> Vec<TestCase> {
    let mut rng = cell_rng(id, cfg, seed);
    let sig = id.signature();
    let sh = shape(id);
    let edges = edge_lanes(id.elem);
    let mut cases = Vec::with_capacity(n);

    let build = |rng: &mut ChaCha8Rng, k: usize, lane_of: &mut dyn FnMut(&mut ChaCha8Rng, usize, usize) -> u64| {
        let mut vec_index = 0;
        let mut args = Vec::with_capacity(sig.args.len());
        for kind in &sig.args {
            args.push(match kind {
                ArgKind::Vector(t) => {
                    let v = VectorValue::new(t.elem(), (0..t.lanes()).map(|l| lane_of(rng, vec_index, l)));
                    vec_index += 1;
                    NeonArg::Vector(v)
                }
                ArgKind::Scalar(e) => NeonArg::Scalar(lane_of(rng, sh.vectors.len(), 0) & e.lane_mask()),
                ArgKind::Address(t) => {
                    let bytes = t.total_bits() as usize / 8;
                    let slots = (MEMORY_BYTES - bytes) / t.elem().bytes();
                    NeonArg::Address(rng.gen_range(0..=slots) * t.elem().bytes())
                }
                ArgKind::Immediate { min, max } => {
                    let span = (max - min + 1) as usize;
                    NeonArg::Immediate(if k == usize::MAX {
                        rng.gen_range(*min..=*max)
                    } else {
                        min + (k % span) as i64
                    })
                }
            });
        }
        let mut memory = vec![0u8; MEMORY_BYTES];
        rng.fill(&mut memory[..]);
        TestCase {
            intrinsic: id,
            cfg: *cfg,
            args,
            memory,
            tail_seed: rng.gen(),
        }
    };

    for (k, &pattern) in edges.iter().enumerate() {
        if cases.len() == n {
            return cases;
        }
        cases.push(build(&mut rng, k, &mut |_, _, _| pattern));
    }
    if cases.len() < n {
        let k = edges.len();
        let mut mixed = |_: &mut ChaCha8Rng, arg: usize, lane: usize| edges[(lane + arg * 3) % edges.len()];
        cases.push(build(&mut rng, k, &mut mixed));
    }
    while cases.len() < n {
        let mut first: Vec<u64> = Vec::new();
        let mut random = |rng: &mut ChaCha8Rng, arg: usize, lane: usize| {
            // Later operands copy lanes from the first often enough to
            // exercise equality.
            if arg > 0 && lane < first.len() && rng.gen_ratio(1, 4) {
                return first[lane];
            }
            let v = random_lane(rng, id.elem);
            if arg == 0 {
                first.push(v);
            }
            v
        };
        cases.push(build(&mut rng, usize::MAX, &mut random));
    }
    cases
}

/// Extra exhaustive cases: for bit reversal, 256 cases in which lane `j`
/// of case `c` holds `(c + j) mod 256`, so every byte value reaches every
/// lane position.
pub fn exhaustive_cases(id: NeonIntrinsicId, cfg: &VlenConfig, seed: u64) -> Vec<TestCase> {
    if id.family != Family::Rbit {
        return Vec::new();
    }
    let mut rng = cell_rng(id, cfg, seed.wrapping_add(1));
    let t = id.vector_type();
    (0..256u64)
        .map(|c| {
            let v = VectorValue::new(t.elem(), (0..t.lanes() as u64).map(|j| (c + j) & 0xff));
            let mut memory = vec![0u8; MEMORY_BYTES];
            rng.fill(&mut memory[..]);
            TestCase {
                intrinsic: id,
                cfg: *cfg,
                args: vec![NeonArg::Vector(v)],
                memory,
                tail_seed: rng.gen(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> VlenConfig {
        VlenConfig::new(128, true).unwrap()
    }

    #[test]
    fn edge_cases_come_first() {
        let id = NeonIntrinsicId::parse("vceqq_s32").unwrap();
        let cases = gen_cases(id, &cfg(), 8, 1);
        assert_eq!(cases.len(), 8);
        assert_eq!(
            cases[0].args,
            vec![
                NeonArg::Vector(VectorValue::from_i64s(ElementType::I32, &[0; 4])),
                NeonArg::Vector(VectorValue::from_i64s(ElementType::I32, &[0; 4])),
            ]
        );
        assert_eq!(cases, gen_cases(id, &cfg(), 8, 1));
        assert_ne!(cases, gen_cases(id, &cfg(), 8, 2));
    }

    #[test]
    fn immediates_stay_in_range() {
        let id = NeonIntrinsicId::parse("vshr_n_s16").unwrap();
        for c in gen_cases(id, &cfg(), 300, 5) {
            match c.args[1] {
                NeonArg::Immediate(n) => assert!((1..=16).contains(&n)),
                ref other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn float_edges_present() {
        let id = NeonIntrinsicId::parse("vaddq_f32").unwrap();
        let cases = gen_cases(id, &cfg(), 20, 0);
        let lane0: Vec<u64> = cases
            .iter()
            .map(|c| match &c.args[0] {
                NeonArg::Vector(v) => v.lane(0),
                _ => unreachable!(),
            })
            .collect();
        for want in [0x8000_0000, 0x7f80_0000, 0xff80_0000, 0x7fc0_0000, 0x1] {
            assert!(lane0.contains(&want), "{want:#x}");
        }
    }

    #[test]
    fn addresses_fit_memory() {
        let id = NeonIntrinsicId::parse("vst1q_f64").unwrap();
        for c in gen_cases(id, &cfg(), 200, 9) {
            let NeonArg::Address(a) = c.args[0] else { panic!() };
            assert!(a + 16 <= MEMORY_BYTES && a % 8 == 0);
        }
    }

    #[test]
    fn rbit_exhaustive_covers_every_position() {
        let id = NeonIntrinsicId::parse("vrbitq_u8").unwrap();
        let cases = exhaustive_cases(id, &cfg(), 0);
        for lane in 0..16 {
            let mut seen = [false; 256];
            for c in &cases {
                let NeonArg::Vector(v) = &c.args[0] else { panic!() };
                seen[v.lane(lane) as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
