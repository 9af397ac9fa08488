use std::ops::{Add, AddAssign};

use serde::Serialize;
use thiserror::Error;

use crate::isa::{ElemClass, RvvVectorType, VlenConfig};
use crate::neon::{eval_neon, ArgKind, NeonArg, NeonError, NeonIntrinsicId, NeonResult, RetKind};
use crate::value::{canonical_nan, is_nan_bits, sign_extend, VectorValue};

use super::opcode::ResultKind;
use super::{FallbackStep, InputKind, Opcode, Operand, RvvOp, RvvProgram, Step, ValueId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExecError {
    #[error("{opcode}: vl={vl} at e{sew} exceeds vlen={vlen}")]
    VlExceedsCapacity {
        opcode: &'static str,
        vl: usize,
        sew: u32,
        vlen: u32,
    },
    #[error("{opcode}: {detail}")]
    TypeMismatch { opcode: &'static str, detail: String },
    #[error("use of undefined value {0}")]
    UndefinedValue(ValueId),
    #[error("value {0} defined twice")]
    Redefined(ValueId),
    #[error("access of {len} bytes at {addr} outside memory of {size} bytes")]
    OutOfBounds { addr: usize, len: usize, size: usize },
    #[error("input {index}: {detail}")]
    InputMismatch { index: usize, detail: String },
    #[error("{0} is not modeled")]
    Unsupported(String),
    #[error("scalar fallback failed: {0}")]
    Fallback(#[from] NeonError),
}

/// An LMUL=1 vector register: `vlen / sew` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VReg {
    ty: RvvVectorType,
    elems: Vec<u64>,
}

impl VReg {
    pub fn zeroed(ty: RvvVectorType, cfg: &VlenConfig) -> Self {
        VReg {
            ty,
            elems: vec![0; ty.vlmax(cfg)],
        }
    }

    /// Places a NEON value in the low lanes; the remaining elements come
    /// from `tail`.
    pub fn from_neon(
        value: &VectorValue,
        cfg: &VlenConfig,
        mut tail: impl FnMut() -> u64,
    ) -> Result<Self, ExecError> {
        let ty = RvvVectorType::of(value.elem());
        let vlmax = ty.vlmax(cfg);
        if value.lanes() > vlmax {
            return Err(ExecError::VlExceedsCapacity {
                opcode: "bind",
                vl: value.lanes(),
                sew: ty.sew,
                vlen: cfg.vlen_bits(),
            });
        }
        let mask = value.elem().lane_mask();
        let mut elems = value.bits().to_vec();
        elems.extend((value.lanes()..vlmax).map(|_| tail() & mask));
        Ok(VReg { ty, elems })
    }

    pub fn ty(&self) -> RvvVectorType {
        self.ty
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    /// The low `lanes` elements as a NEON value.
    pub fn to_neon(&self, lanes: usize) -> VectorValue {
        VectorValue::new(self.ty.elem(), self.elems[..lanes].iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskValue {
    bits: Vec<bool>,
}

impl MaskValue {
    pub fn new(bits: Vec<bool>) -> Self {
        MaskValue { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Vector(VReg),
    Mask(MaskValue),
    Scalar(u64),
    Array(VectorValue),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExecStats {
    /// Vector ops executed plus scalar instructions charged by fallbacks.
    pub dynamic_op_count: u64,
    pub vector_ops: u64,
    pub scalar_ops: u64,
}

impl Add for ExecStats {
    type Output = ExecStats;

    fn add(self, rhs: ExecStats) -> ExecStats {
        ExecStats {
            dynamic_op_count: self.dynamic_op_count + rhs.dynamic_op_count,
            vector_ops: self.vector_ops + rhs.vector_ops,
            scalar_ops: self.scalar_ops + rhs.scalar_ops,
        }
    }
}

impl AddAssign for ExecStats {
    fn add_assign(&mut self, rhs: ExecStats) {
        *self = *self + rhs;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecOutcome {
    pub outputs: Vec<Value>,
    pub stats: ExecStats,
}

/// Scalar instruction count charged for one fallback execution.
///
/// The baseline spills each vector operand into its array form (one store
/// per lane), runs `scalar_steps` instructions per result lane, and reloads
/// a vector result (one load per lane).
pub fn fallback_charge(id: NeonIntrinsicId, scalar_steps: u32) -> u64 {
    let sig = id.signature();
    let spill: usize = sig
        .args
        .iter()
        .map(|a| match a {
            ArgKind::Vector(t) => t.lanes(),
            _ => 0,
        })
        .sum();
    let (work_lanes, reload) = match sig.ret {
        RetKind::Vector(t) => (t.lanes(), t.lanes()),
        RetKind::Scalar(_) => (1, 0),
        RetKind::Unit => (id.vector_type().lanes(), 0),
    };
    (spill + work_lanes * scalar_steps as usize + reload) as u64
}

/// Interpreter instance. Owns a byte-addressed memory image.
#[derive(Debug)]
pub struct Machine {
    cfg: VlenConfig,
    memory: Vec<u8>,
    trace: Option<Vec<String>>,
}

impl Machine {
    pub fn new(cfg: VlenConfig, memory: Vec<u8>) -> Self {
        Machine {
            cfg,
            memory,
            trace: None,
        }
    }

    /// Records one `opcode e<sew> vl=<n>` line per executed op.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn cfg(&self) -> &VlenConfig {
        &self.cfg
    }

    pub fn memory(&self) -> &[u8] {
        &self.memory
    }

    pub fn into_memory(self) -> Vec<u8> {
        self.memory
    }

    pub fn trace(&self) -> &[String] {
        self.trace.as_deref().unwrap_or_default()
    }

    pub fn exec(&mut self, program: &RvvProgram, inputs: &[Value]) -> Result<ExecOutcome, ExecError> {
        program.validate()?;
        if inputs.len() != program.inputs.len() {
            return Err(ExecError::InputMismatch {
                index: inputs.len(),
                detail: format!("expected {} inputs", program.inputs.len()),
            });
        }
        let mut env = Env::default();
        for (index, (decl, value)) in program.inputs.iter().zip(inputs).enumerate() {
            self.check_input(index, decl.kind, value)?;
            env.set(decl.id, value.clone());
        }

        let mut stats = ExecStats::default();
        for step in &program.steps {
            match step {
                Step::Vector(op) => {
                    let result = self.exec_op(op, &env)?;
                    if let Some(trace) = &mut self.trace {
                        trace.push(format!("{} e{} vl={}", op.opcode.name(), op.ty.sew, op.vl));
                    }
                    stats.vector_ops += 1;
                    if let (Some(d), Some(v)) = (op.dest, result) {
                        env.set(d, v);
                    }
                }
                Step::Fallback(fb) => {
                    let result = self.exec_fallback(fb, &env)?;
                    if let Some(trace) = &mut self.trace {
                        let t = fb.intrinsic.vector_type();
                        trace.push(format!(
                            "scalar.{} e{} vl={}",
                            fb.intrinsic,
                            t.elem().bit_width(),
                            t.lanes()
                        ));
                    }
                    stats.scalar_ops += fallback_charge(fb.intrinsic, fb.scalar_steps);
                    if let (Some(d), Some(v)) = (fb.dest, result) {
                        env.set(d, v);
                    }
                }
            }
        }
        stats.dynamic_op_count = stats.vector_ops + stats.scalar_ops;
        let outputs = program
            .outputs
            .iter()
            .map(|id| env.get(*id).cloned())
            .collect::<Result<_, _>>()?;
        Ok(ExecOutcome { outputs, stats })
    }

    fn check_input(&self, index: usize, kind: InputKind, value: &Value) -> Result<(), ExecError> {
        let ok = match (kind, value) {
            (InputKind::Vector { ty, .. }, Value::Vector(r)) => {
                r.ty == ty && r.elems.len() == ty.vlmax(&self.cfg)
            }
            (InputKind::Scalar | InputKind::Address, Value::Scalar(_)) => true,
            (InputKind::Array(t), Value::Array(v)) => {
                v.elem() == t.elem() && v.lanes() == t.lanes()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(ExecError::InputMismatch {
                index,
                detail: format!("{value:?} does not fit {kind:?}"),
            })
        }
    }

    fn exec_fallback(&mut self, fb: &FallbackStep, env: &Env) -> Result<Option<Value>, ExecError> {
        let sig = fb.intrinsic.signature();
        let mismatch = |index: usize| ExecError::TypeMismatch {
            opcode: "scalar",
            detail: format!("{}: argument {index} has the wrong kind", fb.intrinsic),
        };
        if sig.args.len() != fb.args.len() {
            return Err(mismatch(fb.args.len()));
        }
        let mut args = Vec::with_capacity(fb.args.len());
        for (index, (kind, operand)) in sig.args.iter().zip(&fb.args).enumerate() {
            let arg = match (kind, operand) {
                (ArgKind::Immediate { .. }, Operand::Imm(x)) => NeonArg::Immediate(*x as i64),
                (ArgKind::Scalar(_), Operand::Imm(x)) => NeonArg::Scalar(*x),
                (ArgKind::Address(_), Operand::Imm(x)) => NeonArg::Address(*x as usize),
                (_, Operand::Value(id)) => match (kind, env.get(*id)?) {
                    (ArgKind::Vector(_), Value::Array(v)) => NeonArg::Vector(v.clone()),
                    (ArgKind::Scalar(_), Value::Scalar(x)) => NeonArg::Scalar(*x),
                    (ArgKind::Address(_), Value::Scalar(x)) => NeonArg::Address(*x as usize),
                    _ => return Err(mismatch(index)),
                },
                _ => return Err(mismatch(index)),
            };
            args.push(arg);
        }
        Ok(match eval_neon(fb.intrinsic, &args, &mut self.memory)? {
            NeonResult::Vector(v) => Some(Value::Array(v)),
            NeonResult::Scalar(x) => Some(Value::Scalar(x)),
            NeonResult::Unit => None,
        })
    }

    fn exec_op(&mut self, op: &RvvOp, env: &Env) -> Result<Option<Value>, ExecError> {
        use Opcode::*;
        let name = op.opcode.name();
        let vlen = self.cfg.vlen_bits();
        if op.vl as u64 * op.ty.sew as u64 > vlen as u64 {
            return Err(ExecError::VlExceedsCapacity {
                opcode: name,
                vl: op.vl,
                sew: op.ty.sew,
                vlen,
            });
        }
        if !op.opcode.class_rule().allows(op.ty.class) {
            return Err(ExecError::TypeMismatch {
                opcode: name,
                detail: format!("element class {:?} not accepted", op.ty.class),
            });
        }
        if op.ty.class == ElemClass::Float
            && op.ty.sew == 16
            && matches!(op.opcode, VfaddVV | VfsubVV | VfmulVV | VfminVV | VfmaxVV)
        {
            return Err(ExecError::Unsupported(format!("{name} at e16")));
        }

        let ops = Operands { op, env };
        let vl = op.vl;
        let vlmax = op.ty.vlmax(&self.cfg);
        let lane_mask = op.ty.elem().lane_mask();
        let sew = op.ty.sew;

        let mut dest = match op.prior {
            Some(p) => {
                let r = ops.vreg_value(p)?;
                if r.ty != op.ty {
                    return Err(ops.mismatch("tail source has a different type"));
                }
                r.clone()
            }
            None => VReg::zeroed(op.ty, &self.cfg),
        };

        let result = match op.opcode {
            Vle => {
                let addr = ops.scalar(0)? as usize;
                let len = vl * (sew as usize / 8);
                let span = self.span(addr, len)?;
                let loaded = VectorValue::from_le_bytes(op.ty.elem(), &self.memory[span]);
                dest.elems[..vl].copy_from_slice(loaded.bits());
                ResultKind::Vector
            }
            Vse => {
                let addr = ops.scalar(0)? as usize;
                let src = ops.vreg(1)?;
                let bytes = src.to_neon(vl).to_le_bytes();
                let span = self.span(addr, bytes.len())?;
                self.memory[span].copy_from_slice(&bytes);
                ResultKind::None
            }
            VmvVX => {
                let x = ops.scalar(0)? & lane_mask;
                dest.elems[..vl].fill(x);
                ResultKind::Vector
            }
            VmvVV => {
                let a = ops.vreg(0)?;
                dest.elems[..vl].copy_from_slice(&a.elems[..vl]);
                ResultKind::Vector
            }
            VmvXS => return Ok(Some(Value::Scalar(ops.vreg(0)?.elems[0]))),
            Vid => {
                for (i, e) in dest.elems[..vl].iter_mut().enumerate() {
                    *e = i as u64 & lane_mask;
                }
                ResultKind::Vector
            }
            VaddVV | VsubVV | VmulVV | VandVV | VorVV | VxorVV | VminVV | VmaxVV | VminuVV
            | VmaxuVV | VfaddVV | VfsubVV | VfmulVV | VfminVV | VfmaxVV => {
                let (a, b) = (ops.vreg(0)?, ops.vreg(1)?);
                for i in 0..vl {
                    dest.elems[i] = binary(op.opcode, sew, a.elems[i], b.elems[i]) & lane_mask;
                }
                ResultKind::Vector
            }
            VaddVX | VrsubVX | VandVX | VorVX | VxorVX | VsllVX | VsrlVX | VsraVX => {
                let a = ops.vreg(0)?;
                let x = ops.scalar(1)?;
                for i in 0..vl {
                    dest.elems[i] = binary(op.opcode, sew, a.elems[i], x) & lane_mask;
                }
                ResultKind::Vector
            }
            Vneg | Vnot | Vfneg => {
                let a = ops.vreg(0)?;
                for i in 0..vl {
                    let x = a.elems[i];
                    dest.elems[i] = match op.opcode {
                        Vneg => x.wrapping_neg(),
                        Vnot => !x,
                        _ => x ^ (1u64 << (sew - 1)),
                    } & lane_mask;
                }
                ResultKind::Vector
            }
            VmseqVV | VmsneVV | VmsgtVV | VmsgeVV | VmsltVV | VmsleVV | VmsgtuVV | VmsgeuVV
            | VmsltuVV | VmsleuVV | VmfeqVV | VmfneVV | VmfgtVV | VmfgeVV | VmfltVV
            | VmfleVV => {
                let (a, b) = (ops.vreg(0)?, ops.vreg(1)?);
                let bits = (0..vl)
                    .map(|i| compare(op.opcode, op.ty, a.elems[i], b.elems[i]))
                    .collect();
                return Ok(Some(Value::Mask(MaskValue::new(bits))));
            }
            VmseqVX => {
                let a = ops.vreg(0)?;
                let x = ops.scalar(1)? & lane_mask;
                let bits = a.elems[..vl].iter().map(|&e| e == x).collect();
                return Ok(Some(Value::Mask(MaskValue::new(bits))));
            }
            VmergeVXM | VmergeVVM => {
                let base = ops.vreg(0)?;
                let mask = ops.mask(2)?;
                if mask.bits.len() < vl {
                    return Err(ops.mismatch("mask shorter than vl"));
                }
                let picked: Vec<u64> = if op.opcode == VmergeVXM {
                    vec![ops.scalar(1)? & lane_mask; vl]
                } else {
                    ops.vreg(1)?.elems[..vl].to_vec()
                };
                for (i, p) in picked.into_iter().enumerate() {
                    dest.elems[i] = if mask.bits[i] { p } else { base.elems[i] };
                }
                ResultKind::Vector
            }
            VslidedownVX => {
                let src = ops.vreg(0)?;
                let off = ops.scalar(1)?;
                for i in 0..vl {
                    dest.elems[i] = match (i as u64).checked_add(off) {
                        Some(j) if j < vlmax as u64 => src.elems[j as usize],
                        _ => 0,
                    };
                }
                ResultKind::Vector
            }
            VslideupVX => {
                if op.prior.is_none() {
                    return Err(ops.mismatch("vslideup needs a destination register"));
                }
                let src = ops.vreg(0)?;
                let off = ops.scalar(1)?;
                if off < vl as u64 {
                    for i in off as usize..vl {
                        dest.elems[i] = src.elems[i - off as usize];
                    }
                }
                ResultKind::Vector
            }
            Vreinterpret => {
                let src = ops.vreg_any(0)?;
                if src.ty.sew != sew {
                    return Err(ops.mismatch("reinterpret must keep the element width"));
                }
                dest.elems.copy_from_slice(&src.elems);
                ResultKind::Vector
            }
        };
        Ok(match result {
            ResultKind::Vector => Some(Value::Vector(dest)),
            _ => None,
        })
    }

    fn span(&self, addr: usize, len: usize) -> Result<std::ops::Range<usize>, ExecError> {
        match addr.checked_add(len) {
            Some(end) if end <= self.memory.len() => Ok(addr..end),
            _ => Err(ExecError::OutOfBounds {
                addr,
                len,
                size: self.memory.len(),
            }),
        }
    }
}

#[derive(Default)]
struct Env {
    slots: Vec<Option<Value>>,
}

impl Env {
    fn set(&mut self, id: ValueId, v: Value) {
        let i = id.0 as usize;
        if self.slots.len() <= i {
            self.slots.resize(i + 1, None);
        }
        self.slots[i] = Some(v);
    }

    fn get(&self, id: ValueId) -> Result<&Value, ExecError> {
        self.slots
            .get(id.0 as usize)
            .and_then(Option::as_ref)
            .ok_or(ExecError::UndefinedValue(id))
    }
}

struct Operands<'a> {
    op: &'a RvvOp,
    env: &'a Env,
}

impl<'a> Operands<'a> {
    fn mismatch(&self, detail: &str) -> ExecError {
        ExecError::TypeMismatch {
            opcode: self.op.opcode.name(),
            detail: detail.to_string(),
        }
    }

    fn operand(&self, i: usize) -> Result<Operand, ExecError> {
        self.op
            .operands
            .get(i)
            .copied()
            .ok_or_else(|| self.mismatch(&format!("missing operand {i}")))
    }

    fn value(&self, i: usize) -> Result<&'a Value, ExecError> {
        match self.operand(i)? {
            Operand::Value(id) => self.env.get(id),
            Operand::Imm(_) => Err(self.mismatch(&format!("operand {i} must be a value"))),
        }
    }

    fn vreg_value(&self, id: ValueId) -> Result<&'a VReg, ExecError> {
        match self.env.get(id)? {
            Value::Vector(r) => Ok(r),
            _ => Err(self.mismatch(&format!("{id} is not a vector register"))),
        }
    }

    fn vreg_any(&self, i: usize) -> Result<&'a VReg, ExecError> {
        match self.value(i)? {
            Value::Vector(r) => Ok(r),
            _ => Err(self.mismatch(&format!("operand {i} must be a vector"))),
        }
    }

    /// A vector operand whose type matches the op's SEW and class.
    fn vreg(&self, i: usize) -> Result<&'a VReg, ExecError> {
        let r = self.vreg_any(i)?;
        if r.ty != self.op.ty {
            return Err(self.mismatch(&format!(
                "operand {i} is {} but the op is {}",
                r.ty, self.op.ty
            )));
        }
        Ok(r)
    }

    fn scalar(&self, i: usize) -> Result<u64, ExecError> {
        match self.operand(i)? {
            Operand::Imm(x) => Ok(x),
            Operand::Value(id) => match self.env.get(id)? {
                Value::Scalar(x) => Ok(*x),
                _ => Err(self.mismatch(&format!("operand {i} must be a scalar"))),
            },
        }
    }

    fn mask(&self, i: usize) -> Result<&'a MaskValue, ExecError> {
        match self.value(i)? {
            Value::Mask(m) => Ok(m),
            _ => Err(self.mismatch(&format!("operand {i} must be a mask"))),
        }
    }
}

fn binary(opcode: Opcode, sew: u32, a: u64, b: u64) -> u64 {
    use Opcode::*;
    let shamt = (b & (sew as u64 - 1)) as u32;
    match opcode {
        VaddVV | VaddVX => a.wrapping_add(b),
        VsubVV => a.wrapping_sub(b),
        VrsubVX => b.wrapping_sub(a),
        VmulVV => a.wrapping_mul(b),
        VandVV | VandVX => a & b,
        VorVV | VorVX => a | b,
        VxorVV | VxorVX => a ^ b,
        VsllVX => a << shamt,
        VsrlVX => a >> shamt,
        VsraVX => (sign_extend(a, sew) >> shamt) as u64,
        VminVV => pick(sign_extend(a, sew) <= sign_extend(b, sew), a, b),
        VmaxVV => pick(sign_extend(a, sew) >= sign_extend(b, sew), a, b),
        VminuVV => a.min(b),
        VmaxuVV => a.max(b),
        VfaddVV | VfsubVV | VfmulVV | VfminVV | VfmaxVV => float_binary(opcode, sew, a, b),
        _ => unreachable!("{opcode:?} is not a binary op"),
    }
}

fn pick(first: bool, a: u64, b: u64) -> u64 {
    if first {
        a
    } else {
        b
    }
}

/// vfmin/vfmax follow IEEE 754-2019 minimumNumber/maximumNumber: a single
/// NaN operand is ignored, and -0 orders below +0.
fn float_binary(opcode: Opcode, sew: u32, a: u64, b: u64) -> u64 {
    use Opcode::*;
    let elem = if sew == 32 {
        crate::isa::ElementType::F32
    } else {
        crate::isa::ElementType::F64
    };
    if matches!(opcode, VfminVV | VfmaxVV) {
        match (is_nan_bits(elem, a), is_nan_bits(elem, b)) {
            (true, true) => return canonical_nan(elem),
            (true, false) => return b,
            (false, true) => return a,
            _ => {}
        }
        let neg = |x: u64| x >> (sew - 1) & 1 == 1;
        let (x, y) = to_f64(sew, a, b);
        let a_first = if x == y {
            // Only ±0 compare equal with different bits.
            (opcode == VfminVV) == neg(a)
        } else {
            (opcode == VfminVV) == (x < y)
        };
        return pick(a_first, a, b);
    }
    if sew == 32 {
        let (x, y) = (f32::from_bits(a as u32), f32::from_bits(b as u32));
        let r = match opcode {
            VfaddVV => x + y,
            VfsubVV => x - y,
            _ => x * y,
        };
        r.to_bits() as u64
    } else {
        let (x, y) = (f64::from_bits(a), f64::from_bits(b));
        let r = match opcode {
            VfaddVV => x + y,
            VfsubVV => x - y,
            _ => x * y,
        };
        r.to_bits()
    }
}

fn to_f64(sew: u32, a: u64, b: u64) -> (f64, f64) {
    if sew == 32 {
        (
            f32::from_bits(a as u32) as f64,
            f32::from_bits(b as u32) as f64,
        )
    } else {
        (f64::from_bits(a), f64::from_bits(b))
    }
}

fn compare(opcode: Opcode, ty: RvvVectorType, a: u64, b: u64) -> bool {
    use Opcode::*;
    let sew = ty.sew;
    let (sa, sb) = (sign_extend(a, sew), sign_extend(b, sew));
    match opcode {
        VmseqVV => a == b,
        VmsneVV => a != b,
        VmsgtVV => sa > sb,
        VmsgeVV => sa >= sb,
        VmsltVV => sa < sb,
        VmsleVV => sa <= sb,
        VmsgtuVV => a > b,
        VmsgeuVV => a >= b,
        VmsltuVV => a < b,
        VmsleuVV => a <= b,
        _ => {
            let elem = ty.elem();
            if is_nan_bits(elem, a) || is_nan_bits(elem, b) {
                return opcode == VmfneVV;
            }
            let (x, y) = match sew {
                16 => (half_to_f64(a), half_to_f64(b)),
                _ => to_f64(sew, a, b),
            };
            match opcode {
                VmfeqVV => x == y,
                VmfneVV => x != y,
                VmfgtVV => x > y,
                VmfgeVV => x >= y,
                VmfltVV => x < y,
                VmfleVV => x <= y,
                _ => unreachable!("{opcode:?} is not a comparison"),
            }
        }
    }
}

fn half_to_f64(h: u64) -> f64 {
    let sign = if h & 0x8000 != 0 { -1.0 } else { 1.0 };
    let exp = ((h >> 10) & 0x1f) as i32;
    let frac = (h & 0x3ff) as f64;
    match exp {
        0 => sign * frac * 2f64.powi(-24),
        31 => sign * f64::INFINITY,
        e => sign * (1.0 + frac / 1024.0) * 2f64.powi(e - 15),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::ElementType::{self, *};
    use crate::rvv::{InputKind, ProgramBuilder};

    fn cfg(vlen: u32) -> VlenConfig {
        VlenConfig::new(vlen, true).unwrap()
    }

    fn reg(elem: ElementType, lanes: &[i64], cfg: &VlenConfig) -> Value {
        Value::Vector(VReg::from_neon(&VectorValue::from_i64s(elem, lanes), cfg, || 0).unwrap())
    }

    fn ty(e: ElementType) -> RvvVectorType {
        RvvVectorType::of(e)
    }

    fn out_vec(outcome: &ExecOutcome, i: usize) -> &VReg {
        match &outcome.outputs[i] {
            Value::Vector(r) => r,
            other => panic!("expected vector, got {other:?}"),
        }
    }

    #[test]
    fn slidedown_extracts_high_half() {
        let c = cfg(128);
        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty: ty(I32), lanes: 4 });
        let r = b
            .op(Opcode::VslidedownVX, ty(I32), 4, vec![Operand::Value(a), Operand::Imm(2)], None)
            .unwrap();
        b.output(r);
        let p = b.finish();
        let out = Machine::new(c, vec![]).exec(&p, &[reg(I32, &[0, 1, 2, 3], &c)]).unwrap();
        assert_eq!(out_vec(&out, 0).to_neon(2).bits(), &[2, 3]);
        assert_eq!(out.stats.dynamic_op_count, 1);
    }

    #[test]
    fn compare_merge_sequence() {
        let c = cfg(128);
        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty: ty(I32), lanes: 4 });
        let bb = b.input("b", InputKind::Vector { ty: ty(I32), lanes: 4 });
        let zero = b.op(Opcode::VmvVX, ty(U32), 4, vec![Operand::Imm(0)], None).unwrap();
        let mask = b
            .op(Opcode::VmseqVV, ty(I32), 4, vec![Operand::Value(a), Operand::Value(bb)], None)
            .unwrap();
        let r = b
            .op(
                Opcode::VmergeVXM,
                ty(U32),
                4,
                vec![Operand::Value(zero), Operand::Imm(u64::MAX), Operand::Value(mask)],
                None,
            )
            .unwrap();
        b.output(r);
        let p = b.finish();
        let mut m = Machine::new(c, vec![]).with_trace();
        let out = m
            .exec(&p, &[reg(I32, &[1, 2, 3, 4], &c), reg(I32, &[1, 0, 3, 0], &c)])
            .unwrap();
        assert_eq!(out_vec(&out, 0).to_neon(4).bits(), &[0xFFFF_FFFF, 0, 0xFFFF_FFFF, 0]);
        assert_eq!(out.stats.dynamic_op_count, 3);
        assert_eq!(m.trace(), &["vmv_v_x e32 vl=4", "vmseq_vv e32 vl=4", "vmerge_vxm e32 vl=4"]);
    }

    #[test]
    fn store_writes_exactly_vl_elements() {
        let c = cfg(256);
        let mut b = ProgramBuilder::new();
        let ptr = b.input("ptr", InputKind::Address);
        let v = b.input("v", InputKind::Vector { ty: ty(I32), lanes: 4 });
        b.op(Opcode::Vse, ty(I32), 4, vec![Operand::Value(ptr), Operand::Value(v)], None);
        let p = b.finish();
        let canary = vec![0xA5u8; 48];
        let mut m = Machine::new(c, canary.clone());
        // Register tail holds nonzero garbage that must not reach memory.
        let value = Value::Vector(
            VReg::from_neon(&VectorValue::from_i64s(I32, &[1, 2, 3, 4]), &c, || 0xdead_beef)
                .unwrap(),
        );
        let out = m.exec(&p, &[Value::Scalar(8), value]).unwrap();
        assert!(out.outputs.is_empty());
        let mem = m.memory();
        assert_eq!(&mem[..8], &canary[..8]);
        assert_eq!(&mem[24..], &canary[24..]);
        assert_eq!(
            VectorValue::from_le_bytes(I32, &mem[8..24]),
            VectorValue::from_i64s(I32, &[1, 2, 3, 4])
        );
    }

    #[test]
    fn zero_vl_leaves_destination() {
        let c = cfg(128);
        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty: ty(I32), lanes: 4 });
        let d = b.input("d", InputKind::Vector { ty: ty(I32), lanes: 4 });
        let r = b
            .op(Opcode::VaddVV, ty(I32), 0, vec![Operand::Value(a), Operand::Value(a)], Some(d))
            .unwrap();
        b.output(r);
        let p = b.finish();
        let prior = reg(I32, &[9, 8, 7, 6], &c);
        let out = Machine::new(c, vec![]).exec(&p, &[reg(I32, &[1, 1, 1, 1], &c), prior.clone()]).unwrap();
        assert_eq!(out.outputs[0], prior);
        assert_eq!(out.stats.dynamic_op_count, 1);
    }

    #[test]
    fn errors() {
        let c = cfg(64);
        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty: ty(I32), lanes: 2 });
        b.op(Opcode::VaddVV, ty(I32), 4, vec![Operand::Value(a), Operand::Value(a)], None);
        let p = b.finish();
        let err = Machine::new(c, vec![]).exec(&p, &[reg(I32, &[1, 2], &c)]).unwrap_err();
        assert!(matches!(err, ExecError::VlExceedsCapacity { vl: 4, .. }));

        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty: ty(I32), lanes: 2 });
        b.op(Opcode::VaddVV, ty(U32), 2, vec![Operand::Value(a), Operand::Value(a)], None);
        let err = Machine::new(c, vec![]).exec(&b.finish(), &[reg(I32, &[1, 2], &c)]).unwrap_err();
        assert!(matches!(err, ExecError::TypeMismatch { .. }));

        let mut b = ProgramBuilder::new();
        let p = b.input("p", InputKind::Address);
        b.op(Opcode::Vle, ty(I32), 2, vec![Operand::Value(p)], None);
        let err = Machine::new(c, vec![0; 8]).exec(&b.finish(), &[Value::Scalar(4)]).unwrap_err();
        assert!(matches!(err, ExecError::OutOfBounds { .. }));

        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty: ty(I32), lanes: 2 });
        b.op(Opcode::VsrlVX, ty(I32), 2, vec![Operand::Value(a), Operand::Imm(1)], None);
        let err = Machine::new(c, vec![]).exec(&b.finish(), &[reg(I32, &[1, 2], &c)]).unwrap_err();
        assert!(matches!(err, ExecError::TypeMismatch { .. }));
    }

    #[test]
    fn vfmin_ignores_single_nan() {
        let n = f32::NAN.to_bits() as u64;
        let one = 1.0f32.to_bits() as u64;
        assert_eq!(float_binary(Opcode::VfminVV, 32, n, one), one);
        assert_eq!(float_binary(Opcode::VfmaxVV, 32, one, n), one);
        let (pz, nz) = (0.0f32.to_bits() as u64, (-0.0f32).to_bits() as u64);
        assert_eq!(float_binary(Opcode::VfminVV, 32, pz, nz), nz);
        assert_eq!(float_binary(Opcode::VfmaxVV, 32, nz, pz), pz);
    }

    #[test]
    fn shift_amount_uses_low_bits() {
        assert_eq!(binary(Opcode::VsrlVX, 32, 0x8000_0000, 32), 0x8000_0000);
        assert_eq!(binary(Opcode::VsraVX, 8, 0x80, 7) & 0xff, 0xff);
    }

    #[test]
    fn fallback_charge_counts_spill_work_reload() {
        let id = NeonIntrinsicId::parse("vaddq_s32").unwrap();
        assert_eq!(fallback_charge(id, 1), 8 + 4 + 4);
        let id = NeonIntrinsicId::parse("vget_lane_s64").unwrap();
        assert_eq!(fallback_charge(id, 1), 2);
        let id = NeonIntrinsicId::parse("vst1q_s32").unwrap();
        assert_eq!(fallback_charge(id, 1), 4 + 4);
    }
}
