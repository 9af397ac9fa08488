//! Straight-line RVV programs and the interpreter that runs them.
//!
//! Programs are in SSA form: every [`ValueId`] is defined once, either as a
//! program input or as the destination of a step. Each vector op carries its
//! own SEW, element class and `vl`, the way RVV intrinsics take `vl` as an
//! argument; there is no separate `vsetvli`.

mod machine;
mod opcode;

use std::fmt;

use crate::isa::{NeonVectorType, RvvVectorType};
use crate::neon::NeonIntrinsicId;

pub use machine::{
    fallback_charge, ExecError, ExecOutcome, ExecStats, Machine, MaskValue, VReg, Value,
};
pub use opcode::{Opcode, ResultKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueId(pub u32);

impl fmt::Display for ValueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "%{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    Value(ValueId),
    Imm(u64),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Value(v) => write!(f, "{v}"),
            Operand::Imm(x) => write!(f, "{x:#x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RvvOp {
    pub opcode: Opcode,
    pub ty: RvvVectorType,
    pub vl: usize,
    pub operands: Vec<Operand>,
    /// Register whose contents the destination starts from; tail elements
    /// (positions >= vl) keep these values. A fresh zero register otherwise.
    pub prior: Option<ValueId>,
    pub dest: Option<ValueId>,
}

/// Per-lane scalar execution of a NEON intrinsic, standing in for the
/// vector-attribute and auto-vectorized baseline code paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FallbackStep {
    pub intrinsic: NeonIntrinsicId,
    pub args: Vec<Operand>,
    pub dest: Option<ValueId>,
    /// Scalar instructions per result lane for the arithmetic itself.
    pub scalar_steps: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Vector(RvvOp),
    Fallback(FallbackStep),
}

impl Step {
    pub fn dest(&self) -> Option<ValueId> {
        match self {
            Step::Vector(op) => op.dest,
            Step::Fallback(f) => f.dest,
        }
    }

    fn uses(&self) -> Vec<ValueId> {
        let (operands, prior) = match self {
            Step::Vector(op) => (&op.operands, op.prior),
            Step::Fallback(f) => (&f.args, None),
        };
        operands
            .iter()
            .filter_map(|o| match o {
                Operand::Value(v) => Some(*v),
                Operand::Imm(_) => None,
            })
            .chain(prior)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    /// A NEON value held in the low lanes of an LMUL=1 register.
    Vector { ty: RvvVectorType, lanes: usize },
    Scalar,
    Address,
    /// A NEON value in its in-memory array form (fallback path).
    Array(NeonVectorType),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDecl {
    pub id: ValueId,
    pub name: String,
    pub kind: InputKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RvvProgram {
    pub inputs: Vec<InputDecl>,
    pub steps: Vec<Step>,
    pub outputs: Vec<ValueId>,
}

impl RvvProgram {
    /// Checks the SSA discipline: single definition, definition before use.
    pub fn validate(&self) -> Result<(), ExecError> {
        let mut defined = std::collections::HashSet::new();
        for input in &self.inputs {
            if !defined.insert(input.id) {
                return Err(ExecError::Redefined(input.id));
            }
        }
        for step in &self.steps {
            for used in step.uses() {
                if !defined.contains(&used) {
                    return Err(ExecError::UndefinedValue(used));
                }
            }
            if let Some(d) = step.dest() {
                if !defined.insert(d) {
                    return Err(ExecError::Redefined(d));
                }
            }
        }
        for out in &self.outputs {
            if !defined.contains(out) {
                return Err(ExecError::UndefinedValue(*out));
            }
        }
        Ok(())
    }

    pub fn vector_ops(&self) -> impl Iterator<Item = &RvvOp> {
        self.steps.iter().filter_map(|s| match s {
            Step::Vector(op) => Some(op),
            Step::Fallback(_) => None,
        })
    }

    /// Canonical opcode names in program order.
    pub fn opcode_names(&self) -> Vec<&'static str> {
        self.vector_ops().map(|op| op.opcode.name()).collect()
    }

    pub fn is_fallback(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, Step::Fallback(_)))
    }
}

impl fmt::Display for RvvProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for input in &self.inputs {
            writeln!(f, "{} = input {} {:?}", input.id, input.name, input.kind)?;
        }
        for step in &self.steps {
            match step {
                Step::Vector(op) => {
                    if let Some(d) = op.dest {
                        write!(f, "{d} = ")?;
                    }
                    write!(f, "{} e{} vl={}", op.opcode.name(), op.ty.sew, op.vl)?;
                    for o in &op.operands {
                        write!(f, " {o}")?;
                    }
                    if let Some(p) = op.prior {
                        write!(f, " (tail {p})")?;
                    }
                    writeln!(f)?;
                }
                Step::Fallback(fb) => {
                    if let Some(d) = fb.dest {
                        write!(f, "{d} = ")?;
                    }
                    write!(f, "scalar {}", fb.intrinsic)?;
                    for o in &fb.args {
                        write!(f, " {o}")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        let outs: Vec<String> = self.outputs.iter().map(|o| o.to_string()).collect();
        write!(f, "return {}", outs.join(", "))
    }
}

/// Incremental construction of an [`RvvProgram`].
#[derive(Debug, Default)]
pub struct ProgramBuilder {
    next: u32,
    program: RvvProgram,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self) -> ValueId {
        let id = ValueId(self.next);
        self.next += 1;
        id
    }

    pub fn input(&mut self, name: impl Into<String>, kind: InputKind) -> ValueId {
        let id = self.fresh();
        self.program.inputs.push(InputDecl {
            id,
            name: name.into(),
            kind,
        });
        id
    }

    /// Appends a vector op; returns its destination unless the op is a store.
    pub fn op(
        &mut self,
        opcode: Opcode,
        ty: RvvVectorType,
        vl: usize,
        operands: Vec<Operand>,
        prior: Option<ValueId>,
    ) -> Option<ValueId> {
        let dest = (opcode.result_kind() != ResultKind::None).then(|| self.fresh());
        self.program.steps.push(Step::Vector(RvvOp {
            opcode,
            ty,
            vl,
            operands,
            prior,
            dest,
        }));
        dest
    }

    pub fn fallback(
        &mut self,
        intrinsic: NeonIntrinsicId,
        args: Vec<Operand>,
        scalar_steps: u32,
    ) -> Option<ValueId> {
        let dest = (intrinsic.signature().ret != crate::neon::RetKind::Unit).then(|| self.fresh());
        self.program.steps.push(Step::Fallback(FallbackStep {
            intrinsic,
            args,
            dest,
            scalar_steps,
        }));
        dest
    }

    pub fn output(&mut self, id: ValueId) {
        self.program.outputs.push(id);
    }

    pub fn finish(self) -> RvvProgram {
        self.program
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isa::ElementType;

    #[test]
    fn validate_catches_use_before_def() {
        let ty = RvvVectorType::of(ElementType::I32);
        let program = RvvProgram {
            inputs: vec![],
            steps: vec![Step::Vector(RvvOp {
                opcode: Opcode::Vneg,
                ty,
                vl: 4,
                operands: vec![Operand::Value(ValueId(3))],
                prior: None,
                dest: Some(ValueId(4)),
            })],
            outputs: vec![ValueId(4)],
        };
        assert_eq!(program.validate(), Err(ExecError::UndefinedValue(ValueId(3))));
    }

    #[test]
    fn validate_catches_redefinition() {
        let ty = RvvVectorType::of(ElementType::I32);
        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty, lanes: 4 });
        b.op(Opcode::Vneg, ty, 4, vec![Operand::Value(a)], None);
        let mut p = b.finish();
        if let Step::Vector(op) = &mut p.steps[0] {
            op.dest = Some(a);
        }
        assert_eq!(p.validate(), Err(ExecError::Redefined(a)));
    }

    #[test]
    fn display_lists_steps() {
        let ty = RvvVectorType::of(ElementType::I32);
        let mut b = ProgramBuilder::new();
        let a = b.input("a", InputKind::Vector { ty, lanes: 4 });
        let r = b
            .op(Opcode::VslidedownVX, ty, 4, vec![Operand::Value(a), Operand::Imm(2)], None)
            .unwrap();
        b.output(r);
        let text = b.finish().to_string();
        assert!(text.contains("%1 = vslidedown_vx e32 vl=4 %0 0x2"), "{text}");
    }
}
