use crate::isa::{ElemClass, RvvVectorType};

/// The RVV intrinsic subset that recipes emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Opcode {
    Vle,
    Vse,
    VmvVX,
    VmvVV,
    VmvXS,
    Vid,
    VaddVV,
    VaddVX,
    VsubVV,
    VrsubVX,
    VmulVV,
    Vneg,
    VandVV,
    VandVX,
    VorVV,
    VorVX,
    VxorVV,
    VxorVX,
    Vnot,
    VsllVX,
    VsrlVX,
    VsraVX,
    VminVV,
    VmaxVV,
    VminuVV,
    VmaxuVV,
    VmseqVV,
    VmseqVX,
    VmsneVV,
    VmsgtVV,
    VmsgeVV,
    VmsltVV,
    VmsleVV,
    VmsgtuVV,
    VmsgeuVV,
    VmsltuVV,
    VmsleuVV,
    VmfeqVV,
    VmfneVV,
    VmfgtVV,
    VmfgeVV,
    VmfltVV,
    VmfleVV,
    VmergeVXM,
    VmergeVVM,
    VslidedownVX,
    VslideupVX,
    VfaddVV,
    VfsubVV,
    VfmulVV,
    Vfneg,
    VfminVV,
    VfmaxVV,
    Vreinterpret,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultKind {
    Vector,
    Mask,
    Scalar,
    None,
}

/// Which element classes an opcode accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClassRule {
    Any,
    Integer,
    Signed,
    Unsigned,
    Float,
}

impl ClassRule {
    pub(crate) fn allows(self, class: ElemClass) -> bool {
        match self {
            ClassRule::Any => true,
            ClassRule::Integer => class != ElemClass::Float,
            ClassRule::Signed => class == ElemClass::SignedInt,
            ClassRule::Unsigned => class == ElemClass::UnsignedInt,
            ClassRule::Float => class == ElemClass::Float,
        }
    }
}

impl Opcode {
    pub const ALL: [Opcode; 54] = [
        Opcode::Vle,
        Opcode::Vse,
        Opcode::VmvVX,
        Opcode::VmvVV,
        Opcode::VmvXS,
        Opcode::Vid,
        Opcode::VaddVV,
        Opcode::VaddVX,
        Opcode::VsubVV,
        Opcode::VrsubVX,
        Opcode::VmulVV,
        Opcode::Vneg,
        Opcode::VandVV,
        Opcode::VandVX,
        Opcode::VorVV,
        Opcode::VorVX,
        Opcode::VxorVV,
        Opcode::VxorVX,
        Opcode::Vnot,
        Opcode::VsllVX,
        Opcode::VsrlVX,
        Opcode::VsraVX,
        Opcode::VminVV,
        Opcode::VmaxVV,
        Opcode::VminuVV,
        Opcode::VmaxuVV,
        Opcode::VmseqVV,
        Opcode::VmseqVX,
        Opcode::VmsneVV,
        Opcode::VmsgtVV,
        Opcode::VmsgeVV,
        Opcode::VmsltVV,
        Opcode::VmsleVV,
        Opcode::VmsgtuVV,
        Opcode::VmsgeuVV,
        Opcode::VmsltuVV,
        Opcode::VmsleuVV,
        Opcode::VmfeqVV,
        Opcode::VmfneVV,
        Opcode::VmfgtVV,
        Opcode::VmfgeVV,
        Opcode::VmfltVV,
        Opcode::VmfleVV,
        Opcode::VmergeVXM,
        Opcode::VmergeVVM,
        Opcode::VslidedownVX,
        Opcode::VslideupVX,
        Opcode::VfaddVV,
        Opcode::VfsubVV,
        Opcode::VfmulVV,
        Opcode::Vfneg,
        Opcode::VfminVV,
        Opcode::VfmaxVV,
        Opcode::Vreinterpret,
    ];

    pub fn from_name(name: &str) -> Option<Opcode> {
        Opcode::ALL.into_iter().find(|op| op.name() == name)
    }

    pub fn name(self) -> &'static str {
        use Opcode::*;
        match self {
            Vle => "vle",
            Vse => "vse",
            VmvVX => "vmv_v_x",
            VmvVV => "vmv_v_v",
            VmvXS => "vmv_x_s",
            Vid => "vid_v",
            VaddVV => "vadd_vv",
            VaddVX => "vadd_vx",
            VsubVV => "vsub_vv",
            VrsubVX => "vrsub_vx",
            VmulVV => "vmul_vv",
            Vneg => "vneg",
            VandVV => "vand_vv",
            VandVX => "vand_vx",
            VorVV => "vor_vv",
            VorVX => "vor_vx",
            VxorVV => "vxor_vv",
            VxorVX => "vxor_vx",
            Vnot => "vnot",
            VsllVX => "vsll_vx",
            VsrlVX => "vsrl_vx",
            VsraVX => "vsra_vx",
            VminVV => "vmin_vv",
            VmaxVV => "vmax_vv",
            VminuVV => "vminu_vv",
            VmaxuVV => "vmaxu_vv",
            VmseqVV => "vmseq_vv",
            VmseqVX => "vmseq_vx",
            VmsneVV => "vmsne_vv",
            VmsgtVV => "vmsgt_vv",
            VmsgeVV => "vmsge_vv",
            VmsltVV => "vmslt_vv",
            VmsleVV => "vmsle_vv",
            VmsgtuVV => "vmsgtu_vv",
            VmsgeuVV => "vmsgeu_vv",
            VmsltuVV => "vmsltu_vv",
            VmsleuVV => "vmsleu_vv",
            VmfeqVV => "vmfeq_vv",
            VmfneVV => "vmfne_vv",
            VmfgtVV => "vmfgt_vv",
            VmfgeVV => "vmfge_vv",
            VmfltVV => "vmflt_vv",
            VmfleVV => "vmfle_vv",
            VmergeVXM => "vmerge_vxm",
            VmergeVVM => "vmerge_vvm",
            VslidedownVX => "vslidedown_vx",
            VslideupVX => "vslideup_vx",
            VfaddVV => "vfadd_vv",
            VfsubVV => "vfsub_vv",
            VfmulVV => "vfmul_vv",
            Vfneg => "vfneg",
            VfminVV => "vfmin_vv",
            VfmaxVV => "vfmax_vv",
            Vreinterpret => "vreinterpret",
        }
    }

    pub fn result_kind(self) -> ResultKind {
        use Opcode::*;
        match self {
            Vse => ResultKind::None,
            VmvXS => ResultKind::Scalar,
            VmseqVV | VmseqVX | VmsneVV | VmsgtVV | VmsgeVV | VmsltVV | VmsleVV | VmsgtuVV
            | VmsgeuVV | VmsltuVV | VmsleuVV | VmfeqVV | VmfneVV | VmfgtVV | VmfgeVV
            | VmfltVV | VmfleVV => ResultKind::Mask,
            _ => ResultKind::Vector,
        }
    }

    pub(crate) fn class_rule(self) -> ClassRule {
        use Opcode::*;
        match self {
            Vle | Vse | VmvVX | VmvVV | VmvXS | VmergeVXM | VmergeVVM | VslidedownVX
            | VslideupVX | Vreinterpret => ClassRule::Any,
            VaddVV | VaddVX | VsubVV | VrsubVX | VmulVV | VandVV | VandVX | VorVV | VorVX
            | VxorVV | VxorVX | Vnot | VsllVX | VmseqVV | VmseqVX | VmsneVV => {
                ClassRule::Integer
            }
            Vneg | VsraVX | VminVV | VmaxVV | VmsgtVV | VmsgeVV | VmsltVV | VmsleVV => {
                ClassRule::Signed
            }
            Vid | VsrlVX | VminuVV | VmaxuVV | VmsgtuVV | VmsgeuVV | VmsltuVV | VmsleuVV => {
                ClassRule::Unsigned
            }
            VmfeqVV | VmfneVV | VmfgtVV | VmfgeVV | VmfltVV | VmfleVV | VfaddVV | VfsubVV
            | VfmulVV | Vfneg | VfminVV | VfmaxVV => ClassRule::Float,
        }
    }

    /// C intrinsic spelling for an op on `ty`. `src` is the operand type of
    /// `vreinterpret` and ignored otherwise.
    pub fn intrinsic_name(self, ty: RvvVectorType, src: Option<RvvVectorType>) -> String {
        use Opcode::*;
        let t = ty.short();
        let sew = ty.sew;
        let float = ty.class == ElemClass::Float;
        match self {
            Vle => format!("__riscv_vle{sew}_v_{t}"),
            Vse => format!("__riscv_vse{sew}_v_{t}"),
            VmvVX if float => format!("__riscv_vfmv_v_f_{t}"),
            VmvVX => format!("__riscv_vmv_v_x_{t}"),
            VmvVV => format!("__riscv_vmv_v_v_{t}"),
            VmvXS if float => format!("__riscv_vfmv_f_s_{t}_f{sew}"),
            VmvXS => {
                let c = if ty.class == ElemClass::SignedInt { 'i' } else { 'u' };
                format!("__riscv_vmv_x_s_{t}_{c}{sew}")
            }
            Vid => format!("__riscv_vid_v_{t}"),
            Vneg => format!("__riscv_vneg_v_{t}"),
            Vnot => format!("__riscv_vnot_v_{t}"),
            Vfneg => format!("__riscv_vfneg_v_{t}"),
            VmergeVXM if float => format!("__riscv_vfmerge_vfm_{t}"),
            Vreinterpret => {
                let s = src.unwrap_or(ty).short();
                format!("__riscv_vreinterpret_v_{s}_{t}")
            }
            op if op.result_kind() == ResultKind::Mask => {
                format!("__riscv_{}_{t}_b{sew}", op.name())
            }
            op => format!("__riscv_{}_{t}", op.name()),
        }
    }
}
