//! Type systems of both ISAs and the NEON → RVV type mapping.
//!
//! NEON vectors are fixed at 64 or 128 bits. RVV registers are `vlen` bits
//! wide, a property of the implementation, so a NEON type can only be
//! substituted by an LMUL=1 RVV type once `vlen` is known to be at least the
//! NEON width. The fixed-size attribute (`riscv_rvv_vector_bits`) is what
//! makes that substitution usable in unions, structs and globals.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElemClass {
    SignedInt,
    UnsignedInt,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementType {
    I8,
    I16,
    I32,
    I64,
    U8,
    U16,
    U32,
    U64,
    F16,
    F32,
    F64,
}

impl ElementType {
    pub const ALL: [ElementType; 11] = [
        ElementType::I8,
        ElementType::I16,
        ElementType::I32,
        ElementType::I64,
        ElementType::U8,
        ElementType::U16,
        ElementType::U32,
        ElementType::U64,
        ElementType::F16,
        ElementType::F32,
        ElementType::F64,
    ];

    pub const fn bit_width(self) -> u32 {
        match self {
            ElementType::I8 | ElementType::U8 => 8,
            ElementType::I16 | ElementType::U16 | ElementType::F16 => 16,
            ElementType::I32 | ElementType::U32 | ElementType::F32 => 32,
            ElementType::I64 | ElementType::U64 | ElementType::F64 => 64,
        }
    }

    pub const fn bytes(self) -> usize {
        (self.bit_width() / 8) as usize
    }

    pub const fn class(self) -> ElemClass {
        match self {
            ElementType::I8 | ElementType::I16 | ElementType::I32 | ElementType::I64 => {
                ElemClass::SignedInt
            }
            ElementType::U8 | ElementType::U16 | ElementType::U32 | ElementType::U64 => {
                ElemClass::UnsignedInt
            }
            ElementType::F16 | ElementType::F32 | ElementType::F64 => ElemClass::Float,
        }
    }

    pub fn from_parts(class: ElemClass, bits: u32) -> Option<ElementType> {
        ElementType::ALL
            .into_iter()
            .find(|e| e.class() == class && e.bit_width() == bits)
    }

    /// Unsigned element of the same width (the lane type of comparison masks).
    pub fn as_unsigned(self) -> ElementType {
        ElementType::from_parts(ElemClass::UnsignedInt, self.bit_width())
            .expect("every width has an unsigned element")
    }

    pub const fn is_float(self) -> bool {
        matches!(self.class(), ElemClass::Float)
    }

    /// Mask with the low `bit_width` bits set.
    pub const fn lane_mask(self) -> u64 {
        match self.bit_width() {
            64 => u64::MAX,
            w => (1u64 << w) - 1,
        }
    }

    /// NEON intrinsic suffix: `s32`, `u8`, `f16`, ...
    pub fn suffix(self) -> &'static str {
        match self {
            ElementType::I8 => "s8",
            ElementType::I16 => "s16",
            ElementType::I32 => "s32",
            ElementType::I64 => "s64",
            ElementType::U8 => "u8",
            ElementType::U16 => "u16",
            ElementType::U32 => "u32",
            ElementType::U64 => "u64",
            ElementType::F16 => "f16",
            ElementType::F32 => "f32",
            ElementType::F64 => "f64",
        }
    }

    pub fn from_suffix(s: &str) -> Option<ElementType> {
        ElementType::ALL.into_iter().find(|e| e.suffix() == s)
    }

    /// Type-name stem used by both `int32x4_t` and `vint32m1_t`.
    pub fn stem(self) -> &'static str {
        match self {
            ElementType::I8 => "int8",
            ElementType::I16 => "int16",
            ElementType::I32 => "int32",
            ElementType::I64 => "int64",
            ElementType::U8 => "uint8",
            ElementType::U16 => "uint16",
            ElementType::U32 => "uint32",
            ElementType::U64 => "uint64",
            ElementType::F16 => "float16",
            ElementType::F32 => "float32",
            ElementType::F64 => "float64",
        }
    }

    /// C scalar type used by emitted code.
    pub fn c_scalar(self) -> &'static str {
        match self {
            ElementType::I8 => "int8_t",
            ElementType::I16 => "int16_t",
            ElementType::I32 => "int32_t",
            ElementType::I64 => "int64_t",
            ElementType::U8 => "uint8_t",
            ElementType::U16 => "uint16_t",
            ElementType::U32 => "uint32_t",
            ElementType::U64 => "uint64_t",
            ElementType::F16 => "_Float16",
            ElementType::F32 => "float",
            ElementType::F64 => "double",
        }
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("{elem} x {lanes} is {bits} bits wide; NEON vectors are 64 or 128 bits")]
    BadWidth { elem: ElementType, lanes: usize, bits: usize },
    #[error("vlen must be a power of two in 32..=65536, got {0}")]
    BadVlen(u32),
    #[error("`{0}` is not a NEON vector type name")]
    BadName(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeonVectorType {
    elem: ElementType,
    lanes: usize,
}

impl NeonVectorType {
    pub fn new(elem: ElementType, lanes: usize) -> Result<Self, TypeError> {
        let bits = elem.bit_width() as usize * lanes;
        if bits != 64 && bits != 128 {
            return Err(TypeError::BadWidth { elem, lanes, bits });
        }
        Ok(NeonVectorType { elem, lanes })
    }

    /// The 64-bit (`q = false`) or 128-bit (`q = true`) vector of `elem`.
    pub fn of(elem: ElementType, q: bool) -> Self {
        let bits = if q { 128 } else { 64 };
        NeonVectorType {
            elem,
            lanes: bits / elem.bit_width() as usize,
        }
    }

    pub fn elem(self) -> ElementType {
        self.elem
    }

    pub fn lanes(self) -> usize {
        self.lanes
    }

    pub fn total_bits(self) -> u32 {
        self.elem.bit_width() * self.lanes as u32
    }

    pub fn is_q(self) -> bool {
        self.total_bits() == 128
    }

    /// All 22 vector types in scope: 64-bit types first, then 128-bit, each
    /// ordered int, uint, float.
    pub fn all() -> Vec<NeonVectorType> {
        [false, true]
            .into_iter()
            .flat_map(|q| ElementType::ALL.into_iter().map(move |e| NeonVectorType::of(e, q)))
            .collect()
    }
}

impl fmt::Display for NeonVectorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}_t", self.elem.stem(), self.lanes)
    }
}

impl FromStr for NeonVectorType {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TypeError::BadName(s.to_string());
        let body = s.strip_suffix("_t").ok_or_else(bad)?;
        let (stem, lanes) = body.rsplit_once('x').ok_or_else(bad)?;
        let elem = ElementType::ALL
            .into_iter()
            .find(|e| e.stem() == stem)
            .ok_or_else(bad)?;
        if lanes.starts_with('0') {
            return Err(bad());
        }
        let lanes: usize = lanes.parse().map_err(|_| bad())?;
        NeonVectorType::new(elem, lanes)
    }
}

/// An LMUL=1 RVV vector type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RvvVectorType {
    pub sew: u32,
    pub class: ElemClass,
}

impl RvvVectorType {
    pub fn of(elem: ElementType) -> Self {
        RvvVectorType {
            sew: elem.bit_width(),
            class: elem.class(),
        }
    }

    pub fn elem(self) -> ElementType {
        ElementType::from_parts(self.class, self.sew).expect("sew/class pairs come from elements")
    }

    pub fn unsigned(self) -> Self {
        RvvVectorType {
            sew: self.sew,
            class: ElemClass::UnsignedInt,
        }
    }

    /// Number of elements in one register at this SEW.
    pub fn vlmax(self, cfg: &VlenConfig) -> usize {
        (cfg.vlen_bits() / self.sew) as usize
    }

    /// Short form used inside intrinsic names: `i32m1`, `u8m1`, `f16m1`.
    pub fn short(self) -> String {
        let c = match self.class {
            ElemClass::SignedInt => 'i',
            ElemClass::UnsignedInt => 'u',
            ElemClass::Float => 'f',
        };
        format!("{c}{}m1", self.sew)
    }

    /// Mask type paired with this vector type at LMUL=1 (`vbool32_t` for e32).
    pub fn mask_type_name(self) -> String {
        format!("vbool{}_t", self.sew)
    }

    /// Name of the `riscv_rvv_vector_bits` typedef emitted for this type.
    pub fn fixed_name(self) -> String {
        format!("fixed_{self}")
    }
}

impl fmt::Display for RvvVectorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stem = match self.class {
            ElemClass::SignedInt => "int",
            ElemClass::UnsignedInt => "uint",
            ElemClass::Float => "float",
        };
        write!(f, "v{stem}{}m1_t", self.sew)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VlenConfig {
    vlen_bits: u32,
    zvfh: bool,
}

impl VlenConfig {
    pub const MIN_VLEN: u32 = 32;
    pub const MAX_VLEN: u32 = 65536;

    pub fn new(vlen_bits: u32, zvfh: bool) -> Result<Self, TypeError> {
        if !vlen_bits.is_power_of_two() || !(Self::MIN_VLEN..=Self::MAX_VLEN).contains(&vlen_bits)
        {
            return Err(TypeError::BadVlen(vlen_bits));
        }
        Ok(VlenConfig { vlen_bits, zvfh })
    }

    pub fn vlen_bits(&self) -> u32 {
        self.vlen_bits
    }

    pub fn zvfh(&self) -> bool {
        self.zvfh
    }
}

impl fmt::Display for VlenConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vlen={}", self.vlen_bits)?;
        if self.zvfh {
            f.write_str(",zvfh")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnmappedReason {
    VlenTooSmall,
    MissingZvfh,
    UnsupportedElementClass,
}

impl fmt::Display for UnmappedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnmappedReason::VlenTooSmall => "vlen-too-small",
            UnmappedReason::MissingZvfh => "missing-zvfh",
            UnmappedReason::UnsupportedElementClass => "unsupported-element-class",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MappingResult {
    Mapped {
        rvv: RvvVectorType,
        fixed_vlen_bits: u32,
    },
    Unmapped(UnmappedReason),
}

impl MappingResult {
    pub fn rvv(self) -> Option<RvvVectorType> {
        match self {
            MappingResult::Mapped { rvv, .. } => Some(rvv),
            MappingResult::Unmapped(_) => None,
        }
    }

    pub fn is_mapped(self) -> bool {
        self.rvv().is_some()
    }
}

/// Maps a NEON vector type onto an LMUL=1 RVV type for a fixed `vlen`.
///
/// A register at least as wide as the NEON type holds it in its low lanes,
/// with `vl` set to the NEON lane count. Half-precision additionally needs
/// Zvfh.
pub fn map_type(neon: NeonVectorType, cfg: &VlenConfig) -> MappingResult {
    if cfg.vlen_bits < neon.total_bits() {
        return MappingResult::Unmapped(UnmappedReason::VlenTooSmall);
    }
    if neon.elem == ElementType::F16 && !cfg.zvfh {
        return MappingResult::Unmapped(UnmappedReason::MissingZvfh);
    }
    MappingResult::Mapped {
        rvv: RvvVectorType::of(neon.elem),
        fixed_vlen_bits: cfg.vlen_bits,
    }
}

/// One row of the exported type-mapping database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeMappingRecord {
    pub neon_type: String,
    pub vlen_min: u32,
    pub requires_zvfh: bool,
    pub rvv_type: String,
    pub mapped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<UnmappedReason>,
}

/// Mapping database for all 22 NEON vector types, evaluated at `cfg`.
pub fn mapping_table(cfg: &VlenConfig) -> Vec<TypeMappingRecord> {
    NeonVectorType::all()
        .into_iter()
        .map(|neon| {
            let result = map_type(neon, cfg);
            TypeMappingRecord {
                neon_type: neon.to_string(),
                vlen_min: neon.total_bits(),
                requires_zvfh: neon.elem == ElementType::F16,
                rvv_type: RvvVectorType::of(neon.elem).to_string(),
                mapped: result.is_mapped(),
                reason: match result {
                    MappingResult::Unmapped(r) => Some(r),
                    MappingResult::Mapped { .. } => None,
                },
            }
        })
        .collect()
}
