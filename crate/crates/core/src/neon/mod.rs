//! NEON intrinsic identities, signatures, and the reference lane semantics.

mod eval;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::isa::{ElementType, NeonVectorType};
use crate::value::VectorValue;

pub use eval::eval_neon;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ld1,
    St1,
    Add,
    Sub,
    Mul,
    Neg,
    Min,
    Max,
    And,
    Orr,
    Eor,
    Mvn,
    Bic,
    ShlN,
    ShrN,
    Ceq,
    Cgt,
    Cge,
    Clt,
    Cle,
    GetHigh,
    GetLow,
    Combine,
    DupN,
    GetLane,
    SetLane,
    Rbit,
}

impl Family {
    pub const ALL: [Family; 27] = [
        Family::Ld1,
        Family::St1,
        Family::Add,
        Family::Sub,
        Family::Mul,
        Family::Neg,
        Family::Min,
        Family::Max,
        Family::And,
        Family::Orr,
        Family::Eor,
        Family::Mvn,
        Family::Bic,
        Family::ShlN,
        Family::ShrN,
        Family::Ceq,
        Family::Cgt,
        Family::Cge,
        Family::Clt,
        Family::Cle,
        Family::GetHigh,
        Family::GetLow,
        Family::Combine,
        Family::DupN,
        Family::GetLane,
        Family::SetLane,
        Family::Rbit,
    ];

    /// Name split around the optional `q`: `vshlq_n_s32` is `("shl", "_n")`.
    fn name_parts(self) -> (&'static str, &'static str) {
        match self {
            Family::Ld1 => ("ld1", ""),
            Family::St1 => ("st1", ""),
            Family::Add => ("add", ""),
            Family::Sub => ("sub", ""),
            Family::Mul => ("mul", ""),
            Family::Neg => ("neg", ""),
            Family::Min => ("min", ""),
            Family::Max => ("max", ""),
            Family::And => ("and", ""),
            Family::Orr => ("orr", ""),
            Family::Eor => ("eor", ""),
            Family::Mvn => ("mvn", ""),
            Family::Bic => ("bic", ""),
            Family::ShlN => ("shl", "_n"),
            Family::ShrN => ("shr", "_n"),
            Family::Ceq => ("ceq", ""),
            Family::Cgt => ("cgt", ""),
            Family::Cge => ("cge", ""),
            Family::Clt => ("clt", ""),
            Family::Cle => ("cle", ""),
            Family::GetHigh => ("get_high", ""),
            Family::GetLow => ("get_low", ""),
            Family::Combine => ("combine", ""),
            Family::DupN => ("dup", "_n"),
            Family::GetLane => ("get", "_lane"),
            Family::SetLane => ("set", "_lane"),
            Family::Rbit => ("rbit", ""),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::ShlN => "shl_n",
            Family::ShrN => "shr_n",
            Family::DupN => "dup_n",
            Family::GetLane => "get_lane",
            Family::SetLane => "set_lane",
            other => other.name_parts().0,
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            Family::Ceq | Family::Cgt | Family::Cge | Family::Clt | Family::Cle
        )
    }

    /// Families whose output lane `i` depends only on input lane `i`.
    pub fn is_elementwise(self) -> bool {
        matches!(
            self,
            Family::Add
                | Family::Sub
                | Family::Mul
                | Family::Neg
                | Family::Min
                | Family::Max
                | Family::And
                | Family::Orr
                | Family::Eor
                | Family::Mvn
                | Family::Bic
                | Family::ShlN
                | Family::ShrN
                | Family::Rbit
        ) || self.is_comparison()
    }

    /// Families spelled without a `q` variant (`vget_high_s32` reads a
    /// 128-bit vector but has no `q` in its name).
    fn has_q_spelling(self) -> bool {
        !matches!(self, Family::GetHigh | Family::GetLow | Family::Combine)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeonIntrinsicId {
    pub family: Family,
    pub q: bool,
    pub elem: ElementType,
}

impl NeonIntrinsicId {
    pub const fn new(family: Family, q: bool, elem: ElementType) -> Self {
        NeonIntrinsicId { family, q, elem }
    }

    /// Canonical NEON spelling, e.g. `vceqq_s32`, `vshrq_n_u16`, `vgetq_lane_f32`.
    pub fn name(&self) -> String {
        let (base, tail) = self.family.name_parts();
        let q = if self.q { "q" } else { "" };
        format!("v{base}{q}{tail}_{}", self.elem.suffix())
    }

    /// Parses a canonical name. Only intrinsics in the supported catalog parse.
    pub fn parse(name: &str) -> Option<NeonIntrinsicId> {
        catalog_index().get(name).copied()
    }

    pub fn is_supported(&self) -> bool {
        catalog_index().contains_key(self.name().as_str())
    }

    /// The vector type the intrinsic operates on; for get_high/get_low this
    /// is the 128-bit source, for combine the 128-bit result.
    pub fn vector_type(&self) -> NeonVectorType {
        let q = self.q
            || matches!(
                self.family,
                Family::GetHigh | Family::GetLow | Family::Combine
            );
        NeonVectorType::of(self.elem, q)
    }

    pub fn signature(&self) -> Signature {
        let t = self.vector_type();
        let e = self.elem;
        let bits = e.bit_width() as i64;
        let v = ArgKind::Vector(t);
        match self.family {
            Family::Ld1 => Signature::new(vec![ArgKind::Address(t)], RetKind::Vector(t)),
            Family::St1 => Signature::new(vec![ArgKind::Address(t), v], RetKind::Unit),
            Family::Add
            | Family::Sub
            | Family::Mul
            | Family::Min
            | Family::Max
            | Family::And
            | Family::Orr
            | Family::Eor
            | Family::Bic => Signature::new(vec![v, v], RetKind::Vector(t)),
            Family::Neg | Family::Mvn | Family::Rbit => {
                Signature::new(vec![v], RetKind::Vector(t))
            }
            Family::ShlN => Signature::new(
                vec![v, ArgKind::Immediate { min: 0, max: bits - 1 }],
                RetKind::Vector(t),
            ),
            Family::ShrN => Signature::new(
                vec![v, ArgKind::Immediate { min: 1, max: bits }],
                RetKind::Vector(t),
            ),
            Family::Ceq | Family::Cgt | Family::Cge | Family::Clt | Family::Cle => {
                let mask = NeonVectorType::of(e.as_unsigned(), t.is_q());
                Signature::new(vec![v, v], RetKind::Vector(mask))
            }
            Family::GetHigh | Family::GetLow => {
                Signature::new(vec![v], RetKind::Vector(NeonVectorType::of(e, false)))
            }
            Family::Combine => {
                let half = ArgKind::Vector(NeonVectorType::of(e, false));
                Signature::new(vec![half, half], RetKind::Vector(t))
            }
            Family::DupN => Signature::new(vec![ArgKind::Scalar(e)], RetKind::Vector(t)),
            Family::GetLane => Signature::new(
                vec![v, ArgKind::Immediate { min: 0, max: t.lanes() as i64 - 1 }],
                RetKind::Scalar(e),
            ),
            Family::SetLane => Signature::new(
                vec![
                    ArgKind::Scalar(e),
                    v,
                    ArgKind::Immediate { min: 0, max: t.lanes() as i64 - 1 },
                ],
                RetKind::Vector(t),
            ),
        }
    }
}

impl fmt::Display for NeonIntrinsicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Vector(NeonVectorType),
    Scalar(ElementType),
    /// Pointer to `lanes` elements of the vector type.
    Address(NeonVectorType),
    /// Compile-time constant (shift count or lane index), inclusive range.
    Immediate { min: i64, max: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RetKind {
    Vector(NeonVectorType),
    Scalar(ElementType),
    Unit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub args: Vec<ArgKind>,
    pub ret: RetKind,
}

impl Signature {
    fn new(args: Vec<ArgKind>, ret: RetKind) -> Self {
        Signature { args, ret }
    }

    /// Every vector type appearing in the signature, including pointees.
    pub fn vector_types(&self) -> Vec<NeonVectorType> {
        let mut out: Vec<NeonVectorType> = self
            .args
            .iter()
            .filter_map(|a| match a {
                ArgKind::Vector(t) | ArgKind::Address(t) => Some(*t),
                _ => None,
            })
            .collect();
        if let RetKind::Vector(t) = self.ret {
            out.push(t);
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn immediate(&self) -> Option<(usize, i64, i64)> {
        self.args.iter().enumerate().find_map(|(i, a)| match a {
            ArgKind::Immediate { min, max } => Some((i, *min, *max)),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NeonArg {
    Vector(VectorValue),
    Scalar(u64),
    Address(usize),
    Immediate(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeonResult {
    Vector(VectorValue),
    Scalar(u64),
    Unit,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NeonError {
    #[error("unsupported intrinsic `{0}`")]
    UnsupportedIntrinsic(String),
    #[error("{name} takes {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("{name}: argument {index} does not match {expected}")]
    ArgumentMismatch {
        name: String,
        index: usize,
        expected: String,
    },
    #[error("{name}: immediate {value} outside {min}..={max}")]
    ImmediateOutOfRange {
        name: String,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("{name}: access of {len} bytes at {addr} exceeds memory of {size} bytes")]
    OutOfBounds {
        name: String,
        addr: usize,
        len: usize,
        size: usize,
    },
}

#[derive(Deserialize)]
struct CatalogFile {
    row: Vec<CatalogRow>,
}

#[derive(Deserialize)]
struct CatalogRow {
    family: Family,
    forms: Vec<String>,
    elems: Vec<String>,
}

const CATALOG_TOML: &str = include_str!("catalog.toml");

fn load_catalog() -> Vec<NeonIntrinsicId> {
    let file: CatalogFile = toml::from_str(CATALOG_TOML).expect("embedded catalog parses");
    let mut out = Vec::new();
    for row in file.row {
        for form in &row.forms {
            let q = match form.as_str() {
                "d" => false,
                "q" => true,
                other => panic!("catalog: unknown form `{other}`"),
            };
            assert!(
                !q || row.family.has_q_spelling(),
                "catalog: {} has no q spelling",
                row.family
            );
            for e in &row.elems {
                let elem = ElementType::from_suffix(e)
                    .unwrap_or_else(|| panic!("catalog: unknown element `{e}`"));
                out.push(NeonIntrinsicId::new(row.family, q, elem));
            }
        }
    }
    out
}

/// The supported intrinsic set, in table order.
pub fn catalog() -> &'static [NeonIntrinsicId] {
    static CATALOG: OnceLock<Vec<NeonIntrinsicId>> = OnceLock::new();
    CATALOG.get_or_init(load_catalog)
}

fn catalog_index() -> &'static HashMap<String, NeonIntrinsicId> {
    static INDEX: OnceLock<HashMap<String, NeonIntrinsicId>> = OnceLock::new();
    INDEX.get_or_init(|| catalog().iter().map(|id| (id.name(), *id)).collect())
}

/// NEON families outside the supported set that the scanner still recognizes
/// so that their call sites get a diagnostic instead of passing silently.
const UNSUPPORTED_BASES: &[&str] = &[
    "abd", "abs", "addl", "addv", "addw", "bsl", "cage", "cagt", "cls", "clz", "cnt", "cvt",
    "div", "ext", "fma", "fms", "hadd", "ld2", "ld3", "ld4", "maxv", "minv", "mla", "mls", "mov",
    "movl", "movn", "mull", "padd", "pmax", "pmin", "qabs", "qadd", "qdmulh", "qmovn", "qneg",
    "qrdmulh", "qshl", "qsub", "recpe", "reinterpret", "rev16", "rev32", "rev64", "rhadd",
    "rndn", "rshl", "rshr", "rsqrte", "sli", "sqrt", "sra", "sri", "st2", "st3", "st4", "subl",
    "tbl", "tbx", "trn1", "trn2", "tst", "uzp1", "uzp2", "zip1", "zip2",
];

const SUPPORTED_BASES: &[&str] = &[
    "ld1", "st1", "add", "sub", "mul", "neg", "min", "max", "and", "orr", "eor", "mvn", "bic",
    "shl", "shr", "ceq", "cgt", "cge", "clt", "cle", "get_high", "get_low", "combine", "dup",
    "get", "set", "rbit",
];

const TYPE_SUFFIXES: &[&str] = &[
    "s8", "s16", "s32", "s64", "u8", "u16", "u32", "u64", "f16", "f32", "f64", "p8", "p16",
    "p64", "p128", "bf16",
];

const NAME_TAILS: &[&str] = &["", "q", "_n", "q_n", "_lane", "q_lane", "_dup", "q_dup", "_x2", "q_x2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CallName {
    Supported(NeonIntrinsicId),
    /// Recognizably a NEON intrinsic, but outside the supported catalog.
    Unsupported,
}

/// Classifies an identifier as a NEON intrinsic name. `None` means the name
/// does not look like NEON at all (`vfoo_s32`, `printf`).
pub fn classify_name(name: &str) -> Option<CallName> {
    if let Some(id) = NeonIntrinsicId::parse(name) {
        return Some(CallName::Supported(id));
    }
    let body = name.strip_prefix('v')?;
    let mut stem = body;
    // reinterpret carries two suffixes (`vreinterpretq_s32_u8`).
    for _ in 0..2 {
        match stem.rsplit_once('_') {
            Some((head, suffix)) if TYPE_SUFFIXES.contains(&suffix) => stem = head,
            _ => break,
        }
    }
    if stem == body {
        return None;
    }
    let known = SUPPORTED_BASES.iter().chain(UNSUPPORTED_BASES).any(|base| {
        stem.strip_prefix(base)
            .is_some_and(|rest| NAME_TAILS.contains(&rest) || rest.starts_with("_lane"))
    });
    known.then_some(CallName::Unsupported)
}
