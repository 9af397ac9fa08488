//! The NEON to RVV mapping database.
//!
//! Each supported intrinsic has a customized recipe (a single RVV op or a
//! short op sequence) that applies when every vector type in its signature
//! maps onto an LMUL=1 register at the configured `vlen`. Otherwise the
//! intrinsic falls back to per-lane scalar evaluation.

mod template;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::isa::{map_type, ElemClass, RvvVectorType, UnmappedReason, VlenConfig};
use crate::neon::{catalog, ArgKind, Family, NeonArg, NeonIntrinsicId};
use crate::rvv::{InputKind, Operand, ProgramBuilder, RvvProgram, ValueId};

pub use template::{rbit_cascade, ImmPattern, OpPattern, OperandPattern};

const EMBEDDED: &str = include_str!("recipes.toml");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecipeError {
    #[error("unknown intrinsic `{0}`")]
    UnknownIntrinsic(String),
    #[error("{intrinsic}: {detail}")]
    BindingMismatch { intrinsic: String, detail: String },
    #[error("{intrinsic}: immediate {value} outside {min}..={max}")]
    ImmediateOutOfRange {
        intrinsic: String,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("{intrinsic}: customized recipe unavailable ({reason})")]
    NotAvailable {
        intrinsic: String,
        reason: UnmappedReason,
    },
    #[error("{intrinsic}: unsupported ({reason})")]
    Unsupported { intrinsic: String, reason: String },
    #[error("bit reversal is defined for 8-bit lanes, not {0}-bit")]
    UnsupportedWidth(u32),
    #[error("recipe database: {0}")]
    Database(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Direct,
    Composite,
    ElementwiseFallback,
    Unsupported,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::Direct => "direct",
            Tier::Composite => "composite",
            Tier::ElementwiseFallback => "elementwise-fallback",
            Tier::Unsupported => "unsupported",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which of the common shim-library conversion methods a recipe stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConversionMethod {
    IsaIntrinsic,
    VectorBuiltin,
    VectorAttribute,
    AutoVectorization,
    Combination,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guard {
    ImmBelowBits,
    ImmEqualsBits,
}

impl Guard {
    fn holds(self, imm: Option<i64>, bits: u32) -> bool {
        match (self, imm) {
            (Guard::ImmBelowBits, Some(n)) => n < bits as i64,
            (Guard::ImmEqualsBits, Some(n)) => n == bits as i64,
            (_, None) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub when: Option<Guard>,
    pub ops: Vec<OpPattern>,
}

/// Op sequence pattern for one family and element class. Holes for the
/// element type, `vl`, and immediates are filled by [`instantiate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub tier: Tier,
    pub method: ConversionMethod,
    /// Scalar instructions per lane charged when this intrinsic falls back.
    pub scalar_steps: u32,
    /// Names for the non-immediate arguments, in signature order.
    pub inputs: Vec<String>,
    pub variants: Vec<Variant>,
}

impl Template {
    fn variant(&self, imm: Option<i64>, bits: u32) -> Option<&Variant> {
        self.variants
            .iter()
            .find(|v| v.when.is_none_or(|g| g.holds(imm, bits)))
    }
}

#[derive(Deserialize)]
struct Row {
    family: Family,
    classes: Vec<String>,
    tier: Tier,
    method: ConversionMethod,
    scalar_steps: u32,
    inputs: Vec<String>,
    #[serde(default)]
    ops: Vec<String>,
    #[serde(default)]
    when: Option<String>,
    #[serde(default)]
    generator: Option<String>,
}

#[derive(Deserialize)]
struct File {
    recipe: Vec<Row>,
}

/// Recipe templates keyed by family and element class.
#[derive(Debug, Default)]
pub struct Database {
    templates: HashMap<(Family, ElemClass), Template>,
}

impl Database {
    pub fn from_toml(text: &str) -> Result<Database, RecipeError> {
        let file: File = toml::from_str(text).map_err(|e| RecipeError::Database(e.to_string()))?;
        let mut db = Database::default();
        for row in file.recipe {
            let when = match row.when.as_deref() {
                None => None,
                Some("imm < bits") => Some(Guard::ImmBelowBits),
                Some("imm == bits") => Some(Guard::ImmEqualsBits),
                Some(other) => {
                    return Err(RecipeError::Database(format!("unknown guard `{other}`")))
                }
            };
            for class in &row.classes {
                let class = match class.as_str() {
                    "signed" => ElemClass::SignedInt,
                    "unsigned" => ElemClass::UnsignedInt,
                    "float" => ElemClass::Float,
                    other => {
                        return Err(RecipeError::Database(format!("unknown class `{other}`")))
                    }
                };
                let ops = match row.generator.as_deref() {
                    None => row
                        .ops
                        .iter()
                        .map(|l| OpPattern::parse(l))
                        .collect::<Result<Vec<_>, _>>()?,
                    Some("rbit") => rbit_ops(class)?,
                    Some(other) => {
                        return Err(RecipeError::Database(format!("unknown generator `{other}`")))
                    }
                };
                check_names(row.family, &row.inputs, &ops)?;
                let variant = Variant { when, ops };
                match db.templates.get_mut(&(row.family, class)) {
                    Some(existing) => {
                        if existing.tier != row.tier
                            || existing.inputs != row.inputs
                            || existing.scalar_steps != row.scalar_steps
                        {
                            return Err(RecipeError::Database(format!(
                                "{} variants disagree on tier, inputs, or cost",
                                row.family
                            )));
                        }
                        existing.variants.push(variant);
                    }
                    None => {
                        db.templates.insert(
                            (row.family, class),
                            Template {
                                tier: row.tier,
                                method: row.method,
                                scalar_steps: row.scalar_steps,
                                inputs: row.inputs.clone(),
                                variants: vec![variant],
                            },
                        );
                    }
                }
            }
        }
        Ok(db)
    }

    pub fn template(&self, family: Family, class: ElemClass) -> Option<&Template> {
        self.templates.get(&(family, class))
    }

    /// Picks the customized recipe when `cfg` maps every vector type of the
    /// signature, and the elementwise fallback otherwise.
    pub fn lookup(&self, id: NeonIntrinsicId, cfg: &VlenConfig) -> Result<Recipe<'_>, RecipeError> {
        let custom = self.customized(id)?;
        Ok(match gate(id, cfg) {
            Ok(()) => custom,
            Err(_) => fallback_of(&custom),
        })
    }

    /// The customized recipe regardless of configuration.
    pub fn customized(&self, id: NeonIntrinsicId) -> Result<Recipe<'_>, RecipeError> {
        if !id.is_supported() {
            return Err(RecipeError::UnknownIntrinsic(id.name()));
        }
        let template = self
            .template(id.family, id.elem.class())
            .ok_or_else(|| RecipeError::UnknownIntrinsic(id.name()))?;
        let types = id.signature().vector_types();
        let kind = match template.tier {
            Tier::Direct => RecipeKind::Direct(template),
            Tier::Composite => RecipeKind::Composite(template),
            Tier::ElementwiseFallback => RecipeKind::ElementwiseFallback {
                scalar_steps: template.scalar_steps,
            },
            Tier::Unsupported => RecipeKind::Unsupported("no conversion".into()),
        };
        Ok(Recipe {
            intrinsic: id,
            kind,
            min_vlen_bits: types.iter().map(|t| t.total_bits()).max().unwrap_or(VlenConfig::MIN_VLEN),
            requires_zvfh: types.iter().any(|t| t.elem() == crate::isa::ElementType::F16),
        })
    }

    /// The elementwise fallback recipe regardless of configuration.
    pub fn fallback(&self, id: NeonIntrinsicId) -> Result<Recipe<'_>, RecipeError> {
        Ok(fallback_of(&self.customized(id)?))
    }
}

fn fallback_of<'a>(custom: &Recipe<'a>) -> Recipe<'a> {
    let scalar_steps = match custom.kind {
        RecipeKind::Direct(t) | RecipeKind::Composite(t) => t.scalar_steps,
        RecipeKind::ElementwiseFallback { scalar_steps } => scalar_steps,
        RecipeKind::Unsupported(_) => return custom.clone(),
    };
    Recipe {
        intrinsic: custom.intrinsic,
        kind: RecipeKind::ElementwiseFallback { scalar_steps },
        min_vlen_bits: VlenConfig::MIN_VLEN,
        requires_zvfh: false,
    }
}

fn rbit_ops(class: ElemClass) -> Result<Vec<OpPattern>, RecipeError> {
    let cascade = rbit_cascade(8)?;
    if class == ElemClass::UnsignedInt {
        return Ok(cascade);
    }
    // Signed lanes go through the unsigned type: vsrl only takes unsigned.
    let rename = |n: &str| match n {
        "a" => "ua".to_string(),
        "out" => "uout".to_string(),
        other => other.to_string(),
    };
    let mut ops = vec![OpPattern::parse("ua = vreinterpret.u a")?];
    for op in cascade {
        ops.push(OpPattern {
            dest: op.dest.as_deref().map(rename),
            operands: op
                .operands
                .into_iter()
                .map(|o| match o {
                    OperandPattern::Named(n) => OperandPattern::Named(rename(&n)),
                    imm => imm,
                })
                .collect(),
            ..op
        });
    }
    ops.push(OpPattern::parse("out = vreinterpret uout")?);
    Ok(ops)
}

fn check_names(family: Family, inputs: &[String], ops: &[OpPattern]) -> Result<(), RecipeError> {
    let mut defined: Vec<&str> = inputs.iter().map(String::as_str).collect();
    for op in ops {
        let uses = op.operands.iter().filter_map(|o| match o {
            OperandPattern::Named(n) => Some(n.as_str()),
            OperandPattern::Imm(_) => None,
        });
        for name in uses.chain(op.tail.as_deref()) {
            if !defined.contains(&name) {
                return Err(RecipeError::Database(format!(
                    "{family}: `{op}` uses undefined `{name}`"
                )));
            }
        }
        if let Some(d) = &op.dest {
            if defined.contains(&d.as_str()) {
                return Err(RecipeError::Database(format!("{family}: `{d}` defined twice")));
            }
            defined.push(d);
        }
    }
    if family != Family::St1 && !defined.contains(&"out") {
        return Err(RecipeError::Database(format!("{family}: no `out` value")));
    }
    Ok(())
}

/// The embedded database.
pub fn database() -> &'static Database {
    static DB: OnceLock<Database> = OnceLock::new();
    DB.get_or_init(|| Database::from_toml(EMBEDDED).expect("embedded recipe table is valid"))
}

pub fn lookup(id: NeonIntrinsicId, cfg: &VlenConfig) -> Result<Recipe<'static>, RecipeError> {
    database().lookup(id, cfg)
}

/// Succeeds iff every vector type in the signature maps at `cfg`.
pub fn gate(id: NeonIntrinsicId, cfg: &VlenConfig) -> Result<(), UnmappedReason> {
    for t in id.signature().vector_types() {
        if let crate::isa::MappingResult::Unmapped(reason) = map_type(t, cfg) {
            return Err(reason);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecipeKind<'a> {
    Direct(&'a Template),
    Composite(&'a Template),
    ElementwiseFallback { scalar_steps: u32 },
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recipe<'a> {
    pub intrinsic: NeonIntrinsicId,
    pub kind: RecipeKind<'a>,
    pub min_vlen_bits: u32,
    pub requires_zvfh: bool,
}

impl Recipe<'_> {
    pub fn tier(&self) -> Tier {
        match self.kind {
            RecipeKind::Direct(_) => Tier::Direct,
            RecipeKind::Composite(_) => Tier::Composite,
            RecipeKind::ElementwiseFallback { .. } => Tier::ElementwiseFallback,
            RecipeKind::Unsupported(_) => Tier::Unsupported,
        }
    }

    pub fn is_customized(&self) -> bool {
        matches!(self.kind, RecipeKind::Direct(_) | RecipeKind::Composite(_))
    }

    pub fn template(&self) -> Option<&Template> {
        match self.kind {
            RecipeKind::Direct(t) | RecipeKind::Composite(t) => Some(t),
            _ => None,
        }
    }

    pub fn method(&self) -> ConversionMethod {
        match self.template() {
            Some(t) => t.method,
            None => ConversionMethod::AutoVectorization,
        }
    }

    /// Opcode names of the general variant, in order. Empty for fallbacks.
    pub fn opcode_names(&self) -> Vec<&'static str> {
        self.template()
            .map(|t| t.variants[0].ops.iter().map(|o| o.opcode.name()).collect())
            .unwrap_or_default()
    }
}

/// How a call-site argument is bound at instantiation time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binding {
    /// A runtime value, becoming a program input.
    Operand,
    Immediate(i64),
}

impl Binding {
    pub fn from_args(args: &[NeonArg]) -> Vec<Binding> {
        args.iter()
            .map(|a| match a {
                NeonArg::Immediate(n) => Binding::Immediate(*n),
                _ => Binding::Operand,
            })
            .collect()
    }
}

/// Builds the executable program for `recipe` at `cfg`.
///
/// Inputs are the non-immediate arguments in signature order. Vector
/// arguments arrive in registers for customized recipes and as arrays for
/// fallbacks. Every op runs with `vl` equal to the NEON lane count.
pub fn instantiate(
    recipe: &Recipe<'_>,
    cfg: &VlenConfig,
    bindings: &[Binding],
) -> Result<RvvProgram, RecipeError> {
    let id = recipe.intrinsic;
    let sig = id.signature();
    let mismatch = |detail: String| RecipeError::BindingMismatch {
        intrinsic: id.name(),
        detail,
    };
    if bindings.len() != sig.args.len() {
        return Err(mismatch(format!(
            "expected {} arguments, got {}",
            sig.args.len(),
            bindings.len()
        )));
    }
    let mut imm = None;
    for (i, (kind, binding)) in sig.args.iter().zip(bindings).enumerate() {
        match (kind, binding) {
            (ArgKind::Immediate { min, max }, Binding::Immediate(n)) => {
                if n < min || n > max {
                    return Err(RecipeError::ImmediateOutOfRange {
                        intrinsic: id.name(),
                        value: *n,
                        min: *min,
                        max: *max,
                    });
                }
                imm = Some(*n);
            }
            (ArgKind::Immediate { .. }, Binding::Operand) => {
                return Err(mismatch(format!("argument {i} must be a constant")))
            }
            (_, Binding::Immediate(_)) => {
                return Err(mismatch(format!("argument {i} is not an immediate")))
            }
            _ => {}
        }
    }

    match &recipe.kind {
        RecipeKind::Direct(t) | RecipeKind::Composite(t) => {
            if let Err(reason) = gate(id, cfg) {
                return Err(RecipeError::NotAvailable {
                    intrinsic: id.name(),
                    reason,
                });
            }
            instantiate_template(id, t, imm)
        }
        RecipeKind::ElementwiseFallback { scalar_steps } => {
            let mut b = ProgramBuilder::new();
            let mut args = Vec::new();
            for (i, kind) in sig.args.iter().enumerate() {
                let name = format!("arg{i}");
                args.push(match kind {
                    ArgKind::Vector(t) => Operand::Value(b.input(name, InputKind::Array(*t))),
                    ArgKind::Scalar(_) => Operand::Value(b.input(name, InputKind::Scalar)),
                    ArgKind::Address(_) => Operand::Value(b.input(name, InputKind::Address)),
                    ArgKind::Immediate { .. } => Operand::Imm(imm.unwrap_or(0) as u64),
                });
            }
            if let Some(out) = b.fallback(id, args, *scalar_steps) {
                b.output(out);
            }
            Ok(b.finish())
        }
        RecipeKind::Unsupported(reason) => Err(RecipeError::Unsupported {
            intrinsic: id.name(),
            reason: reason.clone(),
        }),
    }
}

fn instantiate_template(
    id: NeonIntrinsicId,
    template: &Template,
    imm: Option<i64>,
) -> Result<RvvProgram, RecipeError> {
    let sig = id.signature();
    let elem = id.elem;
    let bits = elem.bit_width();
    let lanes = id.vector_type().lanes();
    let variant = template.variant(imm, bits).ok_or_else(|| RecipeError::BindingMismatch {
        intrinsic: id.name(),
        detail: "no recipe variant accepts this immediate".into(),
    })?;

    let mut b = ProgramBuilder::new();
    let mut env: HashMap<&str, ValueId> = HashMap::new();
    let runtime_args = sig.args.iter().filter(|a| !matches!(a, ArgKind::Immediate { .. }));
    for (name, kind) in template.inputs.iter().zip(runtime_args) {
        let input = match kind {
            ArgKind::Vector(t) => InputKind::Vector {
                ty: RvvVectorType::of(t.elem()),
                lanes: t.lanes(),
            },
            ArgKind::Scalar(_) => InputKind::Scalar,
            _ => InputKind::Address,
        };
        env.insert(name, b.input(name.clone(), input));
    }

    let base = RvvVectorType::of(elem);
    for op in &variant.ops {
        let ty = if op.unsigned { base.unsigned() } else { base };
        let resolve = |name: &str| {
            env.get(name).copied().ok_or_else(|| RecipeError::Database(format!("undefined `{name}`")))
        };
        let mut operands = Vec::with_capacity(op.operands.len());
        for o in &op.operands {
            operands.push(match o {
                OperandPattern::Named(n) => Operand::Value(resolve(n)?),
                OperandPattern::Imm(p) => Operand::Imm(match p {
                    ImmPattern::Lit(x) => *x,
                    ImmPattern::Ones => ty.elem().lane_mask(),
                    ImmPattern::Half => (lanes / 2) as u64,
                    ImmPattern::Imm => imm.unwrap_or(0) as u64,
                    ImmPattern::ImmClamp => imm.unwrap_or(0).min(bits as i64 - 1) as u64,
                }),
            });
        }
        let prior = op.tail.as_deref().map(resolve).transpose()?;
        let vl = if op.half_vl { lanes / 2 } else { lanes };
        let dest = b.op(op.opcode, ty, vl, operands, prior);
        if let (Some(name), Some(d)) = (&op.dest, dest) {
            env.insert(name, d);
        }
    }
    if let Some(out) = env.get("out") {
        b.output(*out);
    }
    Ok(b.finish())
}

/// One row of the exported recipe catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecipeRecord {
    pub neon_name: String,
    pub tier: Tier,
    pub min_vlen: u32,
    pub requires_zvfh: bool,
    pub rvv_opcodes: Vec<&'static str>,
    pub method: ConversionMethod,
}

impl From<&Recipe<'_>> for RecipeRecord {
    fn from(r: &Recipe<'_>) -> Self {
        RecipeRecord {
            neon_name: r.intrinsic.name(),
            tier: r.tier(),
            min_vlen: r.min_vlen_bits,
            requires_zvfh: r.requires_zvfh,
            rvv_opcodes: r.opcode_names(),
            method: r.method(),
        }
    }
}

/// Catalog export: customized recipes, or the recipe `cfg` selects.
pub fn export(cfg: Option<&VlenConfig>) -> Vec<RecipeRecord> {
    catalog()
        .iter()
        .map(|&id| {
            let recipe = match cfg {
                Some(cfg) => lookup(id, cfg),
                None => database().customized(id),
            }
            .expect("catalog intrinsics have recipes");
            RecipeRecord::from(&recipe)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neon::Family;

    fn cfg(vlen: u32) -> VlenConfig {
        VlenConfig::new(vlen, true).unwrap()
    }

    fn id(name: &str) -> NeonIntrinsicId {
        NeonIntrinsicId::parse(name).unwrap()
    }

    #[test]
    fn every_catalog_entry_has_a_template() {
        for &i in catalog() {
            let r = database().customized(i).unwrap();
            assert!(r.is_customized(), "{i}");
            let t = r.template().unwrap();
            let runtime = i
                .signature()
                .args
                .iter()
                .filter(|a| !matches!(a, ArgKind::Immediate { .. }))
                .count();
            assert_eq!(t.inputs.len(), runtime, "{i}");
        }
    }

    #[test]
    fn lookup_examples() {
        let r = lookup(id("vaddq_s32"), &cfg(128)).unwrap();
        assert_eq!(r.tier(), Tier::Direct);
        let p = instantiate(&r, &cfg(128), &[Binding::Operand; 2]).unwrap();
        assert_eq!(p.opcode_names(), ["vadd_vv"]);
        assert_eq!(p.vector_ops().next().unwrap().vl, 4);

        let r = lookup(id("vget_high_s32"), &cfg(128)).unwrap();
        assert_eq!(r.tier(), Tier::Composite);
        let p = instantiate(&r, &cfg(128), &[Binding::Operand]).unwrap();
        let op = p.vector_ops().next().unwrap();
        assert_eq!((op.opcode.name(), op.vl, op.operands[1]), ("vslidedown_vx", 4, Operand::Imm(2)));

        let r = lookup(id("vceqq_s32"), &cfg(128)).unwrap();
        assert_eq!(r.opcode_names(), ["vmv_v_x", "vmseq_vv", "vmerge_vxm"]);

        let r = lookup(id("vaddq_s32"), &cfg(64)).unwrap();
        assert_eq!(r.tier(), Tier::ElementwiseFallback);
    }

    #[test]
    fn gating_follows_type_mapping() {
        let no_zvfh = VlenConfig::new(128, false).unwrap();
        assert!(!lookup(id("vld1_f16"), &no_zvfh).unwrap().is_customized());
        assert!(lookup(id("vld1_f16"), &cfg(64)).unwrap().is_customized());
        assert!(!lookup(id("vget_high_s32"), &cfg(64)).unwrap().is_customized());
        assert!(lookup(id("vget_low_s32"), &cfg(128)).unwrap().is_customized());
        let r = database().customized(id("vcombine_f16")).unwrap();
        assert_eq!((r.min_vlen_bits, r.requires_zvfh), (128, true));
    }

    #[test]
    fn binding_errors() {
        let r = lookup(id("vshrq_n_u16"), &cfg(128)).unwrap();
        assert!(matches!(
            instantiate(&r, &cfg(128), &[Binding::Operand, Binding::Immediate(0)]),
            Err(RecipeError::ImmediateOutOfRange { .. })
        ));
        assert!(matches!(
            instantiate(&r, &cfg(128), &[Binding::Operand]),
            Err(RecipeError::BindingMismatch { .. })
        ));
        let p = instantiate(&r, &cfg(128), &[Binding::Operand, Binding::Immediate(16)]).unwrap();
        assert_eq!(p.opcode_names(), ["vmv_v_x"]);
        let p = instantiate(&r, &cfg(128), &[Binding::Operand, Binding::Immediate(3)]).unwrap();
        assert_eq!(p.opcode_names(), ["vsrl_vx"]);

        let r = database().customized(id("vaddq_s32")).unwrap();
        assert!(matches!(
            instantiate(&r, &cfg(64), &[Binding::Operand; 2]),
            Err(RecipeError::NotAvailable { reason: UnmappedReason::VlenTooSmall, .. })
        ));
    }

    #[test]
    fn rbit_program_sizes() {
        let r = lookup(id("vrbitq_u8"), &cfg(128)).unwrap();
        let p = instantiate(&r, &cfg(128), &[Binding::Operand]).unwrap();
        assert_eq!(p.steps.len(), 15);
        assert!(p.vector_ops().all(|op| op.vl == 16));
        let r = lookup(id("vrbit_s8"), &cfg(128)).unwrap();
        let p = instantiate(&r, &cfg(128), &[Binding::Operand]).unwrap();
        assert_eq!(p.steps.len(), 17);
    }

    #[test]
    fn store_ends_in_vse() {
        let r = lookup(id("vst1q_s32"), &cfg(256)).unwrap();
        let p = instantiate(&r, &cfg(256), &[Binding::Operand; 2]).unwrap();
        let last = p.vector_ops().last().unwrap();
        assert_eq!((last.opcode.name(), last.ty.sew, last.vl), ("vse", 32, 4));
        assert!(p.outputs.is_empty());
    }

    #[test]
    fn fallback_program_shape() {
        let r = database().fallback(id("vgetq_lane_f32")).unwrap();
        let p = instantiate(&r, &cfg(64), &[Binding::Operand, Binding::Immediate(3)]).unwrap();
        assert!(p.is_fallback());
        assert_eq!(p.inputs.len(), 1);
        assert_eq!(p.outputs.len(), 1);
    }

    #[test]
    fn database_rejects_bad_rows() {
        let bad = r#"
            [[recipe]]
            family = "add"
            classes = ["signed"]
            tier = "direct"
            method = "isa-intrinsic"
            scalar_steps = 1
            inputs = ["a"]
            ops = ["out = vadd_vv a b"]
        "#;
        assert!(matches!(Database::from_toml(bad), Err(RecipeError::Database(_))));
        assert!(database().template(Family::Rbit, ElemClass::Float).is_none());
        assert_eq!(export(None).len(), catalog().len());
    }
}
