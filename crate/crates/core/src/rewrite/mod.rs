//! Source-to-source rewriting of NEON intrinsic code into RVV intrinsic code.
//!
//! The pipeline is lex, scan, plan, apply. Everything outside the planned
//! substitution spans is copied byte for byte.

mod lexer;
mod render;
mod scan;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::isa::{map_type, MappingResult, NeonVectorType, RvvVectorType, VlenConfig};
use crate::neon::{ArgKind, CallName, NeonIntrinsicId};
use crate::recipe::{database, instantiate, lookup, Binding, RecipeKind, Tier};
use crate::rvv::{RvvProgram, Step};

pub use lexer::{lex, LineIndex, Token, TokenKind};
pub use render::{fixed_typedef, generic_name, generic_typedef};
pub use scan::{scan_tokens, IncludeSite, IntrinsicCallSite, Site, TypeUse, TypeUseSite};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("{line}:{col}: {message}")]
    Lex { line: usize, col: usize, message: String },
    #[error("{} strict-mode violation(s), first: {}", .0.len(), .0.first().map(|d| d.message.as_str()).unwrap_or(""))]
    Strict(Vec<Diagnostic>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Any site that cannot be translated exactly is an error.
    Strict,
    /// Such sites are reported and left as written, or given a scalar
    /// fallback when one exists.
    #[default]
    Permissive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Note,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Note => "note",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagKind {
    UnsupportedIntrinsic,
    UnsupportedType,
    /// A vector type with no RVV mapping at this configuration.
    UnmappedType,
    /// A supported intrinsic whose customized recipe is gated off.
    ScalarFallback,
    NonConstantImmediate,
    ImmediateOutOfRange,
    MalformedCall,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub severity: Severity,
    pub kind: DiagKind,
    pub message: String,
}

impl Diagnostic {
    /// `<file>:<line>:<col>: <severity>: <message>`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}:{}: {}: {}", self.line, self.col, self.severity, self.message)
    }
}

/// A lexed and scanned source file.
#[derive(Clone, Debug)]
pub struct SourceUnit {
    pub name: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub sites: Vec<Site>,
    lines: LineIndex,
}

impl SourceUnit {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Result<SourceUnit, RewriteError> {
        let text = text.into();
        let tokens = lex(&text)?;
        let sites = scan_tokens(&text, &tokens);
        let lines = LineIndex::new(&text);
        Ok(SourceUnit {
            name: name.into(),
            text,
            tokens,
            sites,
            lines,
        })
    }

    pub fn position(&self, offset: usize) -> (usize, usize) {
        self.lines.position(&self.text, offset)
    }

    /// Intrinsic call sites with a supported callee.
    pub fn supported_calls(&self) -> impl Iterator<Item = (NeonIntrinsicId, &IntrinsicCallSite)> {
        self.sites.iter().filter_map(|s| match s {
            Site::Call(c) => match c.callee {
                CallName::Supported(id) => Some((id, c)),
                CallName::Unsupported => None,
            },
            _ => None,
        })
    }
}

/// Scans `text` for NEON sites.
pub fn scan(text: &str) -> Result<Vec<Site>, RewriteError> {
    Ok(scan_tokens(text, &lex(text)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub span: Range<usize>,
    pub replacement: String,
}

/// One translated intrinsic call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedCall {
    pub intrinsic: NeonIntrinsicId,
    pub span: Range<usize>,
    pub tier: Tier,
    pub immediate: Option<i64>,
    /// Helper function name for composite and fallback recipes.
    pub helper: Option<String>,
    pub program: RvvProgram,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewritePlan {
    /// Text inserted at the start of the output; empty when nothing changed.
    pub prelude: String,
    /// Non-overlapping, in source order.
    pub substitutions: Vec<Substitution>,
    pub diagnostics: Vec<Diagnostic>,
    pub calls: Vec<PlannedCall>,
    /// NEON sites deliberately left as written.
    pub passthroughs: usize,
    /// Smallest `__riscv_v_fixed_vlen` the output compiles for.
    pub min_vlen_bits: u32,
}

impl RewritePlan {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

struct Planner<'a> {
    unit: &'a SourceUnit,
    cfg: VlenConfig,
    mode: Mode,
    diagnostics: Vec<Diagnostic>,
    calls: Vec<PlannedCall>,
    fixed: BTreeSet<RvvVectorType>,
    generic: BTreeSet<NeonVectorType>,
    helpers: Vec<String>,
    helper_names: HashSet<String>,
    uses_memcpy: bool,
    passthroughs: usize,
    min_vlen: u32,
}

impl<'a> Planner<'a> {
    fn diag(&mut self, offset: usize, kind: DiagKind, severity: Severity, message: String) {
        let (line, col) = self.unit.position(offset);
        self.diagnostics.push(Diagnostic {
            offset,
            line,
            col,
            severity,
            kind,
            message,
        });
    }

    /// Error in strict mode, warning otherwise.
    fn violation(&mut self, offset: usize, kind: DiagKind, message: String) {
        let severity = match self.mode {
            Mode::Strict => Severity::Error,
            Mode::Permissive => Severity::Warning,
        };
        self.diag(offset, kind, severity, message);
    }

    fn text(&self, r: Range<usize>) -> &'a str {
        &self.unit.text[r]
    }

    /// Rewritten text of `range`, translating every outermost site inside it.
    fn render_range(&mut self, range: Range<usize>) -> String {
        let mut out = String::new();
        let mut cursor = range.start;
        for (span, replacement) in self.outermost(range.clone()) {
            out.push_str(self.text(cursor..span.start));
            out.push_str(&replacement);
            cursor = span.end;
        }
        out.push_str(self.text(cursor..range.end));
        out
    }

    /// Replacements for the outermost sites in `range`. Sites whose
    /// replacement equals the source are omitted.
    fn outermost(&mut self, range: Range<usize>) -> Vec<(Range<usize>, String)> {
        let unit = self.unit;
        let mut out = Vec::new();
        let mut cursor = range.start;
        for site in &unit.sites {
            let span = site.span();
            if span.start < cursor || span.end > range.end {
                continue;
            }
            cursor = span.end;
            let replacement = self.replace_site(site);
            if replacement != self.text(span.clone()) {
                out.push((span, replacement));
            }
        }
        out
    }

    fn replace_site(&mut self, site: &Site) -> String {
        match site {
            Site::Include(_) => String::new(),
            Site::Type(t) => self.replace_type(t),
            Site::Call(c) => self.replace_call(c),
        }
    }

    fn note_type(&mut self, t: NeonVectorType) -> String {
        match map_type(t, &self.cfg) {
            MappingResult::Mapped { rvv, .. } => {
                self.fixed.insert(rvv);
                self.min_vlen = self.min_vlen.max(t.total_bits());
                rvv.fixed_name()
            }
            MappingResult::Unmapped(_) => {
                self.generic.insert(t);
                generic_name(t)
            }
        }
    }

    fn replace_type(&mut self, site: &TypeUseSite) -> String {
        match &site.ty {
            TypeUse::Vector(t) => {
                if let MappingResult::Unmapped(reason) = map_type(*t, &self.cfg) {
                    self.violation(
                        site.span.start,
                        DiagKind::UnmappedType,
                        format!("`{t}` has no RVV type at {} ({reason}); using a generic vector", self.cfg),
                    );
                }
                self.note_type(*t)
            }
            TypeUse::Scalar(e) => e.c_scalar().to_string(),
            TypeUse::Unsupported(name) => {
                self.violation(site.span.start, DiagKind::UnsupportedType, format!("unsupported NEON type `{name}` left as written"));
                self.passthroughs += 1;
                name.clone()
            }
        }
    }

    /// Leaves the callee as written but still rewrites sites inside the
    /// argument list.
    fn passthrough_call(&mut self, site: &IntrinsicCallSite) -> String {
        self.passthroughs += 1;
        let callee = self.text(site.callee_span.clone()).to_string();
        callee + &self.render_range(site.callee_span.end..site.span.end)
    }

    fn replace_call(&mut self, site: &IntrinsicCallSite) -> String {
        let at = site.span.start;
        let id = match site.callee {
            CallName::Supported(id) => id,
            CallName::Unsupported => {
                self.violation(at, DiagKind::UnsupportedIntrinsic, format!("unsupported intrinsic `{}` left as written", site.name));
                return self.passthrough_call(site);
            }
        };
        let sig = id.signature();
        let Some(args) = site.args.clone().filter(|a| a.len() == sig.args.len()) else {
            let what = match &site.args {
                None => "is not called with a parenthesized argument list".to_string(),
                Some(a) => format!("takes {} arguments, got {}", sig.args.len(), a.len()),
            };
            self.violation(at, DiagKind::MalformedCall, format!("`{}` {what}; left as written", site.name));
            return self.passthrough_call(site);
        };

        let mut bindings = Vec::with_capacity(args.len());
        let mut immediate = None;
        for (kind, arg) in sig.args.iter().zip(&args) {
            let ArgKind::Immediate { min, max } = kind else {
                bindings.push(Binding::Operand);
                continue;
            };
            let text = self.text(arg.clone());
            let Some(n) = parse_c_int(text) else {
                self.violation(
                    arg.start,
                    DiagKind::NonConstantImmediate,
                    format!("`{}` needs an integer literal, got `{text}`; left as written", site.name),
                );
                return self.passthrough_call(site);
            };
            if n < *min || n > *max {
                self.violation(
                    arg.start,
                    DiagKind::ImmediateOutOfRange,
                    format!("`{}` immediate {n} is outside {min}..={max}; left as written", site.name),
                );
                return self.passthrough_call(site);
            }
            immediate = Some(n);
            bindings.push(Binding::Immediate(n));
        }

        let recipe = match lookup(id, &self.cfg) {
            Ok(r) => r,
            Err(e) => {
                self.violation(at, DiagKind::UnsupportedIntrinsic, format!("{e}; left as written"));
                return self.passthrough_call(site);
            }
        };
        let program = match instantiate(&recipe, &self.cfg, &bindings) {
            Ok(p) => p,
            Err(e) => {
                self.violation(at, DiagKind::MalformedCall, format!("{e}; left as written"));
                return self.passthrough_call(site);
            }
        };
        if !recipe.is_customized() {
            let reason = crate::recipe::gate(id, &self.cfg).err().map(|r| r.to_string()).unwrap_or_default();
            self.violation(
                at,
                DiagKind::ScalarFallback,
                format!("`{}` has no vector recipe at {} ({reason}); using a scalar loop", site.name, self.cfg),
            );
        }

        // Every argument rendered once; immediates stay as written.
        let arg_texts: Vec<String> = sig
            .args
            .iter()
            .zip(&args)
            .map(|(k, r)| match k {
                ArgKind::Immediate { .. } => self.text(r.clone()).to_string(),
                _ => self.render_range(r.clone()),
            })
            .collect();
        let rendered_args: Vec<String> = sig
            .args
            .iter()
            .zip(&arg_texts)
            .filter(|(k, _)| !matches!(k, ArgKind::Immediate { .. }))
            .map(|(_, t)| t.clone())
            .collect();

        let suffix = immediate.map(|n| format!("_{n}")).unwrap_or_default();
        // A direct op that ignores an argument (the all-zero shift variant)
        // would drop the argument's side effects when inlined.
        let inline = matches!(recipe.kind, RecipeKind::Direct(_))
            && program.inputs.iter().all(|i| {
                program.vector_ops().any(|op| op.operands.contains(&crate::rvv::Operand::Value(i.id)) || op.prior == Some(i.id))
            });
        let (text, helper) = match recipe.kind {
            RecipeKind::Direct(_) if inline => {
                let Some(Step::Vector(op)) = program.steps.first() else {
                    unreachable!("direct recipes are one vector op")
                };
                let input_ids: Vec<_> = program.inputs.iter().map(|i| i.id).collect();
                let name = |v| {
                    let i = input_ids.iter().position(|x| *x == v).expect("direct ops read inputs");
                    rendered_args[i].clone()
                };
                let ty_of = |v| match program.inputs.iter().find(|i| i.id == v)?.kind {
                    crate::rvv::InputKind::Vector { ty, .. } => Some(ty),
                    _ => None,
                };
                self.min_vlen = self.min_vlen.max(recipe.min_vlen_bits);
                let text = match in_source_order(op, &program, &sig.args, immediate) {
                    // Keep the argument list as written, comments and all.
                    true => {
                        let mut text = render::op_callee(op, &ty_of);
                        let mut cursor = site.callee_span.end;
                        for (r, t) in args.iter().zip(&arg_texts) {
                            text.push_str(self.text(cursor..r.start));
                            text.push_str(t);
                            cursor = r.end;
                        }
                        text.push_str(&format!(", {}", op.vl));
                        text.push_str(self.text(cursor..site.span.end));
                        text
                    }
                    false => render::render_op_call(op, &name, &ty_of),
                };
                (text, None)
            }
            RecipeKind::Direct(_) | RecipeKind::Composite(_) => {
                let helper = format!("neon2rvv_{id}{suffix}");
                if self.helper_names.insert(helper.clone()) {
                    for t in sig.vector_types() {
                        self.note_type(t);
                    }
                    self.helpers.push(render::composite_helper(&helper, id, &program, &self.cfg));
                }
                self.min_vlen = self.min_vlen.max(recipe.min_vlen_bits);
                (format!("{helper}({})", rendered_args.join(", ")), Some(helper))
            }
            RecipeKind::ElementwiseFallback { .. } => {
                let helper = format!("neon2rvv_scalar_{id}{suffix}");
                if self.helper_names.insert(helper.clone()) {
                    let mut needs_memcpy = false;
                    for t in sig.vector_types() {
                        if !map_type(t, &self.cfg).is_mapped() {
                            needs_memcpy = true;
                        }
                        self.note_type(t);
                    }
                    self.uses_memcpy |= needs_memcpy;
                    let names = database()
                        .template(id.family, id.elem.class())
                        .map(|t| t.inputs.clone())
                        .unwrap_or_default();
                    self.helpers.push(render::fallback_helper(&helper, id, &names, immediate, &self.cfg));
                }
                (format!("{helper}({})", rendered_args.join(", ")), Some(helper))
            }
            RecipeKind::Unsupported(_) => unreachable!("lookup never returns unsupported"),
        };
        self.calls.push(PlannedCall {
            intrinsic: id,
            span: site.span.clone(),
            tier: recipe.tier(),
            immediate,
            helper,
            program,
        });
        text
    }

    fn prelude(&self) -> String {
        let mut p = format!("/* Translated from NEON by neon2rvv for {}. */\n", self.cfg);
        p.push_str("#include <riscv_vector.h>\n#include <stdint.h>\n");
        if self.uses_memcpy {
            p.push_str("#include <string.h>\n");
        }
        if !self.fixed.is_empty() {
            let n = self.min_vlen;
            p.push_str(&format!(
                "#if !defined(__riscv_v_fixed_vlen) || __riscv_v_fixed_vlen < {n}\n#error \"compile with -mrvv-vector-bits=zvl and a VLEN of at least {n}\"\n#endif\n"
            ));
        }
        for &t in &self.fixed {
            p.push_str(&fixed_typedef(t));
            p.push('\n');
        }
        for &t in &self.generic {
            p.push_str(&generic_typedef(t));
            p.push('\n');
        }
        for h in &self.helpers {
            p.push('\n');
            p.push_str(h);
        }
        p.push('\n');
        p
    }
}

/// Whether `op`'s C operands are exactly the call's arguments in order, so
/// the source argument list can be kept and only `vl` appended.
fn in_source_order(op: &crate::rvv::RvvOp, program: &RvvProgram, kinds: &[ArgKind], immediate: Option<i64>) -> bool {
    use crate::rvv::{Opcode, Operand};
    if matches!(op.opcode, Opcode::VmvXS | Opcode::Vreinterpret) || op.prior.is_some() || kinds.is_empty() {
        return false;
    }
    let mut inputs = program.inputs.iter().map(|i| i.id);
    let expected: Vec<Option<Operand>> = kinds
        .iter()
        .map(|k| match k {
            ArgKind::Immediate { .. } => immediate.map(|n| Operand::Imm(n as u64)),
            _ => inputs.next().map(Operand::Value),
        })
        .collect();
    expected.len() == op.operands.len() && expected.iter().zip(&op.operands).all(|(e, o)| *e == Some(*o))
}

/// Parses a C integer literal (decimal, hex, octal, optional sign and
/// suffix, optional surrounding parentheses).
pub fn parse_c_int(text: &str) -> Option<i64> {
    let mut t = text.trim();
    while let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        t = inner.trim();
    }
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let t = t.trim_end_matches(['u', 'U', 'l', 'L']);
    let v = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        i64::from_str_radix(hex, 16).ok()?
    } else if t.len() > 1 && t.starts_with('0') {
        i64::from_str_radix(&t[1..], 8).ok()?
    } else {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()?
    };
    Some(if neg { -v } else { v })
}

/// Plans the translation of `unit` at `cfg`. In strict mode any violation
/// fails the whole file.
pub fn plan(unit: &SourceUnit, cfg: &VlenConfig, mode: Mode) -> Result<RewritePlan, RewriteError> {
    let mut p = Planner {
        unit,
        cfg: *cfg,
        mode,
        diagnostics: Vec::new(),
        calls: Vec::new(),
        fixed: BTreeSet::new(),
        generic: BTreeSet::new(),
        helpers: Vec::new(),
        helper_names: HashSet::new(),
        uses_memcpy: false,
        passthroughs: 0,
        min_vlen: 0,
    };
    let substitutions: Vec<Substitution> = p
        .outermost(0..unit.text.len())
        .into_iter()
        .map(|(span, replacement)| Substitution { span, replacement })
        .collect();
    p.diagnostics.sort_by_key(|d| d.offset);
    if mode == Mode::Strict && p.diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(RewriteError::Strict(p.diagnostics));
    }
    let prelude = if substitutions.is_empty() { String::new() } else { p.prelude() };
    Ok(RewritePlan {
        prelude,
        substitutions,
        diagnostics: p.diagnostics,
        calls: p.calls,
        passthroughs: p.passthroughs,
        min_vlen_bits: p.min_vlen,
    })
}

/// Produces the translated text.
pub fn apply(unit: &SourceUnit, plan: &RewritePlan) -> String {
    let mut out = plan.prelude.clone();
    let mut cursor = 0;
    for s in &plan.substitutions {
        out.push_str(&unit.text[cursor..s.span.start]);
        out.push_str(&s.replacement);
        cursor = s.span.end;
    }
    out.push_str(&unit.text[cursor..]);
    out
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub text: String,
    pub plan: RewritePlan,
}

/// Lex, scan, plan, and apply in one step.
pub fn translate(name: &str, text: &str, cfg: &VlenConfig, mode: Mode) -> Result<Translation, RewriteError> {
    let unit = SourceUnit::new(name, text)?;
    let plan = plan(&unit, cfg, mode)?;
    Ok(Translation {
        text: apply(&unit, &plan),
        plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const VECTOR_ADD: &str = "\
#include <arm_neon.h>

void add(int32_t *A, int32_t *B, int32_t *C) {
    int32x4_t va = vld1q_s32(A);
    int32x4_t vb = vld1q_s32(B);
    vst1q_s32(C, vaddq_s32(va, vb));
}
";

    fn cfg(vlen: u32, zvfh: bool) -> VlenConfig {
        VlenConfig::new(vlen, zvfh).unwrap()
    }

    fn names(unit: &SourceUnit) -> Vec<String> {
        unit.sites
            .iter()
            .map(|s| match s {
                Site::Call(c) => c.name.clone(),
                Site::Type(t) => unit.text[t.span.clone()].to_string(),
                Site::Include(i) => i.header.clone(),
            })
            .collect()
    }

    #[test]
    fn scan_of_vector_add_function() {
        let unit = SourceUnit::new("add.c", VECTOR_ADD).unwrap();
        let mut n = names(&unit);
        n.sort();
        assert_eq!(n, ["arm_neon.h", "int32x4_t", "int32x4_t", "vaddq_s32", "vld1q_s32", "vld1q_s32", "vst1q_s32"]);
    }

    #[test]
    fn translation_of_vector_add_function() {
        let t = translate("add.c", VECTOR_ADD, &cfg(128, true), Mode::Strict).unwrap();
        assert!(t.text.contains("fixed_vint32m1_t va = __riscv_vle32_v_i32m1(A, 4);"), "{}", t.text);
        assert!(t.text.contains("__riscv_vse32_v_i32m1(C, __riscv_vadd_vv_i32m1(va, vb, 4), 4);"), "{}", t.text);
        assert!(t.text.contains("typedef vint32m1_t fixed_vint32m1_t"));
        assert!(t.text.contains("__riscv_v_fixed_vlen < 128"));
        assert!(!t.text.contains("arm_neon.h"));
        assert_eq!(t.plan.calls.len(), 4);
        assert!(scan(&t.text).unwrap().is_empty());
    }

    #[test]
    fn untouched_file_is_identical() {
        let src = "int main(void) { /* vaddq_s32(a, b) */ return 0; }\n";
        let t = translate("m.c", src, &cfg(128, true), Mode::Strict).unwrap();
        assert_eq!(t.text, src);
        assert_eq!(translate("e.c", "", &cfg(128, true), Mode::Strict).unwrap().text, "");
    }

    #[test]
    fn strict_rejects_half_precision_without_zvfh() {
        let src = "float16x8_t f(const float16_t *p) { return vld1q_f16(p); }\n";
        let err = translate("h.c", src, &cfg(128, false), Mode::Strict).unwrap_err();
        let RewriteError::Strict(diags) = err else { panic!() };
        assert_eq!(diags[0].line, 1);
        assert_eq!(diags[0].col, 1);
        assert!(diags.iter().any(|d| d.kind == DiagKind::ScalarFallback), "{diags:?}");
        let t = translate("h.c", src, &cfg(128, false), Mode::Permissive).unwrap();
        assert!(t.text.contains("neon2rvv_scalar_vld1q_f16(p)"), "{}", t.text);
        assert!(t.text.contains("const _Float16 *p"), "{}", t.text);
        assert!(t.text.contains("typedef _Float16 neon2rvv_float16x8_t"));
        assert!(t.text.contains("#include <string.h>"));
        assert!(scan(&t.text).unwrap().is_empty());
        assert!(translate("h.c", src, &cfg(128, true), Mode::Strict).is_ok());
    }

    #[test]
    fn unsupported_names_pass_through_with_nested_rewrites() {
        let src = "int32x4_t r = vqaddq_s32(vld1q_s32(p), b);";
        let t = translate("q.c", src, &cfg(128, true), Mode::Permissive).unwrap();
        assert!(t.text.ends_with("fixed_vint32m1_t r = vqaddq_s32(__riscv_vle32_v_i32m1(p, 4), b);"), "{}", t.text);
        assert_eq!(t.plan.passthroughs, 1);
        assert_eq!(t.plan.diagnostics[0].render("q.c"), "q.c:1:15: warning: unsupported intrinsic `vqaddq_s32` left as written");
        assert!(matches!(translate("q.c", src, &cfg(128, true), Mode::Strict), Err(RewriteError::Strict(_))));
    }

    #[test]
    fn immediates() {
        let t = translate("s.c", "r = vshrq_n_u32(a, 32); s = vshrq_n_u32(a, (3));", &cfg(128, true), Mode::Strict).unwrap();
        assert!(t.text.contains("r = neon2rvv_vshrq_n_u32_32(a);"), "{}", t.text);
        assert!(t.text.contains("__riscv_vsrl_vx_u32m1(a, (3), 4)"), "{}", t.text);
        let e = translate("s.c", "r = vshrq_n_u32(a, n);", &cfg(128, true), Mode::Strict).unwrap_err();
        let RewriteError::Strict(d) = e else { panic!() };
        assert_eq!(d[0].kind, DiagKind::NonConstantImmediate);
        let e = translate("s.c", "r = vshrq_n_u32(a, 33);", &cfg(128, true), Mode::Strict).unwrap_err();
        let RewriteError::Strict(d) = e else { panic!() };
        assert_eq!(d[0].kind, DiagKind::ImmediateOutOfRange);
    }

    #[test]
    fn composite_helpers_are_emitted_once() {
        let src = "a = vceqq_s32(x, y); b = vceqq_s32(y, x);";
        let t = translate("c.c", src, &cfg(128, true), Mode::Strict).unwrap();
        assert_eq!(t.text.matches("static inline fixed_vuint32m1_t neon2rvv_vceqq_s32(").count(), 1);
        assert!(t.text.ends_with("a = neon2rvv_vceqq_s32(x, y); b = neon2rvv_vceqq_s32(y, x);"));
    }

    #[test]
    fn plan_matches_recipes() {
        let unit = SourceUnit::new("add.c", VECTOR_ADD).unwrap();
        let plan = plan(&unit, &cfg(128, true), Mode::Strict).unwrap();
        for call in &plan.calls {
            let recipe = lookup(call.intrinsic, &cfg(128, true)).unwrap();
            assert_eq!(call.tier, recipe.tier());
            let ops: Vec<_> = call.program.opcode_names();
            assert_eq!(ops, recipe.opcode_names());
        }
    }

    #[test]
    fn c_integer_literals() {
        assert_eq!(parse_c_int("0x1F"), Some(31));
        assert_eq!(parse_c_int(" (7u) "), Some(7));
        assert_eq!(parse_c_int("010"), Some(8));
        assert_eq!(parse_c_int("-3"), Some(-3));
        assert_eq!(parse_c_int("n"), None);
        assert_eq!(parse_c_int("1 + 1"), None);
    }
}
