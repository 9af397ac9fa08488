//! Differential validation of recipes against the NEON oracle, and the
//! dynamic op count proxy.

mod cases;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::isa::VlenConfig;
use crate::neon::{eval_neon, NeonArg, NeonIntrinsicId, NeonResult, RetKind};
use crate::recipe::{self, gate, instantiate, Binding, Recipe, RecipeError, Tier};
use crate::rewrite::SourceUnit;
use crate::rvv::{ExecStats, Machine, VReg, Value};
use crate::value::canonicalize_nan;

pub use cases::{exhaustive_cases, gen_cases, TestCase, MEMORY_BYTES};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error(transparent)]
    Recipe(#[from] RecipeError),
}

/// What one execution produced: the result (NaNs canonicalized) and the
/// final memory image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub result: String,
    pub memory: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub case_index: usize,
    /// `customized` or `fallback`.
    pub path: &'static str,
    pub inputs: Vec<String>,
    pub expected: String,
    pub actual: String,
}

/// Outcome for one (intrinsic, configuration) cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellReport {
    pub intrinsic: String,
    pub vlen: u32,
    pub zvfh: bool,
    pub tier: Tier,
    pub cases_run: usize,
    pub mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Counterexample>,
    /// Total dynamic ops of the customized recipe over all cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub customized_ops: Option<u64>,
    pub fallback_ops: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op_ratio: Option<f64>,
    /// Why the customized recipe was not exercised.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiffReport {
    pub seed: u64,
    pub cases_per_cell: usize,
    pub total_cases: usize,
    pub total_mismatches: usize,
    pub cells: Vec<CellReport>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.total_mismatches == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text summary: one row per cell.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<22} {:>6} {:<5} {:<21} {:>6} {:>10} {:>8}\n",
            "intrinsic", "vlen", "zvfh", "tier", "cases", "mismatches", "op_ratio"
        );
        for c in &self.cells {
            let ratio = c.op_ratio.map_or("-".to_string(), |r| format!("{r:.2}"));
            let _ = writeln!(
                out,
                "{:<22} {:>6} {:<5} {:<21} {:>6} {:>10} {:>8}",
                c.intrinsic, c.vlen, c.zvfh, c.tier, c.cases_run, c.mismatches, ratio
            );
        }
        let _ = writeln!(
            out,
            "{} cells, {} cases, {} mismatches",
            self.cells.len(),
            self.total_cases,
            self.total_mismatches
        );
        out
    }
}

fn describe_args(args: &[NeonArg]) -> Vec<String> {
    args.iter()
        .map(|a| match a {
            NeonArg::Vector(v) => v.to_string(),
            NeonArg::Scalar(x) => format!("{x:#x}"),
            NeonArg::Address(p) => format!("@{p}"),
            NeonArg::Immediate(n) => format!("#{n}"),
        })
        .collect()
}

fn describe_result(id: NeonIntrinsicId, r: &NeonResult) -> String {
    match r {
        NeonResult::Vector(v) => v.canonicalize_nans().to_string(),
        NeonResult::Scalar(x) => format!("{:#x}", canonicalize_nan(id.elem, *x)),
        NeonResult::Unit => "()".to_string(),
    }
}

/// Runs the oracle on a case.
pub fn oracle(case: &TestCase) -> Observation {
    let mut memory = case.memory.clone();
    let result = match eval_neon(case.intrinsic, &case.args, &mut memory) {
        Ok(r) => describe_result(case.intrinsic, &r),
        Err(e) => format!("error: {e}"),
    };
    Observation { result, memory }
}

/// Instantiates `recipe` for the case's immediates and executes it.
///
/// Vector arguments of customized recipes go into registers whose tail
/// elements hold random garbage; only the NEON result lanes are read back.
pub fn execute(recipe: &Recipe<'_>, case: &TestCase) -> Result<(Observation, ExecStats), String> {
    let id = case.intrinsic;
    let program = instantiate(recipe, &case.cfg, &Binding::from_args(&case.args)).map_err(|e| e.to_string())?;
    let mut poison = ChaCha8Rng::seed_from_u64(case.tail_seed);
    let customized = recipe.is_customized();
    let mut inputs = Vec::new();
    for arg in &case.args {
        inputs.push(match arg {
            NeonArg::Vector(v) if customized => Value::Vector(
                VReg::from_neon(v, &case.cfg, || poison.gen()).map_err(|e| e.to_string())?,
            ),
            NeonArg::Vector(v) => Value::Array(v.clone()),
            NeonArg::Scalar(x) => Value::Scalar(*x),
            NeonArg::Address(p) => Value::Scalar(*p as u64),
            NeonArg::Immediate(_) => continue,
        });
    }
    let mut machine = Machine::new(case.cfg, case.memory.clone());
    let outcome = machine.exec(&program, &inputs).map_err(|e| e.to_string())?;
    let result = match (id.signature().ret, outcome.outputs.first()) {
        (RetKind::Unit, None) => NeonResult::Unit,
        (RetKind::Scalar(_), Some(Value::Scalar(x))) => NeonResult::Scalar(*x),
        (RetKind::Vector(t), Some(Value::Array(v))) if v.neon_type() == Some(t) => {
            NeonResult::Vector(v.clone())
        }
        (RetKind::Vector(t), Some(Value::Vector(r))) if r.ty().elem() == t.elem() => {
            NeonResult::Vector(r.to_neon(t.lanes()))
        }
        (_, other) => return Err(format!("program returned {other:?}")),
    };
    Ok((
        Observation {
            result: describe_result(id, &result),
            memory: machine.into_memory(),
        },
        outcome.stats,
    ))
}

fn compare(
    index: usize,
    path: &'static str,
    case: &TestCase,
    expected: &Observation,
    actual: &Result<(Observation, ExecStats), String>,
) -> Option<Counterexample> {
    let mismatch = |actual: String| Counterexample {
        case_index: index,
        path,
        inputs: describe_args(&case.args),
        expected: expected.result.clone(),
        actual,
    };
    match actual {
        Err(e) => Some(mismatch(format!("error: {e}"))),
        Ok((obs, _)) if obs.result != expected.result => Some(mismatch(obs.result.clone())),
        Ok((obs, _)) if obs.memory != expected.memory => {
            let first = obs.memory.iter().zip(&expected.memory).position(|(a, b)| a != b).unwrap_or(0);
            Some(mismatch(format!("{} with memory differing at byte {first}", obs.result)))
        }
        _ => None,
    }
}

/// Compares the customized recipe (when `cfg` allows it) and the forced
/// fallback against the oracle on every case.
pub fn run_diff(id: NeonIntrinsicId, cfg: &VlenConfig, cases: &[TestCase]) -> Result<CellReport, HarnessError> {
    let db = recipe::database();
    let custom = db.customized(id)?;
    let fallback = db.fallback(id)?;
    let customized = match gate(id, cfg) {
        Ok(()) => Some(&custom),
        Err(_) => None,
    };
    let mut report = CellReport {
        intrinsic: id.name(),
        vlen: cfg.vlen_bits(),
        zvfh: cfg.zvfh(),
        tier: if customized.is_some() { custom.tier() } else { Tier::ElementwiseFallback },
        cases_run: cases.len(),
        mismatches: 0,
        first_counterexample: None,
        customized_ops: customized.map(|_| 0),
        fallback_ops: 0,
        op_ratio: None,
        skipped: gate(id, cfg).err().map(|r| format!("customized recipe unavailable: {r}")),
    };
    for (i, case) in cases.iter().enumerate() {
        let expected = oracle(case);
        let mut paths = vec![("fallback", &fallback)];
        if let Some(c) = customized {
            paths.insert(0, ("customized", c));
        }
        let mut bad = None;
        for (path, r) in paths {
            let actual = execute(r, case);
            if let Ok((_, stats)) = &actual {
                match path {
                    "customized" => *report.customized_ops.as_mut().unwrap() += stats.dynamic_op_count,
                    _ => report.fallback_ops += stats.dynamic_op_count,
                }
            }
            bad = bad.or_else(|| compare(i, path, case, &expected, &actual));
        }
        if let Some(cx) = bad {
            report.mismatches += 1;
            report.first_counterexample.get_or_insert(cx);
        }
    }
    report.op_ratio = report
        .customized_ops
        .filter(|&c| c > 0)
        .map(|c| report.fallback_ops as f64 / c as f64);
    Ok(report)
}

/// Runs every (intrinsic, configuration) cell. Cells run in parallel; the
/// report lists them in intrinsic order, then configuration order.
pub fn run_matrix(ids: &[NeonIntrinsicId], cfgs: &[VlenConfig], n: usize, seed: u64) -> Result<DiffReport, HarnessError> {
    let cells: Vec<(NeonIntrinsicId, VlenConfig)> =
        ids.iter().flat_map(|&id| cfgs.iter().map(move |&c| (id, c))).collect();
    let cells = cells
        .par_iter()
        .map(|(id, cfg)| {
            let mut cases = gen_cases(*id, cfg, n, seed);
            cases.extend(exhaustive_cases(*id, cfg, seed));
            run_diff(*id, cfg, &cases)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiffReport {
        seed,
        cases_per_cell: n,
        total_cases: cells.iter().map(|c| c.cases_run).sum(),
        total_mismatches: cells.iter().map(|c| c.mismatches).sum(),
        cells,
    })
}

/// Validates every distinct intrinsic a source file calls, at each
/// configuration.
pub fn check_source(unit: &SourceUnit, cfgs: &[VlenConfig], n: usize, seed: u64) -> Result<DiffReport, HarnessError> {
    let ids: BTreeSet<NeonIntrinsicId> = unit.supported_calls().map(|(id, _)| id).collect();
    run_matrix(&ids.into_iter().collect::<Vec<_>>(), cfgs, n, seed)
}

/// Per-intrinsic op counts for one case of each cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProxyRow {
    pub intrinsic: String,
    pub vlen: u32,
    pub tier: Tier,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub customized_ops: Option<u64>,
    pub fallback_ops: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op_ratio: Option<f64>,
}

/// The op count proxy: recipes are straight-line, so a single case per
/// cell gives the per-call count.
pub fn bench_proxy(ids: &[NeonIntrinsicId], cfgs: &[VlenConfig], seed: u64) -> Result<Vec<ProxyRow>, HarnessError> {
    let report = run_matrix(ids, cfgs, 1, seed)?;
    Ok(report
        .cells
        .into_iter()
        .map(|c| ProxyRow {
            intrinsic: c.intrinsic,
            vlen: c.vlen,
            tier: c.tier,
            customized_ops: c.customized_ops.map(|o| o / c.cases_run as u64),
            fallback_ops: c.fallback_ops / c.cases_run as u64,
            op_ratio: c.op_ratio,
        })
        .collect())
}

pub fn proxy_text(rows: &[ProxyRow]) -> String {
    let mut out = format!(
        "{:<22} {:>6} {:<21} {:>10} {:>8} {:>8}\n",
        "intrinsic", "vlen", "tier", "customized", "fallback", "op_ratio"
    );
    for r in rows {
        let custom = r.customized_ops.map_or("-".to_string(), |o| o.to_string());
        let ratio = r.op_ratio.map_or("-".to_string(), |x| format!("{x:.2}"));
        let _ = writeln!(
            out,
            "{:<22} {:>6} {:<21} {:>10} {:>8} {:>8}",
            r.intrinsic, r.vlen, r.tier, custom, r.fallback_ops, ratio
        );
    }
    out
}
