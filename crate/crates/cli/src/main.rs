use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use neon2rvv_core::harness::{bench_proxy, check_source, proxy_text, run_matrix, DiffReport};
use neon2rvv_core::isa::{mapping_table, VlenConfig};
use neon2rvv_core::neon::{catalog, NeonIntrinsicId};
use neon2rvv_core::recipe::{export, lookup, Tier};
use neon2rvv_core::rewrite::{apply, plan, Diagnostic, Mode, RewriteError, SourceUnit};
use serde_json::json;

/// Translate ARM NEON intrinsic code to RISC-V Vector intrinsics and
/// validate the mapping.
#[derive(Parser, Debug)]
#[command(name = "neon2rvv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite C files, writing `<name>.rvv.c` next to each input or into --out.
    Translate(TranslateArgs),
    /// Differentially test recipes against the NEON reference semantics.
    Check(CheckArgs),
    /// Print the NEON-to-RVV type mapping (or recipe catalog) for a configuration.
    Mappings(MappingsArgs),
    /// List catalog intrinsics by recipe tier.
    Coverage(CommonArgs),
    /// Dynamic op counts of customized recipes versus the scalar baseline.
    BenchProxy(ProxyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// VLEN in bits; a comma list where the command sweeps configurations.
    #[arg(long, env = "NEON2RVV_VLEN")]
    vlen: Option<String>,
    /// Whether the target has Zvfh (half-precision vector arithmetic).
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    zvfh: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Treat any site that cannot be translated exactly as an error.
    #[arg(long)]
    strict: bool,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Cases per (intrinsic, configuration) cell.
    #[arg(long, default_value_t = 1000)]
    cases: usize,
    /// Comma list of intrinsic names to restrict the run to.
    #[arg(long)]
    only: Option<String>,
    /// Check only the intrinsics these files call (and their translation).
    inputs: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct MappingsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Export the recipe catalog instead of the type table.
    #[arg(long)]
    recipes: bool,
}

#[derive(Args, Debug)]
struct ProxyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    only: Option<String>,
}

/// Failure classes with distinct exit codes.
enum Outcome {
    Ok,
    /// Mismatch or strict-mode violation.
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Translate(a) => cmd_translate(a),
        Command::Check(a) => cmd_check(a),
        Command::Mappings(a) => cmd_mappings(a),
        Command::Coverage(a) => cmd_coverage(a),
        Command::BenchProxy(a) => cmd_bench_proxy(a),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("neon2rvv: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_vlens(spec: Option<&str>, default: &str, zvfh: bool) -> Result<Vec<VlenConfig>> {
    spec.unwrap_or(default)
        .split(',')
        .map(|s| {
            let bits: u32 = s.trim().parse().with_context(|| format!("bad --vlen value `{s}`"))?;
            VlenConfig::new(bits, zvfh).with_context(|| format!("bad --vlen value `{s}`"))
        })
        .collect()
}

fn single_vlen(common: &CommonArgs) -> Result<VlenConfig> {
    let cfgs = parse_vlens(common.vlen.as_deref(), "128", common.zvfh)?;
    match cfgs.as_slice() {
        [cfg] => Ok(*cfg),
        _ => bail!("this command takes a single --vlen value"),
    }
}

fn parse_only(only: Option<&str>) -> Result<Vec<NeonIntrinsicId>> {
    let Some(list) = only else {
        return Ok(catalog().to_vec());
    };
    list.split(',')
        .map(|name| {
            let name = name.trim();
            NeonIntrinsicId::parse(name)
                .filter(|id| id.is_supported())
                .with_context(|| format!("`{name}` is not in the intrinsic catalog"))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_diagnostics(name: &str, diags: &[Diagnostic]) {
    for d in diags {
        eprintln!("{}", d.render(name));
    }
}

fn output_path(input: &Path, out_dir: Option<&Path>) -> PathBuf {
    let stem = input.file_stem().map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
    let file = format!("{stem}.rvv.c");
    match out_dir {
        Some(dir) => dir.join(file),
        None => input.with_file_name(file),
    }
}

fn cmd_translate(a: &TranslateArgs) -> Result<Outcome> {
    let cfg = single_vlen(&a.common)?;
    let mode = if a.strict { Mode::Strict } else { Mode::Permissive };
    if let Some(dir) = &a.common.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut failed = false;
    let mut summary = Vec::new();
    for input in &a.inputs {
        let name = input.display().to_string();
        let text = fs::read_to_string(input).with_context(|| format!("reading {name}"))?;
        let planned = SourceUnit::new(name.clone(), text).and_then(|unit| {
            let p = plan(&unit, &cfg, mode)?;
            Ok((unit, p))
        });
        let (unit, p) = match planned {
            Ok(x) => x,
            Err(RewriteError::Strict(diags)) => {
                print_diagnostics(&name, &diags);
                summary.push(json!({ "file": name, "error": "strict-mode violation", "diagnostics": diags }));
                failed = true;
                continue;
            }
            Err(e) => {
                eprintln!("{name}:{e}");
                summary.push(json!({ "file": name, "error": e.to_string() }));
                failed = true;
                continue;
            }
        };
        print_diagnostics(&name, &p.diagnostics);
        let dest = output_path(input, a.common.out.as_deref());
        fs::write(&dest, apply(&unit, &p)).with_context(|| format!("writing {}", dest.display()))?;
        let calls: Vec<_> = p
            .calls
            .iter()
            .map(|c| {
                let (line, col) = unit.position(c.span.start);
                json!({ "intrinsic": c.intrinsic.name(), "tier": c.tier, "line": line, "col": col })
            })
            .collect();
        summary.push(json!({
            "file": name,
            "output": dest.display().to_string(),
            "calls": calls,
            "passthroughs": p.passthroughs,
            "diagnostics": p.diagnostics,
        }));
        if a.common.format == Format::Text {
            println!("{name} -> {} ({} calls, {} left as written)", dest.display(), p.calls.len(), p.passthroughs);
        }
    }
    if a.common.format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    }
    Ok(if failed { Outcome::Failed } else { Outcome::Ok })
}

fn cmd_check(a: &CheckArgs) -> Result<Outcome> {
    let cfgs = parse_vlens(a.common.vlen.as_deref(), "128", a.common.zvfh)?;
    let only = parse_only(a.only.as_deref())?;
    let mut violations = false;
    let report = if a.inputs.is_empty() {
        run_matrix(&only, &cfgs, a.cases, a.seed)?
    } else {
        let mode = if a.strict { Mode::Strict } else { Mode::Permissive };
        let mut merged: Option<DiffReport> = None;
        for input in &a.inputs {
            let name = input.display().to_string();
            let text = fs::read_to_string(input).with_context(|| format!("reading {name}"))?;
            let unit = match SourceUnit::new(name.clone(), text) {
                Ok(u) => u,
                Err(e) => {
                    eprintln!("{name}:{e}");
                    violations = true;
                    continue;
                }
            };
            for cfg in &cfgs {
                match plan(&unit, cfg, mode) {
                    Ok(p) => print_diagnostics(&name, &p.diagnostics),
                    Err(RewriteError::Strict(d)) => {
                        print_diagnostics(&name, &d);
                        violations = true;
                    }
                    Err(e) => bail!("{name}: {e}"),
                }
            }
            let mut r = check_source(&unit, &cfgs, a.cases, a.seed)?;
            r.cells.retain(|c| a.only.is_none() || only.iter().any(|id| id.name() == c.intrinsic));
            merged = Some(match merged {
                None => r,
                Some(mut m) => {
                    for c in r.cells {
                        if !m.cells.iter().any(|x| x.intrinsic == c.intrinsic && x.vlen == c.vlen) {
                            m.cells.push(c);
                        }
                    }
                    m
                }
            });
        }
        let mut m = merged.unwrap_or(DiffReport {
            seed: a.seed,
            cases_per_cell: a.cases,
            total_cases: 0,
            total_mismatches: 0,
            cells: Vec::new(),
        });
        m.total_cases = m.cells.iter().map(|c| c.cases_run).sum();
        m.total_mismatches = m.cells.iter().map(|c| c.mismatches).sum();
        m
    };
    let text = match a.common.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(if report.passed() && !violations { Outcome::Ok } else { Outcome::Failed })
}

fn cmd_mappings(a: &MappingsArgs) -> Result<Outcome> {
    let cfg = single_vlen(&a.common)?;
    let text = if a.recipes {
        let rows = export(Some(&cfg));
        match a.common.format {
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            Format::Text => {
                let mut s = format!("{:<22} {:<21} {:>8} {:<5} {}\n", "neon_name", "tier", "min_vlen", "zvfh", "rvv_opcodes");
                for r in rows {
                    s += &format!(
                        "{:<22} {:<21} {:>8} {:<5} {}\n",
                        r.neon_name,
                        r.tier.as_str(),
                        r.min_vlen,
                        r.requires_zvfh,
                        r.rvv_opcodes.join(" ")
                    );
                }
                s
            }
        }
    } else {
        let rows = mapping_table(&cfg);
        match a.common.format {
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            Format::Text => {
                let mut s = format!("{:<13} {:>8} {:<5} {:<12} {}\n", "neon_type", "vlen_min", "zvfh", "rvv_type", "status");
                for r in &rows {
                    let status = match r.reason {
                        Some(reason) => format!("unmapped ({reason})"),
                        None => "mapped".to_string(),
                    };
                    s += &format!("{:<13} {:>8} {:<5} {:<12} {status}\n", r.neon_type, r.vlen_min, r.requires_zvfh, r.rvv_type);
                }
                let mapped = rows.iter().filter(|r| r.mapped).count();
                s += &format!("{mapped}/{} mapped at {cfg}\n", rows.len());
                s
            }
        }
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(Outcome::Ok)
}

fn cmd_coverage(a: &CommonArgs) -> Result<Outcome> {
    let cfg = single_vlen(a)?;
    let mut by_tier: BTreeMap<Tier, Vec<String>> = BTreeMap::new();
    for &id in catalog() {
        let recipe = lookup(id, &cfg)?;
        by_tier.entry(recipe.tier()).or_default().push(id.name());
    }
    let text = match a.format {
        Format::Json => {
            let tiers: BTreeMap<&str, _> = by_tier
                .iter()
                .map(|(t, names)| (t.as_str(), json!({ "count": names.len(), "intrinsics": names })))
                .collect();
            let doc = json!({
                "vlen": cfg.vlen_bits(),
                "zvfh": cfg.zvfh(),
                "total": catalog().len(),
                "tiers": tiers,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Text => {
            let mut s = format!("coverage at {cfg}: {} intrinsics\n", catalog().len());
            for (tier, names) in &by_tier {
                s += &format!("\n{} ({}):\n", tier.as_str(), names.len());
                for chunk in names.chunks(6) {
                    s += &format!("  {}\n", chunk.join(" "));
                }
            }
            s
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Ok)
}

fn cmd_bench_proxy(a: &ProxyArgs) -> Result<Outcome> {
    let cfgs = parse_vlens(a.common.vlen.as_deref(), "128", a.common.zvfh)?;
    let ids = parse_only(a.only.as_deref())?;
    let rows = bench_proxy(&ids, &cfgs, a.seed)?;
    let text = match a.common.format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Text => proxy_text(&rows),
    };
    emit(a.common.out.as_deref(), &text)?;
    Ok(Outcome::Ok)
}
