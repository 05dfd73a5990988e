use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use prm_hull::linalg::format_matrix;
use prm_hull::oracle::{hull_exact, in_rowspace, verify_degrees, VerifyOptions, DEFAULT_CAP};
use prm_hull::report::{describe_record, format_record, parse_modulus, HullReport};
use prm_hull::theory::{build_code, hull_dim_formula, hull_min_distance, min_weight_witness, prm_min_distance};
use prm_hull::{enumerate_standard_points, FieldElement, FieldSpec};

#[derive(Parser)]
#[command(name = "prm", version, about = "Projective Reed-Muller codes and their hulls")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the closed-form parameters of a code and its hull.
    Info(Instance),
    /// Check every closed form against the exact oracles.
    Verify(VerifyArgs),
    /// Recompute the five worked examples.
    ReproduceExamples,
    /// Write a basis of the code, its hull or its dual as a matrix file.
    Export(ExportArgs),
    /// Print the minimum-weight form and the weight of its evaluation.
    Witness(WitnessArgs),
}

#[derive(Args, Clone, Default)]
struct FieldArgs {
    /// Field order (a prime power).
    #[arg(long = "q")]
    q_flag: Option<u32>,
    /// Characteristic, used with --k.
    #[arg(long)]
    p: Option<u32>,
    /// Extension degree, used with --p.
    #[arg(long)]
    k: Option<u32>,
    /// Defining polynomial as comma-separated coefficients, constant first.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args, Clone)]
struct Instance {
    /// q, m and v as positional values (m and v alone with --q or --p).
    #[arg(value_name = "Q M V")]
    positional: Vec<String>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long = "m")]
    m_flag: Option<u32>,
    #[arg(long = "v")]
    v_flag: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    instance: Instance,
    /// Field orders for a sweep (default 2,3,4,5,7,8,9).
    #[arg(long, value_delimiter = ',')]
    qs: Vec<u32>,
    /// Projective dimensions for a sweep (default 2,3,4).
    #[arg(long, value_delimiter = ',')]
    ms: Vec<u32>,
    /// Degrees to check (default: all).
    #[arg(long, value_delimiter = ',')]
    vs: Vec<u32>,
    /// Also compare the excluded-monomial description with the hull.
    #[arg(long)]
    spanning: bool,
    /// Codeword cap for exhaustive minimum weights; 0 disables them.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Write records to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// One tab-separated record per line.
    #[arg(long)]
    machine_readable: bool,
    /// Print failing checks only.
    #[arg(long)]
    quiet: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Basis {
    Generator,
    Hull,
    Dual,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    instance: Instance,
    /// Basis to write; may also follow the positional values.
    #[arg(long, value_enum)]
    what: Option<Basis>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    instance: Instance,
    /// Distinct nonzero element indices for the linear factors.
    #[arg(long, value_delimiter = ',')]
    lambdas: Option<Vec<u32>>,
}

struct Resolved {
    field: FieldSpec,
    m: u32,
    v: u32,
}

fn field_from(args: &FieldArgs, q_pos: Option<u32>) -> Result<FieldSpec> {
    let modulus = args.modulus.as_deref().map(parse_modulus).transpose()?;
    let q = match (q_pos, args.q_flag) {
        (Some(_), Some(_)) => bail!("q given both positionally and with --q"),
        (a, b) => a.or(b),
    };
    let field = match (q, args.p, args.k) {
        (Some(q), None, None) => match &modulus {
            None => FieldSpec::from_order(q)?,
            Some(md) => {
                let (p, k) = prime_power_of(q)?;
                FieldSpec::new(p, k, Some(md))?
            }
        },
        (q, Some(p), k) => {
            let k = k.unwrap_or(1);
            let f = FieldSpec::new(p, k, modulus.as_deref())?;
            if let Some(q) = q {
                if q != f.q() {
                    bail!("q = {q} does not match p^k = {}", f.q());
                }
            }
            f
        }
        (_, None, Some(_)) => bail!("--k needs --p"),
        (None, None, None) => bail!("missing field: give q or --p/--k"),
    };
    Ok(field)
}

fn prime_power_of(q: u32) -> Result<(u32, u32)> {
    prm_hull::field::prime_power(q).ok_or_else(|| prm_hull::Error::NotPrimePower(q).into())
}

fn resolve(inst: &Instance) -> Result<Resolved> {
    let (r, rest) = resolve_with_rest(inst)?;
    if let Some(extra) = rest.first() {
        bail!("unexpected argument {extra:?}");
    }
    Ok(r)
}

/// Resolves the instance from leading numeric positionals, returning the
/// remaining positional words.
fn resolve_with_rest(inst: &Instance) -> Result<(Resolved, Vec<String>)> {
    let split = inst.positional.iter().position(|s| s.parse::<u32>().is_err()).unwrap_or(inst.positional.len());
    let pos: Vec<u32> = inst.positional[..split].iter().map(|s| s.parse().expect("checked above")).collect();
    let rest = inst.positional[split..].to_vec();
    // with an explicit field, positionals are m and v
    let field_flags = inst.field.p.is_some() || inst.field.q_flag.is_some();
    let (q_pos, m_pos, v_pos) = match (pos.len(), field_flags) {
        (3, _) => (Some(pos[0]), Some(pos[1]), Some(pos[2])),
        (2, true) => (None, Some(pos[0]), Some(pos[1])),
        (0, _) => (None, None, None),
        _ => bail!("expected positional Q M V (or M V with --q/--p)"),
    };
    let field = field_from(&inst.field, q_pos)?;
    let pick = |a: Option<u32>, b: Option<u32>, name: &str| match (a, b) {
        (Some(_), Some(_)) => bail!("{name} given both positionally and as a flag"),
        (a, b) => a.or(b).with_context(|| format!("missing {name}")),
    };
    let m = pick(m_pos, inst.m_flag, "m")?;
    let v = pick(v_pos, inst.v_flag, "v")?;
    if m == 0 {
        bail!("m must be at least 1");
    }
    if v == 0 || v > m * (field.q() - 1) {
        bail!("v = {v} outside [1, {}]", m * (field.q() - 1));
    }
    Ok((Resolved { field, m, v }, rest))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_info(inst: &Instance) -> Result<ExitCode> {
    let r = resolve(inst)?;
    let report = HullReport::new(r.field.q(), r.m, r.v)?;
    print!("field: {}\n{}", r.field, report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let opts = VerifyOptions { brute_cap: (a.cap > 0).then_some(a.cap), spanning: a.spanning, ..VerifyOptions::standard() };
    let single = !a.instance.positional.is_empty() || a.instance.v_flag.is_some();
    let mut jobs: Vec<(FieldSpec, u32, Option<Vec<u32>>)> = Vec::new();
    if single {
        let r = resolve(&a.instance)?;
        jobs.push((r.field, r.m, Some(vec![r.v])));
    } else {
        let explicit = a.instance.field.q_flag.is_some() || a.instance.field.p.is_some();
        let fields = if explicit {
            vec![field_from(&a.instance.field, None)?]
        } else {
            let qs = if a.qs.is_empty() { vec![2, 3, 4, 5, 7, 8, 9] } else { a.qs.clone() };
            qs.into_iter().map(FieldSpec::from_order).collect::<prm_hull::Result<Vec<_>>>()?
        };
        let ms = match (a.instance.m_flag, a.ms.is_empty()) {
            (Some(m), _) => vec![m],
            (None, true) => vec![2, 3, 4],
            (None, false) => a.ms.clone(),
        };
        for f in &fields {
            for &m in &ms {
                if m == 0 {
                    bail!("m must be at least 1");
                }
                let top = m * (f.q() - 1);
                let vs = if a.vs.is_empty() {
                    None
                } else {
                    Some(a.vs.iter().copied().filter(|&v| v >= 1 && v <= top).collect())
                };
                jobs.push((f.clone(), m, vs));
            }
        }
    }
    let mut out = output(&a.out)?;
    let (mut failed, mut total) = (0usize, 0usize);
    let mut write_err = None;
    for (field, m, vs) in &jobs {
        verify_degrees(field, *m, vs.as_deref(), &opts, |rep| {
            for r in &rep.records {
                total += 1;
                failed += usize::from(!r.pass);
                if a.quiet && r.pass {
                    continue;
                }
                let line = if a.machine_readable { format_record(r) } else { describe_record(r) };
                if let Err(e) = writeln!(out, "{line}") {
                    write_err.get_or_insert(e);
                }
            }
        })?;
        out.flush()?;
    }
    if let Some(e) = write_err {
        return Err(e.into());
    }
    if !a.machine_readable {
        writeln!(out, "{} checks, {} failed", total, failed)?;
    }
    out.flush()?;
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_reproduce() -> Result<ExitCode> {
    println!("{:<12} {:>8} {:>9}  match", "instance", "paper", "computed");
    let mut all = true;
    let mut row = |label: String, expected: u64, computed: Option<u64>| {
        let ok = computed == Some(expected);
        all &= ok;
        let shown = computed.map_or_else(|| "-".to_string(), |c| c.to_string());
        println!("{label:<12} {expected:>8} {shown:>9}  {}", if ok { "yes" } else { "no" });
    };
    for (q, m, v, expected) in [(11u32, 3u32, 14u32, 555u64), (11, 3, 17, 474), (8, 4, 13, 1682), (7, 4, 13, 961)] {
        let field = FieldSpec::from_order(q)?;
        let oracle = hull_exact(&build_code(&field, m, v)?)?.hull_dim_exact as u64;
        let formula = hull_dim_formula(q, m, v)?.map(|f| f.dim);
        row(format!("({q},{m},{v})"), expected, (formula == Some(oracle)).then_some(oracle));
    }
    // the witness of the smaller degree realises the hull distance of both
    let field = FieldSpec::from_order(5)?;
    let points = enumerate_standard_points(&field, 3)?;
    let word = min_weight_witness(&field, 3, 3, None)?.codeword(&field, &points);
    let weight = word.iter().filter(|x| !x.is_zero()).count() as u64;
    let mut in_hulls = true;
    for v in [3, 9] {
        let h = hull_exact(&build_code(&field, 3, v)?)?;
        in_hulls &= in_rowspace(&h.hull_basis, &h.hull_pivots, &word)?;
    }
    let formulas = [hull_min_distance(5, 3, 3)?, hull_min_distance(5, 3, 9)?];
    let consistent = in_hulls && formulas.iter().all(|&d| d == Some(weight));
    row("(5,3,9)".into(), 75, consistent.then_some(weight));
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_export(a: &ExportArgs) -> Result<ExitCode> {
    let (r, rest) = resolve_with_rest(&a.instance)?;
    let word = match rest.as_slice() {
        [] => None,
        [w] => Some(Basis::from_str(w, true).map_err(|e| anyhow::anyhow!(e))?),
        _ => bail!("unexpected arguments {rest:?}"),
    };
    let what = match (a.what, word) {
        (Some(_), Some(_)) => bail!("basis given twice"),
        (w, b) => w.or(b).unwrap_or(Basis::Generator),
    };
    let code = build_code(&r.field, r.m, r.v)?;
    let mat = match what {
        Basis::Generator => code.generator,
        Basis::Hull => hull_exact(&code)?.hull_basis,
        Basis::Dual => code.generator.nullspace().row_basis().0,
    };
    let mut out = output(&a.out)?;
    out.write_all(format_matrix(&mat).as_bytes())?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_witness(a: &WitnessArgs) -> Result<ExitCode> {
    let r = resolve(&a.instance)?;
    let lambdas = a
        .lambdas
        .as_ref()
        .map(|ls| ls.iter().map(|&i| r.field.element(i)).collect::<prm_hull::Result<Vec<FieldElement>>>())
        .transpose()?;
    let w = min_weight_witness(&r.field, r.m, r.v, lambdas.as_deref())?;
    let points = enumerate_standard_points(&r.field, r.m)?;
    let weight = w.codeword(&r.field, &points).iter().filter(|x| !x.is_zero()).count();
    let d = prm_min_distance(r.field.q(), r.m, r.v)?;
    println!("field: {}", r.field);
    println!("form: {w}");
    println!("degree: {}", w.degree());
    println!("r: {}\ns: {}", w.r, w.s);
    println!("weight: {weight}");
    println!("min_distance: {d}");
    Ok(if weight as u64 == d { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Info(i) => cmd_info(i),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::ReproduceExamples => cmd_reproduce(),
        Cmd::Export(a) => cmd_export(a),
        Cmd::Witness(a) => cmd_witness(a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
