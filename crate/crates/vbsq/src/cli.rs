//! Command-line front end: sweeps and dumps as deterministic CSV/JSON files.
//!
//! All numeric columns are printed with 15 significant digits and rows are
//! emitted in fixed grid order, so identical invocations produce
//! byte-identical files. Block length l = -1 encodes an infinite block.

use std::fmt::Write as _;
use std::fs;
use std::io::{ self, Write };
use std::path::PathBuf;
use std::process::ExitCode;
use clap::{ Args, Parser, Subcommand, ValueEnum };
use rayon::prelude::*;
use serde::Serialize;
use crate::context::DeformationContext;
use crate::halfint::HalfInt;
use crate::mps;
use crate::oracle;
use crate::qalgebra;
use crate::rdm::{ self, BlockLength };
use crate::spectra;

/// Exit code for a failed verification (residual over threshold).
pub const EXIT_VERIFY_FAILED: u8 = 1;
/// Exit code for usage errors (bad grids, guard violations).
pub const EXIT_USAGE: u8 = 2;

/// Format a float with 15 significant digits.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        // normalize -0
        return "0.000000000000000e0".into();
    }
    format!("{v:.14e}")
}

/// Encode a block length for data files: -1 stands for an infinite block.
pub fn encode_block_length(l: BlockLength) -> i64 {
    match l {
        BlockLength::Infinite => -1,
        BlockLength::Finite(n) => n as i64,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "vbsq",
    about = "q-deformed spin-S VBS states: entanglement spectra, entropies, and oracle checks",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rényi and von Neumann entropies over a (q, alpha) grid.
    EntropySweep(EntropySweepArgs),
    /// Block entanglement spectrum at one (S, q, l) point.
    Spectrum(SpectrumArgs),
    /// Brute-force verification on small periodic chains.
    OracleVerify(OracleVerifyArgs),
    /// Dump one q-deformed Clebsch-Gordan table.
    QcgTable(QcgTableArgs),
    /// Transfer-matrix eigenvalues over a q grid.
    TransferSpectrum(TransferSpectrumArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct EntropySweepArgs {
    /// Integer spin S at each site.
    #[arg(long = "spin")]
    spin: u32,

    /// Deformation grid: a single value or `a:b:step`.
    #[arg(long = "q")]
    q: String,

    /// Rényi orders (repeatable); von Neumann rows are always emitted.
    #[arg(long = "alpha", value_delimiter = ',', default_value = "2")]
    alpha: Vec<f64>,

    /// Block lengths: integers or `inf`.
    #[arg(long = "l", value_delimiter = ',', default_value = "inf")]
    l: Vec<String>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long = "spin")]
    spin: u32,

    /// Deformation parameter q in (0, 1].
    #[arg(long = "q")]
    q: f64,

    /// Block length: a positive integer or `inf`.
    #[arg(long = "l")]
    l: String,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleVerifyArgs {
    #[arg(long = "spin")]
    spin: u32,

    /// Largest chain length to check.
    #[arg(long = "l-max")]
    l_max: u32,

    /// Deformation grid: a single value or `a:b:step`.
    #[arg(long = "q")]
    q: String,

    /// Residual threshold for exit status.
    #[arg(long, default_value_t = 1e-8)]
    threshold: f64,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct QcgTableArgs {
    /// Doubled first spin (2*j1).
    #[arg(long)]
    two_j1: u32,

    /// Doubled second spin (2*j2).
    #[arg(long)]
    two_j2: u32,

    #[arg(long = "q")]
    q: f64,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TransferSpectrumArgs {
    #[arg(long = "spin")]
    spin: u32,

    /// Deformation grid: a single value or `a:b:step`.
    #[arg(long = "q")]
    q: String,

    #[command(flatten)]
    output: OutputArgs,
}

/// Parse `v` or `a:b:step` into a grid (inclusive endpoints within 1e-12).
pub fn parse_q_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| -> Result<f64, String> {
        s.trim().parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"))
    };
    let grid = match parts.as_slice() {
        [single] => vec![parse(single)?],
        [a, b, step] => {
            let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
            if step <= 0.0 || b < a {
                return Err(format!("bad grid {text:?}: need a <= b and step > 0"));
            }
            let mut grid = Vec::new();
            let n = ((b - a) / step + 1e-9).floor() as usize;
            for k in 0..=n {
                grid.push(a + step * k as f64);
            }
            grid
        }
        _ => return Err(format!("bad grid {text:?}: expected `v` or `a:b:step`")),
    };
    if grid.is_empty() {
        return Err("empty q grid".into());
    }
    for &q in &grid {
        if !(q > 0.0 && q <= 1.0) {
            return Err(format!("q = {q} outside (0, 1]"));
        }
    }
    Ok(grid)
}

pub fn parse_block_length(text: &str) -> Result<BlockLength, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t == "-1" {
        return Ok(BlockLength::Infinite);
    }
    let n: usize = t.parse().map_err(|e| format!("bad block length {t:?}: {e}"))?;
    if n == 0 {
        return Err("block length must be >= 1".into());
    }
    Ok(BlockLength::Finite(n))
}

fn write_output(out: &Option<PathBuf>, data: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, data),
        None => io::stdout().write_all(data.as_bytes()),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

// ---------------------------------------------------------------------------
// entropy-sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct EntropyRow {
    s: u32,
    q: f64,
    alpha: f64,
    l: i64,
    s_renyi: f64,
    s_vn: f64,
}

fn entropy_rows(spin: u32, q_grid: &[f64], alphas: &[f64], ls: &[BlockLength])
    -> Result<Vec<EntropyRow>, String>
{
    let mut points = Vec::new();
    for &q in q_grid {
        for &l in ls {
            for &alpha in alphas {
                points.push((q, l, alpha));
            }
        }
    }
    points
        .par_iter()
        .map(|&(q, l, alpha)| {
            let ctx = DeformationContext::new(q).map_err(|e| e.to_string())?;
            let (s_renyi, s_vn) = spectra::entropies_at(spin, l, alpha, &ctx)
                .map_err(|e| e.to_string())?;
            Ok(EntropyRow {
                s: spin,
                q,
                alpha,
                l: encode_block_length(l),
                s_renyi,
                s_vn,
            })
        })
        .collect()
}

fn run_entropy_sweep(args: &EntropySweepArgs) -> Result<String, String> {
    if args.spin == 0 {
        return Err("spin must be >= 1".into());
    }
    let q_grid = parse_q_grid(&args.q)?;
    if args.alpha.is_empty() {
        return Err("empty alpha grid".into());
    }
    for &a in &args.alpha {
        if !(a > 0.0) || a == 1.0 {
            return Err(format!("Rényi order must be positive and != 1, got {a}"));
        }
    }
    let ls: Vec<BlockLength> = args.l.iter()
        .map(|s| parse_block_length(s))
        .collect::<Result<_, _>>()?;
    let rows = entropy_rows(args.spin, &q_grid, &args.alpha, &ls)?;
    match args.output.format {
        Format::Csv => {
            let mut out = String::from("S,q,alpha,l,S_renyi,S_vN\n");
            for r in &rows {
                // one closed-form vN row per (q, l), tagged alpha = -1
                let _ = writeln!(
                    out, "{},{},{},{},{},{}",
                    r.s, format_f64(r.q), format_f64(r.alpha), r.l,
                    format_f64(r.s_renyi), format_f64(r.s_vn)
                );
            }
            let mut seen: Vec<(u64, i64)> = Vec::new();
            for r in &rows {
                let key = (r.q.to_bits(), r.l);
                if !seen.contains(&key) {
                    seen.push(key);
                    let _ = writeln!(
                        out, "{},{},{},{},{},{}",
                        r.s, format_f64(r.q), format_f64(-1.0), r.l,
                        format_f64(r.s_vn), format_f64(r.s_vn)
                    );
                }
            }
            Ok(out)
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct SpectrumRow {
    s: u32,
    q: f64,
    l: i64,
    sector_m: String,
    p: f64,
    degeneracy: usize,
    epsilon: Option<f64>,
    p_perturbative: Option<f64>,
}

fn run_spectrum(args: &SpectrumArgs) -> Result<String, String> {
    if args.spin == 0 {
        return Err("spin must be >= 1".into());
    }
    let ctx = DeformationContext::new(args.q).map_err(|e| e.to_string())?;
    let l = parse_block_length(&args.l)?;
    let matrix = match l {
        BlockLength::Infinite => rdm::rdm_double_scaling(args.spin, &ctx),
        BlockLength::Finite(n) => rdm::rdm_finite_block(args.spin, n, &ctx)
            .map_err(|e| e.to_string())?,
    };
    let spectrum = rdm::spectrum_of(&matrix, &ctx).map_err(|e| e.to_string())?;

    // Perturbative companion column for deformed finite blocks.
    let perturbative: Option<Vec<f64>> = match (l, ctx.is_isotropic()) {
        (BlockLength::Finite(n), false) => {
            let pert = spectra::perturbative_eigs(args.spin, n, &ctx)
                .map_err(|e| e.to_string())?;
            let mut ps: Vec<f64> = pert.groups().iter()
                .flat_map(|g| std::iter::repeat(g.p).take(g.degeneracy))
                .collect();
            ps.sort_by(|a, b| b.partial_cmp(a).unwrap());
            Some(ps)
        }
        _ => None,
    };

    let groups = spectrum.groups();
    let mut rows = Vec::new();
    // Align perturbative values with the exact spectrum by descending rank;
    // group them identically when the degeneracy structures agree.
    let aligned_pert: Option<Vec<f64>> = perturbative.as_ref().map(|ps| {
        let mut grouped = Vec::with_capacity(groups.len());
        let mut k = 0;
        for g in groups {
            let take = g.degeneracy.min(ps.len().saturating_sub(k));
            let slice = &ps[k..k + take];
            let mean = if slice.is_empty() {
                f64::NAN
            } else {
                slice.iter().sum::<f64>() / slice.len() as f64
            };
            grouped.push(mean);
            k += take;
        }
        grouped
    });
    for (idx, g) in groups.iter().enumerate() {
        rows.push(SpectrumRow {
            s: args.spin,
            q: args.q,
            l: encode_block_length(l),
            sector_m: g.sector_label(),
            p: g.p,
            degeneracy: g.degeneracy,
            epsilon: g.epsilon,
            p_perturbative: aligned_pert.as_ref().map(|ps| ps[idx]),
        });
    }

    match args.output.format {
        Format::Csv => {
            let with_pert = rows.iter().any(|r| r.p_perturbative.is_some());
            let mut out = String::from(if with_pert {
                "S,q,l,sector_M,p,degeneracy,epsilon,p_perturbative\n"
            } else {
                "S,q,l,sector_M,p,degeneracy,epsilon\n"
            });
            for r in &rows {
                let eps = r.epsilon.map(format_f64).unwrap_or_default();
                let _ = write!(
                    out, "{},{},{},{},{},{},{}",
                    r.s, format_f64(r.q), r.l, r.sector_m,
                    format_f64(r.p), r.degeneracy, eps
                );
                if with_pert {
                    let _ = write!(
                        out, ",{}",
                        r.p_perturbative.map(format_f64).unwrap_or_default()
                    );
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// oracle-verify
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct OracleRow {
    s: u32,
    q: f64,
    #[serde(rename = "L")]
    chain: usize,
    l: i64,
    check_name: String,
    residual: f64,
}

fn run_oracle_verify(args: &OracleVerifyArgs) -> Result<(String, bool), String> {
    if args.spin == 0 {
        return Err("spin must be >= 1".into());
    }
    if args.l_max < 2 {
        return Err("l-max must be >= 2".into());
    }
    let q_grid = parse_q_grid(&args.q)?;
    // Reject guard violations up front so the failure is a usage error.
    let dim_bits = f64::from(args.l_max) * f64::from(2 * args.spin + 1).log2();
    if dim_bits > (oracle::MAX_STATE_DIM as f64).log2() {
        return Err(format!(
            "SIZE_LIMIT: (2S+1)^L = {}^{} exceeds {}",
            2 * args.spin + 1, args.l_max, oracle::MAX_STATE_DIM
        ));
    }

    let mut points = Vec::new();
    for &q in &q_grid {
        for chain in 2..=(args.l_max as usize) {
            points.push((q, chain));
        }
    }
    let rows: Vec<Vec<OracleRow>> = points
        .par_iter()
        .map(|&(q, chain)| {
            let ctx = DeformationContext::new(q).map_err(|e| e.to_string())?;
            let mut out = Vec::new();
            let res = oracle::hamiltonian_annihilation_check(args.spin, chain, &ctx)
                .map_err(|e| e.to_string())?;
            out.push(OracleRow {
                s: args.spin,
                q,
                chain,
                l: 0,
                check_name: "hamiltonian_annihilation".into(),
                residual: res,
            });
            for l in 1..chain {
                let dev = oracle::crosscheck_rdm(args.spin, l, chain, &ctx)
                    .map_err(|e| e.to_string())?;
                out.push(OracleRow {
                    s: args.spin,
                    q,
                    chain,
                    l: l as i64,
                    check_name: "rdm_crosscheck".into(),
                    residual: dev,
                });
            }
            Ok::<_, String>(out)
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<OracleRow> = rows.into_iter().flatten().collect();

    let mut all_ok = true;
    for r in &rows {
        if !(r.residual < args.threshold) {
            all_ok = false;
            eprintln!(
                "FAIL {} S={} q={} L={} l={} residual={}",
                r.check_name, r.s, r.q, r.chain, r.l, format_f64(r.residual)
            );
        }
    }

    let text = match args.output.format {
        Format::Csv => {
            let mut out = String::from("S,q,L,l,check_name,residual\n");
            for r in &rows {
                let _ = writeln!(
                    out, "{},{},{},{},{},{}",
                    r.s, format_f64(r.q), r.chain, r.l, r.check_name,
                    format_f64(r.residual)
                );
            }
            out
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?,
    };
    Ok((text, all_ok))
}

// ---------------------------------------------------------------------------
// qcg-table / transfer-spectrum
// ---------------------------------------------------------------------------

fn run_qcg_table(args: &QcgTableArgs) -> Result<String, String> {
    let ctx = DeformationContext::new(args.q).map_err(|e| e.to_string())?;
    let table = qalgebra::qcg(
        HalfInt::new(args.two_j1 as i32),
        HalfInt::new(args.two_j2 as i32),
        &ctx,
    );
    match args.output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).map_err(|e| e.to_string())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                two_j1: i32,
                two_m1: i32,
                two_j2: i32,
                two_m2: i32,
                two_j: i32,
                two_m: i32,
                value: f64,
            }
            let entries: Vec<Entry> = table.entries()
                .map(|(m1, m2, j, m, v)| Entry {
                    two_j1: args.two_j1 as i32,
                    two_m1: m1,
                    two_j2: args.two_j2 as i32,
                    two_m2: m2,
                    two_j: j,
                    two_m: m,
                    value: v,
                })
                .collect();
            serde_json::to_string_pretty(&entries).map_err(|e| e.to_string())
        }
    }
}

#[derive(Debug, Serialize)]
struct TransferRow {
    s: u32,
    q: f64,
    j: u32,
    lambda: f64,
    ratio: f64,
    degeneracy: usize,
    xi: f64,
}

fn run_transfer_spectrum(args: &TransferSpectrumArgs) -> Result<String, String> {
    if args.spin == 0 {
        return Err("spin must be >= 1".into());
    }
    let q_grid = parse_q_grid(&args.q)?;
    let rows: Vec<Vec<TransferRow>> = q_grid
        .par_iter()
        .map(|&q| {
            let ctx = DeformationContext::new(q).map_err(|e| e.to_string())?;
            let spectrum = mps::transfer_spectrum(args.spin, &ctx)
                .map_err(|e| e.to_string())?;
            let xi = mps::correlation_length(args.spin, &ctx);
            let lambda0 = spectrum.eigenvalue(0);
            Ok::<_, String>(
                (0..=args.spin)
                    .map(|j| TransferRow {
                        s: args.spin,
                        q,
                        j,
                        lambda: spectrum.eigenvalue(j),
                        ratio: spectrum.eigenvalue(j) / lambda0,
                        degeneracy: 2 * j as usize + 1,
                        xi,
                    })
                    .collect(),
            )
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<TransferRow> = rows.into_iter().flatten().collect();
    match args.output.format {
        Format::Csv => {
            let mut out = String::from("S,q,j,lambda,ratio,degeneracy,xi\n");
            for r in &rows {
                let _ = writeln!(
                    out, "{},{},{},{},{},{},{}",
                    r.s, format_f64(r.q), r.j, format_f64(r.lambda),
                    format_f64(r.ratio), r.degeneracy, format_f64(r.xi)
                );
            }
            Ok(out)
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string()),
    }
}

/// Entry point used by the `vbsq` binary.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    run_parsed(cli)
}

fn run_parsed(cli: Cli) -> ExitCode {
    match &cli.command {
        Command::EntropySweep(args) => match run_entropy_sweep(args) {
            Ok(text) => emit(&args.output, &text),
            Err(msg) => usage_error(&msg),
        },
        Command::Spectrum(args) => match run_spectrum(args) {
            Ok(text) => emit(&args.output, &text),
            Err(msg) => usage_error(&msg),
        },
        Command::OracleVerify(args) => match run_oracle_verify(args) {
            Ok((text, all_ok)) => {
                let code = emit(&args.output, &text);
                if code != ExitCode::SUCCESS {
                    code
                } else if all_ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_VERIFY_FAILED)
                }
            }
            Err(msg) => usage_error(&msg),
        },
        Command::QcgTable(args) => match run_qcg_table(args) {
            Ok(text) => emit(&args.output, &text),
            Err(msg) => usage_error(&msg),
        },
        Command::TransferSpectrum(args) => match run_transfer_spectrum(args) {
            Ok(text) => emit(&args.output, &text),
            Err(msg) => usage_error(&msg),
        },
    }
}

fn emit(output: &OutputArgs, text: &str) -> ExitCode {
    match write_output(&output.out, text) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
