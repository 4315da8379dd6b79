//! Command-line front end. [`run`] returns the process exit code so the
//! binary stays a one-liner and tests can drive commands in-process.
//!
//! Exit codes: 0 ok, 1 usage or other failure, 2 axiom violation, 3 parse
//! error, 4 singular system, 5 solution not separated.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{determinant, format_rational};
use crate::bitrade::{Bitrade, Role};
use crate::dissection::{dissect, to_svg, DissectError, SvgOptions};
use crate::group::{check_det_invariance, integer_homotopy_rank, is_abelian_embeddable, presentation, subgroup_h};
use crate::homotopy::Homotopy;
use crate::io::{load_bitrade, LoadError};
use crate::system::{build_system, solve_pointed, SystemError};
use crate::trigon::{find_trigons, separate, TrigonError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_AXIOM: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_SINGULAR: i32 = 4;
pub const EXIT_NOT_SEPARATED: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "bitrade", version, about = "Latin bitrades, triangle dissections and abelian group embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Bitrade JSON file.
    pub file: PathBuf,
    /// Machine-readable output.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct PivotArg {
    /// Pivot star triple as `row,col,sym`; defaults to the first star triple.
    #[arg(long)]
    pub pivot: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms and print surface metrics.
    Validate(Input),
    /// Solve the pointed system exactly.
    Solve {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pivot: PivotArg,
    },
    /// Build and verify the triangle dissection.
    Dissect {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pivot: PivotArg,
        /// Write the dissection as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Draw in an equilateral frame instead of the right triangle.
        #[arg(long)]
        equilateral: bool,
    },
    /// Compute G(T), H(T) and the embeddability verdict.
    Embed(Input),
    /// Find a homotopy into a cyclic group separating two labels.
    Separate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pivot: PivotArg,
        /// The two labels to separate.
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        pair: Vec<String>,
        /// Role of the labels: 1|2|3 or row|col|sym.
        #[arg(long)]
        coord: String,
    },
    /// List the trigons with their corner triples.
    Trigons(Input),
    /// CSV summary of every JSON file in a directory, one row per pivot.
    Report {
        dir: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let code = match e {
            LoadError::Invalid(_) => EXIT_AXIOM,
            LoadError::Parse(_) => EXIT_PARSE,
            LoadError::Io { .. } => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SystemError> for Failure {
    fn from(e: SystemError) -> Self {
        let code = match e {
            SystemError::SingularSystem { .. } => EXIT_SINGULAR,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<DissectError> for Failure {
    fn from(e: DissectError) -> Self {
        match e {
            DissectError::System(s) => s.into(),
            DissectError::NotSeparatedSolution(..) => Failure::new(EXIT_NOT_SEPARATED, e.to_string()),
            DissectError::VerificationFailed { .. } => Failure::new(EXIT_FAILURE, e.to_string()),
        }
    }
}

impl From<TrigonError> for Failure {
    fn from(e: TrigonError) -> Self {
        match e {
            TrigonError::System(s) => s.into(),
            _ => Failure::new(EXIT_FAILURE, e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        // A closed stdout (e.g. piped into `head`) is not an error.
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::new(EXIT_OK, "");
        }
        Failure::new(EXIT_FAILURE, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate(input) => cmd_validate(input, out),
        Command::Solve { input, pivot } => cmd_solve(input, pivot, out),
        Command::Dissect { input, pivot, svg, equilateral } => {
            cmd_dissect(input, pivot, svg.as_deref(), *equilateral, out)
        }
        Command::Embed(input) => cmd_embed(input, out),
        Command::Separate { input, pivot, pair, coord } => cmd_separate(input, pivot, pair, coord, out),
        Command::Trigons(input) => cmd_trigons(input, out),
        Command::Report { dir, out: path, jobs } => cmd_report(dir, path.as_deref(), *jobs, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> CmdResult {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("plain data serializes"))?;
    Ok(())
}

/// Resolves `row,col,sym` to a star position, or the first star triple.
pub fn resolve_pivot(t: &Bitrade, spec: Option<&str>) -> Result<usize, String> {
    let Some(spec) = spec else { return Ok(0) };
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [r, c, s] = parts.as_slice() else {
        return Err(format!("pivot {spec:?} is not of the form row,col,sym"));
    };
    t.triple_from_names([r, c, s])
        .and_then(|x| t.star_position(&x))
        .ok_or_else(|| format!("pivot ({r},{c},{s}) is not a star triple"))
}

fn pivot_of(t: &Bitrade, p: &PivotArg) -> Result<usize, Failure> {
    resolve_pivot(t, p.pivot.as_deref()).map_err(|m| Failure::new(EXIT_FAILURE, m))
}

fn genus_text(t: &Bitrade) -> String {
    t.metrics().genus.map_or("none".to_string(), |g| g.to_string())
}

fn cmd_validate(input: &Input, out: &mut dyn Write) -> CmdResult {
    let t = load_bitrade(&input.file)?;
    let m = t.metrics();
    let trigons = t.is_separated().then(|| find_trigons(&t).map(|v| v.len()).unwrap_or(0));
    if input.json {
        return print_json(
            out,
            &json!({
                "valid": true,
                "metrics": m,
                "trigons": trigons,
                "canonical": crate::io::BitradeDoc::from_bitrade(&t),
            }),
        );
    }
    let kind = if m.spherical { "spherical" } else { "not spherical" };
    writeln!(out, "{kind}, s={}, m={}, genus {}", m.size, m.m, genus_text(&t))?;
    writeln!(out, "rows {}, cols {}, syms {}", m.role_counts[0], m.role_counts[1], m.role_counts[2])?;
    writeln!(out, "indecomposable: {}", m.indecomposable)?;
    writeln!(out, "separated: {}", m.separated)?;
    writeln!(out, "euler characteristic: {}", m.euler_characteristic)?;
    match trigons {
        Some(n) => writeln!(out, "trigons: {n}")?,
        None => writeln!(out, "trigons: n/a (not separated)")?,
    }
    Ok(())
}

fn cmd_solve(input: &Input, pivot: &PivotArg, out: &mut dyn Write) -> CmdResult {
    let t = load_bitrade(&input.file)?;
    let a = pivot_of(&t, pivot)?;
    let sol = solve_pointed(&t, a)?;
    if input.json {
        return print_json(out, &sol.to_json(&t));
    }
    writeln!(out, "pivot {}", t.format_triple(&t.star()[a]))?;
    for r in Role::ALL {
        let cells: Vec<String> =
            t.names(r).iter().zip(sol.role_values(r)).map(|(n, v)| format!("{n}={}", format_rational(v))).collect();
        writeln!(out, "{:<4} {}", r.name(), cells.join("  "))?;
    }
    writeln!(out, "width {}", sol.width())?;
    match sol.first_collision() {
        None => writeln!(out, "separated: yes")?,
        Some((x, y)) => writeln!(out, "separated: no ({} = {})", t.name(x), t.name(y))?,
    }
    Ok(())
}

fn cmd_dissect(
    input: &Input,
    pivot: &PivotArg,
    svg: Option<&Path>,
    equilateral: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let t = load_bitrade(&input.file)?;
    let a = pivot_of(&t, pivot)?;
    let p = crate::system::PointedBitrade::new(t.clone(), t.star()[a]).expect("resolved pivot is a star triple");
    let d = dissect(&p)?;
    if let Some(path) = svg {
        std::fs::write(path, to_svg(&d, SvgOptions { equilateral, ..SvgOptions::default() }))?;
    }
    if input.json {
        return print_json(out, &d.report);
    }
    let r = &d.report;
    writeln!(out, "pivot {}", t.format_triple(&t.star()[a]))?;
    writeln!(out, "triangles: {}", r.triangles)?;
    writeln!(out, "contained: {}", r.contained)?;
    writeln!(out, "non-degenerate: {}", r.non_degenerate)?;
    writeln!(out, "pairwise disjoint: {}", r.pairwise_disjoint)?;
    writeln!(out, "area total: {}", r.area_total)?;
    writeln!(out, "dissection: {}", r.is_dissection)?;
    writeln!(out, "separated dissection: {}", r.is_separated_dissection)?;
    if let Some(path) = svg {
        writeln!(out, "svg written to {}", path.display())?;
    }
    Ok(())
}

fn cmd_embed(input: &Input, out: &mut dyn Write) -> CmdResult {
    let t = load_bitrade(&input.file)?;
    let g = presentation(&t);
    let h = subgroup_h(&t);
    let e = is_abelian_embeddable(&t);
    let det = check_det_invariance(&t);
    let rank = integer_homotopy_rank(&t);
    if input.json {
        return print_json(
            out,
            &json!({
                "G": { "structure": g, "text": g.to_string() },
                "H": { "structure": h, "text": h.to_string() },
                "embeddable": e,
                "det_invariance": det,
                "integer_homotopy_rank": rank,
            }),
        );
    }
    let verdict = match &e.witness {
        None => "embeddable".to_string(),
        Some([x, y]) => format!("not embeddable; witness pair {x}, {y}"),
    };
    writeln!(out, "G = {g}; H = {h}; {verdict}")?;
    match &det {
        Some(d) => {
            let values: Vec<String> = d.distinct_values.iter().map(|v| v.to_string()).collect();
            writeln!(out, "|det B_ij| over {} admissible pairs: {}", d.pairs, values.join(", "))?;
        }
        None => writeln!(out, "|det B_ij|: n/a (B is not s x (s+2))")?,
    }
    writeln!(
        out,
        "rank B = {}, nullity = {}, trivial integer homotopies only: {}",
        rank.rank, rank.nullity, rank.trivial_only
    )?;
    Ok(())
}

fn homotopy_lines(t: &Bitrade, h: &Homotopy, out: &mut dyn Write) -> CmdResult {
    writeln!(out, "modulus {}", h.modulus())?;
    for r in Role::ALL {
        let cells: Vec<String> = t.names(r).iter().zip(&h.maps()[r.index()]).map(|(n, v)| format!("{n}={v}")).collect();
        writeln!(out, "{:<4} {}", r.name(), cells.join("  "))?;
    }
    Ok(())
}

fn cmd_separate(input: &Input, pivot: &PivotArg, pair: &[String], coord: &str, out: &mut dyn Write) -> CmdResult {
    let t = load_bitrade(&input.file)?;
    let role = Role::parse(coord).ok_or_else(|| Failure::new(EXIT_FAILURE, format!("unknown coordinate {coord:?}")))?;
    let label = |name: &str| {
        t.label_index(role, name).ok_or_else(|| Failure::new(EXIT_FAILURE, format!("no {role} label {name:?}")))
    };
    let (x, y) = (label(&pair[0])?, label(&pair[1])?);
    let first_with = |l: usize| t.star().iter().position(|s| s.get(role) == l).expect("labels occur in star");
    let a = match &pivot.pivot {
        Some(_) => {
            let a = pivot_of(&t, pivot)?;
            if t.star()[a].get(role) != x {
                return Err(Failure::new(EXIT_FAILURE, format!("pivot does not carry {role} label {}", pair[0])));
            }
            a
        }
        None => first_with(x),
    };
    let b = first_with(y);
    let s = separate(&t, a, b, role)?;
    if input.json {
        return print_json(
            out,
            &json!({
                "pair": pair,
                "coord": role,
                "homotopy": s.homotopy.to_json(&t),
                "depth": s.depth,
                "trace": s.trace,
            }),
        );
    }
    writeln!(out, "separating {} and {} ({role})", pair[0], pair[1])?;
    homotopy_lines(&t, &s.homotopy, out)?;
    writeln!(out, "values {} vs {}", s.homotopy.maps()[role.index()][x], s.homotopy.maps()[role.index()][y])?;
    writeln!(out, "recursion depth {}", s.depth)?;
    for (level, step) in s.trace.iter().enumerate() {
        let tail = step.trigon.as_ref().map_or(String::new(), |c| format!(", split at trigon {c}"));
        writeln!(out, "  level {level}: size {}, width {}{tail}", step.size, step.width)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TrigonJson {
    trigon: String,
    corners: Vec<String>,
    vertex_points: Vec<String>,
    arc_lengths: [usize; 3],
}

fn cmd_trigons(input: &Input, out: &mut dyn Write) -> CmdResult {
    let t = load_bitrade(&input.file)?;
    let tgs = find_trigons(&t)?;
    let rows: Vec<TrigonJson> = tgs
        .iter()
        .map(|tg| TrigonJson {
            trigon: t.format_triple(&tg.c),
            corners: tg.corners.iter().map(|&g| t.format_triple(&t.delta()[g])).collect(),
            vertex_points: tg.alphas.iter().map(|&a| t.format_triple(&t.star()[a])).collect(),
            arc_lengths: tg.k,
        })
        .collect();
    if input.json {
        return print_json(out, &rows);
    }
    if rows.is_empty() {
        writeln!(out, "none")?;
    }
    for r in &rows {
        writeln!(out, "{}  corners {}  arcs {:?}", r.trigon, r.corners.join(" "), r.arc_lengths)?;
    }
    Ok(())
}

/// One CSV row of the batch report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub file: String,
    pub pivot: String,
    pub status: String,
    pub s: String,
    pub m: String,
    pub genus: String,
    pub separated_solution: String,
    pub width: String,
    pub trigons: String,
    /// `H(T)` as invariant factors, `0` when trivial.
    pub h_invariants: String,
    pub det_b1m: String,
}

fn report_file(path: &Path) -> Vec<ReportRow> {
    let file = path.display().to_string();
    let blank = |status: String| ReportRow {
        file: file.clone(),
        pivot: String::new(),
        status,
        s: String::new(),
        m: String::new(),
        genus: String::new(),
        separated_solution: String::new(),
        width: String::new(),
        trigons: String::new(),
        h_invariants: String::new(),
        det_b1m: String::new(),
    };
    let t = match load_bitrade(path) {
        Ok(t) => t,
        Err(LoadError::Parse(e)) => return vec![blank(format!("parse error: {e}"))],
        Err(e) => return vec![blank(format!("invalid: {e}"))],
    };
    let m = t.metrics();
    let trigons = if t.is_separated() {
        find_trigons(&t).map(|v| v.len().to_string()).unwrap_or_default()
    } else {
        String::new()
    };
    let h_invariants = subgroup_h(&t).to_string();
    let b = build_system(&t);
    let det_b1m = if b.cols() == b.rows() + 2 {
        determinant(&b.without_columns(&[0, b.cols() - 1])).map(|d| d.abs().to_string()).unwrap_or_default()
    } else {
        String::new()
    };
    (0..t.size())
        .map(|a| {
            let mut row = ReportRow {
                pivot: t.format_triple(&t.star()[a]),
                s: m.size.to_string(),
                m: m.m.to_string(),
                genus: m.genus.map(|g| g.to_string()).unwrap_or_default(),
                trigons: trigons.clone(),
                h_invariants: h_invariants.clone(),
                det_b1m: det_b1m.clone(),
                ..blank(String::new())
            };
            match solve_pointed(&t, a) {
                Ok(sol) => {
                    row.status = "ok".into();
                    row.separated_solution = sol.is_separated().to_string();
                    row.width = sol.width().to_string();
                }
                Err(SystemError::SingularSystem { .. }) => row.status = "singular".into(),
                Err(e) => row.status = format!("error: {e}"),
            }
            row
        })
        .collect()
}

/// Rows for every `*.json` file directly inside `dir`, sorted by path and
/// then by pivot in canonical order.
pub fn report_rows(dir: &Path, jobs: usize) -> std::io::Result<Vec<ReportRow>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(std::io::Error::other)?;
    let per_file: Vec<Vec<ReportRow>> = pool.install(|| paths.par_iter().map(|p| report_file(p)).collect());
    Ok(per_file.into_iter().flatten().collect())
}

pub fn write_report_csv(rows: &[ReportRow], w: impl Write) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    if rows.is_empty() {
        wtr.write_record([
            "file",
            "pivot",
            "status",
            "s",
            "m",
            "genus",
            "separated_solution",
            "width",
            "trigons",
            "h_invariants",
            "det_b1m",
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn cmd_report(dir: &Path, path: Option<&Path>, jobs: usize, out: &mut dyn Write) -> CmdResult {
    let rows = report_rows(dir, jobs)?;
    let result = match path {
        Some(p) => write_report_csv(&rows, std::fs::File::create(p)?),
        None => write_report_csv(&rows, &mut *out),
    };
    result.map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))
}
