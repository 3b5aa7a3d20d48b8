//! Command-line surface.
//!
//! Exit codes: `0` everything checked holds, `1` a verification mismatch,
//! `2` a usage, parse or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use kronecker_core::cluster::{cluster_variable, x_of_m};
use kronecker_core::combinatorics::{enumerate_tuples, IndexTuple};
use kronecker_core::engine::{
    a_variables, check_subrepresentation, ones_b_assignment, random_b_assignment, solve_cell_point, VerifyOptions,
};
use kronecker_core::field::Fq;
use kronecker_core::linalg::Eliminate;
use kronecker_core::matrices::{build_n2_full, build_s_prime, extract_a, n1, n2, LabeledMatrix};
use kronecker_core::poly::Var;
use kronecker_core::relations::generator_set;
use kronecker_core::Error;
use num_rational::BigRational;
use serde::Serialize;

use crate::batch::{resolve_workers, tuple_rng, verify_batch};
use crate::format::{
    census_rows, CellPointDoc, ClusterCheckDoc, ClusterRowDoc, EnumerateDoc, EnumeratedTuple, FieldText, MatricesDoc,
    MatrixDoc, RelationDoc, ReportDoc, TupleDoc, VerifyDoc, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldChoice {
    Rational,
    Fq,
}

#[derive(Debug, Parser)]
#[command(name = "kronecker", version, about = "Cells of Kronecker quiver Grassmannians: matrices, relations, checks")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the index tuples for `m` with their dimension vectors.
    Enumerate {
        #[arg(long)]
        m: u32,
    },
    /// Show N^(2), N1, N2, the primed rows, the relations and optionally A_{j,k}.
    Matrices {
        #[arg(long)]
        m: u32,
        /// Comma list, e.g. `0,2,4,6`; empty for the empty tuple.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, requires = "k")]
        j: Option<u32>,
        #[arg(long, requires = "j")]
        k: Option<u32>,
    },
    /// Check det(A) = ±D-hat, rank trials and optional decomposition replays.
    Verify {
        #[arg(long)]
        m: u32,
        /// A single tuple; all tuples for `m` when omitted.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        decomposition_trials: usize,
        /// Reduce every (e1+1)-minor of N1 modulo the relations.
        #[arg(long)]
        membership: bool,
        /// Perturb one relation; the run must then report a mismatch.
        #[arg(long)]
        inject_fault: bool,
        /// Worker threads; defaults to $KRONECKER_WORKERS, then one per core.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Build one explicit subrepresentation from values of the free variables.
    #[command(group(ArgGroup::new("source").required(true).args(["ones", "random", "assignment"])))]
    Subrep {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Every free variable set to 1.
        #[arg(long)]
        ones: bool,
        /// Random free values drawn from `--seed`.
        #[arg(long)]
        random: bool,
        /// JSON object from free variable names to values.
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FieldChoice::Rational)]
        field: FieldChoice,
    },
    /// Compare X_M(m) with the cluster variable x_m for 3 <= m <= max.
    ClusterCheck {
        #[arg(long)]
        max: u32,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_)
            | Error::Shape(_)
            | Error::EmptyRelation { .. }
            | Error::PartialOrderViolation { .. }
            | Error::UnboundVariable(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Output text and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// Parse `0,2,4,6`, `(0,2,4,6)` or the empty string.
pub fn parse_tuple(m: u32, s: &str) -> Result<IndexTuple, Failure> {
    let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    let entries = if body.is_empty() {
        Vec::new()
    } else {
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Failure::Usage(format!("bad tuple entry {:?} in {:?}", t.trim(), s)))
            })
            .collect::<Result<Vec<u32>, Failure>>()?
    };
    Ok(IndexTuple::new(m, entries)?)
}

fn json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn run_command(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Enumerate { m } => enumerate(*m, cli.format),
        Command::Matrices { m, p, j, k } => matrices(*m, p, j.zip(*k), cli.format),
        Command::Verify {
            m,
            p,
            trials,
            seed,
            decomposition_trials,
            membership,
            inject_fault,
            workers,
        } => {
            let opts = VerifyOptions {
                trials: *trials,
                decomposition_trials: *decomposition_trials,
                membership: *membership,
                inject_fault: *inject_fault,
            };
            let workers = resolve_workers(*workers).map_err(Failure::Usage)?;
            verify(*m, p.as_deref(), &opts, *seed, workers, cli.format)
        }
        Command::Subrep {
            m,
            p,
            ones,
            random,
            assignment,
            seed,
            field,
        } => {
            let p = parse_tuple(*m, p)?;
            let source = if *ones {
                Source::Ones
            } else if *random {
                Source::Random(*seed)
            } else {
                let path = assignment.as_ref().expect("argument group requires a source");
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))?;
                Source::File(text)
            };
            match field {
                FieldChoice::Rational => subrep::<BigRational>(&p, &source, "rational", cli.format),
                FieldChoice::Fq => subrep::<Fq>(&p, &source, "fq", cli.format),
            }
        }
        Command::ClusterCheck { max } => cluster_check(*max, cli.format),
    }
}

fn enumerate(m: u32, format: Format) -> Result<Outcome, Failure> {
    let tuples = enumerate_tuples(m)?;
    let doc = EnumerateDoc {
        schema_version: SCHEMA_VERSION,
        m,
        count: tuples.len(),
        tuples: tuples
            .iter()
            .map(|p| {
                let (e1, e2) = p.dim_vector();
                EnumeratedTuple { entries: p.entries().to_vec(), e1, e2 }
            })
            .collect(),
    };
    let text = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = format!("m = {}: {} tuples\n", m, doc.count);
            for (p, t) in tuples.iter().zip(&doc.tuples) {
                writeln!(s, "{}  e = ({},{})", p, t.e1, t.e2).unwrap();
            }
            s
        }
    };
    Ok(Outcome { text, passed: true })
}

fn matrices(m: u32, p: &str, jk: Option<(u32, u32)>, format: Format) -> Result<Outcome, Failure> {
    let p = parse_tuple(m, p)?;
    let a: Option<LabeledMatrix> = jk.map(|(j, k)| extract_a(&p, j, k)).transpose()?;
    let gens = generator_set(&p)?;
    let doc = MatricesDoc {
        schema_version: SCHEMA_VERSION,
        p: TupleDoc::from(&p),
        n2_full: MatrixDoc::from(&build_n2_full(&p)),
        n1: MatrixDoc::from(&n1(&p)),
        n2: MatrixDoc::from(&n2(&p)),
        s_prime: MatrixDoc::from(&build_s_prime(&p)),
        relations: gens
            .iter()
            .map(|g| RelationDoc { j: g.j, k: g.k, dhat: g.dhat.render(), leading: g.l.render() })
            .collect(),
        a: a.as_ref().map(MatrixDoc::from),
    };
    let text = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = format!("P = {}, m = {}\n", p, m);
            if p.entries().is_empty() {
                s.push_str("empty tuple: N1 and N2 have no rows\n");
            }
            let section = |s: &mut String, title: &str, mat: &MatrixDoc| {
                writeln!(s, "\n{} ({} x {})", title, mat.rows.len(), mat.cols.len()).unwrap();
                if !mat.rows.is_empty() {
                    s.push_str(&mat.render_text());
                }
            };
            section(&mut s, "N^(2)", &doc.n2_full);
            section(&mut s, "N1", &doc.n1);
            section(&mut s, "N2", &doc.n2);
            section(&mut s, "S'", &doc.s_prime);
            writeln!(s, "\nrelations ({})", doc.relations.len()).unwrap();
            for r in &doc.relations {
                writeln!(s, "D({},{}) = {}", r.j, r.k, r.dhat).unwrap();
            }
            if let (Some(mat), Some((j, k))) = (&doc.a, jk) {
                section(&mut s, &format!("A({},{})", j, k), mat);
            }
            s
        }
    };
    Ok(Outcome { text, passed: true })
}

fn verify(m: u32, p: Option<&str>, opts: &VerifyOptions, seed: u64, workers: usize, format: Format) -> Result<Outcome, Failure> {
    let tuples = match p {
        Some(s) => vec![parse_tuple(m, s)?],
        None => enumerate_tuples(m)?,
    };
    let results = verify_batch(&tuples, opts, seed, workers).map_err(Failure::Usage)?;
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        reports.push(ReportDoc::from(&r?));
    }
    let passed = reports.iter().all(|r| r.passed);
    let doc = VerifyDoc {
        schema_version: SCHEMA_VERSION,
        m,
        seed,
        passed,
        census: census_rows(&reports),
        reports,
    };
    let text = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = String::new();
            for r in &doc.reports {
                let p = r.p.to_tuple()?;
                let signs: Vec<String> = r
                    .jk
                    .iter()
                    .map(|c| match c.sign {
                        1 => format!("({},{})+", c.j, c.k),
                        -1 => format!("({},{})-", c.j, c.k),
                        _ => format!("({},{})!", c.j, c.k),
                    })
                    .collect();
                writeln!(
                    s,
                    "{} {}  e=({},{}) dim={}  jk=[{}]  rank {}/{}{}{}",
                    if r.passed { "ok  " } else { "FAIL" },
                    p,
                    r.census.e1,
                    r.census.e2,
                    r.census.dimension,
                    signs.join(" "),
                    r.trials.rank_exact,
                    r.trials.rank_trials,
                    if r.trials.decomposition_trials > 0 {
                        format!("  decomposition {}/{}", r.trials.decomposition_passed, r.trials.decomposition_trials)
                    } else {
                        String::new()
                    },
                    match &r.trials.minors {
                        Some(mm) => format!("  minors {} nonzero, {} outside", mm.nonzero, mm.outside),
                        None => String::new(),
                    },
                )
                .unwrap();
                for c in r.jk.iter().filter(|c| !c.matched) {
                    writeln!(s, "    det(A({},{})) - D = {}", c.j, c.k, c.difference.as_deref().unwrap_or("?")).unwrap();
                }
            }
            writeln!(s, "census:").unwrap();
            for c in &doc.census {
                let dims: Vec<String> = c.dimensions.iter().map(|(d, n)| format!("{}x dim {}", n, d)).collect();
                writeln!(s, "  e=({},{}) {} cells: {}", c.e1, c.e2, c.count, dims.join(", ")).unwrap();
            }
            writeln!(
                s,
                "{} tuples, {} failed: {}",
                doc.reports.len(),
                doc.reports.iter().filter(|r| !r.passed).count(),
                if passed { "PASS" } else { "FAIL" }
            )
            .unwrap();
            s
        }
    };
    Ok(Outcome { text, passed })
}

enum Source {
    Ones,
    Random(u64),
    File(String),
}

fn subrep<F: Eliminate + FieldText>(p: &IndexTuple, source: &Source, field: &str, format: Format) -> Result<Outcome, Failure> {
    let b = match source {
        Source::Ones => ones_b_assignment::<F>(p),
        Source::Random(seed) => random_b_assignment::<F, _>(p, &mut tuple_rng(*seed, p)),
        Source::File(text) => crate::format::parse_assignment::<F>(text).map_err(Failure::Usage)?,
    };
    let cp = solve_cell_point(p, &b)?;
    let check = check_subrepresentation(&cp)?;
    let solved: Vec<Var> = a_variables(p);
    let doc = CellPointDoc::new(field, &cp, &solved, &check);
    let text = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = format!("P = {}, m = {}, field {}\n", p, p.m(), field);
            writeln!(s, "solved:").unwrap();
            for v in &doc.solved {
                writeln!(s, "  {} = {}", v, doc.assignment[v]).unwrap();
            }
            writeln!(s, "free:").unwrap();
            for (v, x) in doc.assignment.iter().filter(|(v, _)| !doc.solved.contains(v)) {
                writeln!(s, "  {} = {}", v, x).unwrap();
            }
            writeln!(s, "\nN1 ({} x {})", doc.n1.rows.len(), doc.n1.cols.len()).unwrap();
            s.push_str(&doc.n1.render_text());
            writeln!(s, "\nN2 ({} x {})", doc.n2.rows.len(), doc.n2.cols.len()).unwrap();
            s.push_str(&doc.n2.render_text());
            let c = &doc.check;
            writeln!(s, "\nrank N1 = {} (e1 = {}), rank N2 = {} (e2 = {})", c.rank_n1, c.e1, c.rank_n2, c.e2).unwrap();
            writeln!(
                s,
                "images contained: {} {}, relations vanish: {}",
                c.first_image_contained, c.second_image_contained, c.relations_vanish
            )
            .unwrap();
            writeln!(s, "subrepresentation: {}", if c.ok { "yes" } else { "NO" }).unwrap();
            s
        }
    };
    Ok(Outcome { text, passed: check.ok })
}

fn cluster_check(max: u32, format: Format) -> Result<Outcome, Failure> {
    let mut rows = Vec::new();
    for m in 3..=max {
        let x = cluster_variable(m)?;
        let xm = x_of_m(m)?;
        rows.push(ClusterRowDoc {
            m,
            equal: x == xm,
            x_m: x.to_string(),
            x_of_m: xm.to_string(),
            at_ones: x.at_ones().to_string(),
        });
    }
    let passed = rows.iter().all(|r| r.equal);
    let doc = ClusterCheckDoc { schema_version: SCHEMA_VERSION, max, passed, rows };
    let text = match format {
        Format::Json => json(&doc),
        Format::Text => {
            let mut s = String::new();
            for r in &doc.rows {
                writeln!(s, "m = {:>2}  {}  x_m(1,1) = {}", r.m, if r.equal { "equal" } else { "DIFFER" }, r.at_ones).unwrap();
            }
            writeln!(s, "{} equalities checked: {}", doc.rows.len(), if passed { "PASS" } else { "FAIL" }).unwrap();
            s
        }
    };
    Ok(Outcome { text, passed })
}

/// Parse arguments, run, print; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run_command(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if o.passed {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            EXIT_USAGE
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "verification error: {}", msg);
            EXIT_MISMATCH
        }
    }
}
