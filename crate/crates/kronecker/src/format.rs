//! JSON documents and plain-text rendering for the CLI.
//!
//! Every document carries `schema_version`; field names are stable within a
//! version. Polynomials and field elements are strings in the textual
//! polynomial syntax (`x[1,3] - x[2,4]^2`), which `Poly::parse` reads back.

use std::collections::BTreeMap;
use std::fmt::Display;

use kronecker_core::combinatorics::IndexTuple;
use kronecker_core::engine::{CellPoint, SubrepCheck, VerificationReport};
use kronecker_core::field::{rational_to_string, Fq, Ring};
use kronecker_core::linalg::NumericMatrix;
use kronecker_core::matrices::LabeledMatrix;
use kronecker_core::poly::{Poly, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleDoc {
    pub m: u32,
    pub entries: Vec<u32>,
}

impl From<&IndexTuple> for TupleDoc {
    fn from(p: &IndexTuple) -> Self {
        TupleDoc { m: p.m(), entries: p.entries().to_vec() }
    }
}

impl TupleDoc {
    pub fn to_tuple(&self) -> kronecker_core::Result<IndexTuple> {
        IndexTuple::new(self.m, self.entries.clone())
    }
}

/// Row labels use `^a` (overline), `_a` (underline), `a'` (primed), `a` (plain).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: Vec<String>,
    pub cols: Vec<u32>,
    pub entries: Vec<Vec<String>>,
}

impl From<&LabeledMatrix> for MatrixDoc {
    fn from(m: &LabeledMatrix) -> Self {
        MatrixDoc {
            rows: m.row_labels.iter().map(|l| l.to_string()).collect(),
            cols: m.col_labels.clone(),
            entries: m
                .entries
                .iter()
                .map(|r| r.iter().map(Poly::render).collect())
                .collect(),
        }
    }
}

/// Uniform string form of the two coefficient fields.
pub trait FieldText: Ring {
    fn text(&self) -> String;
    fn parse_text(s: &str) -> Option<Self>;
}

impl FieldText for Fq {
    fn text(&self) -> String {
        self.value().to_string()
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.trim().parse::<BigInt>().ok().map(|n| Fq::from_bigint(&n))
    }
}

impl FieldText for BigRational {
    fn text(&self) -> String {
        rational_to_string(self)
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.trim().parse::<BigRational>().ok()
    }
}

impl MatrixDoc {
    pub fn numeric<F: FieldText>(m: &NumericMatrix<F>) -> Self {
        MatrixDoc {
            rows: m.row_labels.iter().map(|l| l.to_string()).collect(),
            cols: m.col_labels.clone(),
            entries: m
                .entries
                .iter()
                .map(|r| r.iter().map(FieldText::text).collect())
                .collect(),
        }
    }

    pub fn render_text(&self) -> String {
        render_grid(&self.rows, &self.cols, &self.entries)
    }
}

/// Aligned grid with `|` separators, labels on the left and on top.
pub fn render_grid<L: Display, C: Display>(rows: &[L], cols: &[C], cells: &[Vec<String>]) -> String {
    let label_w = rows.iter().map(|l| l.to_string().len()).max().unwrap_or(0);
    let mut widths: Vec<usize> = cols.iter().map(|c| c.to_string().len()).collect();
    for row in cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = " ".repeat(label_w);
    for (c, w) in cols.iter().zip(&widths) {
        s.push_str(&format!(" | {:>w$}", c.to_string(), w = *w));
    }
    s.push('\n');
    for (label, row) in rows.iter().zip(cells) {
        s.push_str(&format!("{:>w$}", label.to_string(), w = label_w));
        for (c, w) in row.iter().zip(&widths) {
            s.push_str(&format!(" | {:>w$}", c, w = *w));
        }
        s.push('\n');
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedTuple {
    pub entries: Vec<u32>,
    pub e1: u32,
    pub e2: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateDoc {
    pub schema_version: u32,
    pub m: u32,
    pub count: usize,
    pub tuples: Vec<EnumeratedTuple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub j: u32,
    pub k: u32,
    pub dhat: String,
    pub leading: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatricesDoc {
    pub schema_version: u32,
    #[serde(rename = "P")]
    pub p: TupleDoc,
    pub n2_full: MatrixDoc,
    pub n1: MatrixDoc,
    pub n2: MatrixDoc,
    pub s_prime: MatrixDoc,
    pub relations: Vec<RelationDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JkDoc {
    pub j: u32,
    pub k: u32,
    /// `1` or `-1` on a match, `0` otherwise.
    pub sign: i8,
    #[serde(rename = "match")]
    pub matched: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub difference: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialsDoc {
    pub rank_trials: usize,
    pub rank_exact: usize,
    pub ranks_above: Vec<usize>,
    pub ranks_below: Vec<usize>,
    pub decomposition_trials: usize,
    pub decomposition_passed: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minors: Option<MembershipDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipDoc {
    pub minors: usize,
    pub nonzero: usize,
    pub outside: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusDoc {
    pub e1: u32,
    pub e2: u32,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    #[serde(rename = "P")]
    pub p: TupleDoc,
    pub passed: bool,
    pub jk: Vec<JkDoc>,
    pub trials: TrialsDoc,
    pub census: CensusDoc,
    pub jk_excluded_by_a: usize,
    pub zero_relation: bool,
    pub y_in_a: bool,
}

impl From<&VerificationReport> for ReportDoc {
    fn from(r: &VerificationReport) -> Self {
        ReportDoc {
            p: TupleDoc::from(&r.p),
            passed: r.passed(),
            jk: r
                .jk
                .iter()
                .map(|c| JkDoc {
                    j: c.j,
                    k: c.k,
                    sign: c.sign,
                    matched: c.matched,
                    difference: c.difference.as_ref().map(Poly::render),
                })
                .collect(),
            trials: TrialsDoc {
                rank_trials: r.rank.trials,
                rank_exact: r.rank.exact,
                ranks_above: r.rank.above.clone(),
                ranks_below: r.rank.below.clone(),
                decomposition_trials: r.decomposition.trials,
                decomposition_passed: r.decomposition.passed,
                minors: r.membership.as_ref().map(|m| MembershipDoc {
                    minors: m.minors,
                    nonzero: m.nonzero_minors,
                    outside: m.outside,
                }),
            },
            census: CensusDoc {
                e1: r.census.e1,
                e2: r.census.e2,
                dimension: r.census.dimension,
            },
            jk_excluded_by_a: r.jk_excluded_by_a,
            zero_relation: r.zero_relation,
            y_in_a: r.y_in_a,
        }
    }
}

/// Cells per dimension vector, and cells per dimension inside it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRowDoc {
    pub e1: u32,
    pub e2: u32,
    pub count: usize,
    pub dimensions: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub schema_version: u32,
    pub m: u32,
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<ReportDoc>,
    pub census: Vec<CensusRowDoc>,
}

/// Group the per-tuple census entries by dimension vector.
pub fn census_rows(reports: &[ReportDoc]) -> Vec<CensusRowDoc> {
    let mut rows: BTreeMap<(u32, u32), CensusRowDoc> = BTreeMap::new();
    for r in reports {
        let c = &r.census;
        let row = rows.entry((c.e1, c.e2)).or_insert_with(|| CensusRowDoc {
            e1: c.e1,
            e2: c.e2,
            count: 0,
            dimensions: BTreeMap::new(),
        });
        row.count += 1;
        *row.dimensions.entry(c.dimension).or_insert(0) += 1;
    }
    rows.into_values().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubrepDoc {
    pub ok: bool,
    pub e1: usize,
    pub e2: usize,
    pub rank_n1: usize,
    pub rank_n2: usize,
    pub first_image_contained: bool,
    pub second_image_contained: bool,
    pub relations_vanish: bool,
}

impl From<&SubrepCheck> for SubrepDoc {
    fn from(c: &SubrepCheck) -> Self {
        SubrepDoc {
            ok: c.ok,
            e1: c.e1,
            e2: c.e2,
            rank_n1: c.rank_n1,
            rank_n2: c.rank_n2,
            first_image_contained: c.first_image_contained,
            second_image_contained: c.second_image_contained,
            relations_vanish: c.relations_vanish,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellPointDoc {
    pub schema_version: u32,
    #[serde(rename = "P")]
    pub p: TupleDoc,
    /// `rational` or `fq`.
    pub field: String,
    pub assignment: BTreeMap<String, String>,
    pub solved: Vec<String>,
    pub n1: MatrixDoc,
    pub n2: MatrixDoc,
    pub check: SubrepDoc,
}

impl CellPointDoc {
    pub fn new<F: FieldText>(field: &str, cp: &CellPoint<F>, solved: &[Var], check: &SubrepCheck) -> Self {
        CellPointDoc {
            schema_version: SCHEMA_VERSION,
            p: TupleDoc::from(&cp.p),
            field: field.to_string(),
            assignment: cp.assignment.iter().map(|(v, x)| (v.to_string(), x.text())).collect(),
            solved: solved.iter().map(|v| v.to_string()).collect(),
            n1: MatrixDoc::numeric(&cp.n1),
            n2: MatrixDoc::numeric(&cp.n2),
            check: SubrepDoc::from(check),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRowDoc {
    pub m: u32,
    pub equal: bool,
    pub x_m: String,
    pub x_of_m: String,
    pub at_ones: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterCheckDoc {
    pub schema_version: u32,
    pub max: u32,
    pub passed: bool,
    pub rows: Vec<ClusterRowDoc>,
}

/// Free-variable values read from an assignment file.
///
/// The file is a JSON object from variable names to values, for example
/// `{"x[2,3]": 1, "x[1,4]": "-2/3"}`; values are integers or rational strings.
pub fn parse_assignment<F: FieldText>(text: &str) -> Result<BTreeMap<Var, F>, String> {
    let raw: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| format!("assignment file: {}", e))?;
    let mut out = BTreeMap::new();
    for (name, value) in raw {
        let var = parse_var(&name)?;
        let s = match &value {
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => return Err(format!("value of {} must be an integer or a string, got {}", name, other)),
        };
        let x = F::parse_text(&s).ok_or_else(|| format!("cannot read value {:?} of {}", s, name))?;
        out.insert(var, x);
    }
    Ok(out)
}

pub fn parse_var(name: &str) -> Result<Var, String> {
    let p = Poly::parse(name).map_err(|e| format!("variable {:?}: {}", name, e))?;
    let vars = p.variables();
    match vars.iter().next() {
        Some(&v) if vars.len() == 1 && p == Poly::var(v) => Ok(v),
        _ => Err(format!("{:?} is not a single variable", name)),
    }
}
