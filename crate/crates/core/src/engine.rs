//! Verification of the cell identities and explicit subrepresentations.
//!
//! * `det(A^P_{j,k}) = ±D-hat^P_{j,k}` exactly, per pair.
//! * `J(P) = K(P)`: random `F_q` cell points must give `rank N_1 = e_1`, the
//!   quadratic decomposition of minors is replayed for small `m`, and every
//!   `(e_1+1)`-minor can be reduced to zero modulo the triangular generators.
//! * Cell points: free values for the `B`-variables, the `A`-variables solved
//!   from `D-hat = 0` in solving order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand_core::RngCore;

use crate::combinatorics::{enumerate_tuples, IndexTuple};
use crate::field::{Field, Fq};
use crate::linalg::{det_symbolic, evaluate_matrix, minors, Eliminate, NumericMatrix};
use crate::matrices::{extract_a, general_submatrix, n1, n2, strip_zero_cols, LabeledMatrix, RowLabel};
use crate::poly::{Kind, Poly, Var};
use crate::relations::{generator_set, solving_order, RelationPoly};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JkCheck {
    pub j: u32,
    pub k: u32,
    /// `+1` or `-1` when `det(A) = sign * D-hat`, `0` on a mismatch.
    pub sign: i8,
    pub matched: bool,
    /// `det(A) - D-hat` on a mismatch.
    pub difference: Option<Poly>,
}

/// Compare `det(A^P_{j,k})` with the given relations.
pub fn verify_det_against(p: &IndexTuple, gens: &[RelationPoly]) -> Result<Vec<JkCheck>> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let det = det_symbolic(&extract_a(p, g.j, g.k)?)?;
        let check = if det == g.dhat {
            JkCheck { j: g.j, k: g.k, sign: 1, matched: true, difference: None }
        } else if det == -&g.dhat {
            JkCheck { j: g.j, k: g.k, sign: -1, matched: true, difference: None }
        } else {
            JkCheck {
                j: g.j,
                k: g.k,
                sign: 0,
                matched: false,
                difference: Some(&det - &g.dhat),
            }
        };
        out.push(check);
    }
    Ok(out)
}

pub fn verify_det_identity(p: &IndexTuple) -> Result<Vec<JkCheck>> {
    verify_det_against(p, &generator_set(p)?)
}

/// Every variable occurring in `N_1(P)`.
pub fn w_variables(p: &IndexTuple) -> BTreeSet<Var> {
    n1(p).entries.iter().flatten().flat_map(Poly::variables).collect()
}

/// The solved variables `x(j,k)`, `(j,k)` in JK.
pub fn a_variables(p: &IndexTuple) -> Vec<Var> {
    p.jk_set().iter().map(|q| Var::x(q.j, q.k)).collect()
}

/// The free variables: `W(P)` minus the solved ones.
pub fn b_variables(p: &IndexTuple) -> Vec<Var> {
    let a: BTreeSet<Var> = a_variables(p).into_iter().collect();
    w_variables(p).into_iter().filter(|v| !a.contains(v)).collect()
}

/// Dimension of the cell of `P`: the number of free variables.
pub fn cell_dimension(p: &IndexTuple) -> usize {
    b_variables(p).len()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellPoint<F> {
    pub p: IndexTuple,
    pub assignment: BTreeMap<Var, F>,
    pub n1: NumericMatrix<F>,
    pub n2: NumericMatrix<F>,
}

impl<F: Eliminate> CellPoint<F> {
    /// Evaluate `N_1`, `N_2` at a full assignment without solving anything.
    pub fn from_assignment(p: &IndexTuple, assignment: BTreeMap<Var, F>) -> Result<CellPoint<F>> {
        let n1m = evaluate_matrix(&n1(p), &assignment)?;
        let n2m = evaluate_matrix(&n2(p), &assignment)?;
        Ok(CellPoint {
            p: p.clone(),
            assignment,
            n1: n1m,
            n2: n2m,
        })
    }
}

/// Fill in the `A`-variables from `D-hat_{j,k} = 0`, walking the solving order.
pub fn solve_cell_point<F: Eliminate>(
    p: &IndexTuple,
    b_assignment: &BTreeMap<Var, F>,
) -> Result<CellPoint<F>> {
    let expected: BTreeSet<Var> = b_variables(p).into_iter().collect();
    let given: BTreeSet<Var> = b_assignment.keys().copied().collect();
    if expected != given {
        let missing: Vec<Var> = expected.difference(&given).copied().collect();
        let extra: Vec<Var> = given.difference(&expected).copied().collect();
        return Err(Error::AssignmentDomain(alloc::format!(
            "missing {:?}, unexpected {:?}",
            missing, extra
        )));
    }
    let gens = generator_set(p)?;
    let by_pair: BTreeMap<(u32, u32), &RelationPoly> = gens.iter().map(|g| ((g.j, g.k), g)).collect();
    let mut assignment = b_assignment.clone();
    for (j, k) in solving_order(&gens)? {
        let g = by_pair[&(j, k)];
        let v = Var::x(j, k);
        let (c, rest) = g
            .dhat
            .split_linear(v)
            .ok_or_else(|| Error::Internal(alloc::format!("{} occurs nonlinearly in D-hat({},{})", v, j, k)))?;
        let inv = F::from_bigint(&c)
            .inv()
            .ok_or_else(|| Error::Internal(alloc::format!("{} does not occur in D-hat({},{})", v, j, k)))?;
        let r = rest.evaluate(&assignment)?;
        assignment.insert(v, r.neg().mul(&inv));
    }
    CellPoint::from_assignment(p, assignment)
}

/// Uniformly random values for the free variables.
pub fn random_b_assignment<F: Field, R: RngCore + ?Sized>(p: &IndexTuple, rng: &mut R) -> BTreeMap<Var, F> {
    b_variables(p).into_iter().map(|v| (v, F::random(rng))).collect()
}

/// The constant assignment `v -> 1` on the free variables.
pub fn ones_b_assignment<F: Field>(p: &IndexTuple) -> BTreeMap<Var, F> {
    b_variables(p).into_iter().map(|v| (v, F::one())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubrepCheck {
    pub ok: bool,
    pub e1: usize,
    pub e2: usize,
    pub rank_n1: usize,
    pub rank_n2: usize,
    /// Row space of `N_2 (I | 0)` inside that of `N_1`.
    pub first_image_contained: bool,
    /// Row space of `N_2 (0 | I)` inside that of `N_1`.
    pub second_image_contained: bool,
    pub relations_vanish: bool,
}

/// Whether the numeric `N_1`, `N_2` span a subrepresentation of dimension
/// `(e_1, e_2)`.
pub fn check_subrepresentation<F: Eliminate>(cp: &CellPoint<F>) -> Result<SubrepCheck> {
    let (e1, e2) = cp.p.dim_vector();
    let rank_n1 = cp.n1.rank();
    let rank_n2 = cp.n2.rank();
    let ncols = cp.p.m() as usize - 2;
    let shifted = |leading: bool| -> Vec<Vec<F>> {
        cp.n2
            .entries
            .iter()
            .map(|row| {
                let mut r = Vec::with_capacity(ncols);
                if leading {
                    r.push(F::zero());
                }
                r.extend(row.iter().cloned());
                if !leading {
                    r.push(F::zero());
                }
                r
            })
            .collect()
    };
    let contained = |img: Vec<Vec<F>>| {
        let mut stacked = cp.n1.entries.clone();
        stacked.extend(img);
        F::rank_of(&stacked, ncols) == rank_n1
    };
    let first = contained(shifted(false));
    let second = contained(shifted(true));
    let mut vanish = true;
    for g in generator_set(&cp.p)? {
        if !g.dhat.evaluate(&cp.assignment)?.is_zero() {
            vanish = false;
        }
    }
    Ok(SubrepCheck {
        ok: rank_n1 == e1 as usize && rank_n2 == e2 as usize && first && second && vanish,
        e1: e1 as usize,
        e2: e2 as usize,
        rank_n1,
        rank_n2,
        first_image_contained: first,
        second_image_contained: second,
        relations_vanish: vanish,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankTrials {
    pub trials: usize,
    /// Trials with `rank N_1 = e_1` exactly.
    pub exact: usize,
    /// Ranks seen in trials with `rank N_1 > e_1`.
    pub above: Vec<usize>,
    /// Ranks seen in trials with `rank N_1 < e_1`.
    pub below: Vec<usize>,
}

impl RankTrials {
    pub fn passed(&self) -> bool {
        self.exact == self.trials
    }
}

/// Random `F_q` cell points; `rank N_1` compared with `e_1`.
pub fn rank_trials<R: RngCore + ?Sized>(p: &IndexTuple, trials: usize, rng: &mut R) -> Result<RankTrials> {
    let e1 = p.dim_vector().0 as usize;
    let mut out = RankTrials { trials, ..Default::default() };
    for _ in 0..trials {
        let b = random_b_assignment::<Fq, R>(p, rng);
        let cp = solve_cell_point(p, &b)?;
        let r = cp.n1.rank();
        match r.cmp(&e1) {
            core::cmp::Ordering::Equal => out.exact += 1,
            core::cmp::Ordering::Greater => out.above.push(r),
            core::cmp::Ordering::Less => out.below.push(r),
        }
    }
    Ok(out)
}

/// `N_1(P)` with its identically zero columns removed.
pub fn n1_nonzero(p: &IndexTuple) -> LabeledMatrix {
    strip_zero_cols(&n1(p))
}

/// Number of rows and columns to delete from `N_1(P)` (zero columns already
/// removed) to reach an `(e_1+1)`-minor; `None` if that minor does not exist.
pub fn decomposition_shape(p: &IndexTuple) -> Option<(usize, usize)> {
    let m = n1_nonzero(p);
    let side = p.dim_vector().0 as usize + 1;
    Some((m.nrows().checked_sub(side)?, m.ncols().checked_sub(side)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub remove_rows: Vec<RowLabel>,
    pub remove_cols: Vec<u32>,
    pub lhs: Poly,
    /// `det(A_{j,k}) * det(N_1(S_r' + j; S_c' + k+1))`, zero when `j` or `k+1`
    /// is already removed.
    pub terms: Vec<((u32, u32), Poly)>,
    /// Signs making `lhs = sum sign * term`, if any exist.
    pub signs: Option<Vec<i8>>,
}

/// Replay `det N_1(S_r'; S_c') = sum ± det(A_{j,k}) det N_1(S_r' + j; S_c' + k+1)`
/// with the signs found by exhaustive search.
pub fn decomposition_replay(p: &IndexTuple, remove_rows: &[RowLabel], remove_cols: &[u32]) -> Result<Decomposition> {
    let m = n1_nonzero(p);
    let lhs = det_symbolic(&general_submatrix(&m, remove_rows, remove_cols)?)?;
    let mut terms = Vec::new();
    for q in p.jk_set() {
        let row = RowLabel::under(q.j);
        let col = q.k + 1;
        let term = if remove_rows.contains(&row) || remove_cols.contains(&col) {
            Poly::zero()
        } else {
            let mut rr = remove_rows.to_vec();
            rr.push(row);
            let mut cc = remove_cols.to_vec();
            cc.push(col);
            let a = det_symbolic(&extract_a(p, q.j, q.k)?)?;
            let b = det_symbolic(&general_submatrix(&m, &rr, &cc)?)?;
            &a * &b
        };
        terms.push(((q.j, q.k), term));
    }
    let live: Vec<usize> = (0..terms.len()).filter(|&i| !terms[i].1.is_zero()).collect();
    let mut signs = None;
    for mask in 0u64..(1u64 << live.len()) {
        let mut sum = Poly::zero();
        for (bit, &i) in live.iter().enumerate() {
            if mask >> bit & 1 == 0 {
                sum += &terms[i].1;
            } else {
                sum -= &terms[i].1;
            }
        }
        if sum == lhs {
            let mut s = alloc::vec![0i8; terms.len()];
            for (bit, &i) in live.iter().enumerate() {
                s[i] = if mask >> bit & 1 == 0 { 1 } else { -1 };
            }
            signs = Some(s);
            break;
        }
    }
    Ok(Decomposition {
        remove_rows: remove_rows.to_vec(),
        remove_cols: remove_cols.to_vec(),
        lhs,
        terms,
        signs,
    })
}

/// `k` distinct indices below `n`, uniformly, in increasing order.
fn sample_subset<R: RngCore + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + (rng.next_u64() % (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionTrials {
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<(Vec<RowLabel>, Vec<u32>)>,
}

/// Replay the decomposition at random `(S_r', S_c')`.
pub fn random_decomposition_trials<R: RngCore + ?Sized>(
    p: &IndexTuple,
    trials: usize,
    rng: &mut R,
) -> Result<DecompositionTrials> {
    let mut out = DecompositionTrials::default();
    let Some((nr, nc)) = decomposition_shape(p) else {
        return Ok(out);
    };
    let m = n1_nonzero(p);
    for _ in 0..trials {
        let rows: Vec<RowLabel> = sample_subset(rng, m.nrows(), nr)
            .into_iter()
            .map(|i| m.row_labels[i])
            .collect();
        let cols: Vec<u32> = sample_subset(rng, m.ncols(), nc)
            .into_iter()
            .map(|i| m.col_labels[i])
            .collect();
        let d = decomposition_replay(p, &rows, &cols)?;
        out.trials += 1;
        if d.signs.is_some() {
            out.passed += 1;
        } else {
            out.failures.push((rows, cols));
        }
    }
    Ok(out)
}

/// Each `A`-variable written in the free variables, from the triangular
/// system `D-hat = 0`.
pub fn a_substitution(p: &IndexTuple) -> Result<BTreeMap<Var, Poly>> {
    let gens = generator_set(p)?;
    let by_pair: BTreeMap<(u32, u32), &RelationPoly> = gens.iter().map(|g| ((g.j, g.k), g)).collect();
    let mut sub = BTreeMap::new();
    for (j, k) in solving_order(&gens)? {
        let v = Var::x(j, k);
        let (c, rest) = by_pair[&(j, k)]
            .dhat
            .split_linear(v)
            .ok_or_else(|| Error::Internal(alloc::format!("{} occurs nonlinearly", v)))?;
        if c.abs() != BigInt::one() {
            return Err(Error::Internal(alloc::format!("coefficient {} of {}", c, v)));
        }
        let e = rest.substitute(&sub).scale(&-c);
        sub.insert(v, e);
    }
    Ok(sub)
}

/// Membership in `K(P)`: the generators are linear in distinct leading
/// variables with unit coefficients, so `f` lies in `K(P)` exactly when
/// eliminating the `A`-variables sends it to zero.
pub fn in_k(f: &Poly, sub: &BTreeMap<Var, Poly>) -> bool {
    f.substitute(sub).is_zero()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Membership {
    pub minors: usize,
    pub nonzero_minors: usize,
    pub outside: usize,
}

/// Reduce every `(e_1+1)`-minor of `N_1(P)` modulo `K(P)`.
pub fn minors_in_k(p: &IndexTuple) -> Result<Membership> {
    let mut out = Membership::default();
    let m = n1_nonzero(p);
    let side = p.dim_vector().0 as usize + 1;
    if side > m.nrows().min(m.ncols()) {
        return Ok(out);
    }
    let sub = a_substitution(p)?;
    for minor in minors(&m, side)? {
        out.minors += 1;
        if minor.det.is_zero() {
            continue;
        }
        out.nonzero_minors += 1;
        if !in_k(&minor.det, &sub) {
            out.outside += 1;
        }
    }
    Ok(out)
}

/// Distinct free values give distinct subrepresentations over `Q`, on `pairs`
/// random pairs of assignments. A subrepresentation is the pair of row spaces
/// of `N_2` and `N_1`; `N_1` alone can be constant on a cell.
pub fn injectivity_spot_check<R: RngCore + ?Sized>(p: &IndexTuple, pairs: usize, rng: &mut R) -> Result<bool> {
    use num_rational::BigRational;
    if b_variables(p).is_empty() {
        return Ok(true);
    }
    let spaces = |cp: &CellPoint<BigRational>| {
        (
            crate::linalg::rref(&cp.n2.entries, p.m() as usize - 3),
            crate::linalg::rref(&cp.n1.entries, p.m() as usize - 2),
        )
    };
    for _ in 0..pairs {
        let a = random_b_assignment::<BigRational, R>(p, rng);
        let mut b = random_b_assignment::<BigRational, R>(p, rng);
        while a == b {
            b = random_b_assignment::<BigRational, R>(p, rng);
        }
        if spaces(&solve_cell_point(p, &a)?) == spaces(&solve_cell_point(p, &b)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub e1: u32,
    pub e2: u32,
    pub dimension: usize,
}

pub fn census_entry(p: &IndexTuple) -> CensusEntry {
    let (e1, e2) = p.dim_vector();
    CensusEntry { e1, e2, dimension: cell_dimension(p) }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusRow {
    pub count: usize,
    /// Number of cells of each dimension.
    pub dimensions: BTreeMap<usize, usize>,
}

/// Cells grouped by dimension vector.
pub fn cell_census(m: u32) -> Result<BTreeMap<(u32, u32), CensusRow>> {
    let mut out: BTreeMap<(u32, u32), CensusRow> = BTreeMap::new();
    for p in enumerate_tuples(m)? {
        let c = census_entry(&p);
        let row = out.entry((c.e1, c.e2)).or_default();
        row.count += 1;
        *row.dimensions.entry(c.dimension).or_insert(0) += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Random `F_q` cell points per tuple.
    pub trials: usize,
    /// Random decomposition replays per tuple.
    pub decomposition_trials: usize,
    /// Reduce every `(e_1+1)`-minor modulo `K(P)`.
    pub membership: bool,
    /// Perturb the first relation before comparing; a negative control.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20,
            decomposition_trials: 0,
            membership: false,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub p: IndexTuple,
    pub jk: Vec<JkCheck>,
    pub rank: RankTrials,
    pub decomposition: DecompositionTrials,
    pub membership: Option<Membership>,
    pub census: CensusEntry,
    /// Pairs removed from JK only by the condition `k` not in `A(P)`.
    pub jk_excluded_by_a: usize,
    /// Some relation polynomial is identically zero.
    pub zero_relation: bool,
    /// Some `y`-variable would have to be solved for.
    pub y_in_a: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.jk.iter().all(|c| c.matched)
            && self.rank.passed()
            && self.decomposition.failures.is_empty()
            && self.membership.as_ref().is_none_or(|m| m.outside == 0)
            && !self.zero_relation
            && !self.y_in_a
    }
}

pub fn verify_tuple<R: RngCore + ?Sized>(p: &IndexTuple, opts: &VerifyOptions, rng: &mut R) -> Result<VerificationReport> {
    let mut gens = generator_set(p)?;
    let zero_relation = crate::relations::has_zero_relation(&gens);
    if opts.inject_fault {
        if let Some(g) = gens.first_mut() {
            g.dhat += &Poly::one();
        }
    }
    let jk = verify_det_against(p, &gens)?;
    let rank = rank_trials(p, opts.trials, rng)?;
    let decomposition = random_decomposition_trials(p, opts.decomposition_trials, rng)?;
    let membership = if opts.membership { Some(minors_in_k(p)?) } else { None };
    Ok(VerificationReport {
        p: p.clone(),
        jk,
        rank,
        decomposition,
        membership,
        census: census_entry(p),
        jk_excluded_by_a: p.jk_excluded_by_a().len(),
        zero_relation,
        y_in_a: a_variables(p).iter().any(|v| v.kind == Kind::Y),
    })
}
