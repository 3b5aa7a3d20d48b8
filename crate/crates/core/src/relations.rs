//! Leading-term sets, the maps `phi` on framed Fibonacci trees, and the
//! relation polynomials `D`, `D-hat` generating `K(P)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::IndexTuple;
use crate::linalg::rank_rational;
use crate::matrices::prime_row_columns;
use crate::poly::{Kind, Monomial, Poly, Var};
use crate::trees::{build_tree, weak_step, TreeVertex};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerms {
    pub j: u32,
    pub k: u32,
    pub vars: Vec<Var>,
}

/// `L^P(j,k)`.
///
/// Nonempty exactly when row `j` is a non-final row of its block, column
/// `k+1` is a non-pivot column carrying variables, and the block of `j`
/// precedes the gap of `k`. Then it is `{x(j,k), x(j+1,k+1)}`, or `{x(j,k)}`
/// in the last column `k = m-3`.
pub fn leading_terms(p: &IndexTuple, j: u32, k: u32) -> LeadingTerms {
    let mut out = LeadingTerms { j, k, vars: Vec::new() };
    if !p.s_rows().contains(&j) || !p.s_cols().contains(&(k + 1)) {
        return out;
    }
    let (Some(nu), Some(mu)) = (p.block_of_row(j), p.gap_of_col(k)) else {
        return out;
    };
    if nu > mu {
        return out;
    }
    out.vars.push(Var::x(j, k));
    if k < p.m() - 3 {
        out.vars.push(Var::x(j + 1, k + 1));
    }
    out
}

/// `phi_eta^(j,k)(v)`, a single variable or `1` at the plain root.
pub fn phi(p: &IndexTuple, eta: u8, j: u32, k: u32, v: &TreeVertex) -> Result<Poly> {
    let size = leading_terms(p, j, k).vars.len();
    if eta == 0 || eta as usize > size {
        return Err(Error::InvalidParameter(alloc::format!(
            "eta = {} with |L({},{})| = {}",
            eta, j, k, size
        )));
    }
    let i = |t: u32| p.i(t as i64);
    let alpha = v.depth();
    let ma = v.seq[alpha];
    if v.framed {
        let x = match alpha {
            0 if eta == 1 => Var::x(j, k),
            0 => Var::x(j + 1, k + 1),
            _ if weak_step(eta, alpha) => Var::x(j + 1, i(2 * ma) + 1),
            _ => Var::x(j, i(2 * ma + 1)),
        };
        return Ok(Poly::var(x));
    }
    if alpha == 0 {
        return Ok(Poly::one());
    }
    let x = if alpha == 1 {
        if eta == 1 {
            Var::x(i(2 * ma), k)
        } else {
            Var::x(i(2 * ma + 1) + 1, k + 1)
        }
    } else {
        let mp = v.seq[alpha - 1];
        if weak_step(eta, alpha) {
            Var::x(i(2 * ma), i(2 * mp + 1))
        } else {
            Var::x(i(2 * ma + 1) + 1, i(2 * mp) + 1)
        }
    };
    Ok(Poly::var(x))
}

/// `D^P_{j,k}`: over `eta` and the plain vertices `v` of `F_eta`, the sign
/// `(-1)^(eta-1)` times `phi(framed v)` times `phi` along the root path.
pub fn relation_d(p: &IndexTuple, j: u32, k: u32) -> Result<Poly> {
    let size = leading_terms(p, j, k).vars.len();
    if size == 0 {
        return Err(Error::EmptyRelation { j, k });
    }
    let nu = p.block_of_row(j).expect("j lies in a block");
    let mu = p.gap_of_col(k).expect("k lies in a gap");
    let mut total = Poly::zero();
    for eta in 1..=size as u8 {
        let tree = build_tree(eta, nu, mu, p.n())?;
        for v in tree.plain_vertices() {
            let mut term = phi(
                p,
                eta,
                j,
                k,
                &TreeVertex {
                    seq: v.seq.clone(),
                    framed: true,
                },
            )?;
            for len in 2..=v.seq.len() {
                let prefix = TreeVertex {
                    seq: v.seq[..len].to_vec(),
                    framed: false,
                };
                term = &term * &phi(p, eta, j, k, &prefix)?;
            }
            if eta == 1 {
                total += &term;
            } else {
                total -= &term;
            }
        }
    }
    Ok(total)
}

/// `D-hat^P_{j,k} = D^{P'}_{j,k} - sum_{t in A(P)} y(t+1,k+1) D^{P'}_{j,t}`
/// with `P' = reduce(P)`. Summands whose `y` is not an entry of `N_1(P)` or
/// whose leading-term set under `P'` is empty vanish.
pub fn relation_dhat(p: &IndexTuple, j: u32, k: u32) -> Result<Poly> {
    if leading_terms(p, j, k).vars.is_empty() {
        return Err(Error::EmptyRelation { j, k });
    }
    let a = p.a_set();
    if a.is_empty() {
        return relation_d(p, j, k);
    }
    let pr = p.reduce();
    let mut out = if leading_terms(&pr, j, k).vars.is_empty() {
        Poly::zero()
    } else {
        relation_d(&pr, j, k)?
    };
    for &t in &a {
        if !prime_row_columns(p, t).contains(&(k + 1)) {
            continue;
        }
        if leading_terms(&pr, j, t).vars.is_empty() {
            continue;
        }
        let d = relation_d(&pr, j, t)?;
        out -= &(&Poly::y(t + 1, k + 1) * &d);
    }
    Ok(out)
}

/// The expected linear part: `x(j,k) - x(j+1,k+1)`, or `x(j,k)` when the
/// leading-term set is a singleton.
pub fn expected_linear_part(p: &IndexTuple, j: u32, k: u32) -> Poly {
    let lt = leading_terms(p, j, k);
    match lt.vars.as_slice() {
        [a] => Poly::var(*a),
        [a, b] => &Poly::var(*a) - &Poly::var(*b),
        _ => Poly::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationPoly {
    pub j: u32,
    pub k: u32,
    pub d: Poly,
    pub dhat: Poly,
    pub l: Poly,
}

/// One relation per pair of `jk_set(P)`, in that order.
pub fn generator_set(p: &IndexTuple) -> Result<Vec<RelationPoly>> {
    let mut out = Vec::new();
    for q in p.jk_set() {
        let d = relation_d(p, q.j, q.k)?;
        let dhat = relation_dhat(p, q.j, q.k)?;
        let l = dhat.linear_part();
        out.push(RelationPoly {
            j: q.j,
            k: q.k,
            d,
            dhat,
            l,
        });
    }
    Ok(out)
}

/// Edges `(a -> b)` when `x(a)` occurs in `D-hat_b`, restricted to the given
/// term filter.
fn dependency_edges(
    gens: &[RelationPoly],
    keep: impl Fn(&Monomial) -> bool,
) -> BTreeMap<(u32, u32), BTreeSet<(u32, u32)>> {
    let pairs: BTreeSet<(u32, u32)> = gens.iter().map(|g| (g.j, g.k)).collect();
    let mut edges: BTreeMap<(u32, u32), BTreeSet<(u32, u32)>> = BTreeMap::new();
    for g in gens {
        edges.entry((g.j, g.k)).or_default();
        for (m, _) in g.dhat.terms() {
            if !keep(m) {
                continue;
            }
            for &(v, _) in m.pairs() {
                let key = (v.a, v.b);
                if v.kind == Kind::X && key != (g.j, g.k) && pairs.contains(&key) {
                    edges.entry(key).or_default().insert((g.j, g.k));
                }
            }
        }
    }
    edges
}

/// Stable topological sort by `(k, j)`; on a cycle returns a pair on it.
fn topo_sort(
    edges: &BTreeMap<(u32, u32), BTreeSet<(u32, u32)>>,
) -> core::result::Result<Vec<(u32, u32)>, (u32, u32)> {
    let mut indeg: BTreeMap<(u32, u32), usize> = edges.keys().map(|&k| (k, 0)).collect();
    for targets in edges.values() {
        for t in targets {
            *indeg.get_mut(t).expect("known node") += 1;
        }
    }
    // ready set ordered by (k, j)
    let mut ready: BTreeSet<(u32, u32)> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&(j, k), _)| (k, j))
        .collect();
    let mut out = Vec::new();
    while let Some((k, j)) = ready.pop_first() {
        out.push((j, k));
        for t in &edges[&(j, k)] {
            let d = indeg.get_mut(t).expect("known node");
            *d -= 1;
            if *d == 0 {
                ready.insert((t.1, t.0));
            }
        }
    }
    if out.len() < indeg.len() {
        let stuck = indeg
            .iter()
            .find(|(_, &d)| d > 0)
            .map(|(&k, _)| k)
            .expect("some node remains");
        return Err(stuck);
    }
    Ok(out)
}

/// An order in which each `D-hat_{j,k} = 0` can be solved for `x(j,k)`:
/// every other JK variable occurring in `D-hat_{j,k}`, linearly or not,
/// comes earlier.
pub fn solving_order(gens: &[RelationPoly]) -> Result<Vec<(u32, u32)>> {
    topo_sort(&dependency_edges(gens, |_| true))
        .map_err(|(j, k)| Error::PartialOrderViolation { j, k })
}

/// The order generated by nonlinear occurrences only; errors on a cycle.
pub fn nonlinear_order(gens: &[RelationPoly]) -> Result<Vec<(u32, u32)>> {
    topo_sort(&dependency_edges(gens, |m| m.degree() >= 2))
        .map_err(|(j, k)| Error::PartialOrderViolation { j, k })
}

/// `x(j,k)` and `x(j+1,k+1)` occur in `D-hat_{j,k}` only in its linear part.
pub fn leading_vars_linear(p: &IndexTuple, g: &RelationPoly) -> bool {
    let lt = leading_terms(p, g.j, g.k);
    let nl = g.dhat.nonlinear_part();
    lt.vars
        .iter()
        .all(|&v| g.dhat.degree_in(v) <= 1 && nl.degree_in(v) == 0)
}

/// The linear parts are linearly independent over `Q`.
pub fn linear_parts_independent(gens: &[RelationPoly]) -> bool {
    let vars: BTreeSet<Var> = gens.iter().flat_map(|g| g.l.variables()).collect();
    let vars: Vec<Var> = vars.into_iter().collect();
    let rows: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| {
            vars.iter()
                .map(|&v| BigRational::from_integer(g.l.coefficient(&Monomial::var(v))))
                .collect()
        })
        .collect();
    gens.is_empty() || rank_rational(&rows, vars.len()) == gens.len()
}

/// Whether some relation is identically zero.
pub fn has_zero_relation(gens: &[RelationPoly]) -> bool {
    gens.iter().any(|g| g.d.is_zero() || g.dhat.is_zero())
}

/// Coefficient of `x(j,k)` in `D-hat_{j,k}`.
pub fn pivot_coefficient(g: &RelationPoly) -> num_bigint::BigInt {
    let c = g.dhat.coefficient(&Monomial::var(Var::x(g.j, g.k)));
    debug_assert!(!c.is_zero());
    c
}
