//! The Fibonacci trees `F_1^(nu,mu)`, `F_2^(nu,mu)` and their framed versions.
//!
//! A vertex is a sequence `(m_0, ..., m_beta)` with `m_0 = mu` and entries in
//! `[nu, mu]`. In `F_1` the steps alternate `m_1 <= m_0`, `m_2 < m_1`,
//! `m_3 <= m_2`, ...; in `F_2` they alternate strict, weak, strict, ...

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub seq: Vec<u32>,
    pub framed: bool,
}

impl TreeVertex {
    /// `beta` for `(m_0, ..., m_beta)`.
    pub fn depth(&self) -> usize {
        self.seq.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct FibTree {
    pub eta: u8,
    pub nu: u32,
    pub mu: u32,
    pub vertices: Vec<TreeVertex>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

/// Whether the step to depth `alpha` allows equality.
pub fn weak_step(eta: u8, alpha: usize) -> bool {
    if eta == 1 {
        alpha % 2 == 1
    } else {
        alpha.is_multiple_of(2)
    }
}

/// The plain tree `F_eta^(nu,mu)`, children in descending order of the new entry.
pub fn build_tree(eta: u8, nu: u32, mu: u32, n: u32) -> Result<FibTree> {
    if eta != 1 && eta != 2 {
        return Err(Error::InvalidParameter(alloc::format!("eta = {}", eta)));
    }
    if nu == 0 || nu > mu || mu > n {
        return Err(Error::InvalidParameter(alloc::format!(
            "need 1 <= nu <= mu <= n, got nu = {}, mu = {}, n = {}",
            nu, mu, n
        )));
    }
    let max_len = 2 * n as usize;
    let mut tree = FibTree {
        eta,
        nu,
        mu,
        vertices: Vec::new(),
        parent: Vec::new(),
        children: Vec::new(),
    };
    let mut stack: Vec<(Vec<u32>, Option<usize>)> = alloc::vec![(alloc::vec![mu], None)];
    while let Some((seq, parent)) = stack.pop() {
        let id = tree.push(TreeVertex { seq: seq.clone(), framed: false }, parent);
        if seq.len() >= max_len {
            continue;
        }
        let last = *seq.last().expect("nonempty");
        let hi = if weak_step(eta, seq.len()) {
            Some(last)
        } else {
            last.checked_sub(1)
        };
        if let Some(hi) = hi {
            // push ascending so that descending children pop first
            for x in nu..=hi {
                let mut s = seq.clone();
                s.push(x);
                stack.push((s, Some(id)));
            }
        }
    }
    Ok(tree)
}

/// Add one framed leaf below every plain vertex.
pub fn frame(tree: &FibTree) -> FibTree {
    let mut out = FibTree {
        eta: tree.eta,
        nu: tree.nu,
        mu: tree.mu,
        vertices: Vec::new(),
        parent: Vec::new(),
        children: Vec::new(),
    };
    if tree.vertices.is_empty() {
        return out;
    }
    fn walk(src: &FibTree, v: usize, parent: Option<usize>, out: &mut FibTree) {
        let id = out.push(src.vertices[v].clone(), parent);
        if !src.vertices[v].framed {
            out.push(
                TreeVertex {
                    seq: src.vertices[v].seq.clone(),
                    framed: true,
                },
                Some(id),
            );
        }
        for &c in &src.children[v] {
            walk(src, c, Some(id), out);
        }
    }
    walk(tree, 0, None, &mut out);
    out
}

impl FibTree {
    fn push(&mut self, v: TreeVertex, parent: Option<usize>) -> usize {
        let id = self.vertices.len();
        self.vertices.push(v);
        self.parent.push(parent);
        self.children.push(Vec::new());
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        id
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn plain_vertices(&self) -> impl Iterator<Item = &TreeVertex> {
        self.vertices.iter().filter(|v| !v.framed)
    }

    pub fn contains_seq(&self, seq: &[u32]) -> bool {
        self.vertices.iter().any(|v| !v.framed && v.seq == seq)
    }

    /// Indented listing, framed leaves marked with `~`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        fn walk(t: &FibTree, v: usize, depth: usize, s: &mut String) {
            for _ in 0..depth {
                s.push_str("  ");
            }
            let vx = &t.vertices[v];
            if vx.framed {
                s.push('~');
            }
            s.push('(');
            for (i, x) in vx.seq.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{}", x);
            }
            s.push_str(")\n");
            for &c in &t.children[v] {
                walk(t, c, depth + 1, s);
            }
        }
        if !self.vertices.is_empty() {
            walk(self, 0, 0, &mut s);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn seqs(t: &FibTree) -> BTreeSet<Vec<u32>> {
        t.plain_vertices().map(|v| v.seq.clone()).collect()
    }

    /// Brute force over all sequences in [nu, mu] checking the chain directly.
    fn oracle(eta: u8, nu: u32, mu: u32, n: u32) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        let width = (mu - nu + 1) as usize;
        for len in 1..=(2 * n as usize) {
            let total = width.pow(len as u32 - 1);
            for code in 0..total {
                let mut c = code;
                let mut s = vec![mu];
                for _ in 1..len {
                    s.push(nu + (c % width) as u32);
                    c /= width;
                }
                let ok = (1..s.len()).all(|a| {
                    if weak_step(eta, a) {
                        s[a] <= s[a - 1]
                    } else {
                        s[a] < s[a - 1]
                    }
                });
                if ok {
                    out.insert(s);
                }
            }
        }
        out
    }

    #[test]
    fn f1_one_three() {
        let t = build_tree(1, 1, 3, 3).unwrap();
        let expect: BTreeSet<Vec<u32>> = [
            vec![3],
            vec![3, 3],
            vec![3, 2],
            vec![3, 1],
            vec![3, 3, 2],
            vec![3, 3, 1],
            vec![3, 2, 1],
            vec![3, 3, 2, 2],
            vec![3, 3, 2, 1],
            vec![3, 3, 1, 1],
            vec![3, 2, 1, 1],
            vec![3, 3, 2, 2, 1],
            vec![3, 3, 2, 2, 1, 1],
        ]
        .into_iter()
        .collect();
        assert_eq!(t.len(), 13);
        assert_eq!(seqs(&t), expect);
    }

    #[test]
    fn f2_one_three() {
        let t = build_tree(2, 1, 3, 3).unwrap();
        assert_eq!(t.len(), 8);
        let expect: BTreeSet<Vec<u32>> = [
            vec![3],
            vec![3, 2],
            vec![3, 1],
            vec![3, 2, 2],
            vec![3, 2, 1],
            vec![3, 1, 1],
            vec![3, 2, 2, 1],
            vec![3, 2, 2, 1, 1],
        ]
        .into_iter()
        .collect();
        assert_eq!(seqs(&t), expect);
    }

    #[test]
    fn trees_match_oracle() {
        for n in 1..=4 {
            for mu in 1..=n {
                for nu in 1..=mu {
                    for eta in 1..=2 {
                        let t = build_tree(eta, nu, mu, n).unwrap();
                        assert_eq!(seqs(&t), oracle(eta, nu, mu, n));
                    }
                }
            }
        }
    }

    #[test]
    fn children_descend() {
        let t = build_tree(1, 1, 3, 3).unwrap();
        let root: Vec<u32> = t.children[0].iter().map(|&c| t.vertices[c].seq[1]).collect();
        assert_eq!(root, vec![3, 2, 1]);
    }

    #[test]
    fn single_vertex_trees() {
        let t = build_tree(1, 2, 2, 3).unwrap();
        assert_eq!(seqs(&t), [vec![2], vec![2, 2]].into_iter().collect());
        let t = build_tree(2, 2, 2, 3).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(frame(&t).len(), 2);
    }

    #[test]
    fn framing_doubles() {
        let t = build_tree(2, 1, 3, 3).unwrap();
        let f = frame(&t);
        assert_eq!(f.len(), 16);
        for (i, v) in f.vertices.iter().enumerate() {
            if v.framed {
                assert!(f.children[i].is_empty());
                let p = f.parent[i].unwrap();
                assert_eq!(f.vertices[p].seq, v.seq);
            }
        }
        assert_eq!(frame(&build_tree(1, 1, 3, 3).unwrap()).len(), 26);
    }

    #[test]
    fn invalid_parameters() {
        assert!(build_tree(1, 3, 2, 3).is_err());
        assert!(build_tree(3, 1, 2, 3).is_err());
        assert!(build_tree(1, 0, 2, 3).is_err());
    }

    #[test]
    fn render_marks_framed() {
        let f = frame(&build_tree(2, 2, 2, 2).unwrap());
        assert_eq!(f.render(), "(2)\n  ~(2)\n");
    }
}
