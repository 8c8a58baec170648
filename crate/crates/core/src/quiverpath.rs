//! Quivers, graded quivers, and a path-algebra quotient oracle.
//!
//! The oracle computes `kQ/I` for a homogeneous ideal `I` length by length. If
//! `A_L` denotes the degree-`L` part of the quotient, every path of length
//! `L + 1` is `p·a` with `p` of length `L` and `a` an arrow, and
//! `I_{L+1} = I_L·Q_1 + Σ_r Q_{L+1-|r|}·r`. So `A_{L+1}` is the span of the
//! composable pairs `(normal form of A_L, arrow)` modulo the images of `u·r`
//! for `u` running over normal forms of length `L + 1 - |r|`. Normal forms are
//! the pairs left over after eliminating the largest words first, which picks
//! the lexicographically smallest complement.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::algebra::{BasisElement, GradedAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{int, Echelon, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub zdegree: i64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize) -> Self {
        Quiver { vertex_count, arrows: Vec::new() }
    }

    pub fn add_arrow(&mut self, source: usize, target: usize, zdegree: i64, label: impl Into<String>) -> Result<usize> {
        let label = label.into();
        if source >= self.vertex_count || target >= self.vertex_count {
            return Err(Error::Invalid(format!("arrow {label} has an endpoint outside the quiver")));
        }
        if source == target {
            return Err(Error::Invalid(format!("arrow {label} is a loop")));
        }
        self.arrows.push(Arrow { source, target, zdegree, label });
        Ok(self.arrows.len() - 1)
    }

    /// `Q_{n,m}`: arrows `c_1..c_n` from vertex 1 to 2, then `b_1..b_m` back.
    pub fn q_nm(n: usize, m: usize) -> Self {
        let mut q = Quiver::new(2);
        for i in 1..=n {
            q.add_arrow(0, 1, 0, format!("c{i}")).expect("valid arrow");
        }
        for i in 1..=m {
            q.add_arrow(1, 0, 0, format!("b{i}")).expect("valid arrow");
        }
        q
    }
}

/// A path in written order: `arrows[0]` is traversed last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    /// Builds a path from arrows in written order, checking composability.
    pub fn from_arrows(q: &Quiver, arrows: &[usize]) -> Result<Path> {
        let (first, last) = match (arrows.first(), arrows.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::MalformedRelation("empty arrow sequence".into())),
        };
        if arrows.iter().any(|&a| a >= q.arrows.len()) {
            return Err(Error::MalformedRelation("unknown arrow index".into()));
        }
        for w in arrows.windows(2) {
            if q.arrows[w[0]].source != q.arrows[w[1]].target {
                return Err(Error::MalformedRelation(format!(
                    "{} cannot follow {}",
                    q.arrows[w[0]].label, q.arrows[w[1]].label
                )));
            }
        }
        Ok(Path { source: q.arrows[last].source, target: q.arrows[first].target, arrows: arrows.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", self.source + 1);
        }
        self.arrows.iter().map(|&a| q.arrows[a].label.as_str()).collect::<Vec<_>>().join("")
    }
}

/// A linear combination of paths of equal length, source and target.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathVector {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

impl PathVector {
    pub fn new() -> Self {
        PathVector::default()
    }

    pub fn word(arrows: &[usize]) -> Self {
        PathVector { terms: vec![(Scalar::one(), arrows.to_vec())] }
    }

    pub fn push(&mut self, c: Scalar, arrows: Vec<usize>) {
        self.terms.push((c, arrows));
    }

    pub fn plus(mut self, c: i64, arrows: &[usize]) -> Self {
        self.terms.push((int(c), arrows.to_vec()));
        self
    }
}

/// Validated relation: common endpoints and length.
struct Relation {
    target: usize,
    len: usize,
    terms: Vec<(Scalar, Vec<usize>)>,
}

fn validate(q: &Quiver, r: &PathVector) -> Result<Option<Relation>> {
    let terms: Vec<(Scalar, Vec<usize>)> =
        r.terms.iter().filter(|(c, _)| !num_traits::Zero::is_zero(c)).cloned().collect();
    let Some((_, first)) = terms.first() else { return Ok(None) };
    let head = Path::from_arrows(q, first)?;
    for (_, w) in &terms {
        let p = Path::from_arrows(q, w)?;
        if p.len() != head.len() {
            return Err(Error::MalformedRelation("relation is not homogeneous in path length".into()));
        }
        if p.source != head.source || p.target != head.target {
            return Err(Error::MalformedRelation("relation terms have different endpoints".into()));
        }
    }
    if head.len() < 2 {
        return Err(Error::MalformedRelation("relations must have length at least 2".into()));
    }
    Ok(Some(Relation { target: head.target, len: head.len(), terms }))
}

#[derive(Clone, Debug)]
pub struct QuotientOracle {
    pub quiver: Quiver,
    pub relations: Vec<PathVector>,
    pub cutoff: usize,
    /// Normal-form paths; ids are positions in this list, ordered by length then word.
    pub basis: Vec<Path>,
    /// `rmul[(id, arrow)]`: normal form of `basis[id]·arrow` when composable.
    rmul: HashMap<(usize, usize), SparseVec>,
    pub algebra: GradedAlgebra,
}

impl QuotientOracle {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn id_of(&self, p: &Path) -> Option<usize> {
        self.basis.iter().position(|b| b == p)
    }

    pub fn arrow_id(&self, a: usize) -> usize {
        self.id_of(&Path::from_arrows(&self.quiver, &[a]).expect("arrow")).expect("arrows are normal forms")
    }

    /// Normal form of a linear combination of arbitrary paths.
    pub fn reduce(&self, v: &PathVector) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (c, w) in &v.terms {
            let p = Path::from_arrows(&self.quiver, w)?;
            let mut cur = SparseVec::unit(self.algebra.idempotents[p.target]);
            for &a in w {
                cur = self.right_mul_arrow(&cur, a);
            }
            out.add_scaled(&cur, c);
        }
        Ok(out)
    }

    fn right_mul_arrow(&self, x: &SparseVec, a: usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.iter() {
            if let Some(p) = self.rmul.get(&(i, a)) {
                out.add_scaled(p, c);
            }
        }
        out
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.algebra.mul(x, y)
    }
}

/// Builds the quotient `kQ/(rels)`, failing if it is nonzero in length `cutoff`.
pub fn build_oracle(q: &Quiver, rels: &[PathVector], cutoff: usize) -> Result<QuotientOracle> {
    let mut by_len: BTreeMap<usize, Vec<Relation>> = BTreeMap::new();
    let mut max_len = 0;
    for r in rels {
        if let Some(rel) = validate(q, r)? {
            max_len = max_len.max(rel.len);
            by_len.entry(rel.len).or_default().push(rel);
        }
    }
    if cutoff < max_len {
        return Err(Error::Invalid(format!("cutoff {cutoff} is below the relation length {max_len}")));
    }

    let mut basis: Vec<Path> = (0..q.vertex_count).map(Path::vertex).collect();
    let mut levels: Vec<Vec<usize>> = vec![(0..q.vertex_count).collect()];
    let mut rmul: HashMap<(usize, usize), SparseVec> = HashMap::new();

    let mut len = 0;
    loop {
        let current = levels[len].clone();
        if current.is_empty() {
            break;
        }
        if len == cutoff {
            return Err(Error::CutoffExceeded {
                cutoff,
                context: format!("{} normal forms survive at path length {cutoff}", current.len()),
            });
        }
        // Candidate pairs (p, a) for p of length `len`, sorted by word.
        let mut cands: Vec<(Vec<usize>, usize, usize)> = Vec::new();
        for &p in &current {
            for (a, arr) in q.arrows.iter().enumerate() {
                if basis[p].source == arr.target {
                    let mut w = basis[p].arrows.clone();
                    w.push(a);
                    cands.push((w, p, a));
                }
            }
        }
        cands.sort();
        let cand_index: HashMap<(usize, usize), usize> =
            cands.iter().enumerate().map(|(i, (_, p, a))| ((*p, *a), i)).collect();

        // Relations ending at this length, padded on the left by normal forms.
        let mut ech = Echelon::new();
        for (_, rs) in by_len.iter().filter(|(&d, _)| d <= len + 1) {
            for r in rs {
                let pad_len = len + 1 - r.len;
                for &u in &levels[pad_len] {
                    if basis[u].source != r.target {
                        continue;
                    }
                    let mut image = SparseVec::new();
                    for (c, w) in &r.terms {
                        let (last, init) = w.split_last().expect("nonempty relation");
                        let mut cur = SparseVec::unit(u);
                        for &a in init {
                            let mut next = SparseVec::new();
                            for (i, x) in cur.iter() {
                                if let Some(p) = rmul.get(&(i, a)) {
                                    next.add_scaled(p, x);
                                }
                            }
                            cur = next;
                        }
                        for (i, x) in cur.iter() {
                            if let Some(&ci) = cand_index.get(&(i, *last)) {
                                image.add_term(ci, &(x * c));
                            }
                        }
                    }
                    ech.insert(&image);
                }
            }
        }

        // Non-pivot candidates become the normal forms of the next length.
        let mut nf_of_cand: HashMap<usize, usize> = HashMap::new();
        let mut next_level = Vec::new();
        for (ci, (w, _, _)) in cands.iter().enumerate() {
            if !ech.is_pivot(ci) {
                let path = Path::from_arrows(q, w).expect("candidate paths compose");
                basis.push(path);
                nf_of_cand.insert(ci, basis.len() - 1);
                next_level.push(basis.len() - 1);
            }
        }
        for (ci, (_, p, a)) in cands.iter().enumerate() {
            let reduced = ech.reduce(&SparseVec::unit(ci));
            let v = SparseVec::from_pairs(reduced.iter().map(|(k, c)| (nf_of_cand[&k], c.clone())));
            rmul.insert((*p, *a), v);
        }
        levels.push(next_level);
        len += 1;
    }

    // Full multiplication table; x·y = (x·y')·a where y = y'a is prefix-closed.
    let dim = basis.len();
    let index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut table = vec![SparseVec::new(); dim * dim];
    for y in 0..dim {
        for x in 0..dim {
            if basis[x].source != basis[y].target {
                continue;
            }
            let prod = if basis[y].arrows.is_empty() {
                SparseVec::unit(x)
            } else {
                let (last, init) = basis[y].arrows.split_last().expect("nonempty");
                let prefix = if init.is_empty() {
                    Path::vertex(q.arrows[*last].target)
                } else {
                    Path::from_arrows(q, init).expect("prefix composes")
                };
                let yp = index[&prefix];
                let mut out = SparseVec::new();
                for (i, c) in table[x * dim + yp].iter() {
                    if let Some(p) = rmul.get(&(i, *last)) {
                        out.add_scaled(p, c);
                    }
                }
                out
            };
            table[x * dim + y] = prod;
        }
    }
    let elements = basis
        .iter()
        .map(|p| BasisElement {
            source: p.source,
            target: p.target,
            length: p.len(),
            zdegree: p.arrows.iter().map(|&a| q.arrows[a].zdegree).sum(),
            word: p.label(q),
        })
        .collect();
    let algebra = GradedAlgebra::new(q.vertex_count, elements, (0..q.vertex_count).collect(), table);
    Ok(QuotientOracle { quiver: q.clone(), relations: rels.to_vec(), cutoff, basis, rmul, algebra })
}

/// Green's quiver with relations: `b_i c_j` for `i < j`, `c_j b_i` for `j ≤ i`.
pub fn green_quiver(l: usize) -> (Quiver, Vec<PathVector>) {
    let m = l / 2;
    let n = l - m;
    let q = Quiver::q_nm(n, m);
    let c = |j: usize| j - 1;
    let b = |i: usize| n + i - 1;
    let mut rels = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            if i < j {
                rels.push(PathVector::word(&[b(i), c(j)]));
            }
        }
    }
    for j in 1..=n {
        for i in 1..=m {
            if j <= i {
                rels.push(PathVector::word(&[c(j), b(i)]));
            }
        }
    }
    (q, rels)
}

/// The Kirkman–Kuzmanovich quiver with its four relation families.
pub fn kk_quiver(n: usize) -> (Quiver, Vec<PathVector>) {
    let q = Quiver::q_nm(n, n);
    let c = |j: usize| j - 1;
    let b = |i: usize| n + i - 1;
    let mut rels = Vec::new();
    for i in 1..=n {
        for l in 1..=n {
            for j in 1..=n {
                rels.push(PathVector::word(&[b(i), c(l), b(j)]));
            }
        }
    }
    for i in 1..=n {
        rels.push(PathVector::word(&[b(i), c(i)]));
    }
    for i in 1..=n {
        for j in 1..i {
            rels.push(PathVector::word(&[c(j), b(i)]));
        }
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            rels.push(PathVector::new().plus(1, &[c(j), b(i)]).plus(-1, &[c(i), b(i)]));
        }
    }
    (q, rels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_ids(o: &QuotientOracle) -> Vec<String> {
        o.algebra.basis.iter().map(|b| b.word.clone()).collect()
    }

    #[test]
    fn kronecker_dims() {
        for n in 0..=8 {
            let q = Quiver::q_nm(n, 0);
            let o = build_oracle(&q, &[], 3).unwrap();
            assert_eq!(o.dim(), n + 2);
        }
    }

    #[test]
    fn green_two_basis() {
        let (q, r) = green_quiver(2);
        let o = build_oracle(&q, &r, 6).unwrap();
        assert_eq!(o.dim(), 5);
        let mut w = word_ids(&o);
        w.sort();
        let mut want: Vec<String> = ["e1", "e2", "c1", "b1", "b1c1"].iter().map(|s| s.to_string()).collect();
        want.sort();
        assert_eq!(w, want);
        // c1·b1 = 0 and b1·c1 ≠ 0.
        let c1 = o.arrow_id(0);
        let b1 = o.arrow_id(1);
        assert!(o.algebra.mul_basis(c1, b1).is_zero());
        assert!(!o.algebra.mul_basis(b1, c1).is_zero());
        let e1 = o.algebra.idempotents[0];
        assert_eq!(o.algebra.mul_basis(e1, e1), &SparseVec::unit(e1));
    }

    #[test]
    fn green_three_basis() {
        let (q, r) = green_quiver(3);
        let o = build_oracle(&q, &r, 8).unwrap();
        let mut w = word_ids(&o);
        w.sort();
        let mut want: Vec<String> =
            ["e1", "e2", "c1", "c2", "b1", "b1c1", "c2b1", "c2b1c1"].iter().map(|s| s.to_string()).collect();
        want.sort();
        assert_eq!(w, want);
    }

    #[test]
    fn green_relation_lists() {
        let (q, r) = green_quiver(1);
        assert_eq!((q.arrows.len(), r.len()), (1, 0));
        let (q, r) = green_quiver(2);
        assert_eq!(q, Quiver::q_nm(1, 1));
        assert_eq!(r, vec![PathVector::word(&[0, 1])]);
        let (q, r) = green_quiver(5);
        assert_eq!(q, Quiver::q_nm(3, 2));
        let labels: Vec<String> =
            r.iter().map(|p| Path::from_arrows(&q, &p.terms[0].1).unwrap().label(&q)).collect();
        assert_eq!(labels, vec!["b1c2", "b1c3", "b2c3", "c1b1", "c1b2", "c2b2"]);
    }

    #[test]
    fn kk_relation_counts() {
        let (_, r) = kk_quiver(1);
        assert_eq!(r.len(), 2);
        let (_, r) = kk_quiver(2);
        assert_eq!(r.len(), 8 + 2 + 1 + 1);
    }

    #[test]
    fn kk_radical_fourth_power_vanishes() {
        for n in 2..=3 {
            let (q, r) = kk_quiver(n);
            let o = build_oracle(&q, &r, 6).unwrap();
            let a = &o.algebra;
            assert!(o.basis.iter().all(|p| p.len() <= 3));
            let rad = a.radical_ids();
            // some product of three radical elements survives
            let mut found = false;
            for &x in &rad {
                for &y in &rad {
                    let xy = a.mul_basis(x, y).clone();
                    if xy.is_zero() {
                        continue;
                    }
                    for &z in &rad {
                        if !a.mul(&xy, &SparseVec::unit(z)).is_zero() {
                            found = true;
                        }
                    }
                }
            }
            assert!(found, "n = {n}");
        }
    }

    #[test]
    fn oracle_is_associative_and_kills_relations() {
        for (q, r) in [green_quiver(4), green_quiver(5), kk_quiver(2), kk_quiver(3)] {
            let o = build_oracle(&q, &r, 10).unwrap();
            o.algebra.check_units().unwrap();
            o.algebra.check_associativity().unwrap();
            for rel in &r {
                assert!(o.reduce(rel).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn cutoff_and_malformed_errors() {
        let q = Quiver::q_nm(1, 1);
        assert!(matches!(build_oracle(&q, &[], 5), Err(Error::CutoffExceeded { .. })));
        let bad = PathVector::new().plus(1, &[0, 1]).plus(1, &[1, 0]);
        assert!(matches!(build_oracle(&q, &[bad], 5), Err(Error::MalformedRelation(_))));
        let bad = PathVector::word(&[0, 0]);
        assert!(matches!(build_oracle(&q, &[bad], 5), Err(Error::MalformedRelation(_))));
        let mut lp = Quiver::new(1);
        assert!(lp.add_arrow(0, 0, 0, "x").is_err());
    }

    #[test]
    fn graded_quiver_degrees() {
        let mut q = Quiver::new(3);
        q.add_arrow(0, 1, 0, "c").unwrap();
        q.add_arrow(1, 2, 3, "f").unwrap();
        let o = build_oracle(&q, &[], 4).unwrap();
        let fc = o.reduce(&PathVector::word(&[1, 0])).unwrap();
        let (id, _) = fc.iter().next().unwrap();
        assert_eq!(o.algebra.basis[id].zdegree, 3);
        assert_eq!(o.algebra.basis[id].length, 2);
    }
}
