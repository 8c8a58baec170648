//! Closed-form construction of `R_F` from a family satisfying (G).
//!
//! Basis words are built from the letters `e_v`, `c_l`, `b_p` and basis vectors
//! of the spaces `T_{•p} = V_p`, `T_{p•} = W_p` and `T_{pq}` (`p > q`). For
//! `P = {p_1 < ⋯ < p_s}` the core word is `b_{p_s} t b_{p_{s-1}} ⋯ t b_{p_1}`,
//! optionally with a `V_{p_s}` letter on the left and a `W_{p_1}` letter on the
//! right. Only the two letters where factors meet interact in a product.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{check_isomorphism, BasisElement, GradedAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{Scalar, SparseVec};
use crate::family::{complements, ComplementData, Family};
use crate::quiverpath::{build_oracle, PathVector, Quiver, QuotientOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E(usize),
    C(usize),
    B(usize),
    /// Basis vector of `T_{•p} = V_p`.
    V(usize, usize),
    /// Basis vector of `T_{p•} = W_p`.
    W(usize, usize),
    /// Basis vector of `T_{pq}`.
    T(usize, usize, usize),
}

impl Letter {
    fn label(&self) -> String {
        match *self {
            Letter::E(v) => format!("e{}", v + 1),
            Letter::C(l) => format!("c{}", l + 1),
            Letter::B(p) => format!("b{}", p + 1),
            Letter::V(p, i) => format!("v{}.{}", p + 1, i + 1),
            Letter::W(p, i) => format!("w{}.{}", p + 1, i + 1),
            Letter::T(p, q, i) => format!("t{}{}.{}", p + 1, q + 1, i + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    Core,
    LeftC,
    RightC,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RBasis {
    pub u: usize,
    /// Zero-based, increasing.
    pub p: Vec<usize>,
    pub tag: Tag,
    #[serde(skip)]
    pub letters: Vec<Letter>,
}

#[derive(Clone, Debug)]
pub struct RAlgebra {
    pub family: Family,
    pub comp: ComplementData,
    pub meta: Vec<RBasis>,
    pub algebra: GradedAlgebra,
    /// Grading character used for zdegrees; all zeros when ungraded.
    pub chi: Vec<i64>,
    index: HashMap<Vec<Letter>, usize>,
}

/// Nonempty subsets of `0..m` ordered by size, then lexicographically.
pub fn subsets_by_size(m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..(1u64 << m))
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// All index tuples for the given radices, leftmost most significant.
fn tuples(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        let mut next = Vec::with_capacity(out.len() * r);
        for t in &out {
            for i in 0..r {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn letter_source_target(l: &Letter) -> (usize, usize) {
    match l {
        Letter::E(v) => (*v, *v),
        Letter::B(_) => (1, 0),
        _ => (0, 1),
    }
}

impl RAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn id_of(&self, letters: &[Letter]) -> Option<usize> {
        self.index.get(letters).copied()
    }

    pub fn b_id(&self, p: usize) -> usize {
        self.index[&vec![Letter::B(p)]]
    }

    pub fn c_id(&self, l: usize) -> usize {
        self.index[&vec![Letter::C(l)]]
    }

    /// The element `Σ x_l c_l` of the degree `(1; ∅)` component.
    pub fn c_vector(&self, x: &[Scalar]) -> SparseVec {
        SparseVec::from_pairs(x.iter().enumerate().map(|(l, c)| (self.c_id(l), c.clone())))
    }

    /// Coordinates in `C` of a vector-valued letter.
    pub fn letter_vector(&self, l: &Letter) -> Vec<Scalar> {
        let n = self.family.n();
        match *l {
            Letter::C(i) => {
                let mut v = vec![Scalar::zero(); n];
                v[i] = Scalar::one();
                v
            }
            Letter::V(p, i) => self.family.pairs()[p].v.basis_vector(i).to_vec(),
            Letter::W(p, i) => self.family.pairs()[p].w.basis_vector(i).to_vec(),
            Letter::T(p, q, i) => self.comp.t[&(p, q)].basis_vector(i).to_vec(),
            Letter::E(_) | Letter::B(_) => panic!("letter {l:?} is not a vector"),
        }
    }

    fn combine(&self, coeffs: Vec<Scalar>, word: impl Fn(usize) -> Vec<Letter>) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = word(i);
            let id = *self.index.get(&w).unwrap_or_else(|| panic!("missing basis word {w:?}"));
            out.add_term(id, &c);
        }
        out
    }

    /// Closed-form product of two basis words.
    fn product(&self, x: &[Letter], y: &[Letter], y_id: usize, x_id: usize) -> SparseVec {
        let (sx, _) = word_ends(x);
        let (_, ty) = word_ends(y);
        if sx != ty {
            return SparseVec::new();
        }
        if let [Letter::E(_)] = x {
            return SparseVec::unit(y_id);
        }
        if let [Letter::E(_)] = y {
            return SparseVec::unit(x_id);
        }
        let last = *x.last().expect("nonempty");
        let first = y[0];
        match (last, first) {
            (Letter::B(p), _) => {
                if y.len() == 1 {
                    let coeffs = self.comp.theta_w[p].apply(&self.letter_vector(&first));
                    self.combine(coeffs, |i| {
                        let mut w = x.to_vec();
                        w.push(Letter::W(p, i));
                        w
                    })
                } else {
                    let Letter::B(q) = y[1] else { unreachable!("V letter precedes a b") };
                    if p <= q {
                        return SparseVec::new();
                    }
                    let coeffs = self.comp.theta[&(p, q)].apply(&self.letter_vector(&first));
                    self.combine(coeffs, |i| {
                        let mut w = x.to_vec();
                        w.push(Letter::T(p, q, i));
                        w.extend_from_slice(&y[1..]);
                        w
                    })
                }
            }
            (_, Letter::B(q)) => {
                if x.len() == 1 {
                    let coeffs = self.comp.theta_v[q].apply(&self.letter_vector(&last));
                    self.combine(coeffs, |i| {
                        let mut w = vec![Letter::V(q, i)];
                        w.extend_from_slice(y);
                        w
                    })
                } else {
                    let Letter::B(p) = x[x.len() - 2] else { unreachable!("W letter follows a b") };
                    if p <= q {
                        return SparseVec::new();
                    }
                    let coeffs = self.comp.theta[&(p, q)].apply(&self.letter_vector(&last));
                    self.combine(coeffs, |i| {
                        let mut w = x[..x.len() - 1].to_vec();
                        w.push(Letter::T(p, q, i));
                        w.extend_from_slice(y);
                        w
                    })
                }
            }
            _ => SparseVec::new(),
        }
    }
}

fn word_ends(w: &[Letter]) -> (usize, usize) {
    let (_, target) = letter_source_target(&w[0]);
    let (source, _) = letter_source_target(w.last().expect("nonempty"));
    (source, target)
}

/// Builds `R_F` with basis ordered by `(|P|, P, u, tag, tensor index)`.
pub fn build_r(f: &Family) -> Result<RAlgebra> {
    let comp = complements(f)?;
    let n = f.n();
    let k = f.kseq();
    let mut meta = vec![
        RBasis { u: 0, p: vec![], tag: Tag::Core, letters: vec![Letter::E(0)] },
        RBasis { u: 0, p: vec![], tag: Tag::Core, letters: vec![Letter::E(1)] },
    ];
    for l in 0..n {
        meta.push(RBasis { u: 1, p: vec![], tag: Tag::Core, letters: vec![Letter::C(l)] });
    }
    for p in subsets_by_size(f.m()) {
        let s = p.len();
        // Middle spaces T_{p_{j+1} p_j}, listed left to right.
        let mids: Vec<(usize, usize)> = (1..s).rev().map(|j| (p[j], p[j - 1])).collect();
        let radices: Vec<usize> = mids.iter().map(|&(a, b)| k[b] - k[a]).collect();
        let core_words: Vec<Vec<Letter>> = tuples(&radices)
            .into_iter()
            .map(|idx| {
                let mut w = vec![Letter::B(p[s - 1])];
                for (t, (&(a, b), &i)) in mids.iter().zip(&idx).enumerate() {
                    w.push(Letter::T(a, b, i));
                    w.push(Letter::B(p[s - 2 - t]));
                }
                w
            })
            .collect();
        let (top, bottom) = (p[s - 1], p[0]);
        let kv = k[top];
        let kw = n - k[bottom];
        for w in &core_words {
            meta.push(RBasis { u: s - 1, p: p.clone(), tag: Tag::Core, letters: w.clone() });
        }
        for i in 0..kv {
            for w in &core_words {
                let mut x = vec![Letter::V(top, i)];
                x.extend_from_slice(w);
                meta.push(RBasis { u: s, p: p.clone(), tag: Tag::LeftC, letters: x });
            }
        }
        for w in &core_words {
            for j in 0..kw {
                let mut x = w.clone();
                x.push(Letter::W(bottom, j));
                meta.push(RBasis { u: s, p: p.clone(), tag: Tag::RightC, letters: x });
            }
        }
        for i in 0..kv {
            for w in &core_words {
                for j in 0..kw {
                    let mut x = vec![Letter::V(top, i)];
                    x.extend_from_slice(w);
                    x.push(Letter::W(bottom, j));
                    meta.push(RBasis { u: s + 1, p: p.clone(), tag: Tag::Both, letters: x });
                }
            }
        }
    }
    let index: HashMap<Vec<Letter>, usize> = meta.iter().enumerate().map(|(i, b)| (b.letters.clone(), i)).collect();
    let basis: Vec<BasisElement> = meta
        .iter()
        .map(|b| {
            let (source, target) = word_ends(&b.letters);
            BasisElement {
                source,
                target,
                length: b.u + b.p.len(),
                zdegree: 0,
                word: b.letters.iter().map(Letter::label).collect::<Vec<_>>().join(" "),
            }
        })
        .collect();
    let placeholder = GradedAlgebra::new(2, basis.clone(), vec![0, 1], vec![SparseVec::new(); basis.len() * basis.len()]);
    let mut r = RAlgebra { family: f.clone(), comp, meta, algebra: placeholder, chi: vec![0; f.m() + 1], index };
    let d = basis.len();
    let mut table = Vec::with_capacity(d * d);
    for x in 0..d {
        for y in 0..d {
            table.push(r.product(&r.meta[x].letters, &r.meta[y].letters, y, x));
        }
    }
    r.algebra = GradedAlgebra::new(2, basis, vec![0, 1], table);
    Ok(r)
}

/// zdegree `u·χ(ε_0) + Σ_{i∈P} χ(ε_i)`.
pub fn apply_grading(r: &RAlgebra, chi: &[i64]) -> Result<RAlgebra> {
    if chi.len() != r.family.m() + 1 {
        return Err(Error::Invalid(format!("grading needs {} entries, got {}", r.family.m() + 1, chi.len())));
    }
    let mut out = r.clone();
    let meta = out.meta.clone();
    out.algebra.set_zdegrees(|i| meta[i].u as i64 * chi[0] + meta[i].p.iter().map(|&p| chi[p + 1]).sum::<i64>());
    out.chi = chi.to_vec();
    Ok(out)
}

/// `χ_0 = (0, 1, …, 1)`.
pub fn chi_zero(m: usize) -> Vec<i64> {
    let mut c = vec![1; m + 1];
    c[0] = 0;
    c
}

/// Dimensions of `(s-1;P)`, `(s;P)`, `(s+1;P)` from the product formulas.
pub fn component_dims_formula(n: usize, kseq: &[usize], p: &[usize]) -> (usize, usize, usize) {
    let prod: usize = p.windows(2).map(|w| kseq[w[0]] - kseq[w[1]]).product();
    let top = kseq[*p.last().expect("nonempty P")];
    let bottom = n - kseq[p[0]];
    (prod, top * prod + prod * bottom, top * prod * bottom)
}

/// Total dimension predicted by the product formulas.
pub fn total_dim_formula(n: usize, kseq: &[usize]) -> usize {
    2 + n
        + subsets_by_size(kseq.len())
            .iter()
            .map(|p| {
                let (a, b, c) = component_dims_formula(n, kseq, p);
                a + b + c
            })
            .sum::<usize>()
}

/// Per-component dimensions counted from the built basis, keyed by `(P, u)`.
pub fn component_dims(r: &RAlgebra) -> HashMap<(Vec<usize>, usize), usize> {
    let mut out = HashMap::new();
    for b in &r.meta {
        *out.entry((b.p.clone(), b.u)).or_insert(0) += 1;
    }
    out
}

/// Quiver `Q_{n,m}` with relations 1)–3) instantiated on subspace bases.
pub fn r_presentation(f: &Family) -> (Quiver, Vec<PathVector>) {
    let (n, m) = (f.n(), f.m());
    let q = Quiver::q_nm(n, m);
    let b = |i: usize| n + i;
    let mut rels = Vec::new();
    for i in 0..m {
        for j in i..m {
            for l in 0..n {
                rels.push(PathVector::word(&[b(i), l, b(j)]));
            }
        }
    }
    for (i, pair) in f.pairs().iter().enumerate() {
        for r in 0..pair.v.dim() {
            let mut pv = PathVector::new();
            for (l, x) in pair.v.basis_vector(r).iter().enumerate() {
                if !x.is_zero() {
                    pv.push(x.clone(), vec![b(i), l]);
                }
            }
            rels.push(pv);
        }
        for r in 0..pair.w.dim() {
            let mut pv = PathVector::new();
            for (l, x) in pair.w.basis_vector(r).iter().enumerate() {
                if !x.is_zero() {
                    pv.push(x.clone(), vec![l, b(i)]);
                }
            }
            rels.push(pv);
        }
    }
    (q, rels)
}

pub fn default_cutoff(m: usize) -> usize {
    2 * m + 4
}

pub fn build_r_oracle(f: &Family, cutoff: usize) -> Result<QuotientOracle> {
    let (q, rels) = r_presentation(f);
    build_oracle(&q, &rels, cutoff)
}

/// Image of each closed-form basis word in the oracle.
pub fn images_in_oracle(r: &RAlgebra, o: &QuotientOracle) -> Vec<SparseVec> {
    let n = r.family.n();
    let letter_image = |l: &Letter| -> SparseVec {
        match *l {
            Letter::E(v) => SparseVec::unit(o.algebra.idempotents[v]),
            Letter::B(p) => SparseVec::unit(o.arrow_id(n + p)),
            _ => SparseVec::from_pairs(
                r.letter_vector(l).into_iter().enumerate().map(|(i, c)| (o.arrow_id(i), c)),
            ),
        }
    };
    r.meta
        .iter()
        .map(|b| {
            let mut acc = letter_image(&b.letters[0]);
            for l in &b.letters[1..] {
                acc = o.algebra.mul(&acc, &letter_image(l));
            }
            acc
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub closed_form_dim: usize,
    pub oracle_dim: usize,
    pub agree: bool,
    pub detail: Option<String>,
}

/// Compares the closed form with the path-quotient oracle as algebras.
pub fn verify_against_oracle(f: &Family, cutoff: Option<usize>) -> Result<OracleReport> {
    let r = build_r(f)?;
    let o = build_r_oracle(f, cutoff.unwrap_or_else(|| default_cutoff(f.m())))?;
    let images = images_in_oracle(&r, &o);
    let res = check_isomorphism(&r.algebra, &o.algebra, &images);
    Ok(OracleReport {
        closed_form_dim: r.dim(),
        oracle_dim: o.dim(),
        agree: res.is_ok(),
        detail: res.err().map(|e| e.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{green_family, kk_family, random_family};
    use crate::quiverpath::green_quiver;

    #[test]
    fn empty_family_is_kronecker() {
        for n in 0..=4 {
            let r = build_r(&Family::empty(n)).unwrap();
            assert_eq!(r.dim(), n + 2);
            let mut want = vec![vec![1, 0], vec![n, 1]];
            if n == 0 {
                want = vec![vec![1, 0], vec![0, 1]];
            }
            assert_eq!(r.algebra.cartan_matrix(), want);
            let rep = verify_against_oracle(&Family::empty(n), None).unwrap();
            assert!(rep.agree, "{rep:?}");
        }
    }

    #[test]
    fn kronecker_two_cartan() {
        let r = build_r(&Family::empty(2)).unwrap();
        assert_eq!(r.algebra.cartan_matrix(), vec![vec![1, 0], vec![2, 1]]);
    }

    #[test]
    fn equidimensional_nodal_dims() {
        for m in 1..=4 {
            let f = random_family(2, &vec![1; m], 100 + m as u64).unwrap();
            let r = build_r(&f).unwrap();
            assert_eq!(r.dim(), 4 + 4 * m);
            assert!(r.meta.iter().all(|b| b.p.len() < 2));
        }
    }

    #[test]
    fn nodal_cartan_by_brute_force() {
        let f = random_family(2, &[1], 7).unwrap();
        let r = build_r(&f).unwrap();
        assert_eq!(r.dim(), 8);
        // Count words by (target, source) from their letters directly.
        let mut counts = [[0usize; 2]; 2];
        for b in &r.meta {
            let first = &b.letters[0];
            let last = b.letters.last().unwrap();
            let t = match first {
                Letter::E(v) => *v,
                Letter::B(_) => 0,
                _ => 1,
            };
            let s = match last {
                Letter::E(v) => *v,
                Letter::B(_) => 1,
                _ => 0,
            };
            counts[t][s] += 1;
        }
        assert_eq!(counts, [[2, 1], [3, 2]]);
        assert_eq!(r.algebra.cartan_matrix(), vec![vec![2, 1], vec![3, 2]]);
    }

    #[test]
    fn green_dims_match_green_oracle() {
        for l in 2..=7 {
            let r = build_r(&green_family(l).unwrap()).unwrap();
            let (q, rels) = green_quiver(l);
            let o = build_oracle(&q, &rels, 2 * l + 4).unwrap();
            assert_eq!(r.dim(), o.dim(), "l = {l}");
        }
        assert_eq!(build_r(&green_family(2).unwrap()).unwrap().dim(), 5);
    }

    #[test]
    fn oracle_agreement_named_families() {
        for f in [kk_family(1).unwrap(), kk_family(2).unwrap(), green_family(4).unwrap()] {
            let rep = verify_against_oracle(&f, None).unwrap();
            assert!(rep.agree, "{rep:?}");
        }
        assert_eq!(build_r(&kk_family(2).unwrap()).unwrap().dim(), 12);
        let f = random_family(3, &[2, 1], 11).unwrap();
        let rep = verify_against_oracle(&f, None).unwrap();
        assert!(rep.agree, "{rep:?}");
    }

    #[test]
    fn closed_form_is_associative() {
        for f in [kk_family(3).unwrap(), green_family(6).unwrap(), random_family(4, &[3, 2, 1], 3).unwrap()] {
            let r = build_r(&f).unwrap();
            r.algebra.check_units().unwrap();
            r.algebra.check_associativity().unwrap();
        }
    }

    #[test]
    fn gradings() {
        let f = kk_family(2).unwrap();
        let r = build_r(&f).unwrap();
        let g = apply_grading(&r, &[0, 0, 0]).unwrap();
        assert!(g.algebra.basis.iter().all(|b| b.zdegree == 0));
        let g = apply_grading(&r, &chi_zero(2)).unwrap();
        assert_eq!(g.algebra.basis[r.b_id(0)].zdegree, 1);
        assert_eq!(g.algebra.basis[r.c_id(0)].zdegree, 0);
        for (i, b) in g.meta.iter().enumerate() {
            if b.p.len() == 1 && b.tag != Tag::Core {
                assert_eq!(g.algebra.basis[i].zdegree, 1);
            }
        }
        g.algebra.check_zdegree_additive().unwrap();
        let g = apply_grading(&r, &[1, 0, 0]).unwrap();
        for (i, b) in g.meta.iter().enumerate() {
            assert_eq!(g.algebra.basis[i].zdegree, b.u as i64);
        }
        assert!(apply_grading(&r, &[1, 0]).is_err());
    }

    #[test]
    fn dimension_formulas_match_components() {
        for f in [kk_family(3).unwrap(), green_family(7).unwrap(), random_family(4, &[4, 2, 1, 0], 2).unwrap()] {
            let r = build_r(&f).unwrap();
            let dims = component_dims(&r);
            for p in subsets_by_size(f.m()) {
                let (a, b, c) = component_dims_formula(f.n(), &f.kseq(), &p);
                let s = p.len();
                let get = |u: usize| dims.get(&(p.clone(), u)).copied().unwrap_or(0);
                assert_eq!((get(s - 1), get(s), get(s + 1)), (a, b, c));
            }
            assert_eq!(r.dim(), total_dim_formula(f.n(), &f.kseq()));
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::family::random_family;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn multidegree_additive(seed in 0u64..1000, n in 1usize..=3, raw in proptest::collection::vec(0usize..=3, 1..=3)) {
            let mut k: Vec<usize> = raw.into_iter().map(|x| x.min(n)).collect();
            k.sort_unstable_by(|a, b| b.cmp(a));
            let f = random_family(n, &k, seed).unwrap();
            let r = build_r(&f).unwrap();
            for x in 0..r.dim() {
                for y in 0..r.dim() {
                    for (z, _) in r.algebra.mul_basis(x, y).iter() {
                        let mut pu: Vec<usize> = r.meta[x].p.iter().chain(&r.meta[y].p).copied().collect();
                        pu.sort_unstable();
                        prop_assert_eq!(r.meta[z].u, r.meta[x].u + r.meta[y].u);
                        prop_assert_eq!(&r.meta[z].p, &pu);
                    }
                }
            }
            let rep = verify_against_oracle(&f, None).unwrap();
            prop_assert!(rep.agree, "{:?}", rep);
        }
    }
}
