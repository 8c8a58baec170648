//! The graded quiver algebra `D_F(δ)` of an equidimensional family, twisted
//! complexes over it, Hom-complex cohomology and the comparison with `R_F(χ)`.
//!
//! Vertices are `0 = 1`, `1 = 2` and `2 + i = l_{i+1}`. `Q_v = e_v D` and a
//! morphism `Q_a → Q_b` is left multiplication by an element of `e_b D e_a`.
//! In `Q[s]` the generator sits in degree `−s`, so an element of zdegree `q`
//! in `Hom(Q_a[s_a], Q_b[s_b])` has degree `q − s_b + s_a`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::error::{verify, Error, Result};
use crate::exactla::{Echelon, Scalar, SparseVec};
use crate::family::{complements, require_g, Family};
use crate::quiverpath::{build_oracle, PathVector, Quiver, QuotientOracle};
use crate::ralgebra::{apply_grading, build_r, Letter};

#[derive(Clone, Debug)]
pub struct DAlgebra {
    pub family: Family,
    pub delta: Vec<i64>,
    pub k: usize,
    pub oracle: QuotientOracle,
}

impl DAlgebra {
    pub fn algebra(&self) -> &GradedAlgebra {
        &self.oracle.algebra
    }

    pub fn vertex_l(&self, i: usize) -> usize {
        2 + i
    }

    pub fn idempotent(&self, v: usize) -> SparseVec {
        SparseVec::unit(self.algebra().idempotents[v])
    }

    /// `Σ x_l c_l`.
    pub fn c_element(&self, x: &[Scalar]) -> SparseVec {
        SparseVec::from_pairs(x.iter().enumerate().map(|(l, c)| (self.oracle.arrow_id(l), c.clone())))
    }

    pub fn beta(&self, i: usize) -> SparseVec {
        SparseVec::unit(self.oracle.arrow_id(self.family.n() + i))
    }

    pub fn phi(&self, i: usize, j: usize) -> SparseVec {
        SparseVec::unit(self.oracle.arrow_id(self.family.n() + self.family.m() + i * self.k + j))
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.algebra().mul(x, y)
    }
}

/// Builds `D_F(δ)` from arrows a1)–a3) and relations r1)–r4).
pub fn build_d(f: &Family, delta: &[i64]) -> Result<DAlgebra> {
    require_g(f)?;
    if !f.is_equidimensional() {
        return Err(Error::Invalid("the quiver algebra needs an equidimensional family".into()));
    }
    let (n, m) = (f.n(), f.m());
    if delta.len() != m {
        return Err(Error::Invalid(format!("need {m} shifts, got {}", delta.len())));
    }
    let k = f.kseq().first().copied().unwrap_or(0);
    let mut q = Quiver::new(m + 2);
    for l in 0..n {
        q.add_arrow(0, 1, 0, format!("c{}", l + 1))?;
    }
    for i in 0..m {
        q.add_arrow(1, 2 + i, 0, format!("β{}", i + 1))?;
    }
    for (i, &d) in delta.iter().enumerate() {
        for j in 0..k {
            q.add_arrow(1, 2 + i, d, format!("φ{}.{}", i + 1, j + 1))?;
        }
    }
    let beta = |i: usize| n + i;
    let phi = |i: usize, j: usize| n + m + i * k + j;
    let times = |a: usize, v: &[Scalar], pv: &mut PathVector, c: &Scalar| {
        for (l, x) in v.iter().enumerate() {
            if !x.is_zero() {
                pv.push(x * c, vec![a, l]);
            }
        }
    };
    let one = Scalar::one();
    let mut rels = Vec::new();
    for (i, pair) in f.pairs().iter().enumerate() {
        for r in 0..pair.v.dim() {
            let mut pv = PathVector::new();
            times(beta(i), pair.v.basis_vector(r), &mut pv, &one);
            rels.push(pv);
        }
        for j in 0..k {
            for r in 0..pair.w.dim() {
                let mut pv = PathVector::new();
                times(phi(i, j), pair.w.basis_vector(r), &mut pv, &one);
                rels.push(pv);
            }
            for l in (0..k).filter(|&l| l != j) {
                let mut pv = PathVector::new();
                times(phi(i, j), pair.v.basis_vector(l), &mut pv, &one);
                rels.push(pv);
            }
            if j > 0 {
                let mut pv = PathVector::new();
                times(phi(i, j), pair.v.basis_vector(j), &mut pv, &one);
                times(phi(i, 0), pair.v.basis_vector(0), &mut pv, &-one.clone());
                rels.push(pv);
            }
        }
    }
    let oracle = build_oracle(&q, &rels, 3)?;
    Ok(DAlgebra { family: f.clone(), delta: delta.to_vec(), k, oracle })
}

/// Expected `Hom(Q_a, Q_b)` as zdegree → dim, vertices zero-based.
pub fn expected_hom(d: &DAlgebra, a: usize, b: usize) -> BTreeMap<i64, usize> {
    let (n, k) = (d.family.n(), d.k);
    let mut out = BTreeMap::new();
    let mut add = |deg: i64, dim: usize| {
        if dim > 0 {
            *out.entry(deg).or_insert(0) += dim;
        }
    };
    match (a, b) {
        _ if a == b => add(0, 1),
        (0, 1) => add(0, n),
        (1, l) if l >= 2 => {
            add(0, 1);
            add(d.delta[l - 2], k);
        }
        (0, l) if l >= 2 => {
            add(0, n - k);
            add(d.delta[l - 2], 1);
        }
        _ => {}
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HomTableEntry {
    pub source: String,
    pub target: String,
    pub dims: BTreeMap<i64, usize>,
    pub expected: BTreeMap<i64, usize>,
    pub ok: bool,
}

pub fn vertex_name(v: usize) -> String {
    match v {
        0 => "1".into(),
        1 => "2".into(),
        _ => format!("l{}", v - 1),
    }
}

/// `Hom(Q_a, Q_b) = e_b D e_a` by zdegree for every ordered pair of vertices.
pub fn hom_table(d: &DAlgebra) -> Vec<HomTableEntry> {
    let nv = d.family.m() + 2;
    let mut out = Vec::new();
    for a in 0..nv {
        for b in 0..nv {
            let dims = d.algebra().block_degree_dims(b, a);
            let expected = expected_hom(d, a, b);
            out.push(HomTableEntry { source: vertex_name(a), target: vertex_name(b), ok: dims == expected, dims, expected });
        }
    }
    out
}

/// Matrix of elements of `D`; `entries[(row, col)]` maps summand `col` to summand `row`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), SparseVec>,
}

impl DMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DMat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn add_entry(&mut self, r: usize, c: usize, x: &SparseVec) {
        let e = self.entries.entry((r, c)).or_default();
        e.add(x);
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, d: &DAlgebra, other: &DMat) -> DMat {
        assert_eq!(self.cols, other.rows, "composable shapes");
        let mut out = DMat::zero(self.rows, other.cols);
        for (&(r, mid), x) in &self.entries {
            for (&(mid2, c), y) in other.entries.range((mid, 0)..(mid + 1, 0)) {
                debug_assert_eq!(mid, mid2);
                out.add_entry(r, c, &d.mul(x, y));
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> DMat {
        let mut out = DMat::zero(self.rows, self.cols);
        for (&(r, k), x) in &self.entries {
            out.add_entry(r, k, &x.scaled(c));
        }
        out
    }

    pub fn plus(&self, other: &DMat) -> DMat {
        let mut out = self.clone();
        for (&(r, c), x) in &other.entries {
            out.add_entry(r, c, x);
        }
        out
    }

    /// Coordinates keyed by `(row, col, basis id)`.
    pub fn flatten(&self, dim: usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (&(r, c), x) in &self.entries {
            for (i, s) in x.iter() {
                out.add_term((r * self.cols + c) * dim + i, s);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub vertex: usize,
    pub shift: i64,
    pub label: String,
}

/// A formal sum of shifted projectives with a strictly triangular differential.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub summands: Vec<Summand>,
    pub differential: DMat,
}

impl TwistedComplex {
    pub fn single(vertex: usize, shift: i64) -> Self {
        TwistedComplex {
            summands: vec![Summand { vertex, shift, label: format!("Q{}[{shift}]", vertex_name(vertex)) }],
            differential: DMat::zero(1, 1),
        }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn identity(&self, d: &DAlgebra) -> DMat {
        let mut out = DMat::zero(self.len(), self.len());
        for (r, s) in self.summands.iter().enumerate() {
            out.add_entry(r, r, &d.idempotent(s.vertex));
        }
        out
    }

    /// Entry degrees, block membership, strict triangularity and `d² = 0`.
    pub fn check(&self, d: &DAlgebra) -> Result<()> {
        let alg = d.algebra();
        for (&(r, c), x) in &self.differential.entries {
            verify(r < c, || format!("differential entry ({r}, {c}) is not strictly triangular"))?;
            let want = 1 + self.summands[r].shift - self.summands[c].shift;
            for (i, _) in x.iter() {
                let b = &alg.basis[i];
                verify(b.target == self.summands[r].vertex && b.source == self.summands[c].vertex, || {
                    format!("entry ({r}, {c}) leaves its vertex block")
                })?;
                verify(b.zdegree == want, || format!("entry ({r}, {c}) has zdegree {} instead of {want}", b.zdegree))?;
            }
        }
        verify(self.differential.compose(d, &self.differential).is_zero(), || "differential does not square to zero".into())
    }
}

/// Sum of complexes, summands concatenated.
pub fn direct_sum(parts: &[&TwistedComplex]) -> TwistedComplex {
    let total: usize = parts.iter().map(|p| p.len()).sum();
    let mut summands = Vec::new();
    let mut diff = DMat::zero(total, total);
    let mut off = 0;
    for p in parts {
        summands.extend(p.summands.iter().cloned());
        for (&(r, c), x) in &p.differential.entries {
            diff.add_entry(off + r, off + c, x);
        }
        off += p.len();
    }
    TwistedComplex { summands, differential: diff }
}

pub fn projectives(d: &DAlgebra) -> Vec<TwistedComplex> {
    (0..d.family.m() + 2).map(|v| TwistedComplex::single(v, 0)).collect()
}

#[derive(Clone, Debug)]
pub struct Modules {
    pub p1: TwistedComplex,
    pub p2: TwistedComplex,
    pub k: Vec<TwistedComplex>,
}

/// `P₁`, `P₂` as cones of the canonical maps and `K_i = Tot(V_i ⊗ Q₁ → Q₂ → Q_{l_i})`.
pub fn build_modules(d: &DAlgebra) -> Result<Modules> {
    let (m, k) = (d.family.m(), d.k);
    let pairs = d.family.pairs();

    let mut s1: Vec<Summand> = (0..m)
        .map(|i| Summand { vertex: d.vertex_l(i), shift: d.delta[i], label: format!("Ql{}[{}]", i + 1, d.delta[i]) })
        .collect();
    s1.push(Summand { vertex: 0, shift: 1, label: "Q1[1]".into() });
    let mut d1 = DMat::zero(m + 1, m + 1);
    for i in 0..m {
        if k > 0 {
            let can = d.mul(&d.phi(i, 0), &d.c_element(pairs[i].v.basis_vector(0)));
            d1.add_entry(i, m, &can);
        }
    }
    let p1 = TwistedComplex { summands: s1, differential: d1 };

    let mut s2 = Vec::new();
    for i in 0..m {
        for j in 0..k {
            s2.push(Summand {
                vertex: d.vertex_l(i),
                shift: d.delta[i],
                label: format!("v{}.{}⊗Ql{}[{}]", i + 1, j + 1, i + 1, d.delta[i]),
            });
        }
    }
    s2.push(Summand { vertex: 1, shift: 1, label: "Q2[1]".into() });
    let top = s2.len() - 1;
    let mut d2 = DMat::zero(s2.len(), s2.len());
    for i in 0..m {
        for j in 0..k {
            d2.add_entry(i * k + j, top, &d.phi(i, j));
        }
    }
    let p2 = TwistedComplex { summands: s2, differential: d2 };

    let mut ks = Vec::new();
    for i in 0..m {
        let mut s = vec![
            Summand { vertex: d.vertex_l(i), shift: 0, label: format!("Ql{}[0]", i + 1) },
            Summand { vertex: 1, shift: 1, label: "Q2[1]".into() },
        ];
        for j in 0..k {
            s.push(Summand { vertex: 0, shift: 2, label: format!("v{}.{}⊗Q1[2]", i + 1, j + 1) });
        }
        let mut dk = DMat::zero(s.len(), s.len());
        dk.add_entry(0, 1, &d.beta(i));
        for j in 0..k {
            dk.add_entry(1, 2 + j, &d.c_element(pairs[i].v.basis_vector(j)));
        }
        ks.push(TwistedComplex { summands: s, differential: dk });
    }
    for c in [&p1, &p2].into_iter().chain(ks.iter()) {
        c.check(d)?;
    }
    Ok(Modules { p1, p2, k: ks })
}

/// `Hom(X, Y)` with `D(F) = δ_Y F − (−1)^p F δ_X`.
pub struct HomComplex<'a> {
    pub d: &'a DAlgebra,
    pub x: &'a TwistedComplex,
    pub y: &'a TwistedComplex,
}

impl<'a> HomComplex<'a> {
    pub fn new(d: &'a DAlgebra, x: &'a TwistedComplex, y: &'a TwistedComplex) -> Self {
        HomComplex { d, x, y }
    }

    fn degree_of(&self, b: usize, a: usize, id: usize) -> i64 {
        self.d.algebra().basis[id].zdegree - self.y.summands[b].shift + self.x.summands[a].shift
    }

    /// Basis of `Hom^p` as single-entry matrices.
    pub fn basis(&self, p: i64) -> Vec<DMat> {
        let alg = self.d.algebra();
        let mut out = Vec::new();
        for (b, sb) in self.y.summands.iter().enumerate() {
            for (a, sa) in self.x.summands.iter().enumerate() {
                for id in 0..alg.dim() {
                    let e = &alg.basis[id];
                    if e.target == sb.vertex && e.source == sa.vertex && self.degree_of(b, a, id) == p {
                        let mut f = DMat::zero(self.y.len(), self.x.len());
                        f.add_entry(b, a, &SparseVec::unit(id));
                        out.push(f);
                    }
                }
            }
        }
        out
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        let alg = self.d.algebra();
        let mut out = BTreeSet::new();
        for (b, sb) in self.y.summands.iter().enumerate() {
            for (a, sa) in self.x.summands.iter().enumerate() {
                for id in 0..alg.dim() {
                    let e = &alg.basis[id];
                    if e.target == sb.vertex && e.source == sa.vertex {
                        out.insert(self.degree_of(b, a, id));
                    }
                }
            }
        }
        out
    }

    pub fn differential(&self, f: &DMat, p: i64) -> DMat {
        let left = self.y.differential.compose(self.d, f);
        let right = f.compose(self.d, &self.x.differential);
        let sign = if p.rem_euclid(2) == 0 { -Scalar::one() } else { Scalar::one() };
        left.plus(&right.scaled(&sign))
    }

    pub fn flatten(&self, f: &DMat) -> SparseVec {
        f.flatten(self.d.algebra().dim())
    }

    /// Span of `D(Hom^{p-1})`.
    pub fn boundaries(&self, p: i64) -> Echelon {
        let mut e = Echelon::new();
        for f in self.basis(p - 1) {
            e.insert(&self.flatten(&self.differential(&f, p - 1)));
        }
        e
    }

    /// Is `f` homogeneous of degree `p`?
    pub fn has_degree(&self, f: &DMat, p: i64) -> bool {
        f.entries.iter().all(|(&(b, a), x)| x.keys().all(|id| self.degree_of(b, a, id) == p))
    }

    pub fn report(&self) -> HomComplexReport {
        let degrees = self.degrees();
        let mut complex = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        for &p in &degrees {
            let basis = self.basis(p);
            complex.insert(p, basis.len());
            let mut e = Echelon::new();
            for f in &basis {
                e.insert(&self.flatten(&self.differential(f, p)));
            }
            ranks.insert(p, e.rank());
        }
        let mut cohomology = BTreeMap::new();
        for (&p, &dim) in &complex {
            let h = dim - ranks[&p] - ranks.get(&(p - 1)).copied().unwrap_or(0);
            if h > 0 {
                cohomology.insert(p, h);
            }
        }
        let euler = |m: &BTreeMap<i64, usize>| m.iter().map(|(p, d)| if p % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum::<i64>();
        HomComplexReport { euler_consistent: euler(&complex) == euler(&cohomology), complex, cohomology }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomComplexReport {
    pub complex: BTreeMap<i64, usize>,
    pub cohomology: BTreeMap<i64, usize>,
    pub euler_consistent: bool,
}

impl HomComplexReport {
    pub fn is_acyclic(&self) -> bool {
        self.cohomology.is_empty()
    }
}

pub fn hom_complex(d: &DAlgebra, x: &TwistedComplex, y: &TwistedComplex) -> HomComplexReport {
    HomComplex::new(d, x, y).report()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairResult {
    pub source: String,
    pub target: String,
    pub cohomology: BTreeMap<i64, usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalityReport {
    pub k_exceptional: Vec<PairResult>,
    pub k_backward_vanishing: Vec<PairResult>,
    pub p_orthogonal: Vec<PairResult>,
    pub q_orthogonal: Vec<PairResult>,
    pub passed: bool,
}

pub fn exceptionality_suite(d: &DAlgebra) -> Result<ExceptionalityReport> {
    let mods = build_modules(d)?;
    let m = d.family.m();
    let one_in_zero: BTreeMap<i64, usize> = [(0, 1)].into_iter().collect();
    let mut k_exc = Vec::new();
    let mut k_back = Vec::new();
    let mut p_orth = Vec::new();
    let mut q_orth = Vec::new();
    for i in 0..m {
        let r = hom_complex(d, &mods.k[i], &mods.k[i]);
        k_exc.push(PairResult { source: format!("K{}", i + 1), target: format!("K{}", i + 1), ok: r.cohomology == one_in_zero && r.euler_consistent, cohomology: r.cohomology });
        for j in 0..i {
            let r = hom_complex(d, &mods.k[i], &mods.k[j]);
            k_back.push(PairResult { source: format!("K{}", i + 1), target: format!("K{}", j + 1), ok: r.is_acyclic(), cohomology: r.cohomology });
        }
    }
    for (name, p) in [("P1", &mods.p1), ("P2", &mods.p2)] {
        for j in 0..m {
            let r = hom_complex(d, p, &mods.k[j]);
            p_orth.push(PairResult { source: name.into(), target: format!("K{}", j + 1), ok: r.is_acyclic(), cohomology: r.cohomology });
        }
    }
    let qs = projectives(d);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let r = hom_complex(d, &qs[2 + i], &qs[2 + j]);
                q_orth.push(PairResult { source: format!("Ql{}", i + 1), target: format!("Ql{}", j + 1), ok: r.is_acyclic() && r.complex.is_empty(), cohomology: r.cohomology });
            }
        }
    }
    let passed = [&k_exc, &k_back, &p_orth, &q_orth].iter().all(|v| v.iter().all(|r| r.ok));
    Ok(ExceptionalityReport { k_exceptional: k_exc, k_backward_vanishing: k_back, p_orthogonal: p_orth, q_orthogonal: q_orth, passed })
}

/// `χ = (0, 1 − δ_1, …, 1 − δ_m)`.
pub fn chi_for_delta(delta: &[i64]) -> Vec<i64> {
    std::iter::once(0).chain(delta.iter().map(|d| 1 - d)).collect()
}

/// The generators `ξ(b_i)`, `ξ(c)` as maps between `P₁` and `P₂`.
pub struct Xi<'a> {
    pub d: &'a DAlgebra,
    pub mods: &'a Modules,
    theta_v: Vec<crate::exactla::Matrix>,
}

impl<'a> Xi<'a> {
    pub fn new(d: &'a DAlgebra, mods: &'a Modules) -> Result<Self> {
        Ok(Xi { d, mods, theta_v: complements(&d.family)?.theta_v })
    }

    fn module(&self, v: usize) -> &TwistedComplex {
        if v == 0 {
            &self.mods.p1
        } else {
            &self.mods.p2
        }
    }

    /// `Q₂[1] → Q_{l_i}[δ_i]` by `β_i`; a map `P₂ → P₁`.
    pub fn b(&self, i: usize) -> DMat {
        let mut f = DMat::zero(self.mods.p1.len(), self.mods.p2.len());
        f.add_entry(i, self.mods.p2.len() - 1, &self.d.beta(i));
        f
    }

    /// `c: Q₁[1] → Q₂[1]` and `θ(c)_j: Q_{l_i}[δ_i] → v_{ij} ⊗ Q_{l_i}[δ_i]`; a map `P₁ → P₂`.
    pub fn c(&self, x: &[Scalar]) -> DMat {
        let (m, k) = (self.d.family.m(), self.d.k);
        let mut f = DMat::zero(self.mods.p2.len(), self.mods.p1.len());
        f.add_entry(self.mods.p2.len() - 1, m, &self.d.c_element(x));
        for i in 0..m {
            let coords = self.theta_v[i].apply(x);
            for j in 0..k {
                if !coords[j].is_zero() {
                    f.add_entry(i * k + j, i, &self.d.idempotent(self.d.vertex_l(i)).scaled(&coords[j]));
                }
            }
        }
        f
    }

    pub fn identity(&self, v: usize) -> DMat {
        self.module(v).identity(self.d)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockComparison {
    pub source: usize,
    pub target: usize,
    pub cohomology: BTreeMap<i64, usize>,
    pub r_dims: BTreeMap<i64, usize>,
    pub bijective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndCohomologyReport {
    pub chi: Vec<i64>,
    pub relations_hold: bool,
    pub images_are_cycles: bool,
    pub blocks: Vec<BlockComparison>,
    pub cohomology_total: usize,
    pub r_dim: usize,
    pub passed: bool,
}

/// Compares `H*(End(P₁ ⊕ P₂))` with `R_F(χ)` through `ξ̄`.
pub fn endomorphism_cohomology(d: &DAlgebra, chi: &[i64]) -> Result<EndCohomologyReport> {
    let expected = chi_for_delta(&d.delta);
    if chi != expected.as_slice() {
        return Err(Error::Invalid(format!("grading must be {expected:?} for these shifts")));
    }
    let f = &d.family;
    let (n, m) = (f.n(), f.m());
    let mods = build_modules(d)?;
    let xi = Xi::new(d, &mods)?;
    let r = apply_grading(&build_r(f)?, chi)?;

    // Relations 1)–3) hold on the nose.
    let mut relations_hold = true;
    let unit = |l: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[l] = Scalar::one();
        v
    };
    for i in 0..m {
        for j in i..m {
            for l in 0..n {
                relations_hold &= xi.b(i).compose(d, &xi.c(&unit(l))).compose(d, &xi.b(j)).is_zero();
            }
        }
        let p = &f.pairs()[i];
        for s in 0..p.v.dim() {
            relations_hold &= xi.b(i).compose(d, &xi.c(p.v.basis_vector(s))).is_zero();
        }
        for s in 0..p.w.dim() {
            relations_hold &= xi.c(p.w.basis_vector(s)).compose(d, &xi.b(i)).is_zero();
        }
    }
    verify(relations_hold, || "ξ does not respect the defining relations".into())?;

    // ξ̄ on every basis word.
    let letter_image = |l: &Letter| -> DMat {
        match *l {
            Letter::E(v) => xi.identity(v),
            Letter::B(p) => xi.b(p),
            _ => xi.c(&r.letter_vector(l)),
        }
    };
    let images: Vec<DMat> = r
        .meta
        .iter()
        .map(|b| {
            let mut acc = letter_image(&b.letters[0]);
            for l in &b.letters[1..] {
                acc = acc.compose(d, &letter_image(l));
            }
            acc
        })
        .collect();

    let mut blocks = Vec::new();
    let mut images_are_cycles = true;
    let mut cohomology_total = 0;
    for s in 0..2 {
        for t in 0..2 {
            let hc = HomComplex::new(d, xi.module(s), xi.module(t));
            let rep = hc.report();
            let r_dims = r.algebra.block_degree_dims(t, s);
            let mut bijective = rep.cohomology == r_dims;
            for (&p, &h) in &rep.cohomology {
                let ids: Vec<usize> = (0..r.dim())
                    .filter(|&i| {
                        let b = &r.algebra.basis[i];
                        b.source == s && b.target == t && b.zdegree == p
                    })
                    .collect();
                let mut e = hc.boundaries(p);
                let base = e.rank();
                for &i in &ids {
                    let img = &images[i];
                    let cycle = hc.differential(img, p).is_zero() && hc.has_degree(img, p);
                    images_are_cycles &= cycle;
                    e.insert(&hc.flatten(img));
                }
                bijective &= e.rank() - base == h && ids.len() == h;
            }
            cohomology_total += rep.cohomology.values().sum::<usize>();
            blocks.push(BlockComparison { source: s + 1, target: t + 1, cohomology: rep.cohomology, r_dims, bijective });
        }
    }
    let passed = relations_hold && images_are_cycles && blocks.iter().all(|b| b.bijective) && cohomology_total == r.dim();
    Ok(EndCohomologyReport { chi: chi.to_vec(), relations_hold, images_are_cycles, blocks, cohomology_total, r_dim: r.dim(), passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::random_family;

    fn nodal(m: usize, seed: u64) -> Family {
        random_family(2, &vec![1; m], seed).unwrap()
    }

    #[test]
    fn nodal_dimension() {
        let d = build_d(&nodal(1, 3), &[0]).unwrap();
        assert_eq!(d.algebra().dim(), 9);
        assert!(hom_table(&d).iter().all(|e| e.ok));
    }

    #[test]
    fn rejects_unequal_dimensions() {
        let f = random_family(3, &[2, 1], 1).unwrap();
        assert!(build_d(&f, &[0, 0]).is_err());
        assert!(build_d(&nodal(2, 1), &[0]).is_err());
    }

    #[test]
    fn hom_table_with_shifts() {
        for (k, delta) in [(1usize, vec![0, 0]), (1, vec![1, 2]), (2, vec![-1, 3])] {
            let f = random_family(3, &[k; 2], 17).unwrap();
            let d = build_d(&f, &delta).unwrap();
            for e in hom_table(&d) {
                assert!(e.ok, "{e:?}");
            }
        }
    }

    #[test]
    fn relation_space_is_traceless_plus_w() {
        // φ_ij c spans V^∨ ⊗ C modulo Z_i, which is one-dimensional.
        let f = random_family(3, &[2], 5).unwrap();
        let d = build_d(&f, &[1]).unwrap();
        let mut e = Echelon::new();
        for j in 0..2 {
            for l in 0..3 {
                let mut x = vec![Scalar::zero(); 3];
                x[l] = Scalar::one();
                e.insert(&d.mul(&d.phi(0, j), &d.c_element(&x)));
            }
        }
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn modules_square_to_zero() {
        let d = build_d(&nodal(2, 4), &[0, 0]).unwrap();
        let mods = build_modules(&d).unwrap();
        assert_eq!(mods.p1.len(), 3);
        assert_eq!(mods.p2.len(), 3);
        for k in &mods.k {
            // β_i η_i = 0
            let b = &k.differential.entries[&(0, 1)];
            let v = &k.differential.entries[&(1, 2)];
            assert!(d.mul(b, v).is_zero());
        }
    }

    #[test]
    fn projective_homs() {
        let d = build_d(&random_family(3, &[1, 1, 1], 2).unwrap(), &[0, 1, 2]).unwrap();
        let qs = projectives(&d);
        for (a, q) in qs.iter().enumerate() {
            let r = hom_complex(&d, q, q);
            assert_eq!(r.cohomology, [(0, 1)].into_iter().collect(), "vertex {a}");
        }
        for i in 0..3 {
            assert!(hom_complex(&d, &qs[2 + i], &qs[1]).complex.is_empty());
        }
    }

    #[test]
    fn exceptional_nodal() {
        for delta in [vec![0, 0, 0], vec![1, 2, 3]] {
            let d = build_d(&nodal(3, 8), &delta).unwrap();
            let rep = exceptionality_suite(&d).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
        let d = build_d(&nodal(1, 8), &[0]).unwrap();
        assert!(exceptionality_suite(&d).unwrap().passed);
    }

    #[test]
    fn endomorphisms_nodal_one_pair() {
        let d = build_d(&nodal(1, 2), &[0]).unwrap();
        let rep = endomorphism_cohomology(&d, &[0, 1]).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.r_dim, 8);
        let mut by_degree = BTreeMap::new();
        for b in &rep.blocks {
            for (p, h) in &b.cohomology {
                *by_degree.entry(*p).or_insert(0) += h;
            }
        }
        assert_eq!(by_degree, [(0, 4), (1, 4)].into_iter().collect());
        assert!(endomorphism_cohomology(&d, &[0, 0]).is_err());
    }

    #[test]
    fn endomorphisms_match_graded_r() {
        for (k, delta) in [(1usize, vec![2, -1]), (2, vec![0, 1])] {
            let f = random_family(3, &[k; 2], 21).unwrap();
            let d = build_d(&f, &delta).unwrap();
            let rep = endomorphism_cohomology(&d, &chi_for_delta(&delta)).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn xi_b_kills_v() {
        let f = random_family(2, &[1, 1], 6).unwrap();
        let d = build_d(&f, &[0, 0]).unwrap();
        let mods = build_modules(&d).unwrap();
        let xi = Xi::new(&d, &mods).unwrap();
        for i in 0..2 {
            let v = f.pairs()[i].v.basis_vector(0).to_vec();
            assert!(xi.b(i).compose(&d, &xi.c(&v)).is_zero());
        }
    }
}
