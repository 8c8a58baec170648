//! Twisted tensor products over a common base ring, the v-twist built from
//! augmentations, and the factorization of `R_F` into elementary pieces.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{check_isomorphism, check_multiplicative, BasisElement, GradedAlgebra};
use crate::error::{verify, Error, Result};
use crate::exactla::{sparse_kernel, Echelon, Scalar, SparseVec};
use crate::family::{require_g, Family};
use crate::quiverpath::{build_oracle, green_quiver};
use crate::ralgebra::{apply_grading, build_r, Letter, RAlgebra};

/// An algebra `total` over `base`, with `inclusion[r]` the image of base basis
/// element `r` and `augmentation[a]` the image of total basis element `a`.
#[derive(Clone, Debug)]
pub struct RingOverR {
    pub base: GradedAlgebra,
    pub total: GradedAlgebra,
    pub inclusion: Vec<SparseVec>,
    pub augmentation: Option<Vec<SparseVec>>,
}

impl RingOverR {
    pub fn check(&self) -> Result<()> {
        verify(self.inclusion.len() == self.base.dim(), || "inclusion has the wrong size".into())?;
        let unit = self.base.one().map_linear(|k| self.inclusion[k].clone());
        verify(unit == self.total.one(), || "inclusion is not unital".into())?;
        check_multiplicative(&self.base, &self.total, &self.inclusion)?;
        if let Some(aug) = &self.augmentation {
            verify(aug.len() == self.total.dim(), || "augmentation has the wrong size".into())?;
            check_multiplicative(&self.total, &self.base, aug)?;
            for r in 0..self.base.dim() {
                let back = self.inclusion[r].map_linear(|k| aug[k].clone());
                verify(back == SparseVec::unit(r), || "augmentation does not split the inclusion".into())?;
            }
        }
        Ok(())
    }

    fn aug(&self) -> Result<&[SparseVec]> {
        self.augmentation.as_deref().ok_or_else(|| Error::Invalid("augmentation required".into()))
    }

    /// `ker π`, as a basis of sparse vectors in `total`.
    pub fn augmentation_ideal(&self) -> Result<Vec<SparseVec>> {
        Ok(sparse_kernel(self.aug()?))
    }
}

/// Algebra with `vertex_count` vertices and one arrow per label, each
/// `source → target` in zdegree `zdeg`; radical squared is zero.
pub fn arrow_algebra(vertex_count: usize, source: usize, target: usize, labels: &[String], zdeg: i64) -> GradedAlgebra {
    let mut basis: Vec<BasisElement> = (0..vertex_count)
        .map(|v| BasisElement { source: v, target: v, length: 0, zdegree: 0, word: format!("e{}", v + 1) })
        .collect();
    for l in labels {
        basis.push(BasisElement { source, target, length: 1, zdegree: zdeg, word: l.clone() });
    }
    let d = basis.len();
    let mut table = vec![SparseVec::new(); d * d];
    for x in 0..d {
        for y in 0..d {
            let (bx, by) = (&basis[x], &basis[y]);
            if bx.source != by.target {
                continue;
            }
            if bx.length == 0 {
                table[x * d + y] = SparseVec::unit(y);
            } else if by.length == 0 {
                table[x * d + y] = SparseVec::unit(x);
            }
        }
    }
    GradedAlgebra::new(vertex_count, basis, (0..vertex_count).collect(), table)
}

/// `total` over its semisimple part, with the augmentation killing the radical.
pub fn over_semisimple(total: GradedAlgebra) -> RingOverR {
    let n = total.vertex_count;
    let base = GradedAlgebra::semisimple(n);
    let inclusion = total.idempotents.iter().map(|&e| SparseVec::unit(e)).collect();
    let mut aug = vec![SparseVec::new(); total.dim()];
    for (v, &e) in total.idempotents.iter().enumerate() {
        aug[e] = SparseVec::unit(v);
    }
    RingOverR { base, total, inclusion, augmentation: Some(aug) }
}

/// `A ⊗_R B`: composable pairs modulo `a·r ⊗ b − a ⊗ r·b`.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    pub pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    relations: Echelon,
    /// Pair indices of the surviving basis, increasing.
    pub basis: Vec<usize>,
    basis_of_pair: HashMap<usize, usize>,
}

impl BalancedTensor {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.rank()
    }

    /// `x ⊗ y` expanded over composable pairs.
    pub fn pair_vector(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in x.iter() {
            for (j, d) in y.iter() {
                if let Some(&p) = self.pair_index.get(&(i, j)) {
                    out.add_term(p, &(c * d));
                }
            }
        }
        out
    }

    /// Projection onto the quotient basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let r = self.relations.reduce(v);
        SparseVec::from_pairs(r.iter().map(|(p, c)| (self.basis_of_pair[&p], c.clone())))
    }

    pub fn class_of(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.reduce(&self.pair_vector(x, y))
    }
}

fn same_base(a: &RingOverR, b: &RingOverR) -> Result<()> {
    verify(a.base.checksum() == b.base.checksum(), || "factors are over different base rings".into())
}

pub fn balanced_tensor(a: &RingOverR, b: &RingOverR) -> Result<BalancedTensor> {
    same_base(a, b)?;
    let (ta, tb) = (&a.total, &b.total);
    let mut pairs = Vec::new();
    for i in 0..ta.dim() {
        for j in 0..tb.dim() {
            if ta.basis[i].source == tb.basis[j].target {
                pairs.push((i, j));
            }
        }
    }
    let pair_index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut t = BalancedTensor {
        pairs,
        pair_index,
        relations: Echelon::new(),
        basis: Vec::new(),
        basis_of_pair: HashMap::new(),
    };
    let gens = a.base.radical_generators();
    for &r in &gens {
        let (rs, rt) = (a.base.basis[r].source, a.base.basis[r].target);
        let ra = &a.inclusion[r];
        let rb = &b.inclusion[r];
        for x in (0..ta.dim()).filter(|&x| ta.basis[x].source == rt) {
            let xr = ta.mul(&SparseVec::unit(x), ra);
            for y in (0..tb.dim()).filter(|&y| tb.basis[y].target == rs) {
                let ry = tb.mul(rb, &SparseVec::unit(y));
                let mut rel = t.pair_vector(&xr, &SparseVec::unit(y));
                rel.add_scaled(&t.pair_vector(&SparseVec::unit(x), &ry), &-Scalar::one());
                t.relations.insert(&rel);
            }
        }
    }
    for p in 0..t.pairs.len() {
        if !t.relations.is_pivot(p) {
            t.basis_of_pair.insert(p, t.basis.len());
            t.basis.push(p);
        }
    }
    Ok(t)
}

/// `τ: B ⊗_R A → A ⊗_R B`; `images[i]` is the image of basis element `i` of `ba`.
#[derive(Clone, Debug)]
pub struct TwistMap {
    pub ba: BalancedTensor,
    pub images: Vec<SparseVec>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TwistChecks {
    pub fixsides: bool,
    pub well_defined: bool,
    pub inclusions_multiplicative: bool,
    pub associative: bool,
    pub zdegree_additive: bool,
}

/// Raw `v(b ⊗ a)` on a pair of basis elements, as a vector in `A ⊗_R B`.
fn v_on_pair(a: &RingOverR, b: &RingOverR, ab: &BalancedTensor, bi: usize, ai: usize) -> Result<SparseVec> {
    let (pa, pb) = (a.aug()?, b.aug()?);
    let eps_a_pi_b = pb[bi].map_linear(|r| a.inclusion[r].clone());
    let eps_b_pi_a = pa[ai].map_linear(|r| b.inclusion[r].clone());
    let x = a.total.mul(&eps_a_pi_b, &SparseVec::unit(ai));
    let y = b.total.mul(&SparseVec::unit(bi), &eps_b_pi_a);
    let mut out = ab.pair_vector(&x, &b.total.one());
    out.add(&ab.pair_vector(&a.total.one(), &y));
    out.add_scaled(&ab.pair_vector(&eps_a_pi_b, &eps_b_pi_a), &-Scalar::one());
    Ok(ab.reduce(&out))
}

/// The v-twist, checked for the unit axioms and for compatibility with the
/// relations of `B ⊗_R A`.
pub fn v_twist(a: &RingOverR, b: &RingOverR, ab: &BalancedTensor) -> Result<(TwistMap, TwistChecks)> {
    let ba = balanced_tensor(b, a)?;
    let mut raw = Vec::with_capacity(ba.pairs.len());
    for &(bi, ai) in &ba.pairs {
        raw.push(v_on_pair(a, b, ab, bi, ai)?);
    }
    // Compatible with b·r ⊗ a = b ⊗ r·a.
    for row in ba.relations.rows() {
        let v = row.map_linear(|p| raw[p].clone());
        verify(v.is_zero(), || "v-twist is not balanced over the base".into())?;
    }
    for (bi, b_el) in b.total.basis.iter().enumerate() {
        let e = a.total.idempotents[b_el.source];
        let got = raw[ba.pair_index[&(bi, e)]].clone();
        let want = ab.class_of(&a.total.one(), &SparseVec::unit(bi));
        verify(got == want, || format!("v(b ⊗ 1) ≠ 1 ⊗ b for b = {}", b_el.word))?;
    }
    for (ai, a_el) in a.total.basis.iter().enumerate() {
        let e = b.total.idempotents[a_el.target];
        let got = raw[ba.pair_index[&(e, ai)]].clone();
        let want = ab.class_of(&SparseVec::unit(ai), &b.total.one());
        verify(got == want, || format!("v(1 ⊗ a) ≠ a ⊗ 1 for a = {}", a_el.word))?;
    }
    let images = ba.basis.iter().map(|&p| raw[p].clone()).collect();
    let checks = TwistChecks { fixsides: true, well_defined: true, ..Default::default() };
    Ok((TwistMap { ba, images }, checks))
}

#[derive(Clone, Debug)]
pub struct TwistedProduct {
    pub a: RingOverR,
    pub b: RingOverR,
    pub ab: BalancedTensor,
    pub tau: TwistMap,
    pub algebra: GradedAlgebra,
    pub checks: TwistChecks,
}

impl TwistedProduct {
    /// `x ↦ x ⊗ 1`.
    pub fn iota_a(&self, x: &SparseVec) -> SparseVec {
        self.ab.class_of(x, &self.b.total.one())
    }

    /// `y ↦ 1 ⊗ y`.
    pub fn iota_b(&self, y: &SparseVec) -> SparseVec {
        self.ab.class_of(&self.a.total.one(), y)
    }

    /// The product as a ring over the common base, augmented by `π_A ⊗ π_B`.
    pub fn as_ring(&self) -> Result<RingOverR> {
        let base = self.a.base.clone();
        let inclusion = self.a.inclusion.iter().map(|x| self.iota_a(x)).collect();
        let (pa, pb) = (self.a.aug()?, self.b.aug()?);
        let augmentation = self
            .ab
            .basis
            .iter()
            .map(|&p| {
                let (x, y) = self.ab.pairs[p];
                base.mul(&pa[x], &pb[y])
            })
            .collect();
        let r = RingOverR { base, total: self.algebra.clone(), inclusion, augmentation: Some(augmentation) };
        r.check()?;
        Ok(r)
    }
}

/// `A ⊗_R^v B` with `μ = (μ_A ⊗ μ_B)(1 ⊗ v ⊗ 1)`, every axiom verified.
pub fn twisted_product(a: &RingOverR, b: &RingOverR) -> Result<TwistedProduct> {
    a.check()?;
    b.check()?;
    let ab = balanced_tensor(a, b)?;
    let (tau, mut checks) = v_twist(a, b, &ab)?;
    let (ta, tb) = (&a.total, &b.total);
    let basis: Vec<BasisElement> = ab
        .basis
        .iter()
        .map(|&p| {
            let (x, y) = ab.pairs[p];
            let (bx, by) = (&ta.basis[x], &tb.basis[y]);
            BasisElement {
                source: by.source,
                target: bx.target,
                length: bx.length + by.length,
                zdegree: bx.zdegree + by.zdegree,
                word: format!("{}⊗{}", bx.word, by.word),
            }
        })
        .collect();
    let mut idempotents = Vec::new();
    for v in 0..ta.vertex_count {
        let e = ab.class_of(&SparseVec::unit(ta.idempotents[v]), &SparseVec::unit(tb.idempotents[v]));
        let id = e.keys().next();
        verify(e.len() == 1 && e.get(id.unwrap()).is_some_and(|c| c.is_one()), || {
            format!("e{} ⊗ e{} is not a basis element of the balanced tensor", v + 1, v + 1)
        })?;
        idempotents.push(id.unwrap());
    }
    let d = ab.dim();
    let mut table = vec![SparseVec::new(); d * d];
    for i in 0..d {
        let (x, y) = ab.pairs[ab.basis[i]];
        for j in 0..d {
            let (x2, y2) = ab.pairs[ab.basis[j]];
            if basis[i].source != basis[j].target {
                continue;
            }
            let mid = tau.ba.class_of(&SparseVec::unit(y), &SparseVec::unit(x2));
            let mut acc = SparseVec::new();
            for (k, c) in mid.iter() {
                for (q, c2) in tau.images[k].iter() {
                    let (u, w) = ab.pairs[ab.basis[q]];
                    let left = ta.mul_basis(x, u);
                    let right = tb.mul_basis(w, y2);
                    if left.is_zero() || right.is_zero() {
                        continue;
                    }
                    acc.add_scaled(&ab.pair_vector(left, right), &(c * c2));
                }
            }
            table[i * d + j] = ab.reduce(&acc);
        }
    }
    let algebra = GradedAlgebra::new(ta.vertex_count, basis, idempotents, table);
    algebra.check_units()?;
    let mut tp = TwistedProduct { a: a.clone(), b: b.clone(), ab, tau, algebra, checks: TwistChecks::default() };
    let ia: Vec<SparseVec> = (0..ta.dim()).map(|x| tp.iota_a(&SparseVec::unit(x))).collect();
    let ib: Vec<SparseVec> = (0..tb.dim()).map(|y| tp.iota_b(&SparseVec::unit(y))).collect();
    check_multiplicative(ta, &tp.algebra, &ia)?;
    check_multiplicative(tb, &tp.algebra, &ib)?;
    checks.inclusions_multiplicative = true;
    tp.algebra.check_associativity()?;
    checks.associative = true;
    tp.algebra.check_zdegree_additive()?;
    checks.zdegree_additive = true;
    tp.checks = checks;
    Ok(tp)
}

/// Span of the ideal powers `J, J², …` until zero; returns the nilpotency
/// index, or an error if the powers stabilize at a nonzero space.
pub fn nilpotency_index(alg: &GradedAlgebra, ideal: &[SparseVec]) -> Result<usize> {
    let mut j = Echelon::new();
    for v in ideal {
        j.insert(v);
    }
    let gens: Vec<SparseVec> = j.rows().cloned().collect();
    if gens.is_empty() {
        return Ok(0);
    }
    let mut power = gens.clone();
    let mut t = 1;
    while !power.is_empty() {
        if t > alg.dim() + 1 {
            return Err(Error::Verification("ideal is not nilpotent".into()));
        }
        let mut next = Echelon::new();
        for x in &power {
            for g in &gens {
                next.insert(&alg.mul(x, g));
            }
        }
        power = next.rows().cloned().collect();
        t += 1;
    }
    Ok(t - 1)
}

/// Checks that `ideal` spans a two-sided ideal.
pub fn is_two_sided_ideal(alg: &GradedAlgebra, ideal: &[SparseVec]) -> bool {
    let mut j = Echelon::new();
    for v in ideal {
        j.insert(v);
    }
    let gens: Vec<SparseVec> = j.rows().cloned().collect();
    (0..alg.dim()).all(|x| {
        let ux = SparseVec::unit(x);
        gens.iter().all(|g| j.contains(&alg.mul(&ux, g)) && j.contains(&alg.mul(g, &ux)))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationStep {
    /// One-based index of the pair peeled off.
    pub pair: usize,
    pub left: String,
    pub base: String,
    pub right: String,
    pub twist: String,
    pub left_dim: usize,
    pub base_dim: usize,
    pub right_dim: usize,
    pub product_dim: usize,
    pub target_dim: usize,
    pub left_checks: TwistChecks,
    pub product_checks: TwistChecks,
    pub augmentations_verified: bool,
    pub rho_isomorphism: bool,
    pub rho_preserves_zdegree: bool,
    pub ideal_two_sided: bool,
    pub ideal_nilpotency_index: usize,
    pub checksum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationCertificate {
    pub n: usize,
    pub m: usize,
    pub chi: Vec<i64>,
    pub chain: Vec<FactorizationStep>,
    pub terminals: Vec<String>,
    pub smoothness: String,
}

/// `K(V_m)`: `k_m` arrows `1 → 2` labelled by a basis of `V_m`.
fn kronecker_v(kv: usize, pair: usize, zdeg: i64) -> GradedAlgebra {
    let labels: Vec<String> = (0..kv).map(|j| format!("v{}.{}", pair + 1, j + 1)).collect();
    arrow_algebra(2, 0, 1, &labels, zdeg)
}

/// `K₁ᵒᵖ`: one arrow `2 → 1`.
fn k1_op(pair: usize, zdeg: i64) -> GradedAlgebra {
    arrow_algebra(2, 1, 0, &[format!("b{}", pair + 1)], zdeg)
}

/// Maps the basis of `K(V_m)` into `R` (idempotents and `c`-vectors of `V_m`).
fn kv_images(r: &RAlgebra, f: &Family, pair: usize) -> Vec<SparseVec> {
    let v = &f.pairs()[pair].v;
    let mut out = vec![SparseVec::unit(r.algebra.idempotents[0]), SparseVec::unit(r.algebra.idempotents[1])];
    for j in 0..v.dim() {
        out.push(r.c_vector(v.basis_vector(j)));
    }
    out
}

/// One peeling step `R_F ≅ K(V_m; b_m) ⊗^v_{K(V_m)} R_G`.
fn factor_step(f: &Family, chi: &[i64]) -> Result<FactorizationStep> {
    let m = f.m();
    let last = m - 1;
    let g = f.truncated();
    let rf = apply_grading(&build_r(f)?, chi)?;
    let rg = apply_grading(&build_r(&g)?, &chi[..m])?;
    let kv_dim = f.pairs()[last].v.dim();

    let kv = kronecker_v(kv_dim, last, chi[0]);
    let left = twisted_product(&over_semisimple(kv.clone()), &over_semisimple(k1_op(last, chi[m])))?;
    verify(left.algebra.dim() == 2 * kv_dim + 3, || {
        format!("K(V;b) has dim {}, expected {}", left.algebra.dim(), 2 * kv_dim + 3)
    })?;

    // K(V_m; b_m) over K(V_m): kill everything carrying b_m.
    let kv_ring = over_semisimple(kv.clone());
    let left_incl: Vec<SparseVec> = (0..kv.dim()).map(|x| left.iota_a(&SparseVec::unit(x))).collect();
    let k1_aug = left.b.aug()?.to_vec();
    let left_aug: Vec<SparseVec> = left
        .ab
        .basis
        .iter()
        .map(|&p| {
            let (x, y) = left.ab.pairs[p];
            let s = k1_aug[y].map_linear(|r| kv_ring.inclusion[r].clone());
            kv.mul(&SparseVec::unit(x), &s)
        })
        .collect();
    let a_ring = RingOverR {
        base: kv.clone(),
        total: left.algebra.clone(),
        inclusion: left_incl,
        augmentation: Some(left_aug),
    };

    // R_G over K(V_m): c ↦ θ_{•m}(c), P ≠ ∅ ↦ 0.
    let theta_v = &rf.comp.theta_v[last];
    let mut rg_aug = Vec::with_capacity(rg.dim());
    for b in &rg.meta {
        let img = match b.letters.as_slice() {
            [Letter::E(v)] => SparseVec::unit(*v),
            [Letter::C(l)] => {
                let mut e = vec![Scalar::zero(); f.n()];
                e[*l] = Scalar::one();
                SparseVec::from_pairs(theta_v.apply(&e).into_iter().enumerate().map(|(j, c)| (2 + j, c)))
            }
            _ => SparseVec::new(),
        };
        rg_aug.push(img);
    }
    let b_ring = RingOverR {
        base: kv.clone(),
        total: rg.algebra.clone(),
        inclusion: kv_images(&rg, f, last),
        augmentation: Some(rg_aug),
    };
    a_ring.check()?;
    b_ring.check()?;

    let c = twisted_product(&a_ring, &b_ring)?;

    // ρ(a ⊗ r) = a·r inside R_F.
    let kv_in_f = kv_images(&rf, f, last);
    let b_in_f = SparseVec::unit(rf.b_id(last));
    let left_in_f: Vec<SparseVec> = left
        .ab
        .basis
        .iter()
        .map(|&p| {
            let (x, y) = left.ab.pairs[p];
            let yi = if y < 2 { SparseVec::unit(rf.algebra.idempotents[y]) } else { b_in_f.clone() };
            rf.algebra.mul(&kv_in_f[x], &yi)
        })
        .collect();
    let rg_in_f: Vec<SparseVec> = rg
        .meta
        .iter()
        .map(|b| {
            rf.id_of(&b.letters)
                .map(SparseVec::unit)
                .ok_or_else(|| Error::Verification("word of R_G missing from R_F".into()))
        })
        .collect::<Result<_>>()?;
    let rho: Vec<SparseVec> = c
        .ab
        .basis
        .iter()
        .map(|&p| {
            let (x, y) = c.ab.pairs[p];
            rf.algebra.mul(&left_in_f[x], &rg_in_f[y])
        })
        .collect();
    check_isomorphism(&c.algebra, &rf.algebra, &rho)?;
    let zdeg_ok = rho
        .iter()
        .enumerate()
        .all(|(i, img)| img.keys().all(|k| rf.algebra.basis[k].zdegree == c.algebra.basis[i].zdegree));
    verify(zdeg_ok, || "ρ does not preserve zdegree".into())?;

    // I_A ⊗ B inside the product.
    let mut ideal = Vec::new();
    for x in a_ring.augmentation_ideal()? {
        for y in 0..rg.dim() {
            let v = c.ab.class_of(&x, &SparseVec::unit(y));
            if !v.is_zero() {
                ideal.push(v);
            }
        }
    }
    let two_sided = is_two_sided_ideal(&c.algebra, &ideal);
    verify(two_sided, || "I_A ⊗ B is not a two-sided ideal".into())?;
    let nil = nilpotency_index(&c.algebra, &ideal)?;

    Ok(FactorizationStep {
        pair: m,
        left: format!("K(V{m};b{m})"),
        base: format!("K(V{m})"),
        right: format!("R_{}", m - 1),
        twist: "v".into(),
        left_dim: left.algebra.dim(),
        base_dim: kv.dim(),
        right_dim: rg.dim(),
        product_dim: c.algebra.dim(),
        target_dim: rf.dim(),
        left_checks: left.checks.clone(),
        product_checks: c.checks.clone(),
        augmentations_verified: true,
        rho_isomorphism: true,
        rho_preserves_zdegree: true,
        ideal_two_sided: true,
        ideal_nilpotency_index: nil,
        checksum: c.algebra.checksum(),
    })
}

/// Peels off pairs from the top until the Kronecker algebra remains.
pub fn factorize_r(f: &Family, chi: &[i64]) -> Result<FactorizationCertificate> {
    require_g(f)?;
    if chi.len() != f.m() + 1 {
        return Err(Error::Invalid(format!("grading needs {} entries, got {}", f.m() + 1, chi.len())));
    }
    let mut chain = Vec::new();
    let mut terminals = Vec::new();
    let mut cur = f.clone();
    while cur.m() > 0 {
        let m = cur.m();
        chain.push(factor_step(&cur, &chi[..m + 1])?);
        terminals.push(format!("K(V{m}) = K_{}", cur.pairs()[m - 1].v.dim()));
        terminals.push(format!("K1op(b{m})"));
        cur = cur.truncated();
    }
    terminals.push(format!("K_{}", f.n()));
    Ok(FactorizationCertificate {
        n: f.n(),
        m: f.m(),
        chi: chi.to_vec(),
        chain,
        terminals,
        smoothness: "CERTIFIED-BY-FACTORIZATION".into(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectivityReport {
    pub pair: usize,
    pub columns: usize,
    pub rank: usize,
    pub injective: bool,
    pub q1_copies: usize,
    pub q2_copies: usize,
}

/// Injectivity of `V_m ⊗ e₁R_G → e₂R_G` and the resulting decomposition of
/// `R_G` as a left `K(V_m)`-module.
pub fn left_projectivity_check(f: &Family) -> Result<ProjectivityReport> {
    require_g(f)?;
    let m = f.m();
    if m == 0 {
        return Err(Error::Degenerate("left projectivity needs m ≥ 1".into()));
    }
    let g = f.truncated();
    let rg = build_r(&g)?;
    let v = &f.pairs()[m - 1].v;
    let e1r: Vec<usize> = (0..rg.dim()).filter(|&i| rg.algebra.basis[i].target == 0).collect();
    let e2r = (0..rg.dim()).filter(|&i| rg.algebra.basis[i].target == 1).count();
    let mut e = Echelon::new();
    let mut columns = 0;
    for j in 0..v.dim() {
        let vj = rg.c_vector(v.basis_vector(j));
        for &r in &e1r {
            e.insert(&rg.algebra.mul(&vj, &SparseVec::unit(r)));
            columns += 1;
        }
    }
    let rank = e.rank();
    let injective = rank == columns;
    verify(injective, || format!("V{m} ⊗ e1R → e2R has rank {rank} < {columns}"))?;
    Ok(ProjectivityReport { pair: m, columns, rank, injective, q1_copies: e1r.len(), q2_copies: e2r - columns })
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenStep {
    pub arrow: (usize, usize),
    pub zdegree: i64,
    pub dim: usize,
    pub checks: TwistChecks,
    pub checksum: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenCertificate {
    pub vertices: usize,
    pub steps: Vec<GreenStep>,
    pub smoothness: String,
}

#[derive(Clone, Debug)]
pub struct GeneralizedGreen {
    pub algebra: GradedAlgebra,
    pub certificate: GreenCertificate,
    /// Image of each step's arrow in the final algebra.
    pub arrow_images: Vec<SparseVec>,
}

/// Iterates `A ↦ K_{ij}[d] ⊗^v_{S_N} A` from `A = S_N`; steps are one-based.
pub fn generalized_green(n_vertices: usize, steps: &[(usize, usize, i64)]) -> Result<GeneralizedGreen> {
    if n_vertices == 0 {
        return Err(Error::Invalid("need at least one vertex".into()));
    }
    let mut ring = over_semisimple(GradedAlgebra::semisimple(n_vertices));
    let mut arrows: Vec<SparseVec> = Vec::new();
    let mut cert = Vec::new();
    for (t, &(i, j, d)) in steps.iter().enumerate() {
        if i == j {
            return Err(Error::Invalid(format!("step {} asks for a loop at vertex {i}", t + 1)));
        }
        if i == 0 || j == 0 || i > n_vertices || j > n_vertices {
            return Err(Error::Invalid(format!("step {} uses a vertex outside 1..{n_vertices}", t + 1)));
        }
        let k = arrow_algebra(n_vertices, i - 1, j - 1, &[format!("x{}", t + 1)], d);
        let arrow_id = n_vertices;
        let c = twisted_product(&over_semisimple(k), &ring)?;
        arrows = arrows.iter().map(|x| c.iota_b(x)).collect();
        arrows.push(c.iota_a(&SparseVec::unit(arrow_id)));
        cert.push(GreenStep {
            arrow: (i, j),
            zdegree: d,
            dim: c.algebra.dim(),
            checks: c.checks.clone(),
            checksum: c.algebra.checksum(),
        });
        ring = c.as_ring()?;
    }
    Ok(GeneralizedGreen {
        algebra: ring.total,
        certificate: GreenCertificate {
            vertices: n_vertices,
            steps: cert,
            smoothness: "CERTIFIED-BY-FACTORIZATION".into(),
        },
        arrow_images: arrows,
    })
}

/// Steps `(1,2,0), (2,1,0), …` of length `l`.
pub fn green_steps(l: usize) -> Vec<(usize, usize, i64)> {
    (1..=l).map(|t| if t % 2 == 1 { (1, 2, 0) } else { (2, 1, 0) }).collect()
}

/// The iterated product for `green_steps(l)` is isomorphic to the path
/// quotient `G_l`, via `c_j ↦ x_{2j-1}` and `b_j ↦ x_{2j}`.
pub fn green_presentation_check(l: usize) -> Result<usize> {
    let gg = generalized_green(2, &green_steps(l))?;
    let (q, rels) = green_quiver(l);
    let o = build_oracle(&q, &rels, 2 * l + 4)?;
    let n = l - l / 2;
    let arrow_image = |a: usize| -> SparseVec {
        if a < n {
            gg.arrow_images[2 * a].clone()
        } else {
            gg.arrow_images[2 * (a - n) + 1].clone()
        }
    };
    let images: Vec<SparseVec> = o
        .basis
        .iter()
        .map(|p| {
            if p.arrows.is_empty() {
                SparseVec::unit(gg.algebra.idempotents[p.source])
            } else {
                let mut acc = arrow_image(p.arrows[0]);
                for &a in &p.arrows[1..] {
                    acc = gg.algebra.mul(&acc, &arrow_image(a));
                }
                acc
            }
        })
        .collect();
    check_isomorphism(&o.algebra, &gg.algebra, &images)?;
    Ok(o.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{green_family, kk_family, random_family};
    use crate::ralgebra::chi_zero;

    fn kron(k: usize) -> GradedAlgebra {
        let labels: Vec<String> = (0..k).map(|j| format!("v{j}")).collect();
        arrow_algebra(2, 0, 1, &labels, 0)
    }

    #[test]
    fn tensor_over_field_multiplies_dims() {
        let a = over_semisimple(arrow_algebra(1, 0, 0, &[], 0));
        let b = over_semisimple(arrow_algebra(1, 0, 0, &[], 0));
        assert_eq!(balanced_tensor(&a, &b).unwrap().dim(), 1);
        let a = over_semisimple(GradedAlgebra::semisimple(1));
        let t = balanced_tensor(&a, &a).unwrap();
        assert_eq!(t.dim(), 1);
    }

    #[test]
    fn tensor_of_base_with_itself() {
        let kv = kron(2);
        let r = RingOverR {
            base: kv.clone(),
            total: kv.clone(),
            inclusion: (0..kv.dim()).map(SparseVec::unit).collect(),
            augmentation: Some((0..kv.dim()).map(SparseVec::unit).collect()),
        };
        r.check().unwrap();
        assert_eq!(balanced_tensor(&r, &r).unwrap().dim(), kv.dim());
    }

    #[test]
    fn kv_b_has_expected_basis() {
        for k in 0..=3 {
            let c = twisted_product(&over_semisimple(kron(k)), &over_semisimple(k1_op(0, 0))).unwrap();
            assert_eq!(c.algebra.dim(), 2 * k + 3);
            // b·v vanishes, v·b survives.
            let b = c.iota_b(&SparseVec::unit(2));
            for j in 0..k {
                let v = c.iota_a(&SparseVec::unit(2 + j));
                assert!(c.algebra.mul(&b, &v).is_zero());
                assert!(!c.algebra.mul(&v, &b).is_zero());
            }
        }
    }

    #[test]
    fn v_twist_kills_ideal_products_and_fixes_sides() {
        let a = over_semisimple(kron(2));
        let b = over_semisimple(k1_op(0, 0));
        let ab = balanced_tensor(&a, &b).unwrap();
        let (tau, checks) = v_twist(&a, &b, &ab).unwrap();
        assert!(checks.fixsides && checks.well_defined);
        // v(b ⊗ v_j) = 0 for b, v_j in the augmentation ideals.
        for j in 0..2 {
            let x = tau.ba.class_of(&SparseVec::unit(2), &SparseVec::unit(2 + j));
            let img = x.map_linear(|k| tau.images[k].clone());
            assert!(img.is_zero());
        }
    }

    #[test]
    fn semisimple_factors_give_product_ring() {
        let s = over_semisimple(GradedAlgebra::semisimple(3));
        let c = twisted_product(&s, &s).unwrap();
        assert_eq!(c.algebra.dim(), 3);
        assert!(c.algebra.radical_ids().is_empty());
    }

    #[test]
    fn green_products_match_oracle() {
        for l in 1..=6 {
            green_presentation_check(l).unwrap();
        }
        let gg = generalized_green(2, &green_steps(4)).unwrap();
        let g3 = generalized_green(2, &green_steps(3)).unwrap();
        assert_eq!(g3.algebra.dim(), 8);
        assert_eq!(gg.certificate.steps.len(), 4);
    }

    #[test]
    fn generalized_green_edge_cases() {
        let s = generalized_green(3, &[]).unwrap();
        assert_eq!(s.algebra.dim(), 3);
        let k1 = generalized_green(2, &[(1, 2, 0)]).unwrap();
        assert_eq!(k1.algebra.dim(), 3);
        assert!(generalized_green(2, &[(1, 1, 0)]).is_err());
        let g = generalized_green(3, &[(1, 2, 0), (2, 3, 1), (3, 1, -1), (1, 2, 2)]).unwrap();
        g.algebra.check_associativity().unwrap();
        g.algebra.check_zdegree_additive().unwrap();
    }

    #[test]
    fn factorization_certificates() {
        let cert = factorize_r(&Family::empty(3), &[0]).unwrap();
        assert!(cert.chain.is_empty());
        assert_eq!(cert.terminals, vec!["K_3".to_string()]);
        for f in [kk_family(2).unwrap(), green_family(5).unwrap(), random_family(3, &[2, 1, 1], 5).unwrap()] {
            let cert = factorize_r(&f, &chi_zero(f.m())).unwrap();
            assert_eq!(cert.chain.len(), f.m());
            for s in &cert.chain {
                assert_eq!(s.product_dim, s.target_dim);
                assert!(s.ideal_nilpotency_index >= 1);
            }
        }
    }

    #[test]
    fn nodal_twisted_dimension() {
        let f = random_family(2, &[1, 1], 9).unwrap();
        let cert = factorize_r(&f, &[1, 0, 0]).unwrap();
        assert_eq!(cert.chain[0].product_dim, 12);
    }

    #[test]
    fn left_projectivity() {
        let f = random_family(3, &[2], 1).unwrap();
        let r = left_projectivity_check(&f).unwrap();
        assert_eq!(r.columns, 2);
        assert!(r.injective);
        assert!(left_projectivity_check(&green_family(4).unwrap()).unwrap().injective);
        let f = random_family(3, &[1, 1], 4).unwrap();
        let r = left_projectivity_check(&f).unwrap();
        assert!(r.injective);
        let rg = build_r(&f.truncated()).unwrap();
        let e1 = rg.algebra.basis.iter().filter(|b| b.target == 0).count();
        assert_eq!(r.q1_copies, e1);
    }
}
