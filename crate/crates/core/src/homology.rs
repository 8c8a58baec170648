//! Right modules over a basic algebra: simples, projectives, minimal
//! projective resolutions, global dimension and Loewy length.
//!
//! `P_v = e_v A` is spanned by the basis elements with target `v`, and `A`
//! acts by right multiplication. For the Kronecker algebra with arrows
//! `1 → 2` this gives `dim P_1 = 1` and `dim P_2 = n + 1`.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::error::{verify, Error, Result};
use crate::exactla::{sparse_kernel, Echelon, SparseVec};

/// A finite-dimensional right module; `action[a][i]` is `x_i · a`.
#[derive(Clone, Debug)]
pub struct FDModule {
    pub dim: usize,
    pub action: Vec<Vec<SparseVec>>,
}

impl FDModule {
    /// Identity of `Σ e_v` and `(x·a)·b = x·(ab)` on all basis pairs.
    pub fn check(&self, alg: &GradedAlgebra) -> Result<()> {
        verify(self.action.len() == alg.dim(), || "action table has the wrong size".into())?;
        for i in 0..self.dim {
            let x = SparseVec::unit(i);
            let one = alg.one().map_linear(|a| self.act_vec(&x, a));
            verify(one == x, || "1 does not act as the identity".into())?;
        }
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let ab = alg.mul_basis(a, b);
                for i in 0..self.dim {
                    let lhs = self.act_vec(&self.action[a][i], b);
                    let rhs = ab.map_linear(|c| self.action[c][i].clone());
                    verify(lhs == rhs, || format!("action not associative on ({}, {})", alg.basis[a].word, alg.basis[b].word))?;
                }
            }
        }
        Ok(())
    }

    fn act_vec(&self, x: &SparseVec, a: usize) -> SparseVec {
        x.map_linear(|i| self.action[a][i].clone())
    }
}

/// Basis ids of `e_v A`, increasing.
pub fn projective_support(alg: &GradedAlgebra, v: usize) -> Vec<usize> {
    (0..alg.dim()).filter(|&x| alg.basis[x].target == v).collect()
}

pub fn projective_module(alg: &GradedAlgebra, v: usize) -> FDModule {
    let support = projective_support(alg, v);
    let pos: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let action = (0..alg.dim())
        .map(|a| support.iter().map(|&x| alg.mul_basis(x, a).map_linear(|y| SparseVec::unit(pos[&y]))).collect())
        .collect();
    FDModule { dim: support.len(), action }
}

pub fn simple_module(alg: &GradedAlgebra, v: usize) -> FDModule {
    let action = (0..alg.dim())
        .map(|a| vec![if a == alg.idempotents[v] { SparseVec::unit(0) } else { SparseVec::new() }])
        .collect();
    FDModule { dim: 1, action }
}

/// `(simples, projectives)` indexed by vertex.
pub fn simples_and_projectives(alg: &GradedAlgebra) -> Result<(Vec<FDModule>, Vec<FDModule>)> {
    loewy_length(alg)?;
    let n = alg.vertex_count;
    Ok(((0..n).map(|v| simple_module(alg, v)).collect(), (0..n).map(|v| projective_module(alg, v)).collect()))
}

/// Nonzero action of some arrow on the projective at its target.
pub fn side_convention_self_test(alg: &GradedAlgebra) -> bool {
    alg.radical_generators().iter().all(|&g| {
        let t = alg.basis[g].target;
        !alg.mul_basis(alg.idempotents[t], g).is_zero()
    })
}

/// Where module elements live: an abstract module, or `⊕_g P_{v_g}`.
enum Ambient<'a> {
    Abstract(&'a FDModule),
    Free { offsets: Vec<usize>, supports: Vec<Vec<usize>>, positions: Vec<HashMap<usize, usize>> },
}

impl Ambient<'_> {
    fn free(alg: &GradedAlgebra, vertices: &[usize]) -> Ambient<'static> {
        let supports: Vec<Vec<usize>> = (0..alg.vertex_count).map(|v| projective_support(alg, v)).collect();
        let positions: Vec<HashMap<usize, usize>> = supports.iter().map(|s| s.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for &v in vertices {
            offsets.push(acc);
            acc += supports[v].len();
        }
        Ambient::Free {
            offsets,
            supports: vertices.iter().map(|&v| supports[v].clone()).collect(),
            positions: vertices.iter().map(|&v| positions[v].clone()).collect(),
        }
    }

    fn act(&self, alg: &GradedAlgebra, x: &SparseVec, a: usize) -> SparseVec {
        match self {
            Ambient::Abstract(m) => m.act_vec(x, a),
            Ambient::Free { offsets, supports, positions } => {
                let mut out = SparseVec::new();
                for (p, c) in x.iter() {
                    let g = offsets.partition_point(|&o| o <= p) - 1;
                    let y = supports[g][p - offsets[g]];
                    for (z, d) in alg.mul_basis(y, a).iter() {
                        out.add_term(offsets[g] + positions[g][&z], &(c * d));
                    }
                }
                out
            }
        }
    }
}

/// One cover step: top generators (with vertices) and the kernel of the cover.
fn cover(alg: &GradedAlgebra, amb: &Ambient, basis: &[SparseVec]) -> Result<(Vec<usize>, Vec<SparseVec>)> {
    let gens = alg.radical_generators();
    let mut ech = Echelon::new();
    for m in basis {
        for &g in &gens {
            ech.insert(&amb.act(alg, m, g));
        }
    }
    let mut top: Vec<(usize, SparseVec)> = Vec::new();
    for m in basis {
        for v in 0..alg.vertex_count {
            let u = amb.act(alg, m, alg.idempotents[v]);
            if !u.is_zero() && ech.insert(&u) {
                top.push((v, u));
            }
        }
    }
    let vertices: Vec<usize> = top.iter().map(|(v, _)| *v).collect();
    let mut columns = Vec::new();
    for (v, u) in &top {
        for x in projective_support(alg, *v) {
            columns.push(amb.act(alg, u, x));
        }
    }
    let mut span = Echelon::new();
    for c in &columns {
        span.insert(c);
    }
    verify(span.rank() == basis.len(), || "projective cover is not surjective".into())?;
    let kernel = sparse_kernel(&columns);
    // Minimality: the kernel avoids every generator position.
    let free = Ambient::free(alg, &vertices);
    if let Ambient::Free { offsets, .. } = &free {
        for (g, v) in vertices.iter().enumerate() {
            let p = offsets[g] + projective_support(alg, *v).iter().position(|&x| x == alg.idempotents[*v]).expect("idempotent in P_v");
            verify(kernel.iter().all(|k| k.get(p).is_none()), || "projective cover is not minimal".into())?;
        }
    }
    Ok((vertices, kernel))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionEntry {
    /// One-based vertex of the simple module, or 0 for a general module.
    pub simple: usize,
    /// `betti[t][v]`: copies of `P_{v+1}` in homological degree `t`.
    pub betti: Vec<Vec<usize>>,
    pub length: usize,
}

/// Minimal projective resolution of `m`; errors once more than `cutoff` steps are needed.
pub fn minimal_resolution(alg: &GradedAlgebra, m: &FDModule, cutoff: usize) -> Result<ResolutionEntry> {
    let amb = Ambient::Abstract(m);
    let basis: Vec<SparseVec> = (0..m.dim).map(SparseVec::unit).collect();
    let mut betti = Vec::new();
    let (mut vertices, mut kernel) = cover(alg, &amb, &basis)?;
    let count = |vs: &[usize]| {
        let mut b = vec![0; alg.vertex_count];
        for &v in vs {
            b[v] += 1;
        }
        b
    };
    betti.push(count(&vertices));
    while !kernel.is_empty() {
        if betti.len() > cutoff {
            return Err(Error::CutoffExceeded {
                cutoff,
                context: format!("resolution still has a nonzero syzygy of dim {} after {cutoff} steps", kernel.len()),
            });
        }
        let free = Ambient::free(alg, &vertices);
        let (v2, k2) = cover(alg, &free, &kernel)?;
        betti.push(count(&v2));
        vertices = v2;
        kernel = k2;
    }
    Ok(ResolutionEntry { simple: 0, length: betti.len() - 1, betti })
}

pub fn resolve_simple(alg: &GradedAlgebra, v: usize, cutoff: usize) -> Result<ResolutionEntry> {
    let mut e = minimal_resolution(alg, &simple_module(alg, v), cutoff)?;
    e.simple = v + 1;
    Ok(e)
}

/// `Σ (−1)^t β_t · (dim P_v)_v`, which must equal `dim M`.
pub fn euler_characteristic(alg: &GradedAlgebra, entry: &ResolutionEntry) -> i64 {
    let pdims: Vec<i64> = (0..alg.vertex_count).map(|v| projective_support(alg, v).len() as i64).collect();
    entry
        .betti
        .iter()
        .enumerate()
        .map(|(t, b)| {
            let s: i64 = b.iter().zip(&pdims).map(|(x, d)| *x as i64 * d).sum();
            if t % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub per_simple: Vec<ResolutionEntry>,
    pub projective_dims: Vec<usize>,
    pub gldim: usize,
    pub loewy: usize,
    pub euler_consistent: bool,
}

pub fn default_cutoff(n: usize, m: usize) -> usize {
    2 * m + 2 * n + 4
}

pub fn resolution_report(alg: &GradedAlgebra, cutoff: usize) -> Result<ResolutionReport> {
    verify(side_convention_self_test(alg), || "right-module side convention self-test failed".into())?;
    let per_simple: Vec<ResolutionEntry> = (0..alg.vertex_count).map(|v| resolve_simple(alg, v, cutoff)).collect::<Result<_>>()?;
    let euler_consistent = per_simple.iter().all(|e| euler_characteristic(alg, e) == 1);
    verify(euler_consistent, || "Euler characteristic of a resolution is not 1".into())?;
    Ok(ResolutionReport {
        gldim: per_simple.iter().map(|e| e.length).max().unwrap_or(0),
        projective_dims: (0..alg.vertex_count).map(|v| projective_support(alg, v).len()).collect(),
        loewy: loewy_length(alg)?,
        per_simple,
        euler_consistent,
    })
}

pub fn gldim(alg: &GradedAlgebra, cutoff: usize) -> Result<usize> {
    Ok(resolution_report(alg, cutoff)?.gldim)
}

/// Least `t` with `rad^t = 0`.
pub fn loewy_length(alg: &GradedAlgebra) -> Result<usize> {
    let gens = alg.radical_generators();
    let mut power: Vec<SparseVec> = alg.radical_ids().into_iter().map(SparseVec::unit).collect();
    let mut t = 1;
    while !power.is_empty() {
        if t > alg.dim() + 1 {
            return Err(Error::Verification("radical is not nilpotent".into()));
        }
        let mut next = Echelon::new();
        for x in &power {
            for &g in &gens {
                next.insert(&alg.mul(x, &SparseVec::unit(g)));
            }
        }
        power = next.rows().cloned().collect();
        t += 1;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{green_family, kk_family, random_family, Family};
    use crate::quiverpath::{build_oracle, green_quiver, kk_quiver, Quiver};
    use crate::ralgebra::{build_r, build_r_oracle};

    #[test]
    fn semisimple() {
        let s = GradedAlgebra::semisimple(2);
        let r = resolution_report(&s, 4).unwrap();
        assert_eq!(r.gldim, 0);
        assert_eq!(r.loewy, 1);
        assert_eq!(r.projective_dims, vec![1, 1]);
    }

    #[test]
    fn kronecker() {
        for n in 1..=4 {
            let o = build_oracle(&Quiver::q_nm(n, 0), &[], 3).unwrap();
            let r = resolution_report(&o.algebra, 4).unwrap();
            assert_eq!(r.gldim, 1);
            assert_eq!(r.loewy, 2);
            assert_eq!(r.projective_dims, vec![1, n + 1]);
            let (s, p) = simples_and_projectives(&o.algebra).unwrap();
            for m in s.iter().chain(&p) {
                m.check(&o.algebra).unwrap();
            }
        }
    }

    #[test]
    fn green_small() {
        let (q, r) = green_quiver(2);
        let o = build_oracle(&q, &r, 6).unwrap();
        let rep = resolution_report(&o.algebra, 6).unwrap();
        assert_eq!(rep.projective_dims.iter().sum::<usize>(), 5);
        assert_eq!(rep.gldim, 2);
        let (q, r) = green_quiver(3);
        let o = build_oracle(&q, &r, 8).unwrap();
        assert_eq!(gldim(&o.algebra, 8).unwrap(), 3);
    }

    #[test]
    fn green_and_kk_values() {
        for l in 2..=6 {
            let r = build_r(&green_family(l).unwrap()).unwrap();
            assert_eq!(gldim(&r.algebra, 20).unwrap(), l, "l = {l}");
        }
        for n in 2..=3 {
            let r = build_r(&kk_family(n).unwrap()).unwrap();
            let rep = resolution_report(&r.algebra, 20).unwrap();
            assert_eq!(rep.gldim, 2 * n + 1);
            assert_eq!(rep.loewy, 4);
            let (q, rels) = kk_quiver(n);
            let o = build_oracle(&q, &rels, 6).unwrap();
            assert_eq!(loewy_length(&o.algebra).unwrap(), 4);
        }
    }

    #[test]
    fn closed_form_and_oracle_resolve_alike() {
        for f in [random_family(3, &[2, 1], 8).unwrap(), kk_family(2).unwrap(), Family::empty(2)] {
            let r = build_r(&f).unwrap();
            let o = build_r_oracle(&f, 2 * f.m() + 4).unwrap();
            let a = resolution_report(&r.algebra, 20).unwrap();
            let b = resolution_report(&o.algebra, 20).unwrap();
            assert_eq!(a.per_simple, b.per_simple);
        }
    }

    #[test]
    fn cutoff_is_reported() {
        let r = build_r(&kk_family(2).unwrap()).unwrap();
        assert!(matches!(gldim(&r.algebra, 2), Err(Error::CutoffExceeded { .. })));
    }

    #[test]
    fn projectives_resolve_trivially() {
        let r = build_r(&kk_family(2).unwrap()).unwrap();
        for v in 0..2 {
            let p = projective_module(&r.algebra, v);
            p.check(&r.algebra).unwrap();
            let e = minimal_resolution(&r.algebra, &p, 3).unwrap();
            assert_eq!(e.length, 0);
            assert_eq!(e.betti[0][v], 1);
        }
    }
}
