//! Finite-dimensional basic algebras given by a basis and structure constants.

use num_traits::One;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{verify, Result};
use crate::exactla::{format_scalar, Echelon, Scalar, SparseVec};

/// One basis element. It lies in `e_target · A · e_source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    /// Path length; the radical is spanned by elements with positive length.
    pub length: usize,
    pub zdegree: i64,
    pub word: String,
}

/// `(i, j, e_i·e_j)` with the product as `(index, "p/q")` pairs.
pub type StructureRow = (usize, usize, Vec<(usize, String)>);

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub vertex_count: usize,
    pub basis: Vec<BasisElement>,
    /// `idempotents[v]` is the id of `e_v`.
    pub idempotents: Vec<usize>,
    table: Vec<SparseVec>,
}

impl GradedAlgebra {
    /// `table[i * dim + j]` is the product of basis elements `i` and `j`.
    pub fn new(vertex_count: usize, basis: Vec<BasisElement>, idempotents: Vec<usize>, table: Vec<SparseVec>) -> Self {
        assert_eq!(table.len(), basis.len() * basis.len(), "structure table size");
        assert_eq!(idempotents.len(), vertex_count);
        GradedAlgebra { vertex_count, basis, idempotents, table }
    }

    /// The semisimple algebra `k × ⋯ × k`.
    pub fn semisimple(vertex_count: usize) -> Self {
        let basis = (0..vertex_count)
            .map(|v| BasisElement { source: v, target: v, length: 0, zdegree: 0, word: format!("e{}", v + 1) })
            .collect();
        let mut table = vec![SparseVec::new(); vertex_count * vertex_count];
        for v in 0..vertex_count {
            table[v * vertex_count + v] = SparseVec::unit(v);
        }
        GradedAlgebra::new(vertex_count, basis, (0..vertex_count).collect(), table)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim() + j]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if self.basis[i].source != self.basis[j].target {
                    continue;
                }
                let p = self.mul_basis(i, j);
                if !p.is_zero() {
                    out.add_scaled(p, &(a * b));
                }
            }
        }
        out
    }

    pub fn one(&self) -> SparseVec {
        SparseVec::from_pairs(self.idempotents.iter().map(|&e| (e, Scalar::one())))
    }

    pub fn set_zdegrees(&mut self, zdeg: impl Fn(usize) -> i64) {
        for i in 0..self.dim() {
            self.basis[i].zdegree = zdeg(i);
        }
    }

    pub fn radical_ids(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].length > 0).collect()
    }

    /// Basis elements spanning a complement of `rad²` in `rad`.
    pub fn radical_generators(&self) -> Vec<usize> {
        let rad = self.radical_ids();
        let mut e = Echelon::new();
        for &i in &rad {
            for &j in &rad {
                let p = self.mul_basis(i, j);
                if !p.is_zero() {
                    e.insert(p);
                }
            }
        }
        rad.into_iter().filter(|&i| e.insert(&SparseVec::unit(i))).collect()
    }

    /// `dim e_a A e_b`, rows indexed by target `a`, columns by source `b`.
    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let mut c = vec![vec![0; self.vertex_count]; self.vertex_count];
        for b in &self.basis {
            c[b.target][b.source] += 1;
        }
        c
    }

    /// Checks idempotents, vertex compatibility and one-sided units.
    pub fn check_units(&self) -> Result<()> {
        for (v, &e) in self.idempotents.iter().enumerate() {
            let b = &self.basis[e];
            verify(b.source == v && b.target == v && b.length == 0, || format!("e{} is not an idempotent at its vertex", v + 1))?;
        }
        for i in 0..self.dim() {
            let (s, t) = (self.basis[i].source, self.basis[i].target);
            verify(self.mul_basis(self.idempotents[t], i) == &SparseVec::unit(i), || {
                format!("e{} does not act as a left unit on {}", t + 1, self.basis[i].word)
            })?;
            verify(self.mul_basis(i, self.idempotents[s]) == &SparseVec::unit(i), || {
                format!("e{} does not act as a right unit on {}", s + 1, self.basis[i].word)
            })?;
            for j in 0..self.dim() {
                let p = self.mul_basis(i, j);
                for (k, _) in p.iter() {
                    let ok = self.basis[k].target == self.basis[i].target && self.basis[k].source == self.basis[j].source;
                    verify(ok, || format!("product {}·{} leaves its vertex block", self.basis[i].word, self.basis[j].word))?;
                }
                if s != self.basis[j].target {
                    verify(p.is_zero(), || format!("non-composable product {}·{} is nonzero", self.basis[i].word, self.basis[j].word))?;
                }
            }
        }
        Ok(())
    }

    /// Exhaustive associativity on basis triples that can be nonzero.
    pub fn check_associativity(&self) -> Result<()> {
        let d = self.dim();
        for x in 0..d {
            for y in 0..d {
                if self.basis[x].source != self.basis[y].target {
                    continue;
                }
                let xy = self.mul_basis(x, y);
                for z in 0..d {
                    if self.basis[y].source != self.basis[z].target {
                        continue;
                    }
                    let yz = self.mul_basis(y, z);
                    if xy.is_zero() && yz.is_zero() {
                        continue;
                    }
                    let left = self.mul(xy, &SparseVec::unit(z));
                    let right = self.mul(&SparseVec::unit(x), yz);
                    verify(left == right, || {
                        format!(
                            "associativity fails on ({}, {}, {})",
                            self.basis[x].word, self.basis[y].word, self.basis[z].word
                        )
                    })?;
                }
            }
        }
        Ok(())
    }

    /// Zero-degree additivity on all nonzero basis products.
    pub fn check_zdegree_additive(&self) -> Result<()> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let want = self.basis[i].zdegree + self.basis[j].zdegree;
                for (k, _) in self.mul_basis(i, j).iter() {
                    verify(self.basis[k].zdegree == want, || {
                        format!("degree not additive on {}·{}", self.basis[i].word, self.basis[j].word)
                    })?;
                }
            }
        }
        Ok(())
    }

    /// Sorted sparse structure constants `(i, j, [(k, "p/q")])`.
    pub fn structure_rows(&self) -> Vec<StructureRow> {
        let d = self.dim();
        let mut rows = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let p = self.mul_basis(i, j);
                if !p.is_zero() {
                    rows.push((i, j, p.to_pair_strings()));
                }
            }
        }
        rows
    }

    /// SHA-256 of the basis table and the sorted structure constants.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for b in &self.basis {
            h.update(format!("{}|{}|{}|{}|{};", b.source, b.target, b.length, b.zdegree, b.word).as_bytes());
        }
        for (i, j, terms) in self.structure_rows() {
            h.update(format!("{i},{j}:").as_bytes());
            for (k, c) in terms {
                h.update(format!("{k}={c},").as_bytes());
            }
            h.update(b";");
        }
        hex::encode(h.finalize())
    }

    /// Dimensions of `A_p` for each zero-degree `p` inside block `(target, source)`.
    pub fn block_degree_dims(&self, target: usize, source: usize) -> std::collections::BTreeMap<i64, usize> {
        let mut out = std::collections::BTreeMap::new();
        for b in &self.basis {
            if b.target == target && b.source == source {
                *out.entry(b.zdegree).or_insert(0) += 1;
            }
        }
        out
    }
}

/// Checks that `images[i]` (image of source basis element `i`) defines a
/// multiplicative linear map; returns the rank of the image span.
pub fn check_multiplicative(src: &GradedAlgebra, dst: &GradedAlgebra, images: &[SparseVec]) -> Result<usize> {
    assert_eq!(images.len(), src.dim());
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            let lhs = src.mul_basis(i, j).map_linear(|k| images[k].clone());
            let rhs = dst.mul(&images[i], &images[j]);
            verify(lhs == rhs, || format!("map not multiplicative on ({}, {})", src.basis[i].word, src.basis[j].word))?;
        }
    }
    let mut e = Echelon::new();
    for v in images {
        e.insert(v);
    }
    Ok(e.rank())
}

/// Checks that the map is a unital algebra isomorphism.
pub fn check_isomorphism(src: &GradedAlgebra, dst: &GradedAlgebra, images: &[SparseVec]) -> Result<()> {
    verify(src.dim() == dst.dim(), || format!("dimension mismatch: {} vs {}", src.dim(), dst.dim()))?;
    let unit = src.one().map_linear(|k| images[k].clone());
    verify(unit == dst.one(), || "map is not unital".to_string())?;
    let rank = check_multiplicative(src, dst, images)?;
    verify(rank == dst.dim(), || format!("map has rank {rank}, expected {}", dst.dim()))
}

/// Coefficient-wise sum `Σ c_k images[k]` for `x = Σ c_k e_k`.
pub fn apply_map(images: &[SparseVec], x: &SparseVec) -> SparseVec {
    x.map_linear(|k| images[k].clone())
}

pub fn format_vector(a: &GradedAlgebra, x: &SparseVec) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.iter()
        .map(|(k, c)| format!("{}*{}", format_scalar(c), a.basis[k].word))
        .collect::<Vec<_>>()
        .join(" + ")
}
