//! Exact rational linear algebra.
//!
//! Everything downstream works over the rationals with arbitrary-precision
//! integers. Small dense matrices (subspaces of `k^n`) use [`Matrix`]; the large,
//! very sparse systems that appear in quotient and Hom-complex computations use
//! [`SparseVec`] together with the incremental [`Echelon`] basis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a scalar as `"p/q"`; the denominator is always written.
pub fn format_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(p, q))
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must share `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            entries.extend(row);
        }
        Matrix { rows: nrows, cols, entries }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Reduced row-echelon form, rank, and pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let sub = m.get(row, c) * &f;
                    if !sub.is_zero() {
                        let v = m.get(r, c) - sub;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, row, pivots)
    }

    pub fn rref(&self) -> (Matrix, usize) {
        let (m, rank, _) = self.rref_with_pivots();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of `{x : self * x = 0}` as rows of the returned matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, rank, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -r.get(i, f).clone();
            }
            out.push(v);
        }
        Matrix::from_rows(self.cols, out)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        let (red, _, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn drop_zero_rows(&self) -> Matrix {
        let rows = (0..self.rows)
            .filter(|&r| self.row(r).iter().any(|x| !x.is_zero()))
            .map(|r| self.row(r).to_vec())
            .collect();
        Matrix::from_rows(self.cols, rows)
    }
}

/// A subspace of `k^n`, stored by its unique reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Span of the given rows (any spanning set).
    pub fn span(ambient: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let m = Matrix::from_rows(ambient, rows);
        let (r, _) = m.rref();
        Subspace { ambient, basis: r.drop_zero_rows() }
    }

    pub fn span_i64(ambient: usize, rows: &[&[i64]]) -> Self {
        Self::span(ambient, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Span of standard basis vectors `e_i` for the listed coordinates.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let rows = coords
            .iter()
            .map(|&c| {
                let mut v = vec![Scalar::zero(); ambient];
                v[c] = Scalar::one();
                v
            })
            .collect();
        Self::span(ambient, rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> &[Scalar] {
        self.basis.row(i)
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| self.basis.row(r).iter().position(|x| !x.is_zero()).expect("nonzero basis row"))
            .collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut rows = self.basis.row_vecs();
        rows.push(v.to_vec());
        Matrix::from_rows(self.ambient, rows).rank() == self.dim()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Ok(Subspace::span(self.ambient, rows))
    }

    /// `U ∩ W`, computed from the kernel of `[U; -W]^T`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // Columns: coefficients (x, y) with x·U = y·W.
        let mut sys = Matrix::zeros(self.ambient, a + b);
        for c in 0..self.ambient {
            for i in 0..a {
                sys.set(c, i, self.basis.get(i, c).clone());
            }
            for j in 0..b {
                sys.set(c, a + j, -other.basis.get(j, c).clone());
            }
        }
        let ker = sys.kernel();
        let rows = (0..ker.rows())
            .map(|r| {
                let mut v = vec![Scalar::zero(); self.ambient];
                for i in 0..a {
                    let x = ker.get(r, i);
                    if x.is_zero() {
                        continue;
                    }
                    for (c, slot) in v.iter_mut().enumerate() {
                        *slot += x * self.basis.get(i, c);
                    }
                }
                v
            })
            .collect();
        Ok(Subspace::span(self.ambient, rows))
    }

    /// Span of the standard vectors at the non-pivot columns of the echelon basis.
    pub fn coordinate_complement(&self) -> Subspace {
        let pivots = self.pivots();
        let free: Vec<usize> = (0..self.ambient).filter(|c| !pivots.contains(c)).collect();
        Subspace::coordinate(self.ambient, &free)
    }

    /// Coordinates of `v` in this subspace's basis; `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        // The basis is reduced echelon: the coefficient of row i is v[pivot_i].
        let pivots = self.pivots();
        let coeffs: Vec<Scalar> = pivots.iter().map(|&p| v[p].clone()).collect();
        let mut recon = vec![Scalar::zero(); self.ambient];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, slot) in recon.iter_mut().enumerate() {
                *slot += c * self.basis.get(i, k);
            }
        }
        (recon.as_slice() == v).then_some(coeffs)
    }

    /// Linear combination of basis vectors.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.ambient];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, slot) in v.iter_mut().enumerate() {
                *slot += c * self.basis.get(i, k);
            }
        }
        v
    }
}

/// Matrix of the projection onto `t` along `u`, written in `t`'s basis.
///
/// Rows are indexed by the basis of `t`, columns by the ambient coordinates.
/// Requires `u ⊕ t` to be the whole ambient space.
pub fn projection_along(u: &Subspace, t: &Subspace) -> Result<Matrix> {
    u.check_ambient(t)?;
    let n = u.ambient;
    if u.dim() + t.dim() != n {
        return Err(Error::NotComplementary { dim_u: u.dim(), dim_t: t.dim(), ambient: n });
    }
    let stacked = u.basis.stack(&t.basis);
    let inv = stacked.inverse().ok_or(Error::NotComplementary {
        dim_u: u.dim(),
        dim_t: t.dim(),
        ambient: n,
    })?;
    // x = (α, β) · stacked, so (α, β) = x · inv; keep the β block, transposed.
    let mut p = Matrix::zeros(t.dim(), n);
    for r in 0..t.dim() {
        for c in 0..n {
            p.set(r, c, inv.get(c, u.dim() + r).clone());
        }
    }
    Ok(p)
}

/// Seeded generator used for every random construction in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const RANDOM_ENTRY_BOUND: i64 = 9;
pub const MAX_RESAMPLES: usize = 100;

/// A `d`-dimensional subspace of `k^n` with integer entries in `[-9, 9]`.
pub fn random_subspace_with<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Subspace> {
    if d > n {
        return Err(Error::Invalid(format!("subspace dimension {d} exceeds ambient {n}")));
    }
    if d == 0 {
        return Ok(Subspace::zero(n));
    }
    for _ in 0..MAX_RESAMPLES {
        let rows: Vec<Vec<Scalar>> = (0..d)
            .map(|_| (0..n).map(|_| int(rng.gen_range(-RANDOM_ENTRY_BOUND..=RANDOM_ENTRY_BOUND))).collect())
            .collect();
        let s = Subspace::span(n, rows);
        if s.dim() == d {
            return Ok(s);
        }
    }
    Err(Error::Degenerate(format!("could not draw a {d}-dimensional subspace of k^{n}")))
}

pub fn random_subspace(n: usize, d: usize, seed: u64) -> Result<Subspace> {
    random_subspace_with(n, d, &mut rng_from_seed(seed))
}

/// Sparse vector keyed by basis index.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(BTreeMap<usize, Scalar>);

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(k, v)| (k, v.to_string()))).finish()
    }
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut v = SparseVec::new();
        v.0.insert(i, Scalar::one());
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in pairs {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.0.iter().map(|(&k, v)| (k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&i) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.0.remove(&i);
                }
            }
            None => {
                self.0.insert(i, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, &(x * c));
        }
    }

    pub fn add(&mut self, other: &SparseVec) {
        for (i, x) in other.iter() {
            self.add_term(i, x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(&k, v)| (k, v * c)).collect())
    }

    pub fn remove(&mut self, i: usize) -> Option<Scalar> {
        self.0.remove(&i)
    }

    /// Applies a linear map given column-wise by `image(i)`.
    pub fn map_linear<F>(&self, mut image: F) -> SparseVec
    where
        F: FnMut(usize) -> SparseVec,
    {
        let mut out = SparseVec::new();
        for (i, c) in self.iter() {
            out.add_scaled(&image(i), c);
        }
        out
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); len];
        for (i, c) in self.iter() {
            v[i] = c.clone();
        }
        v
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SparseVec(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
    }

    pub fn to_pair_strings(&self) -> Vec<(usize, String)> {
        self.iter().map(|(i, c)| (i, format_scalar(c))).collect()
    }
}

/// Incremental echelon basis of a subspace of sparse vectors.
///
/// The pivot of a stored row is its largest index, normalized to coefficient 1.
/// Reduction eliminates pivots from the top down, so the reduced form of a
/// vector has no pivot indices and is a canonical representative modulo the span.
#[derive(Clone, Default, Debug)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => v.0.keys().next_back().copied(),
                Some(c) => v.0.range(..c).next_back().map(|(&k, _)| k),
            };
            let Some(k) = next else { break };
            if let Some(row) = self.rows.get(&k) {
                let c = v.0[&k].clone();
                v.add_scaled(row, &(-c));
            }
            cursor = Some(k);
        }
        v
    }

    /// Adds `v` to the span; returns `false` if it was already inside.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.max_index() else { return false };
        let lead = r.get(p).expect("lead").recip();
        self.rows.insert(p, r.scaled(&lead));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// The basis rows, each with leading coefficient 1 at its pivot.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }
}

/// Rank of a list of sparse vectors.
pub fn sparse_rank<'a>(vecs: impl IntoIterator<Item = &'a SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}

/// Basis of the kernel of the linear map whose `j`-th column is `columns[j]`.
pub fn sparse_kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    // Rows keyed by pivot; each row remembers which combination of columns produced it.
    let mut rows: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut combo = SparseVec::unit(j);
        let mut cursor: Option<usize> = None;
        loop {
            let next = match cursor {
                None => v.0.keys().next_back().copied(),
                Some(c) => v.0.range(..c).next_back().map(|(&k, _)| k),
            };
            let Some(k) = next else { break };
            if let Some((row, rcombo)) = rows.get(&k) {
                let c = -v.0[&k].clone();
                v.add_scaled(row, &c);
                combo.add_scaled(rcombo, &c);
            }
            cursor = Some(k);
        }
        match v.max_index() {
            None => kernel.push(combo),
            Some(p) => {
                let lead = v.get(p).expect("lead").recip();
                rows.insert(p, (v.scaled(&lead), combo.scaled(&lead)));
            }
        }
    }
    kernel
}

/// Checks `|x| ≤ bound` for an integer-valued scalar.
pub fn is_small_integer(x: &Scalar, bound: i64) -> bool {
    x.is_integer() && x.numer().abs() <= BigInt::from(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let (r, rank) = Matrix::identity(2).rref();
        assert_eq!((r, rank), (Matrix::identity(2), 2));

        let (r, rank) = Matrix::from_i64(&[&[1, 2], &[2, 4]]).rref();
        assert_eq!(rank, 1);
        assert_eq!(r, Matrix::from_i64(&[&[1, 2], &[0, 0]]));

        let m = Matrix::from_i64(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 2]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn intersect_examples() {
        let u = Subspace::span_i64(2, &[&[1, 0]]);
        assert_eq!(u.intersect(&u).unwrap(), u);
        let w = Subspace::span_i64(2, &[&[0, 1]]);
        assert_eq!(u.intersect(&w).unwrap(), Subspace::zero(2));

        let a = Subspace::span_i64(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = Subspace::span_i64(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span_i64(3, &[&[0, 1, 0]]));
    }

    #[test]
    fn ambient_mismatch_is_reported() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(a.intersect(&b), Err(Error::AmbientMismatch { .. })));
        assert!(matches!(a.sum(&b), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn sum_examples() {
        let u = Subspace::span_i64(2, &[&[1, 0]]);
        assert_eq!(u.sum(&Subspace::zero(2)).unwrap(), u);
        assert_eq!(u.sum(&Subspace::span_i64(2, &[&[0, 1]])).unwrap(), Subspace::full(2));
        let v = Subspace::span_i64(3, &[&[1, 1, 0]]);
        let w = Subspace::span_i64(3, &[&[1, 0, 0], &[0, 0, 1]]);
        assert_eq!(v.sum(&w).unwrap(), Subspace::full(3));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Subspace::full(3).coordinate_complement(), Subspace::zero(3));
        assert_eq!(
            Subspace::span_i64(2, &[&[1, 0]]).coordinate_complement(),
            Subspace::span_i64(2, &[&[0, 1]])
        );
        let u = Subspace::span_i64(3, &[&[1, 2, 0], &[0, 0, 1]]);
        assert_eq!(u.coordinate_complement(), Subspace::span_i64(3, &[&[0, 1, 0]]));
    }

    #[test]
    fn projection_examples() {
        let p = projection_along(&Subspace::zero(3), &Subspace::full(3)).unwrap();
        assert_eq!(p, Matrix::identity(3));

        let p = projection_along(&Subspace::span_i64(2, &[&[1, 0]]), &Subspace::span_i64(2, &[&[0, 1]])).unwrap();
        assert_eq!(p.apply(&row(&[5, 7])), row(&[7]));

        let p = projection_along(&Subspace::span_i64(2, &[&[1, 1]]), &Subspace::span_i64(2, &[&[1, 0]])).unwrap();
        assert_eq!(p.apply(&row(&[5, 7])), row(&[-2]));
        assert_eq!(p.apply(&row(&[3, 1])), row(&[2]));
    }

    #[test]
    fn projection_requires_direct_sum() {
        let u = Subspace::span_i64(2, &[&[1, 0]]);
        assert!(matches!(projection_along(&u, &u), Err(Error::NotComplementary { .. })));
    }

    #[test]
    fn random_subspace_edges() {
        assert_eq!(random_subspace(4, 0, 3).unwrap(), Subspace::zero(4));
        assert_eq!(random_subspace(4, 4, 3).unwrap(), Subspace::full(4));
        assert!(random_subspace(2, 3, 0).is_err());
        let a = random_subspace(2, 1, 17).unwrap();
        assert_eq!(a, random_subspace(2, 1, 17).unwrap());
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn scalar_strings() {
        assert_eq!(format_scalar(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_scalar(&int(5)), "5/1");
        assert_eq!(parse_scalar("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar("4").unwrap(), int(4));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        // Columns (1,0), (0,1), (1,1): kernel spanned by (1,1,-1).
        let cols = vec![
            SparseVec::from_pairs([(0, int(1))]),
            SparseVec::from_pairs([(1, int(1))]),
            SparseVec::from_pairs([(0, int(1)), (1, int(1))]),
        ];
        let k = sparse_kernel(&cols);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let mut img = SparseVec::new();
        for (j, c) in v.iter() {
            img.add_scaled(&cols[j], c);
        }
        assert!(img.is_zero());
    }

    #[test]
    fn echelon_reduction_is_canonical() {
        let mut e = Echelon::new();
        e.insert(&SparseVec::from_pairs([(0, int(1)), (2, int(1))]));
        e.insert(&SparseVec::from_pairs([(1, int(1)), (2, int(2))]));
        // e2 ≡ -e0 and e2 ≡ -e1/2 modulo the span.
        let r = e.reduce(&SparseVec::unit(2));
        assert!(!e.is_pivot(0) || r.get(0).is_none());
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&SparseVec::from_pairs([(0, int(2)), (1, int(-1))])));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_subspace(n: usize) -> impl Strategy<Value = Subspace> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), 0..=n)
            .prop_map(move |rows| Subspace::span(n, rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect()))
    }

    proptest! {
        #[test]
        fn rref_idempotent(rows in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 1..5)) {
            let m = Matrix::from_rows(4, rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect());
            let (r1, k1) = m.rref();
            let (r2, k2) = r1.rref();
            prop_assert_eq!(k1, k2);
            prop_assert_eq!(r1, r2);
        }

        #[test]
        fn grassmann_formula(u in arb_subspace(4), w in arb_subspace(4)) {
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        }

        #[test]
        fn complement_and_projection(u in arb_subspace(4), x in proptest::collection::vec(-5i64..=5, 4)) {
            let t = u.coordinate_complement();
            prop_assert!(u.sum(&t).unwrap().is_full());
            prop_assert_eq!(u.intersect(&t).unwrap().dim(), 0);
            let onto_t = projection_along(&u, &t).unwrap();
            let onto_u = projection_along(&t, &u).unwrap();
            let x: Vec<Scalar> = x.into_iter().map(int).collect();
            let mut back = t.combine(&onto_t.apply(&x));
            for (slot, y) in back.iter_mut().zip(u.combine(&onto_u.apply(&x))) {
                *slot += y;
            }
            prop_assert_eq!(back, x);
            // Restricted to t the projection is the identity in t's basis.
            for i in 0..t.dim() {
                let mut e = vec![Scalar::zero(); t.dim()];
                e[i] = Scalar::one();
                prop_assert_eq!(onto_t.apply(t.basis_vector(i)), e);
            }
        }
    }
}
