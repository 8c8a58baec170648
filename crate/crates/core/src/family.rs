//! Families of subspace pairs `(V_i, W_i)` of `C = k^n`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{
    format_scalar, parse_scalar, projection_along, random_subspace_with, rng_from_seed, Matrix, Scalar, Subspace,
    MAX_RESAMPLES,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub v: Subspace,
    pub w: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    n: usize,
    pairs: Vec<Pair>,
}

impl Family {
    pub fn new(n: usize, pairs: Vec<Pair>) -> Result<Self> {
        let mut prev = n;
        for (i, p) in pairs.iter().enumerate() {
            if p.v.ambient() != n || p.w.ambient() != n {
                return Err(Error::Invalid(format!("pair {} does not live in k^{n}", i + 1)));
            }
            if p.v.dim() + p.w.dim() != n {
                return Err(Error::Invalid(format!("pair {}: dim V + dim W = {} ≠ {n}", i + 1, p.v.dim() + p.w.dim())));
            }
            if p.v.dim() > prev {
                return Err(Error::Invalid(format!("dimensions of V_i must be non-increasing (pair {})", i + 1)));
            }
            prev = p.v.dim();
        }
        Ok(Family { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        Family { n, pairs: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// `k_i = dim V_i`.
    pub fn kseq(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.v.dim()).collect()
    }

    pub fn is_equidimensional(&self) -> bool {
        self.kseq().windows(2).all(|w| w[0] == w[1])
    }

    /// The family with the last pair removed.
    pub fn truncated(&self) -> Family {
        Family { n: self.n, pairs: self.pairs[..self.m().saturating_sub(1)].to_vec() }
    }

    /// Sub-family keeping the listed pairs (zero-based, in order).
    pub fn select(&self, keep: &[usize]) -> Family {
        Family { n: self.n, pairs: keep.iter().map(|&i| self.pairs[i].clone()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GCheck {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

/// Intersection dimensions `dim(V_i ∩ W_j)` for all `i ≥ j` (one-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GCertificate {
    pub checks: Vec<GCheck>,
    pub first_failure: Option<(usize, usize)>,
}

impl GCertificate {
    pub fn passes(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn check_g(f: &Family) -> GCertificate {
    let mut checks = Vec::new();
    let mut first_failure = None;
    for i in 0..f.m() {
        for j in 0..=i {
            let dim = f.pairs[i].v.intersect(&f.pairs[j].w).expect("same ambient").dim();
            if dim != 0 && first_failure.is_none() {
                first_failure = Some((i + 1, j + 1));
            }
            checks.push(GCheck { i: i + 1, j: j + 1, dim });
        }
    }
    GCertificate { checks, first_failure }
}

pub fn require_g(f: &Family) -> Result<()> {
    match check_g(f).first_failure {
        Some((i, j)) => Err(Error::PropertyG { i, j }),
        None => Ok(()),
    }
}

/// The spaces `T_ij` and the projections `θ`, all zero-based.
#[derive(Clone, Debug)]
pub struct ComplementData {
    /// `t[(i, j)]` for `i > j`: complement of `U_ij = V_i + W_j`.
    pub t: BTreeMap<(usize, usize), Subspace>,
    /// `theta[(i, j)]`: projection onto `T_ij` along `U_ij`, in `T_ij`'s basis.
    pub theta: BTreeMap<(usize, usize), Matrix>,
    /// `θ_{•i}`: onto `V_i` along `W_i`, in `V_i`'s basis.
    pub theta_v: Vec<Matrix>,
    /// `θ_{i•}`: onto `W_i` along `V_i`, in `W_i`'s basis.
    pub theta_w: Vec<Matrix>,
}

pub fn complements(f: &Family) -> Result<ComplementData> {
    require_g(f)?;
    let k = f.kseq();
    let mut t = BTreeMap::new();
    let mut theta = BTreeMap::new();
    for i in 0..f.m() {
        for j in 0..i {
            let u = f.pairs[i].v.sum(&f.pairs[j].w)?;
            if u.dim() != f.n + k[i] - k[j] {
                return Err(Error::Invalid(format!(
                    "dim U_{}{} = {} but expected {}",
                    i + 1,
                    j + 1,
                    u.dim(),
                    f.n + k[i] - k[j]
                )));
            }
            let tij = u.coordinate_complement();
            theta.insert((i, j), projection_along(&u, &tij)?);
            t.insert((i, j), tij);
        }
    }
    let mut theta_v = Vec::new();
    let mut theta_w = Vec::new();
    for p in &f.pairs {
        theta_v.push(projection_along(&p.w, &p.v)?);
        theta_w.push(projection_along(&p.v, &p.w)?);
    }
    Ok(ComplementData { t, theta, theta_v, theta_w })
}

fn coordinate_span(n: usize, coords: impl IntoIterator<Item = usize>) -> Subspace {
    Subspace::coordinate(n, &coords.into_iter().collect::<Vec<_>>())
}

/// `W_i = ⟨c_1..c_i⟩`, `V_i = ⟨c_{i+1}..c_n⟩` with `n = ⌈l/2⌉`, `m = ⌊l/2⌋`.
pub fn green_family(l: usize) -> Result<Family> {
    if l < 2 {
        return Err(Error::Invalid(format!("Green families need l ≥ 2, got {l}")));
    }
    let m = l / 2;
    let n = l - m;
    let pairs = (1..=m).map(|i| Pair { v: coordinate_span(n, i..n), w: coordinate_span(n, 0..i) }).collect();
    Family::new(n, pairs)
}

/// `V_i = ⟨c_i⟩`, `W_i = ⟨c_1..c_{i-1}, c_{i+1} - c_i, .., c_n - c_i⟩`.
pub fn kk_family(n: usize) -> Result<Family> {
    if n == 0 {
        return Err(Error::Invalid("kk families need n ≥ 1".into()));
    }
    let unit = |j: usize| {
        let mut v = vec![Scalar::zero(); n];
        v[j] = Scalar::one();
        v
    };
    let pairs = (0..n)
        .map(|i| {
            let mut w_rows: Vec<Vec<Scalar>> = (0..i).map(unit).collect();
            for j in (i + 1)..n {
                let mut v = unit(j);
                v[i] = -Scalar::one();
                w_rows.push(v);
            }
            Pair { v: Subspace::span(n, vec![unit(i)]), w: Subspace::span(n, w_rows) }
        })
        .collect();
    Family::new(n, pairs)
}

/// Seeded family in general position; resamples until (G) holds.
pub fn random_family(n: usize, kseq: &[usize], seed: u64) -> Result<Family> {
    if kseq.windows(2).any(|w| w[0] < w[1]) || kseq.iter().any(|&k| k > n) {
        return Err(Error::Invalid(format!("kseq {kseq:?} must be non-increasing within [0, {n}]")));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..MAX_RESAMPLES {
        let mut pairs = Vec::with_capacity(kseq.len());
        for &k in kseq {
            let v = random_subspace_with(n, k, &mut rng)?;
            let w = random_subspace_with(n, n - k, &mut rng)?;
            pairs.push(Pair { v, w });
        }
        let f = Family::new(n, pairs)?;
        if check_g(&f).passes() {
            return Ok(f);
        }
    }
    Err(Error::Degenerate(format!("no family with k = {kseq:?} in k^{n} passed (G) after {MAX_RESAMPLES} draws")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub m: usize,
    pub pairs: Vec<PairJson>,
}

fn rows_json(s: &Subspace) -> Vec<Vec<String>> {
    s.basis().row_vecs().iter().map(|r| r.iter().map(format_scalar).collect()).collect()
}

fn parse_rows(n: usize, rows: &[Vec<String>]) -> Result<Subspace> {
    let mut parsed = Vec::with_capacity(rows.len());
    for r in rows {
        if r.len() != n {
            return Err(Error::Parse(format!("row of length {} in k^{n}", r.len())));
        }
        parsed.push(r.iter().map(|x| parse_scalar(x)).collect::<Result<Vec<_>>>()?);
    }
    Ok(Subspace::span(n, parsed))
}

impl Family {
    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            n: self.n,
            m: self.m(),
            pairs: self.pairs.iter().map(|p| PairJson { v: rows_json(&p.v), w: rows_json(&p.w) }).collect(),
        }
    }

    pub fn from_json(j: &FamilyJson) -> Result<Family> {
        if j.m != j.pairs.len() {
            return Err(Error::Parse(format!("m = {} but {} pairs given", j.m, j.pairs.len())));
        }
        let pairs = j
            .pairs
            .iter()
            .map(|p| Ok(Pair { v: parse_rows(j.n, &p.v)?, w: parse_rows(j.n, &p.w)? }))
            .collect::<Result<Vec<_>>>()?;
        Family::new(j.n, pairs)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("family serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Family> {
        let j: FamilyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Family::from_json(&j)
    }
}
