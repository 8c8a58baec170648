//! The `n = 2`, `k = 1` case: lines in `k²` as points of `P¹`, the gluing graph
//! of a family, and the evaluation map whose kernel is the coordinate ring of
//! the glued affine curve.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use petgraph::unionfind::UnionFind;
use rand::Rng;
use serde::Serialize;

use crate::error::{verify, Error, Result};
use crate::exactla::{int, rng_from_seed, Matrix, Scalar, Subspace, MAX_RESAMPLES};
use crate::family::{check_g, Family, Pair};

/// A point `(a : b)` of `P¹` with first nonzero coordinate equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Point {
    a: Scalar,
    b: Scalar,
}

impl P1Point {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Invalid("(0 : 0) is not a point of P¹".into()));
        }
        if a.is_zero() {
            Ok(P1Point { a, b: Scalar::one() })
        } else {
            let b = b / &a;
            Ok(P1Point { a: Scalar::one(), b })
        }
    }

    /// The point with affine coordinate `z`, i.e. `(z : 1)`.
    pub fn affine(z: Scalar) -> Self {
        P1Point::new(z, Scalar::one()).expect("b = 1")
    }

    pub fn infinity() -> Self {
        P1Point { a: Scalar::one(), b: Scalar::zero() }
    }

    pub fn coords(&self) -> (&Scalar, &Scalar) {
        (&self.a, &self.b)
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// `a/b` when `b ≠ 0`.
    pub fn affine_coordinate(&self) -> Option<Scalar> {
        (!self.b.is_zero()).then(|| &self.a / &self.b)
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.a, self.b)
    }

    /// The line in `k²` spanned by `(a, b)`.
    pub fn to_line(&self) -> Subspace {
        Subspace::span(2, vec![vec![self.a.clone(), self.b.clone()]])
    }
}

pub fn line_to_point(v: &Subspace) -> Result<P1Point> {
    if v.ambient() != 2 || v.dim() != 1 {
        return Err(Error::Invalid(format!("expected a line in k², got a {}-dim subspace of k^{}", v.dim(), v.ambient())));
    }
    let row = v.basis_vector(0);
    P1Point::new(row[0].clone(), row[1].clone())
}

fn require_plane_lines(f: &Family) -> Result<()> {
    if f.n() != 2 || f.kseq().iter().any(|&k| k != 1) {
        return Err(Error::Invalid(format!("curve data needs n = 2 and k_i = 1, got n = {} and k = {:?}", f.n(), f.kseq())));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveEdge {
    pub from: usize,
    pub to: usize,
    /// One-based pair index.
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGraph {
    pub points: Vec<P1Point>,
    /// Which `V_i` / `W_i` produced each point, e.g. `["V1", "W3"]`.
    pub origins: Vec<Vec<String>>,
    pub edges: Vec<CurveEdge>,
    /// Vertex indices of each connected component, ordered by least member.
    pub components: Vec<Vec<usize>>,
    pub cycle_rank: usize,
}

impl CurveGraph {
    pub fn vertex_of(&self, p: &P1Point) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    /// Component index of every vertex.
    pub fn component_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.points.len()];
        for (c, comp) in self.components.iter().enumerate() {
            for &v in comp {
                out[v] = c;
            }
        }
        out
    }

    /// Partition of the points themselves, independent of vertex numbering.
    pub fn point_partition(&self) -> Vec<Vec<P1Point>> {
        let mut parts: Vec<Vec<P1Point>> = self
            .components
            .iter()
            .map(|c| {
                let mut ps: Vec<P1Point> = c.iter().map(|&v| self.points[v].clone()).collect();
                ps.sort();
                ps
            })
            .collect();
        parts.sort();
        parts
    }
}

pub fn pair_points(f: &Family) -> Result<Vec<(P1Point, P1Point)>> {
    require_plane_lines(f)?;
    f.pairs().iter().map(|p| Ok((line_to_point(&p.v)?, line_to_point(&p.w)?))).collect()
}

pub fn build_graph(f: &Family) -> Result<CurveGraph> {
    let ends = pair_points(f)?;
    if let Some((i, j)) = check_g(f).first_failure {
        return Err(Error::PropertyG { i, j });
    }
    let mut points: Vec<P1Point> = Vec::new();
    let mut origins: Vec<Vec<String>> = Vec::new();
    let mut index = |p: &P1Point, origin: String, points: &mut Vec<P1Point>| -> usize {
        match points.iter().position(|q| q == p) {
            Some(i) => {
                origins[i].push(origin);
                i
            }
            None => {
                points.push(p.clone());
                origins.push(vec![origin]);
                points.len() - 1
            }
        }
    };
    let mut edges = Vec::with_capacity(ends.len());
    for (i, (v, w)) in ends.iter().enumerate() {
        let to = index(v, format!("V{}", i + 1), &mut points);
        let from = index(w, format!("W{}", i + 1), &mut points);
        edges.push(CurveEdge { from, to, label: i + 1 });
    }
    let mut uf = UnionFind::<usize>::new(points.len());
    for e in &edges {
        uf.union(e.from, e.to);
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..points.len() {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    let mut components: Vec<Vec<usize>> = by_root.into_values().collect();
    components.sort();
    let cycle_rank = edges.len() + components.len() - points.len();
    Ok(CurveGraph { points, origins, edges, components, cycle_rank })
}

pub fn is_modest(g: &CurveGraph) -> bool {
    g.cycle_rank == 0
}

/// Affine coordinates of the distinct points in a chart containing all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    /// `Some(q)` when the point at infinity forced `z ↦ 1/(z − q)`.
    pub shift: Option<Scalar>,
    pub coords: Vec<Scalar>,
}

pub fn affine_chart(points: &[P1Point]) -> Chart {
    if !points.iter().any(P1Point::is_infinity) {
        let coords = points.iter().map(|p| p.affine_coordinate().expect("affine")).collect();
        return Chart { shift: None, coords };
    }
    let finite: Vec<Scalar> = points.iter().filter_map(P1Point::affine_coordinate).collect();
    let q = (0i64..).map(int).find(|q| !finite.contains(q)).expect("finitely many points");
    let coords = points
        .iter()
        .map(|p| match p.affine_coordinate() {
            Some(z) => Scalar::one() / (z - &q),
            None => Scalar::zero(),
        })
        .collect();
    Chart { shift: Some(q), coords }
}

/// The truncated evaluation map `λ_d: k[z]_{≤d} × k^m → k^{2m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMatrix {
    pub degree: usize,
    pub m: usize,
    /// Rows `v_1, w_1, v_2, w_2, …`; columns `1, z, …, z^d, a_1, …, a_m`.
    pub matrix: Matrix,
    pub chart: Chart,
}

pub fn lambda_matrix(f: &Family, d: usize) -> Result<LambdaMatrix> {
    let g = build_graph(f)?;
    let chart = affine_chart(&g.points);
    let m = f.m();
    let cols = d + 1 + m;
    let mut matrix = Matrix::zeros(2 * m, cols);
    for e in &g.edges {
        let i = e.label - 1;
        for (r, vertex) in [(2 * i, e.to), (2 * i + 1, e.from)] {
            let z = &chart.coords[vertex];
            let mut pow = Scalar::one();
            for c in 0..=d {
                matrix.set(r, c, pow.clone());
                pow *= z;
            }
            matrix.set(r, d + 1 + i, -Scalar::one());
        }
    }
    Ok(LambdaMatrix { degree: d, m, matrix, chart })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaRank {
    pub degree: usize,
    pub rank: usize,
    pub target_dim: usize,
    pub surjective: bool,
}

/// Least degree bound at which the rank is guaranteed to have stabilized.
pub fn stable_degree(f: &Family) -> Result<usize> {
    Ok(build_graph(f)?.points.len().saturating_sub(1))
}

/// Rank of `λ_d`, checked against `λ_{d+1}`; `None` picks the stable degree.
pub fn lambda_rank(f: &Family, d: Option<usize>) -> Result<LambdaRank> {
    let stable = stable_degree(f)?;
    let d = d.unwrap_or(stable);
    if d < stable {
        return Err(Error::Invalid(format!("degree bound {d} is below #points − 1 = {stable}")));
    }
    let rank = lambda_matrix(f, d)?.matrix.rank();
    let next = lambda_matrix(f, d + 1)?.matrix.rank();
    verify(rank == next, || format!("rank of λ did not stabilize: {rank} at d = {d}, {next} at d = {}", d + 1))?;
    let target_dim = 2 * f.m();
    Ok(LambdaRank { degree: d, rank, target_dim, surjective: rank == target_dim })
}

pub fn forest_lambda_consistency(f: &Family) -> Result<bool> {
    let g = build_graph(f)?;
    Ok(is_modest(&g) == lambda_rank(f, None)?.surjective)
}

/// Zero-based pair indices of the greedy spanning forest, lowest index first.
fn forest_edges(g: &CurveGraph) -> Vec<usize> {
    let mut uf = UnionFind::<usize>::new(g.points.len());
    g.edges.iter().filter(|e| uf.union(e.from, e.to)).map(|e| e.label - 1).collect()
}

pub fn spanning_forest_reduce(f: &Family) -> Result<Family> {
    Ok(f.select(&forest_edges(&build_graph(f)?)))
}

/// Basis of `ker λ_d`: pairs (coefficients of `f`, values `a_i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateRing {
    pub degree: usize,
    pub basis: Vec<(Vec<Scalar>, Vec<Scalar>)>,
    pub rank: usize,
    pub chart: Chart,
}

impl CoordinateRing {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn coordinate_ring_basis(f: &Family, d: usize) -> Result<CoordinateRing> {
    let lam = lambda_matrix(f, d)?;
    let rank = lam.matrix.rank();
    let ker = lam.matrix.kernel();
    let basis = ker
        .row_vecs()
        .into_iter()
        .map(|mut row| {
            let values = row.split_off(d + 1);
            (row, values)
        })
        .collect();
    Ok(CoordinateRing { degree: d, basis, rank, chart: lam.chart })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub points: Vec<String>,
    pub branches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveReport {
    pub m: usize,
    pub points: Vec<String>,
    pub origins: Vec<Vec<String>>,
    pub edges: Vec<CurveEdge>,
    pub components: Vec<Vec<usize>>,
    pub cycle_rank: usize,
    pub modest: bool,
    pub lambda: LambdaRank,
    pub consistent: bool,
    pub c: usize,
    pub singular_points: Vec<SingularPoint>,
    pub smooth: bool,
    pub chart_shift: Option<String>,
    /// One-based pair indices kept by the spanning-forest reduction.
    pub forest_pairs: Vec<usize>,
}

pub fn curve_report(f: &Family) -> Result<CurveReport> {
    let g = build_graph(f)?;
    let lambda = lambda_rank(f, None)?;
    let chart = affine_chart(&g.points);
    let modest = is_modest(&g);
    let singular_points: Vec<SingularPoint> = g
        .components
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| SingularPoint { points: c.iter().map(|&v| g.points[v].label()).collect(), branches: c.len() })
        .collect();
    let forest_pairs = forest_edges(&g).into_iter().map(|i| i + 1).collect();
    Ok(CurveReport {
        m: f.m(),
        points: g.points.iter().map(P1Point::label).collect(),
        origins: g.origins.clone(),
        edges: g.edges.clone(),
        components: g.components.clone(),
        cycle_rank: g.cycle_rank,
        modest,
        consistent: modest == lambda.surjective,
        lambda,
        c: g.points.len(),
        smooth: singular_points.is_empty(),
        singular_points,
        chart_shift: chart.shift.map(|q| q.to_string()),
        forest_pairs,
    })
}

/// Family with every `V_i`, `W_i` drawn from the first `pool` points
/// `(0:1), (1:0), (1:1), (1:1/2), …`. The `W_i` are drawn first and each `V_i`
/// avoids `W_1, …, W_i`, so (G) holds by construction.
pub fn random_glued_family(m: usize, pool: usize, seed: u64) -> Result<Family> {
    if pool < 2 && m > 0 {
        return Err(Error::Invalid("a glued family needs a pool of at least two points".into()));
    }
    let candidates: Vec<P1Point> = (0..pool)
        .map(|i| match i {
            0 => P1Point::affine(Scalar::zero()),
            1 => P1Point::infinity(),
            _ => P1Point::affine(Scalar::one() / int(i as i64 - 1)),
        })
        .collect();
    let mut rng = rng_from_seed(seed);
    for _ in 0..MAX_RESAMPLES {
        let ws: Vec<usize> = (0..m).map(|_| rng.gen_range(0..pool)).collect();
        let mut used = vec![false; pool];
        let mut pairs = Vec::with_capacity(m);
        for &w in &ws {
            used[w] = true;
            let free: Vec<usize> = (0..pool).filter(|&p| !used[p]).collect();
            if free.is_empty() {
                break;
            }
            let v = free[rng.gen_range(0..free.len())];
            pairs.push(Pair { v: candidates[v].to_line(), w: candidates[w].to_line() });
        }
        if pairs.len() < m {
            continue;
        }
        let f = Family::new(2, pairs)?;
        verify(check_g(&f).passes(), || "glued family violates (G)".into())?;
        return Ok(f);
    }
    Err(Error::Degenerate(format!("no glued family with m = {m} from {pool} points after {MAX_RESAMPLES} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;
    use crate::family::random_family;
    use proptest::prelude::*;

    type LinePair = ((i64, i64), (i64, i64));

    fn pt(a: i64, b: i64) -> P1Point {
        P1Point::new(int(a), int(b)).unwrap()
    }

    fn fam(pairs: &[LinePair]) -> Family {
        let pairs = pairs.iter().map(|&(v, w)| Pair { v: pt(v.0, v.1).to_line(), w: pt(w.0, w.1).to_line() }).collect();
        Family::new(2, pairs).unwrap()
    }

    fn parallel() -> Family {
        fam(&[((0, 1), (1, 1)), ((0, 1), (1, 1))])
    }

    fn triangle() -> Family {
        // (V, W) = (p, q), (r, p), (r, q)
        fam(&[((0, 1), (1, 1)), ((2, 1), (0, 1)), ((2, 1), (1, 1))])
    }

    fn chain() -> Family {
        // V_1 = W_2
        fam(&[((0, 1), (1, 1)), ((3, 1), (0, 1))])
    }

    #[test]
    fn lines_to_points() {
        assert_eq!(line_to_point(&Subspace::span_i64(2, &[&[1, 0]])).unwrap(), P1Point::infinity());
        let p = line_to_point(&Subspace::span_i64(2, &[&[2, 4]])).unwrap();
        assert_eq!(p.label(), "1:2");
        assert_eq!(line_to_point(&Subspace::span_i64(2, &[&[0, 7]])).unwrap().label(), "0:1");
        assert!(line_to_point(&Subspace::full(2)).is_err());
        assert!(P1Point::new(int(0), int(0)).is_err());
    }

    #[test]
    fn nodal_graph() {
        let f = fam(&[((0, 1), (1, 1)), ((2, 1), (3, 1))]);
        let g = build_graph(&f).unwrap();
        assert_eq!(g.points.len(), 4);
        assert_eq!(g.components.len(), 2);
        assert_eq!(g.cycle_rank, 0);
        assert!(is_modest(&g));
        assert_eq!(g.edges[0], CurveEdge { from: 1, to: 0, label: 1 });
        let r = curve_report(&f).unwrap();
        assert_eq!(r.c, 4);
        assert_eq!(r.singular_points.len(), 2);
        assert!(r.singular_points.iter().all(|s| s.branches == 2));
        assert!(r.lambda.surjective);
    }

    #[test]
    fn parallel_edges() {
        let f = parallel();
        let g = build_graph(&f).unwrap();
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.cycle_rank, 1);
        assert!(!is_modest(&g));
        let l = lambda_rank(&f, None).unwrap();
        assert_eq!((l.rank, l.surjective), (3, false));
        assert!(forest_lambda_consistency(&f).unwrap());
        let red = spanning_forest_reduce(&f).unwrap();
        assert_eq!(red.pairs(), &f.pairs()[..1]);
    }

    #[test]
    fn empty_family() {
        let f = Family::empty(2);
        let g = build_graph(&f).unwrap();
        assert!(g.points.is_empty() && is_modest(&g));
        let l = lambda_rank(&f, None).unwrap();
        assert!(l.surjective && l.rank == 0);
        for d in 0..4 {
            assert_eq!(coordinate_ring_basis(&f, d).unwrap().dim(), d + 1);
        }
        let r = curve_report(&f).unwrap();
        assert!(r.smooth && r.c == 0);
    }

    #[test]
    fn chain_is_a_path() {
        let f = chain();
        let g = build_graph(&f).unwrap();
        assert_eq!(g.points.len(), 3);
        assert!(is_modest(&g));
        let r = curve_report(&f).unwrap();
        assert_eq!(r.singular_points, vec![SingularPoint { points: vec!["0:1".into(), "1:1".into(), "1:1/3".into()], branches: 3 }]);
        assert_eq!(r.c, 3);
        assert!(r.lambda.surjective);
    }

    #[test]
    fn chain_violating_g_is_rejected() {
        // W_1 = V_2 breaks (G) at (i, j) = (2, 1).
        let f = fam(&[((0, 1), (1, 1)), ((1, 1), (3, 1))]);
        assert!(matches!(build_graph(&f), Err(Error::PropertyG { .. })));
    }

    #[test]
    fn triangle_drops_one_pair() {
        let f = triangle();
        let g = build_graph(&f).unwrap();
        assert_eq!(g.cycle_rank, 1);
        assert!(!lambda_rank(&f, None).unwrap().surjective);
        let red = spanning_forest_reduce(&f).unwrap();
        assert_eq!(red.m(), 2);
        let h = build_graph(&red).unwrap();
        assert!(is_modest(&h));
        assert_eq!(h.point_partition(), g.point_partition());
        assert_eq!(curve_report(&f).unwrap().forest_pairs, vec![1, 2]);
    }

    #[test]
    fn nodal_coordinate_ring() {
        let f = fam(&[((0, 1), (1, 1))]);
        assert_eq!(coordinate_ring_basis(&f, 1).unwrap().dim(), 1);
        let ring = coordinate_ring_basis(&f, 2).unwrap();
        assert_eq!(ring.dim(), 2);
        // Spanned by (1, 1) and (z(z − 1), 0).
        let mut rows: Vec<Vec<Scalar>> = ring.basis.iter().map(|(p, a)| [p.clone(), a.clone()].concat()).collect();
        rows.push(vec![int(0), int(-1), int(1), int(0)]);
        rows.push(vec![int(1), int(0), int(0), int(1)]);
        assert_eq!(Matrix::from_rows(4, rows).rank(), 2);
        let l = lambda_rank(&f, None).unwrap();
        assert_eq!((l.rank, l.surjective), (2, true));
    }

    #[test]
    fn infinity_uses_shifted_chart() {
        let f = fam(&[((1, 0), (0, 1)), ((1, 1), (1, 2))]);
        let chart = affine_chart(&build_graph(&f).unwrap().points);
        assert_eq!(chart.shift, Some(int(2)));
        let mut seen = chart.coords.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
        assert!(lambda_rank(&f, None).unwrap().surjective);
    }

    #[test]
    fn rank_below_stable_degree_is_rejected() {
        assert!(lambda_rank(&triangle(), Some(1)).is_err());
    }

    #[test]
    fn random_line_families_agree() {
        for seed in 0..10 {
            let f = random_family(2, &[1, 1, 1], seed).unwrap();
            let r = curve_report(&f).unwrap();
            assert!(r.c <= 6);
            assert_eq!(r.modest, r.lambda.surjective);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn modest_iff_surjective(m in 0usize..5, pool in 2usize..6, seed in 0u64..1000) {
            let f = random_glued_family(m, pool, seed).unwrap();
            let g = build_graph(&f).unwrap();
            let l = lambda_rank(&f, None).unwrap();
            prop_assert_eq!(is_modest(&g), l.surjective);
            prop_assert_eq!(l.rank + g.components.len(), g.points.len() + m);
            prop_assert!(g.points.len() <= 2 * m);
            let red = spanning_forest_reduce(&f).unwrap();
            let h = build_graph(&red).unwrap();
            prop_assert!(is_modest(&h));
            prop_assert_eq!(h.point_partition(), g.point_partition());
            for d in l.degree..l.degree + 2 {
                let ring = coordinate_ring_basis(&f, d).unwrap();
                prop_assert_eq!(ring.dim(), d + 1 + m - ring.rank);
            }
        }

        #[test]
        fn rank_is_monotone(m in 1usize..4, pool in 2usize..5, seed in 0u64..1000) {
            let f = random_glued_family(m, pool, seed).unwrap();
            let ranks: Vec<usize> = (0..5).map(|d| lambda_matrix(&f, d).unwrap().matrix.rank()).collect();
            prop_assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
