//! The acceptance suite: ten criteria, each a list of labelled cases.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use twosimple::curve::{
    build_graph, coordinate_ring_basis, is_modest, lambda_matrix, lambda_rank, random_glued_family, spanning_forest_reduce,
};
use twosimple::dcat::{build_d, chi_for_delta, endomorphism_cohomology, exceptionality_suite, hom_table, DAlgebra};
use twosimple::exactla::{int, rng_from_seed, Subspace};
use twosimple::family::{green_family, kk_family, random_family, Family, Pair};
use twosimple::homology::{default_cutoff, gldim, loewy_length, resolution_report};
use twosimple::quiverpath::{build_oracle, green_quiver, kk_quiver};
use twosimple::ralgebra::{build_r, chi_zero, component_dims, component_dims_formula, subsets_by_size, total_dim_formula, verify_against_oracle};
use twosimple::twist::factorize_r;
use twosimple::Result;

use crate::to_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub seed: u64,
    pub quick: bool,
}

impl Config {
    pub fn full(seed: u64) -> Self {
        Config { seed, quick: false }
    }

    pub fn quick(seed: u64) -> Self {
        Config { seed, quick: true }
    }

    fn pick(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }

    fn derived_seed(&self, salt: u64, i: usize) -> u64 {
        self.seed.wrapping_mul(1_000_003).wrapping_add(salt * 10_000 + i as u64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub label: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub cases: Vec<Case>,
}

impl Criterion {
    fn new(id: usize, name: &str, cases: Vec<Case>) -> Self {
        Criterion { id, name: name.into(), passed: !cases.is_empty() && cases.iter().all(|c| c.passed), cases }
    }

    pub fn status_line(&self) -> String {
        let failed = self.cases.iter().filter(|c| !c.passed).count();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} criterion {:>2} {:<28} {} cases, {failed} failed", self.id, self.name, self.cases.len())
    }

    pub fn failures(&self) -> Vec<&Case> {
        self.cases.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: Config,
    pub criteria: Vec<Criterion>,
    pub passed: bool,
}

fn case<T: Serialize>(label: impl Into<String>, run: impl FnOnce() -> Result<(bool, T)>) -> Case {
    let label = label.into();
    match run() {
        Ok((passed, detail)) => Case { label, passed, detail: serde_json::to_value(detail).expect("serializable detail") },
        Err(e) => Case { label, passed: false, detail: json!({ "error": e.to_string() }) },
    }
}

/// Families shared by criteria 3, 4 and 5, each labelled by a source string that reproduces it.
pub fn algebra_families(cfg: &Config) -> Vec<(String, Family)> {
    let mut out: Vec<(String, Family)> = (1..=3).map(|n| (format!("empty:{n}"), Family::empty(n))).collect();
    for l in 2..=cfg.pick(6, 4) {
        out.push((format!("green:{l}"), green_family(l).expect("l ≥ 2")));
    }
    for n in 1..=cfg.pick(3, 2) {
        out.push((format!("kk:{n}"), kk_family(n).expect("n ≥ 1")));
    }
    let mut rng = rng_from_seed(cfg.derived_seed(3, 0));
    for i in 0..cfg.pick(20, 5) {
        let n = rng.gen_range(1..=4usize);
        let m = rng.gen_range(1..=4usize);
        let mut kseq: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=n)).collect();
        kseq.sort_unstable_by(|a, b| b.cmp(a));
        let seed = cfg.derived_seed(3, i + 1);
        let ks: Vec<String> = kseq.iter().map(usize::to_string).collect();
        let label = format!("random:{n},{m},({}),{seed}", ks.join(","));
        match random_family(n, &kseq, seed) {
            Ok(f) => out.push((label, f)),
            Err(e) => panic!("{label}: {e}"),
        }
    }
    out
}

pub fn criterion_green(cfg: &Config) -> Criterion {
    let mut cases = Vec::new();
    for l in 2..=cfg.pick(8, 5) {
        cases.push(case(format!("gldim green:{l}"), || {
            let f = green_family(l)?;
            let r = build_r(&f)?;
            let g = gldim(&r.algebra, default_cutoff(f.n(), f.m()))?;
            Ok((g == l, json!({ "l": l, "dim": r.dim(), "gldim": g })))
        }));
    }
    for (l, want) in [(2usize, 5usize), (3, 8)] {
        cases.push(case(format!("dim G{l}"), || {
            let (q, rels) = green_quiver(l);
            let o = build_oracle(&q, &rels, 2 * l + 4)?;
            let closed = build_r(&green_family(l)?)?.dim();
            Ok((o.dim() == want && closed == want, json!({ "expected": want, "oracle": o.dim(), "closed_form": closed })))
        }));
    }
    Criterion::new(1, "green global dimension", cases)
}

pub fn criterion_kk(cfg: &Config) -> Criterion {
    let cases = (2..=cfg.pick(3, 2))
        .map(|n| {
            case(format!("kk:{n}"), || {
                let f = kk_family(n)?;
                let r = build_r(&f)?;
                let rep = resolution_report(&r.algebra, default_cutoff(f.n(), f.m()))?;
                let (q, rels) = kk_quiver(n);
                let oracle_loewy = loewy_length(&build_oracle(&q, &rels, 6)?.algebra)?;
                let ok = rep.gldim == 2 * n + 1 && rep.loewy == 4 && oracle_loewy == 4;
                Ok((ok, json!({ "n": n, "gldim": rep.gldim, "loewy": rep.loewy, "oracle_loewy": oracle_loewy, "betti": rep.per_simple })))
            })
        })
        .collect();
    Criterion::new(2, "kk dimension and loewy", cases)
}

pub fn criterion_oracle(families: &[(String, Family)]) -> Criterion {
    let cases = families
        .iter()
        .map(|(label, f)| {
            case(label.clone(), || {
                let rep = verify_against_oracle(f, None)?;
                Ok((rep.agree && rep.closed_form_dim == rep.oracle_dim, rep))
            })
        })
        .collect();
    Criterion::new(3, "oracle equivalence", cases)
}

/// Expected `(P, u) → dim` from the product formulas, zeros omitted.
fn formula_components(f: &Family) -> BTreeMap<(Vec<usize>, usize), usize> {
    let mut want = BTreeMap::new();
    want.insert((Vec::new(), 0), 2);
    if f.n() > 0 {
        want.insert((Vec::new(), 1), f.n());
    }
    for p in subsets_by_size(f.m()) {
        let s = p.len();
        let (a, b, c) = component_dims_formula(f.n(), &f.kseq(), &p);
        for (u, d) in [(s - 1, a), (s, b), (s + 1, c)] {
            if d > 0 {
                want.insert((p.clone(), u), d);
            }
        }
    }
    want
}

pub fn criterion_dims(cfg: &Config, families: &[(String, Family)]) -> Criterion {
    let mut all: Vec<(String, Family)> = families.to_vec();
    for m in 0..=cfg.pick(4, 2) {
        let seed = cfg.derived_seed(4, m);
        all.push((format!("random:2,{m},1,{seed}"), random_family(2, &vec![1; m], seed).expect("lines in general position")));
    }
    let cases = all
        .iter()
        .map(|(label, f)| {
            case(label.clone(), || {
                let r = build_r(f)?;
                let got: BTreeMap<(Vec<usize>, usize), usize> = component_dims(&r).into_iter().collect();
                let want = formula_components(f);
                let total = total_dim_formula(f.n(), &f.kseq());
                let lines = f.n() == 2 && f.kseq().iter().all(|&k| k == 1);
                let ok = got == want && r.dim() == total && (!lines || r.dim() == 4 + 4 * f.m());
                let mismatched: Vec<String> = want
                    .keys()
                    .chain(got.keys())
                    .filter(|k| got.get(*k) != want.get(*k))
                    .map(|(p, u)| format!("({u};{p:?})"))
                    .collect();
                Ok((ok, json!({ "dim": r.dim(), "formula_total": total, "components": got.len(), "mismatched": mismatched })))
            })
        })
        .collect();
    Criterion::new(4, "dimension formulas", cases)
}

pub fn criterion_factorization(families: &[(String, Family)]) -> Criterion {
    let cases = families
        .iter()
        .map(|(label, f)| {
            case(label.clone(), || {
                let cert = factorize_r(f, &chi_zero(f.m()))?;
                let steps = cert.chain.len();
                let ok = steps == f.m()
                    && cert.chain.iter().all(|s| s.rho_isomorphism && s.ideal_two_sided && s.ideal_nilpotency_index >= 1);
                let nil: Vec<usize> = cert.chain.iter().map(|s| s.ideal_nilpotency_index).collect();
                let sums: Vec<&str> = cert.chain.iter().map(|s| s.checksum.as_str()).collect();
                Ok((ok, json!({ "m": f.m(), "steps": steps, "nilpotency": nil, "checksums": sums, "terminals": cert.terminals })))
            })
        })
        .collect();
    Criterion::new(5, "twisted factorization", cases)
}

/// Equidimensional families with `n ≤ 3`, `k ≤ 2`, `m ≤ 3`, each with three shift vectors.
pub fn dcat_cases(cfg: &Config) -> Vec<(String, Family, Vec<i64>)> {
    let mut rng = rng_from_seed(cfg.derived_seed(6, 0));
    let mut out = Vec::new();
    for i in 0..cfg.pick(10, 3) {
        let n = rng.gen_range(2..=3usize);
        let k = rng.gen_range(1..=(n - 1).min(2));
        let m = rng.gen_range(1..=3usize);
        let seed = cfg.derived_seed(6, i + 1);
        let f = random_family(n, &vec![k; m], seed).expect("general position");
        // Neither constant zero nor constant one, and not constant when m > 1.
        let mut mixed: Vec<i64> = (0..m).map(|_| rng.gen_range(-2..=3i64)).collect();
        mixed[0] = [-2, -1, 2, 3][rng.gen_range(0..4usize)];
        if m > 1 && mixed.iter().all(|&d| d == mixed[0]) {
            mixed[1] = 0;
        }
        let label = format!("random:{n},{m},{k},{seed}");
        for delta in [vec![0; m], vec![1; m], mixed] {
            out.push((label.clone(), f.clone(), delta));
        }
    }
    out
}

fn delta_label(label: &str, delta: &[i64]) -> String {
    let ds: Vec<String> = delta.iter().map(i64::to_string).collect();
    format!("{label} delta=({})", ds.join(","))
}

/// Criteria 6, 7 and 8 share one build of `D` per case.
pub fn criteria_dcat(cfg: &Config) -> [Criterion; 3] {
    let mut homs = Vec::new();
    let mut exc = Vec::new();
    let mut ends = Vec::new();
    for (label, f, delta) in dcat_cases(cfg) {
        let name = delta_label(&label, &delta);
        let d: std::result::Result<DAlgebra, _> = build_d(&f, &delta);
        let d = match d {
            Ok(d) => d,
            Err(e) => {
                for v in [&mut homs, &mut exc, &mut ends] {
                    v.push(Case { label: name.clone(), passed: false, detail: json!({ "error": e.to_string() }) });
                }
                continue;
            }
        };
        homs.push(case(name.clone(), || {
            let table = hom_table(&d);
            Ok((table.iter().all(|e| e.ok), table))
        }));
        exc.push(case(name.clone(), || {
            let rep = exceptionality_suite(&d)?;
            Ok((rep.passed, rep))
        }));
        ends.push(case(name, || {
            let rep = endomorphism_cohomology(&d, &chi_for_delta(&delta))?;
            Ok((rep.passed, rep))
        }));
    }
    [
        Criterion::new(6, "hom table", homs),
        Criterion::new(7, "exceptionality", exc),
        Criterion::new(8, "endomorphism cohomology", ends),
    ]
}

/// `(V, W)` as the homogeneous coordinates of two lines in `k²`.
type LinePair = ((i64, i64), (i64, i64));

fn line(a: i64, b: i64) -> Subspace {
    Subspace::span(2, vec![vec![int(a), int(b)]])
}

fn lines_family(pairs: &[LinePair]) -> Family {
    let pairs = pairs.iter().map(|&(v, w)| Pair { v: line(v.0, v.1), w: line(w.0, w.1) }).collect();
    Family::new(2, pairs).expect("lines in k²")
}

/// Hand-built gluing patterns: multi-edges, paths, cycles and the point at infinity.
pub fn adversarial_curves() -> Vec<(String, Family)> {
    vec![
        ("parallel edges".into(), lines_family(&[((0, 1), (1, 1)), ((0, 1), (1, 1))])),
        ("triple parallel".into(), lines_family(&[((0, 1), (1, 1)), ((0, 1), (1, 1)), ((0, 1), (1, 1))])),
        ("chain V1 = W2".into(), lines_family(&[((0, 1), (1, 1)), ((3, 1), (0, 1))])),
        ("long chain".into(), lines_family(&[((0, 1), (1, 1)), ((2, 1), (0, 1)), ((3, 1), (2, 1)), ((4, 1), (3, 1))])),
        ("3-cycle".into(), lines_family(&[((0, 1), (1, 1)), ((2, 1), (0, 1)), ((2, 1), (1, 1))])),
        ("3-cycle through infinity".into(), lines_family(&[((1, 0), (1, 1)), ((2, 1), (1, 0)), ((2, 1), (1, 1))])),
        ("star".into(), lines_family(&[((0, 1), (1, 1)), ((0, 1), (2, 1)), ((0, 1), (3, 1))])),
        ("cycle plus pendant".into(), lines_family(&[((0, 1), (1, 1)), ((0, 1), (1, 1)), ((5, 1), (0, 1))])),
        ("nodal with infinity".into(), lines_family(&[((1, 0), (0, 1)), ((1, 1), (1, 2))])),
        ("empty".into(), Family::empty(2)),
    ]
}

fn curve_case(label: String, f: &Family) -> Case {
    case(label, || {
        let m = f.m();
        let g = build_graph(f)?;
        let lam = lambda_rank(f, None)?;
        let modest = is_modest(&g);
        let c = g.points.len();
        let red = spanning_forest_reduce(f)?;
        let h = build_graph(&red)?;
        let reduced_surjective = lambda_rank(&red, None)?.surjective;
        let mut nullity = Vec::new();
        let mut nullity_ok = true;
        for d in lam.degree..=lam.degree + 2 {
            let rank = lambda_matrix(f, d)?.matrix.rank();
            let ring = coordinate_ring_basis(f, d)?;
            nullity_ok &= ring.dim() == d + 1 + m - rank;
            nullity.push(json!({ "d": d, "rank": rank, "kernel": ring.dim() }));
        }
        let graph_rank = c + m - g.components.len();
        let checks = json!({
            "modest_iff_surjective": modest == lam.surjective,
            "forest_modest": is_modest(&h) && reduced_surjective,
            "same_partition": h.point_partition() == g.point_partition(),
            "rank_nullity": nullity_ok,
            "rank_from_graph": lam.rank == graph_rank,
            "c_at_most_2m": c <= 2 * m,
        });
        let ok = checks.as_object().expect("object").values().all(|v| v == &Value::Bool(true));
        Ok((
            ok,
            json!({
                "m": m,
                "c": c,
                "cycle_rank": g.cycle_rank,
                "modest": modest,
                "lambda_rank": lam.rank,
                "kept_pairs": red.m(),
                "nullity": nullity,
                "checks": checks,
            }),
        ))
    })
}

pub fn curve_families(cfg: &Config) -> Vec<(String, Family)> {
    let mut rng = rng_from_seed(cfg.derived_seed(9, 0));
    let mut out = Vec::new();
    for i in 0..cfg.pick(50, 10) {
        let m = rng.gen_range(1..=5usize);
        let seed = cfg.derived_seed(9, i + 1);
        if i % 2 == 0 {
            let pool = rng.gen_range(2..=6usize);
            out.push((format!("glued:{m},{pool},{seed}"), random_glued_family(m, pool, seed).expect("pool ≥ 2")));
        } else {
            out.push((format!("random:2,{m},1,{seed}"), random_family(2, &vec![1; m], seed).expect("general position")));
        }
    }
    out.extend(adversarial_curves());
    out
}

pub fn criterion_curve(cfg: &Config) -> Criterion {
    let cases = curve_families(cfg).iter().map(|(label, f)| curve_case(label.clone(), f)).collect();
    Criterion::new(9, "curve", cases)
}

/// Criteria 1 to 9.
pub fn run_checks(cfg: &Config) -> Vec<Criterion> {
    let fams = algebra_families(cfg);
    let [c6, c7, c8] = criteria_dcat(cfg);
    vec![
        criterion_green(cfg),
        criterion_kk(cfg),
        criterion_oracle(&fams),
        criterion_dims(cfg, &fams),
        criterion_factorization(&fams),
        c6,
        c7,
        c8,
        criterion_curve(cfg),
    ]
}

pub fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Compares two independently produced serializations of the same checks.
pub fn criterion_determinism(first: &[Criterion], second: &[Criterion]) -> Criterion {
    let (a, b) = (to_json(&first), to_json(&second));
    let case = Case {
        label: "repeat with identical seeds".into(),
        passed: a == b,
        detail: json!({ "bytes": [a.len(), b.len()], "sha256": [digest(&a), digest(&b)] }),
    };
    Criterion::new(10, "determinism", vec![case])
}

/// Runs criteria 1 to 9 twice and appends the determinism comparison.
pub fn run_suite(cfg: &Config) -> SuiteReport {
    let mut criteria = run_checks(cfg);
    let again = run_checks(cfg);
    criteria.push(criterion_determinism(&criteria, &again));
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport { config: *cfg, criteria, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_labels_reproduce_families() {
        let cfg = Config::quick(5);
        for (label, f) in algebra_families(&cfg).into_iter().chain(curve_families(&cfg).into_iter().take(10)) {
            assert_eq!(crate::source::parse_family(&label).unwrap(), f, "{label}");
        }
    }

    #[test]
    fn seeds_change_random_sections_only() {
        let (a, b) = (Config::quick(1), Config::quick(2));
        let named = |c: &Config| algebra_families(c).into_iter().filter(|(l, _)| !l.starts_with("random")).collect::<Vec<_>>();
        assert_eq!(named(&a), named(&b));
        assert_ne!(algebra_families(&a), algebra_families(&b));
        assert_eq!(adversarial_curves().len(), 10);
    }

    #[test]
    fn adversarial_curves_satisfy_g() {
        for (label, f) in adversarial_curves() {
            assert!(twosimple::family::check_g(&f).passes(), "{label}");
        }
    }
}
