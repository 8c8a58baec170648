//! One function per subcommand; each returns a summary, a JSON report and a verdict.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use twosimple::curve::curve_report;
use twosimple::dcat::{build_d, chi_for_delta, endomorphism_cohomology, exceptionality_suite, hom_table};
use twosimple::family::{check_g, Family};
use twosimple::homology::{default_cutoff, resolution_report};
use twosimple::ralgebra::{apply_grading, build_r, chi_zero, component_dims, total_dim_formula, verify_against_oracle};
use twosimple::twist::factorize_r;

use crate::suite::{run_suite, Config};
use crate::CliError;

pub struct Outcome {
    pub summary: String,
    pub report: Value,
    pub passed: bool,
}

fn family_header(f: &Family) -> Value {
    json!({ "n": f.n(), "m": f.m(), "k": f.kseq() })
}

fn grading(f: &Family, chi: Option<Vec<i64>>) -> Result<Vec<i64>, CliError> {
    let chi = chi.unwrap_or_else(|| chi_zero(f.m()));
    if chi.len() != f.m() + 1 {
        return Err(CliError::Input(format!("--chi needs m + 1 = {} entries, got {}", f.m() + 1, chi.len())));
    }
    Ok(chi)
}

pub fn check_family(f: &Family) -> Result<Outcome, CliError> {
    let g = check_g(f);
    let passed = g.passes();
    let summary = match g.first_failure {
        None => format!("n = {}, m = {}, k = {:?}: (G) holds", f.n(), f.m(), f.kseq()),
        Some((i, j)) => format!("n = {}, m = {}, k = {:?}: (G) fails at (i, j) = ({i}, {j})", f.n(), f.m(), f.kseq()),
    };
    Ok(Outcome { summary, report: json!({ "family": family_header(f), "g": g, "data": f.to_json() }), passed })
}

pub fn build_algebra(f: &Family, chi: Option<Vec<i64>>) -> Result<Outcome, CliError> {
    let chi = grading(f, chi)?;
    let r = apply_grading(&build_r(f)?, &chi)?;
    r.algebra.check_units()?;
    let formula = total_dim_formula(f.n(), &f.kseq());
    let comps: BTreeMap<String, usize> =
        component_dims(&r).into_iter().map(|((p, u), d)| (format!("({u};{:?})", p.iter().map(|i| i + 1).collect::<Vec<_>>()), d)).collect();
    let cartan = r.algebra.cartan_matrix();
    let passed = r.dim() == formula;
    let basis: Vec<Value> = r
        .algebra
        .basis
        .iter()
        .map(|b| json!({ "word": b.word, "source": b.source + 1, "target": b.target + 1, "zdegree": b.zdegree }))
        .collect();
    let summary = format!("dim R = {} (formula {formula}), cartan = {cartan:?}, checksum = {}", r.dim(), r.algebra.checksum());
    let report = json!({
        "family": family_header(f),
        "chi": chi,
        "dim": r.dim(),
        "formula_dim": formula,
        "cartan": cartan,
        "components": comps,
        "checksum": r.algebra.checksum(),
        "basis": basis,
        "structure": r.algebra.structure_rows(),
    });
    Ok(Outcome { summary, report, passed })
}

pub fn verify_oracle(f: &Family, cutoff: Option<usize>) -> Result<Outcome, CliError> {
    let rep = verify_against_oracle(f, cutoff)?;
    let summary = format!(
        "closed form dim {}, oracle dim {}: {}",
        rep.closed_form_dim,
        rep.oracle_dim,
        if rep.agree { "isomorphic" } else { "MISMATCH" }
    );
    Ok(Outcome { summary, passed: rep.agree, report: json!({ "family": family_header(f), "oracle": rep }) })
}

pub fn gldim(f: &Family, cutoff: Option<usize>) -> Result<Outcome, CliError> {
    let r = build_r(f)?;
    let rep = resolution_report(&r.algebra, cutoff.unwrap_or_else(|| default_cutoff(f.n(), f.m())))?;
    let summary = format!("gldim = {}, loewy = {}", rep.gldim, rep.loewy);
    Ok(Outcome { summary, passed: rep.euler_consistent, report: json!({ "family": family_header(f), "resolution": rep }) })
}

pub fn factorize(f: &Family, chi: Option<Vec<i64>>) -> Result<Outcome, CliError> {
    let chi = grading(f, chi)?;
    let cert = factorize_r(f, &chi)?;
    let passed = cert.chain.len() == f.m() && cert.chain.iter().all(|s| s.rho_isomorphism);
    let summary = format!("{} steps, terminals {}", cert.chain.len(), cert.terminals.join(", "));
    Ok(Outcome { summary, passed, report: json!({ "family": family_header(f), "certificate": cert }) })
}

pub fn dcat_verify(f: &Family, delta: Option<Vec<i64>>) -> Result<Outcome, CliError> {
    let delta = delta.unwrap_or_else(|| vec![0; f.m()]);
    if delta.len() != f.m() {
        return Err(CliError::Input(format!("--delta needs m = {} entries, got {}", f.m(), delta.len())));
    }
    let d = build_d(f, &delta)?;
    let table = hom_table(&d);
    let exc = exceptionality_suite(&d)?;
    let chi = chi_for_delta(&delta);
    let end = endomorphism_cohomology(&d, &chi)?;
    let homs_ok = table.iter().all(|e| e.ok);
    let passed = homs_ok && exc.passed && end.passed;
    let mark = |b: bool| if b { "ok" } else { "FAILED" };
    let summary = format!(
        "dim D = {}; hom table {}; exceptionality {}; H*(End(P1+P2)) vs R(chi = {chi:?}) {}",
        d.algebra().dim(),
        mark(homs_ok),
        mark(exc.passed),
        mark(end.passed)
    );
    let report = json!({
        "family": family_header(f),
        "delta": delta,
        "dim": d.algebra().dim(),
        "hom_table": table,
        "exceptionality": exc,
        "endomorphisms": end,
    });
    Ok(Outcome { summary, report, passed })
}

pub fn curve(f: &Family) -> Result<Outcome, CliError> {
    let rep = curve_report(f)?;
    let summary = format!(
        "modest = {}, lambda rank = {} of {}, surjective = {}, c = {}, singular points = {}",
        rep.modest,
        rep.lambda.rank,
        rep.lambda.target_dim,
        rep.lambda.surjective,
        rep.c,
        rep.singular_points.len()
    );
    Ok(Outcome { summary, passed: rep.consistent, report: json!({ "family": family_header(f), "curve": rep }) })
}

pub fn demo(seed: u64, quick: bool) -> Result<Outcome, CliError> {
    let cfg = if quick { Config::quick(seed) } else { Config::full(seed) };
    let rep = run_suite(&cfg);
    let summary = rep.criteria.iter().map(|c| c.status_line()).collect::<Vec<_>>().join("\n");
    Ok(Outcome { summary, passed: rep.passed, report: serde_json::to_value(&rep).expect("serializable") })
}
