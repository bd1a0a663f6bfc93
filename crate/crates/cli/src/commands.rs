//! One function per subcommand; each fills the document's outputs.

use std::collections::BTreeMap;

use dynatomic::{
    a_p, a_star_p, build_cycle, build_cycle_at_points, build_dynatomic_cycle, colength, deform, deformed_periodic_poly,
    degenerate_parameter_locus, degree_conservation_check, divisors, dynatomic_poly, enumerate_periodic,
    flat_limit_clusters, formal_multiplicity_at, formal_multiplicity_at_infinity, generic_simplicity_check,
    local_system, mobius, multiplicity_at, multiplicity_at_infinity, orbit_profile, period_reduction,
    verify_effectivity, AlgebraicPoint, Ambient, ColengthValue, Error, Field, FieldElement, Model, PolyMap, Result,
    SimplicitySample, UniPoly, ZeroCycle,
};
use rug::Rational;
use serde_json::{json, Value};

use crate::document::{cycle_json, fields_json, point_json, ResultDocument, Status};
use crate::parse::{parse_element, MapSpec};
use crate::{CycleArgs, DeformArgs, DynatomicArgs, MultiplicityArgs, VerifyArgs};

fn var_name(spec: &MapSpec) -> String {
    match spec.model {
        Model::P1 => "z".into(),
        Model::Affine => spec.vars[0].clone(),
    }
}

fn usage(message: impl Into<String>) -> Error {
    Error::InvalidArgument(message.into())
}

fn parse_point(text: &str, field: &Field) -> Result<Vec<FieldElement>> {
    text.split(',')
        .map(|c| parse_element(c, field).map_err(|e| usage(format!("--point: {e}"))))
        .collect()
}

fn parse_rationals(text: &str) -> Result<Vec<Rational>> {
    parse_point(text, &Field::Rational).map(|v| v.iter().map(|x| x.as_rational().expect("rational").clone()).collect())
}

fn candidates(point: Option<&str>) -> Result<Vec<Vec<Rational>>> {
    let text = point.ok_or_else(|| usage("multivariate maps over Q need candidate points via --point"))?;
    text.split(';').map(parse_rationals).collect()
}

fn univariate_like(map: &PolyMap) -> bool {
    map.is_univariate() || map.model() == Model::P1
}

pub fn dynatomic(spec: &MapSpec, a: &DynatomicArgs, doc: &mut ResultDocument) -> Result<()> {
    let var = [var_name(spec)];
    let r = dynatomic_poly(&spec.map, a.n)?;
    doc.put("periodic", json!(r.phi_n_minus_z.display_with(&var)));
    doc.put("dynatomic", json!(r.dynatomic.display_with(&var)));
    doc.put("degree", json!(r.dynatomic.total_degree()));
    doc.put("division_certificate", json!(r.division_certificate));
    let (constant, factors) = UniPoly::from_poly(&r.dynatomic)?.squarefree_decomposition()?;
    let factors: Vec<Value> = factors
        .iter()
        .map(|(f, m)| json!({ "factor": f.to_string_with(&var[0]), "multiplicity": m }))
        .collect();
    doc.put(
        "squarefree",
        json!({ "constant": constant.to_string(), "factors": factors }),
    );
    if spec.model == Model::P1 {
        doc.put(
            "infinity",
            json!({
                "periodic": multiplicity_at_infinity(&spec.map, a.n)?,
                "dynatomic": formal_multiplicity_at_infinity(&spec.map, a.n)?,
            }),
        );
    }
    if !r.division_certificate {
        doc.fail(
            Status::Inconclusive,
            format!("the Möbius quotient for n = {} is not a polynomial", a.n),
        );
    }
    Ok(())
}

pub fn multiplicity(spec: &MapSpec, a: &MultiplicityArgs, doc: &mut ResultDocument) -> Result<()> {
    let map = &spec.map;
    if spec.model == Model::P1 && a.point.trim() == "inf" {
        doc.put("point", json!("inf"));
        doc.put("a", json!(multiplicity_at_infinity(map, a.n)?));
        doc.put("a_star", json!(formal_multiplicity_at_infinity(map, a.n)?));
        return Ok(());
    }
    let pt = parse_point(&a.point, &spec.field)?;
    if pt.len() != map.nvars() && spec.model == Model::Affine {
        return Err(Error::DimensionMismatch {
            expected: map.nvars(),
            got: pt.len(),
        });
    }
    doc.put("point", json!(pt.iter().map(ToString::to_string).collect::<Vec<_>>()));
    if univariate_like(map) {
        if pt.len() != 1 {
            return Err(usage("a point on P1 is one affine coordinate or 'inf'"));
        }
        doc.put("a", json!(multiplicity_at(map, a.n, &pt[0])?));
        doc.put("a_star", json!(formal_multiplicity_at(map, a.n, &pt[0])?));
    } else {
        match local_system(map, a.n, &pt) {
            Ok(sys) => {
                let report = colength(&sys, sys.bezout_bound());
                let value = match report.value {
                    ColengthValue::Finite(v) => json!(v),
                    ColengthValue::Degenerate => json!("degenerate"),
                    ColengthValue::Inconclusive => json!("inconclusive"),
                };
                doc.put(
                    "colength",
                    json!({
                        "local_system": sys.to_string(),
                        "value": value,
                        "certified_at_degree": report.certified_at_degree,
                        "bound": report.bound_used,
                    }),
                );
            }
            Err(Error::NotFixed(_)) => {}
            Err(e) => return Err(e),
        }
        doc.put("a", json!(a_p(map, a.n, &pt)?));
        doc.put("a_star", json!(a_star_p(map, a.n, &pt)?));
    }
    if spec.model == Model::Affine {
        match period_reduction(map, a.n, &pt) {
            Ok((m, _)) => doc.put("minimal_period", json!(m)),
            Err(Error::NotPeriodic(_)) | Err(Error::InvalidArgument(_)) => doc.put("minimal_period", Value::Null),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Φ*ₙ at candidate points only.
fn dynatomic_at_points(map: &PolyMap, n: u64, pts: &[Vec<Rational>]) -> Result<ZeroCycle> {
    let mut out = ZeroCycle::new(map.field(), Ambient::Affine(map.nvars()), None);
    for d in divisors(n)? {
        let c = i64::from(mobius((n / d) as i64)?);
        if c != 0 {
            out = out.combine(&build_cycle_at_points(map, d, pts)?, c)?;
        }
    }
    Ok(out)
}

fn cycles(spec: &MapSpec, n: u64, cap: u32, point: Option<&str>) -> Result<(ZeroCycle, ZeroCycle)> {
    let map = &spec.map;
    if spec.field == Field::Rational && !univariate_like(map) {
        let pts = candidates(point)?;
        return Ok((build_cycle_at_points(map, n, &pts)?, dynatomic_at_points(map, n, &pts)?));
    }
    let (p, s) = (build_cycle(map, n, cap)?, build_dynatomic_cycle(map, n, cap)?);
    if spec.field == Field::Rational {
        Ok((p.normalized()?, s.normalized()?))
    } else {
        Ok((p, s))
    }
}

pub fn cycle(spec: &MapSpec, a: &CycleArgs, doc: &mut ResultDocument) -> Result<()> {
    let var = var_name(spec);
    let (periodic, star) = cycles(spec, a.n, a.ext_cap, a.point.as_deref())?;
    let mut periods = BTreeMap::new();
    if spec.field.galois().is_some() {
        for pp in enumerate_periodic(&spec.map, a.n, a.ext_cap)? {
            periods.insert(pp.point, pp.minimal_period);
        }
    }
    doc.put("periodic", cycle_json(&periodic, &var, &periods));
    doc.put("dynatomic", cycle_json(&star, &var, &periods));
    doc.put("fields", fields_json(periodic.entries().map(|(p, _)| p)));
    let report = verify_effectivity(&star);
    doc.put(
        "effectivity",
        json!({
            "effective": report.effective,
            "violations": violations_json(&report.violations, &var),
            "totals": { "periodic": periodic.total_degree(), "dynatomic": report.total },
        }),
    );
    if !report.effective {
        doc.fail(Status::Inconclusive, format!("Φ*_{} has negative multiplicities", a.n));
    }
    Ok(())
}

fn violations_json(v: &[(AlgebraicPoint, i64)], var: &str) -> Value {
    json!(v
        .iter()
        .map(|(p, m)| json!({ "point": point_json(p, var), "multiplicity": m }))
        .collect::<Vec<_>>())
}

fn default_t_sequence() -> Vec<Rational> {
    (3..=8).map(|k| Rational::from((1, 10i64.pow(k)))).collect()
}

pub fn deform_check(spec: &MapSpec, a: &DeformArgs, doc: &mut ResultDocument) -> Result<()> {
    let var = [var_name(spec)];
    let d = deform(&spec.map)?;
    doc.put(
        "family",
        json!(d
            .deformed()
            .coords()
            .iter()
            .map(|c| c.display_with(&spec.vars))
            .collect::<Vec<_>>()),
    );
    doc.put("periodic", json!(deformed_periodic_poly(&d, a.n)?.display_with(&var)));
    let locus = degenerate_parameter_locus(&d, a.n)?;
    doc.put(
        "degenerate_locus",
        json!({
            "polynomial": locus.polynomial.to_string_with("t"),
            "rational_points": locus.rational_points.as_ref().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()),
        }),
    );
    let conserved = degree_conservation_check(&d, a.n)?;
    doc.put("degree_conserved", json!(conserved));
    if !conserved {
        doc.fail(Status::Inconclusive, "fiber degree varies with t");
    }
    let s = generic_simplicity_check(&d, a.n, a.samples, a.seed)?;
    let sample = |x: &SimplicitySample| {
        json!({
            "t0": x.t0.to_string(),
            "degree": x.degree,
            "squarefree": x.squarefree,
            "repeated_factor": x.repeated_factor.as_ref().map(|f| f.to_string_with(&var[0])),
        })
    };
    doc.put(
        "simplicity",
        json!({
            "passed": s.passed,
            "seed": a.seed,
            "undeformed_degree": s.undeformed_degree,
            "samples": s.samples.iter().map(sample).collect::<Vec<_>>(),
            "counterexamples": s.counterexamples.iter().map(sample).collect::<Vec<_>>(),
        }),
    );
    if !s.passed {
        doc.fail(Status::Inconclusive, "a generic fiber is not squarefree");
    }
    let ts = if a.t_sequence.is_empty() {
        default_t_sequence()
    } else {
        a.t_sequence
            .iter()
            .map(|t| parse_rationals(t).map(|mut v| v.remove(0)))
            .collect::<Result<_>>()?
    };
    match flat_limit_clusters(&d, a.n, &ts, a.precision) {
        Ok(r) => {
            let clusters: Vec<Value> = r
                .clusters
                .iter()
                .map(|c| {
                    json!({
                        "center": c.center.to_string(),
                        "orbit": c.orbit.to_string_with(&var[0]),
                        "a": c.expected_a,
                        "a_star": c.expected_a_star,
                        "counts": c.counts,
                        "tags": c.tags.last(),
                        "reconstructed_a": c.reconstructed_a,
                        "reconstructed_a_star": c.reconstructed_a_star,
                        "residual": format!("{:.3e}", c.residual),
                    })
                })
                .collect();
            doc.put(
                "flat_limit",
                json!({
                    "t_sequence": r.t_sequence.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "precision": a.precision,
                    "clusters": clusters,
                    "unassigned": r.unassigned,
                    "residual": format!("{:.3e}", r.residual),
                    "consistent": r.consistent,
                }),
            );
            if !r.consistent {
                doc.fail(
                    Status::Inconclusive,
                    "cluster census disagrees with the exact multiplicities",
                );
            }
        }
        Err(e) => doc.fail_with(&e),
    }
    Ok(())
}

#[derive(Default)]
struct Check {
    certificate: Option<bool>,
    effective: bool,
    violations: Value,
    mobius_identity: bool,
    monotone: bool,
}

fn check_period(spec: &MapSpec, m: u64, cap: u32, point: Option<&str>) -> Result<Check> {
    let map = &spec.map;
    let var = var_name(spec);
    let mut out = Check::default();
    if univariate_like(map) {
        out.certificate = Some(dynatomic_poly(map, m)?.division_certificate);
    }
    if spec.field == Field::Rational && !univariate_like(map) {
        let pts = candidates(point)?;
        let mut identity = true;
        let mut monotone = true;
        let mut bad = Vec::new();
        for c in &pts {
            let pt: Vec<FieldElement> = c.iter().cloned().map(FieldElement::Rational).collect();
            let star = a_star_p(map, m, &pt)?;
            if star < 0 {
                bad.push((AlgebraicPoint::Rational(c.clone()), star));
            }
            let am = a_p(map, m, &pt)?;
            let mut sum = 0;
            for d in divisors(m)? {
                sum += a_star_p(map, d, &pt)?;
            }
            identity &= sum == am as i64;
            monotone &= am >= a_p(map, 1, &pt)?;
        }
        out.effective = bad.is_empty();
        out.violations = violations_json(&bad, &var);
        out.mobius_identity = identity;
        out.monotone = monotone;
        return Ok(out);
    }
    let star = build_dynatomic_cycle(map, m, cap)?;
    let report = verify_effectivity(&star);
    out.effective = report.effective;
    out.violations = violations_json(&report.violations, &var);
    let mut sum = ZeroCycle::new(map.field(), star.ambient(), star.ext_cap());
    for d in divisors(m)? {
        sum = sum.combine(&build_dynatomic_cycle(map, d, cap)?, 1)?;
    }
    let whole = build_cycle(map, m, cap)?;
    out.mobius_identity = sum.equivalent(&whole);
    out.monotone = if spec.field == Field::Rational {
        let blocks_ok = orbit_profile(map, m)?.iter().all(|b| {
            let a1 = b.multiplicity(1).unwrap_or(0);
            a1 == 0 || b.multiplicity(m).unwrap_or(0) >= a1
        });
        let inf_ok = spec.model == Model::Affine || {
            let a1 = multiplicity_at_infinity(map, 1)?;
            a1 == 0 || multiplicity_at_infinity(map, m)? >= a1
        };
        blocks_ok && inf_ok
    } else {
        let fixed = build_cycle(map, 1, cap)?;
        let ok = fixed.entries().all(|(p, a1)| whole.multiplicity(p) >= a1);
        ok
    };
    Ok(out)
}

pub fn verify(spec: &MapSpec, a: &VerifyArgs, doc: &mut ResultDocument) -> Result<()> {
    if a.n == 0 {
        return Err(usage("--n must be positive"));
    }
    let mut rows = Vec::new();
    for m in 1..=a.n {
        match check_period(spec, m, a.ext_cap, a.point.as_deref()) {
            Ok(c) => {
                let passed = c.certificate != Some(false) && c.effective && c.mobius_identity && c.monotone;
                if !passed {
                    doc.fail(Status::Inconclusive, format!("violation at n = {m}"));
                }
                rows.push(json!({
                    "n": m,
                    "division_certificate": c.certificate,
                    "effective": c.effective,
                    "violations": c.violations,
                    "mobius_identity": c.mobius_identity,
                    "monotone": c.monotone,
                    "passed": passed,
                }));
            }
            Err(e @ (Error::Degenerate(_) | Error::Inconclusive(_))) => {
                rows.push(json!({ "n": m, "skipped": e.to_string() }));
                doc.fail_with(&e);
            }
            Err(e) => return Err(e),
        }
    }
    doc.put("periods", json!(rows));
    doc.put("ext_cap", json!(a.ext_cap));
    Ok(())
}
