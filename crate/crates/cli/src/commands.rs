use anyhow::{bail, Result};
use building::{membership, omega, tree_ball, ConstraintCheck, LatticeVertex, Mat2};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use padic_analysis::{eval_mahler, mahler_coeffs, Chart, DistSeries, GluingMap};
use padic_core::{PadicNumber, Val};
use serde_json::json;
use sheaf_kit::{ss_sheaf, window, SmoothRep};

use crate::config::{parse_rational, FacetArg, RunConfig};
use crate::suites;

/// What a command produced, in every format at once; `ok` drives the exit
/// code for verdict-style commands.
pub struct CmdOut {
    pub json: serde_json::Value,
    pub text: String,
    pub dot: Option<String>,
    pub ok: bool,
}

impl CmdOut {
    fn plain(json: serde_json::Value, text: String) -> CmdOut {
        CmdOut {
            json,
            text,
            dot: None,
            ok: true,
        }
    }
}

fn val_str(v: Val) -> String {
    v.to_string()
}

pub fn cmd_tree(cfg: &RunConfig) -> Result<CmdOut> {
    let ball = tree_ball(cfg.p, &LatticeVertex::origin(cfg.p), cfg.radius)?;
    let poset = ball.poset();
    let json = json!({
        "command": "tree",
        "config": cfg.config_json(),
        "ball": ball.to_json(),
        "poset": poset.to_json(),
    });
    let mut text = format!(
        "ball around the origin, p = {}, radius = {}: {} vertices, {} edges\n",
        cfg.p,
        cfg.radius,
        ball.vertices.len(),
        ball.edges.len()
    );
    for (i, v) in ball.vertices.iter().enumerate() {
        text.push_str(&format!("  vertex {:2}  {}\n", i, v.label()));
    }
    for (k, (i, j)) in ball.edges.iter().enumerate() {
        text.push_str(&format!(
            "  edge   {:2}  ({}, {})\n",
            ball.vertices.len() + k,
            i,
            j
        ));
    }
    for id in 0..poset.len() {
        let star: Vec<String> = poset.star(id).iter().map(|f| f.to_string()).collect();
        text.push_str(&format!("  star({id}) = {{{}}}\n", star.join(", ")));
    }
    Ok(CmdOut {
        json,
        text,
        dot: Some(ball.to_dot()),
        ok: true,
    })
}

pub fn cmd_levels(cfg: &RunConfig, facet: &str, e: Option<u32>) -> Result<CmdOut> {
    let e = resolve_e(e)?;
    let facet = FacetArg::parse(facet)?;
    let spec = facet.to_spec(cfg.p, e)?;
    let rows = [
        ("lower", spec.lower_level()),
        ("torus", spec.torus_level()),
        ("upper", spec.upper_level()),
    ];
    let basis: Vec<String> = spec.ordered_basis().iter().map(|m| m.render()).collect();
    let row_json: Vec<serde_json::Value> = rows
        .iter()
        .map(|(name, level)| {
            json!({
                "root": name,
                "level": level.render(),
                "least_integer": level.min_int_val(),
            })
        })
        .collect();
    let json = json!({
        "command": "levels",
        "config": cfg.config_json(),
        "facet": facet.label(),
        "e": e,
        "levels": row_json,
        "ordered_basis": basis,
    });
    let mut text = format!("levels of {} at e = {e}, p = {}\n", facet.label(), cfg.p);
    for (name, level) in &rows {
        text.push_str(&format!("  {:6} {}\n", name, level.render()));
    }
    text.push_str("ordered basis:\n");
    for b in &basis {
        text.push_str(&format!("  {b}\n"));
    }
    Ok(CmdOut::plain(json, text))
}

fn checks_json(checks: &[ConstraintCheck]) -> Vec<serde_json::Value> {
    checks
        .iter()
        .map(|c| {
            json!({
                "coordinate": c.name,
                "bound": c.bound.render(),
                "observed": val_str(c.observed),
                "ok": c.ok,
            })
        })
        .collect()
}

pub fn cmd_member(cfg: &RunConfig, g: &str, facet: &str, e: Option<u32>) -> Result<CmdOut> {
    let e = resolve_e(e)?;
    let facet = FacetArg::parse(facet)?;
    let spec = facet.to_spec(cfg.p, e)?;
    let g = Mat2::parse(cfg.ctx()?, g)?;
    let report = membership(&spec, &g);
    let factors = report.factorization.as_ref().map(|f| {
        json!({
            "lower": f.c.to_string(),
            "torus": f.u.to_string(),
            "upper": f.b.to_string(),
        })
    });
    let violated = report.first_violated().map(|c| c.name);
    let json = json!({
        "command": "member",
        "config": cfg.config_json(),
        "facet": facet.label(),
        "e": e,
        "g": g.render(),
        "member": report.member,
        "factors": factors,
        "checks": checks_json(&report.checks),
        "violated": violated,
    });
    let mut text = format!(
        "{} is {}a member of the level-{e} group at {}\n",
        g.render(),
        if report.member { "" } else { "not " },
        facet.label()
    );
    for c in &report.checks {
        text.push_str(&format!(
            "  {:6} needs {:>6}, observed {:>4}  {}\n",
            c.name,
            c.bound.render(),
            val_str(c.observed),
            if c.ok { "ok" } else { "violated" }
        ));
    }
    Ok(CmdOut {
        json,
        text,
        dot: None,
        ok: report.member,
    })
}

pub fn cmd_omega(cfg: &RunConfig, g: &str, facet: &str, e: Option<u32>) -> Result<CmdOut> {
    let e = resolve_e(e)?;
    let facet = FacetArg::parse(facet)?;
    let spec = facet.to_spec(cfg.p, e)?;
    let g = Mat2::parse(cfg.ctx()?, g)?;
    let report = omega(&spec, &g)?;
    let parts: Vec<serde_json::Value> = report
        .parts
        .iter()
        .map(|(name, v)| json!({ "coordinate": name, "value": val_str(*v) }))
        .collect();
    let json = json!({
        "command": "omega",
        "config": cfg.config_json(),
        "facet": facet.label(),
        "e": e,
        "g": g.render(),
        "omega": val_str(report.omega),
        "reduced": val_str(report.reduced),
        "parts": parts,
    });
    let mut text = format!(
        "omega = {}, reduced weight = {}\n",
        val_str(report.omega),
        val_str(report.reduced)
    );
    for (name, v) in &report.parts {
        text.push_str(&format!("  {:6} {}\n", name, val_str(*v)));
    }
    Ok(CmdOut::plain(json, text))
}

pub fn cmd_mahler(cfg: &RunConfig, poly: &str, points: u32) -> Result<CmdOut> {
    let ctx = cfg.ctx()?;
    let coeffs: Vec<BigRational> = poly
        .split(',')
        .map(parse_rational)
        .collect::<Result<_>>()?;
    if coeffs.is_empty() {
        bail!("the polynomial needs at least one coefficient");
    }
    let mahler = mahler_coeffs(ctx, &coeffs)?;
    let mut matches = true;
    for j in 0..points {
        let x = PadicNumber::from_integer(ctx, j as i64);
        let lhs = eval_mahler(&mahler, &x);
        let xq = BigRational::from_integer(BigInt::from(j));
        let mut acc = BigRational::zero();
        for a in coeffs.iter().rev() {
            acc = acc * &xq + a;
        }
        if lhs != PadicNumber::from_rational(ctx, acc) {
            matches = false;
        }
    }
    let integral = mahler
        .iter()
        .all(|c| c.valuation() >= Val::Finite(0));
    let rendered: Vec<String> = mahler.iter().map(|c| c.render()).collect();
    let valuations: Vec<String> = mahler.iter().map(|c| val_str(c.valuation())).collect();
    let json = json!({
        "command": "mahler",
        "config": cfg.config_json(),
        "power_coefficients": coeffs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "binomial_coefficients": rendered,
        "valuations": valuations,
        "verified_points": points,
        "matches": matches,
        "integer_valued": integral,
    });
    let mut text = format!(
        "binomial-basis coefficients (checked on {points} points: {})\n",
        if matches { "exact" } else { "MISMATCH" }
    );
    for (k, c) in rendered.iter().enumerate() {
        text.push_str(&format!("  c_{k} = {c}\n"));
    }
    text.push_str(&format!(
        "all coefficients integral: {integral}\n"
    ));
    Ok(CmdOut {
        json,
        text,
        dot: None,
        ok: matches,
    })
}

pub fn cmd_norm(
    cfg: &RunConfig,
    dirac: Option<&str>,
    log_var: Option<usize>,
    var: Option<usize>,
    facet: &str,
    e: Option<u32>,
) -> Result<CmdOut> {
    let shape = cfg.shape()?;
    let given = [dirac.is_some(), log_var.is_some(), var.is_some()]
        .iter()
        .filter(|b| **b)
        .count();
    if given != 1 {
        bail!("give exactly one of --dirac, --log-var, --var");
    }
    let (series, described) = if let Some(g) = dirac {
        let e = resolve_e(e)?;
        let spec = FacetArg::parse(facet)?.to_spec(cfg.p, e)?;
        let chart = Chart::new(cfg.ctx()?, spec)?;
        let g = Mat2::parse(cfg.ctx()?, g)?;
        (
            chart.dirac_of(shape, &g)?,
            format!("point mass at {}", g.render()),
        )
    } else if let Some(i) = log_var {
        (
            DistSeries::log_one_plus(shape, i)?,
            format!("log(1 + b_{i})"),
        )
    } else {
        let i = var.unwrap();
        (DistSeries::var(shape, i)?, format!("b_{i}"))
    };
    let mut rows = Vec::new();
    let mut text = format!("norms of {described}\n");
    for rho in cfg.rhos() {
        let n = series.norm_exponent(&rho)?;
        let exp = n.exponent.as_ref().map(|q| q.to_string());
        text.push_str(&format!(
            "  r = {:10}  norm = {}  ({})\n",
            cfg.render_r(&rho),
            match &n.exponent {
                Some(q) if q.is_zero() => "1".to_string(),
                Some(q) => format!("{}^(-{})", cfg.p, q),
                None => "0".into(),
            },
            if n.certified { "certified" } else { "stored part only" }
        ));
        rows.push(json!({
            "r": cfg.render_r(&rho),
            "norm_exponent": exp,
            "certified": n.certified,
        }));
    }
    let json = json!({
        "command": "norm",
        "config": cfg.config_json(),
        "series": described,
        "terms": series.coeffs.len(),
        "norms": rows,
    });
    Ok(CmdOut::plain(json, text))
}

pub fn cmd_glue(cfg: &RunConfig, source: &str, target: &str, e: Option<u32>) -> Result<CmdOut> {
    let e = resolve_e(e)?;
    let src = FacetArg::parse(source)?;
    let tgt = FacetArg::parse(target)?;
    let map = GluingMap::between(
        &src.to_spec(cfg.p, e)?,
        &tgt.to_spec(cfg.p, e)?,
        cfg.shape()?,
    )?;
    let mut rows = Vec::new();
    let mut text = format!(
        "transport {} -> {} at e = {e}: coordinate exponents {:?}, identity: {}\n",
        src.label(),
        tgt.label(),
        map.exps,
        map.is_identity()
    );
    for rho in cfg.rhos() {
        let dec = map.norm_decreasing(&rho)?;
        text.push_str(&format!(
            "  r = {:10}  norm-decreasing: {dec}\n",
            cfg.render_r(&rho)
        ));
        rows.push(json!({ "r": cfg.render_r(&rho), "norm_decreasing": dec }));
    }
    let json = json!({
        "command": "glue",
        "config": cfg.config_json(),
        "source": src.label(),
        "target": tgt.label(),
        "e": e,
        "map": map.to_json(),
        "identity": map.is_identity(),
        "norms": rows,
    });
    Ok(CmdOut::plain(json, text))
}

pub fn cmd_sheaf(cfg: &RunConfig, rep: &str, e: Option<u32>) -> Result<CmdOut> {
    let e = resolve_e(e)?;
    let rep = SmoothRep::by_name(rep, cfg.p)?;
    let w = window(cfg.p, cfg.radius)?;
    let sheaf = ss_sheaf(&rep, e, &w)?;
    let all: Vec<usize> = (0..w.poset.len()).collect();
    let global = sheaf.system.sections(&all)?.dim();
    let json = json!({
        "command": "sheaf",
        "config": cfg.config_json(),
        "representation": rep.name,
        "e": e,
        "sheaf": sheaf.to_json(),
        "global_sections": global,
    });
    let text = format!(
        "{}\nglobal sections: {global}\n",
        sheaf.dim_table().trim_end()
    );
    Ok(CmdOut {
        dot: Some(sheaf.to_dot()),
        json,
        text,
        ok: true,
    })
}

pub fn cmd_check(cfg: &RunConfig, suite: &str) -> Result<CmdOut> {
    let reports = if suite == "all" {
        suites::SUITE_NAMES
            .iter()
            .map(|name| suites::run_suite(cfg, name))
            .collect::<Result<Vec<_>>>()?
    } else {
        vec![suites::run_suite(cfg, suite)?]
    };
    let ok = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        text.push_str(&format!(
            "suite {:16} {}  ({} cases) {}\n",
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.cases,
            r.detail
        ));
        if let Some(first) = r.failures.first() {
            text.push_str(&format!("  first counterexample: {first}\n"));
        }
        rows.push(json!({
            "suite": r.name,
            "passed": r.passed,
            "cases": r.cases,
            "detail": r.detail,
            "failures": r.failures,
        }));
    }
    text.push_str(if ok { "all checks passed\n" } else { "CHECKS FAILED\n" });
    let json = json!({
        "command": "check",
        "config": cfg.config_json(),
        "suites": rows,
        "passed": ok,
    });
    Ok(CmdOut {
        json,
        text,
        dot: None,
        ok,
    })
}

fn resolve_e(e: Option<u32>) -> Result<u32> {
    let e = e.unwrap_or(2);
    if e == 0 {
        bail!("the congruence level e must be at least 1");
    }
    Ok(e)
}
