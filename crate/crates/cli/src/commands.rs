use monogen::conformal::{classify_npoint, embed, embed_null, gamma_pair, w_classify, NullVector, WPoint};
use monogen::exec::Execution;
use monogen::function::canon::is_zero_with;
use monogen::function::{dirac, eval, Canonicalizer, Chamber, DiracKind, Expr, Mode};
use monogen::invariance::{appendix_suite, cocycle_check, jfactor, monogenic_catalog, verify_with, VerificationReport};
use monogen::matrix::{vahlen_check, VahlenMatrix};
use monogen::suite::{self, CriterionReport};
use monogen::{Error, Involution, Rational, Signature};
use serde_json::{json, Value};

use crate::args::{AlgebraCmd, ChamberArgs, ConformalCmd, FnCmd, VahlenCmd, VerifyCmd};
use crate::output::{fields, object, Fmt, Outcome, Record};
use crate::scene::{Resolver, SceneFile};

/// Settings shared by every command of one invocation.
pub struct Ctx<'a> {
    pub sig: Option<Signature>,
    pub scene: &'a SceneFile,
    pub seed: u64,
    pub mode: Mode,
    pub exec: Execution,
}

impl Ctx<'_> {
    fn fmt(&self) -> Fmt {
        Fmt { float: self.mode == Mode::Float }
    }

    fn resolver(&self) -> Result<Resolver<'_>, Error> {
        let sig = self.sig.ok_or_else(|| Error::InvalidParameter("this command needs --signature p,q".into()))?;
        Ok(Resolver { sig, scene: self.scene })
    }
}

fn to_json(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("library reports serialize")
}

pub fn algebra(ctx: &Ctx, cmd: &AlgebraCmd) -> Result<Outcome, Error> {
    let r = ctx.resolver()?;
    let f = ctx.fmt();
    match cmd {
        AlgebraCmd::Mul { factors } => {
            let mut acc = r.element(&factors[0])?;
            for t in &factors[1..] {
                acc = acc.try_mul(&r.element(t)?)?;
            }
            let text = f.el(&acc).as_str().unwrap_or_default().to_string();
            let json = object(vec![("factors", json!(factors)), ("product", f.el(&acc))]);
            Ok(Outcome::one(Record::with_text(json, text)))
        }
        AlgebraCmd::Inv { element } => {
            let inv = r.element(element)?.invert()?;
            let text = f.el(&inv).as_str().unwrap_or_default().to_string();
            Ok(Outcome::one(Record::with_text(object(vec![("element", json!(element)), ("inverse", f.el(&inv))]), text)))
        }
        AlgebraCmd::Involution { element, kind } => {
            let e = r.element(element)?;
            let kinds = match kind {
                Some(k) => vec![k.parse::<Involution>()?],
                None => Involution::ALL.to_vec(),
            };
            let mut entries = vec![("element", json!(element))];
            for k in &kinds {
                entries.push((kind_name(*k), f.el(&e.involution(*k))));
            }
            let json = object(entries);
            Ok(Outcome::one(match kinds.as_slice() {
                [k] => Record::with_text(json.clone(), json[kind_name(*k)].as_str().unwrap_or_default()),
                _ => Record::new(json),
            }))
        }
    }
}

fn kind_name(k: Involution) -> &'static str {
    match k {
        Involution::Grade => "grade",
        Involution::Reversal => "reversal",
        Involution::Conjugation => "conjugation",
    }
}

pub fn vahlen(ctx: &Ctx, cmd: &VahlenCmd) -> Result<Outcome, Error> {
    let r = ctx.resolver()?;
    let f = ctx.fmt();
    match cmd {
        VahlenCmd::Check { matrix } => {
            let m = r.matrix(matrix)?;
            let report = vahlen_check(&m);
            let mut json = to_json(&report);
            json["pseudo_det"] = f.el(&report.pseudo_det);
            let mut entries = vec![("matrix".to_string(), json!(matrix)), ("entries".to_string(), f.mat(&m))];
            entries.extend(fields(json));
            Ok(Outcome { records: vec![Record::new(object(entries))], failed: !report.verdict })
        }
        VahlenCmd::Apply { matrix, point } => {
            let (m, x) = (VahlenMatrix::new(r.matrix(matrix)?)?, r.vector(point)?);
            let image = m.apply(&x)?;
            let text = f.vec(&image).as_str().unwrap_or_default().to_string();
            let json = object(vec![("matrix", json!(matrix)), ("point", f.vec(&x)), ("image", f.vec(&image))]);
            Ok(Outcome::one(Record::with_text(json, text)))
        }
        VahlenCmd::Jacobian { matrix, point } => {
            let (m, x) = (VahlenMatrix::new(r.matrix(matrix)?)?, r.vector(point)?);
            let jac = f.rat_matrix(&m.jacobian(&x)?);
            let text = jac
                .as_array()
                .into_iter()
                .flatten()
                .map(|row| row.as_array().into_iter().flatten().map(plain).collect::<Vec<_>>().join("  "))
                .collect::<Vec<_>>()
                .join("\n");
            let json = object(vec![("matrix", json!(matrix)), ("point", f.vec(&x)), ("jacobian", jac)]);
            Ok(Outcome::one(Record::with_text(json, text)))
        }
        VahlenCmd::Omega { matrix, point } => {
            let (m, x) = (VahlenMatrix::new(r.matrix(matrix)?)?, r.vector(point)?);
            let json = object(vec![
                ("matrix", json!(matrix)),
                ("point", f.vec(&x)),
                ("pseudo_det", f.rat(&m.pseudo_det())),
                ("rho", f.rat(&m.rho(&x)?)),
                ("conformal_factor", f.rat(&m.conformal_factor(&x)?)),
            ]);
            Ok(Outcome::one(Record::new(json)))
        }
    }
}

fn plain(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn null_vector(f: Fmt, n: &NullVector) -> Value {
    object(vec![("v", f.vec(n.v())), ("xminus", f.rat(n.xminus())), ("xplus", f.rat(n.xplus()))])
}

pub fn conformal(ctx: &Ctx, cmd: &ConformalCmd) -> Result<Outcome, Error> {
    let r = ctx.resolver()?;
    let f = ctx.fmt();
    match cmd {
        ConformalCmd::Embed { point } => {
            let v = r.vector(point)?;
            let np = embed(&v);
            let class = classify_npoint(&np)?;
            let json = object(vec![
                ("point", f.vec(&v)),
                ("null_vector", null_vector(f, &embed_null(&v))),
                ("representative", null_vector(f, np.representative())),
                ("class", json!(class.name())),
                ("witness", f.vec(class.witness())),
            ]);
            Ok(Outcome::one(Record::new(json)))
        }
        ConformalCmd::Classify { x, y } => {
            let w = WPoint::new(r.element(x)?, r.element(y)?)?;
            let c = w_classify(&w)?;
            let rep = object(vec![("x", f.el(c.representative.x())), ("y", f.el(c.representative.y()))]);
            let class = to_json(&c.class);
            let text = format!(
                "class: {}\nwitness: {}\nrepresentative: ({}, {})",
                class.as_str().unwrap_or_default(),
                f.vec(&c.witness).as_str().unwrap_or_default(),
                rep["x"].as_str().unwrap_or_default(),
                rep["y"].as_str().unwrap_or_default()
            );
            let json = object(vec![("class", class), ("witness", f.vec(&c.witness)), ("representative", rep)]);
            Ok(Outcome::one(Record::with_text(json, text)))
        }
        ConformalCmd::Gamma { x, y } => {
            let g = gamma_pair(&r.element(x)?, &r.element(y)?)?;
            let n = NullVector::from_mat2(&g)?;
            Ok(Outcome::one(Record::new(object(vec![("gamma", f.mat(&g)), ("null_vector", null_vector(f, &n))]))))
        }
    }
}

/// The chamber from the flags, or the empty one when `f` needs none.
fn chamber_or_empty(r: &Resolver, f: &Expr, args: &ChamberArgs) -> Result<Chamber, Error> {
    let ch = r.chamber(f, args)?.unwrap_or_default();
    ch.covers(f)?;
    Ok(ch)
}

pub fn function(ctx: &Ctx, cmd: &FnCmd) -> Result<Outcome, Error> {
    let r = ctx.resolver()?;
    let f = ctx.fmt();
    match cmd {
        FnCmd::Parse { expr } => {
            let e = r.expr(expr)?;
            let bases: Vec<String> = e.chamber_bases().iter().map(ToString::to_string).collect();
            let json = object(vec![
                ("input", json!(expr)),
                ("expr", json!(e.to_string())),
                ("scalar_valued", json!(e.is_scalar_valued())),
                ("nodes", json!(e.node_count())),
                ("chamber_bases", json!(bases)),
            ]);
            Ok(Outcome::one(Record::with_text(json, e.to_string())))
        }
        FnCmd::Eval { expr, point, chamber } => {
            let e = r.expr(expr)?;
            let x = r.vector(point)?;
            let ch = match r.chamber(&e, chamber)? {
                Some(ch) => ch,
                None => {
                    let p: Vec<f64> = x.coords().iter().map(Rational::to_f64).collect();
                    Chamber::containing(&e, &p)?
                }
            };
            let value = eval(&e, x.coords(), &ch, ctx.mode)?;
            let json = object(vec![
                ("expr", json!(e.to_string())),
                ("point", f.vec(&x)),
                ("chamber", to_json(&ch)),
                ("value", json!(value.to_string())),
            ]);
            Ok(Outcome::one(Record::with_text(json, value.to_string())))
        }
        FnCmd::Dirac { expr, op, chamber } => {
            let e = r.expr(expr)?;
            let kind: DiracKind = op.parse()?;
            let d = dirac(&e, kind);
            // a zero verdict needs signs for every base; without them the
            // unsimplified expression is printed
            let ch = r.chamber(&e, chamber)?.unwrap_or_default();
            let zero = match ch.covers(&d) {
                Ok(()) => Some(is_zero_with(&mut Canonicalizer::new(r.sig, &ch), &d, ctx.seed)?.zero),
                Err(_) => None,
            };
            let result = if zero == Some(true) { "0".to_string() } else { d.to_string() };
            let json = object(vec![
                ("expr", json!(e.to_string())),
                ("operator", json!(kind.name())),
                ("result", json!(result)),
                ("zero", json!(zero)),
            ]);
            Ok(Outcome::one(Record::with_text(json, result)))
        }
        FnCmd::IsZero { expr, chamber } => {
            let e = r.expr(expr)?;
            let ch = chamber_or_empty(&r, &e, chamber)?;
            let d = is_zero_with(&mut Canonicalizer::new(r.sig, &ch), &e, ctx.seed)?;
            let stage = to_json(&d.stage);
            let text = format!("{} ({})", d.zero, stage.as_str().unwrap_or_default());
            let mut entries = vec![("expr".to_string(), json!(e.to_string())), ("chamber".to_string(), to_json(&ch))];
            entries.extend(fields(to_json(&d)));
            Ok(Outcome::one(Record::with_text(object(entries), text)))
        }
    }
}

fn report_record(rep: &VerificationReport) -> Record {
    let text = format!(
        "[{}] {} {} {} {} ({})",
        if rep.pass { "PASS" } else { "FAIL" },
        rep.signature,
        rep.word,
        rep.operator.name(),
        rep.function,
        to_json(&rep.stage).as_str().unwrap_or_default()
    );
    Record::with_text(to_json(rep), text)
}

fn sweep_outcome(results: Vec<Result<VerificationReport, Error>>, sig: Signature) -> Outcome {
    let mut out = Outcome::default();
    for res in results {
        match res {
            Ok(rep) => {
                out.failed |= !rep.pass;
                out.push(report_record(&rep));
            }
            Err(e) => {
                out.failed = true;
                let json = object(vec![("signature", json!(sig.to_string())), ("pass", json!(false)), ("error", json!(e.to_string()))]);
                out.push(Record::with_text(json, format!("[FAIL] {sig} error: {e}")));
            }
        }
    }
    out
}

pub fn verify(ctx: &Ctx, cmd: &VerifyCmd) -> Result<Outcome, Error> {
    match cmd {
        VerifyCmd::Main { matrix, function, op, max_len, chamber } => {
            let kind: DiracKind = op.parse()?;
            if let Some(name) = matrix {
                return verify_single(ctx, name, function.as_deref(), kind, chamber);
            }
            let sigs = match ctx.sig {
                Some(s) => vec![s],
                None if function.is_none() => suite::signatures(),
                None => return Err(Error::InvalidParameter("--function needs --signature p,q".into())),
            };
            let mut out = Outcome::default();
            for sig in sigs {
                let r = Resolver { sig, scene: ctx.scene };
                let functions = match function {
                    Some(t) => vec![(r.expr(t)?, kind)],
                    None => catalog(sig)?,
                };
                let part = sweep_outcome(suite::word_sweep(sig, *max_len, &functions, ctx.seed, ctx.exec), sig);
                out.failed |= part.failed;
                out.records.extend(part.records);
            }
            Ok(out)
        }
        VerifyCmd::Cocycle { first, second, point } => match (first, second, point) {
            (Some(a), Some(b), Some(p)) => {
                let r = ctx.resolver()?;
                let f = ctx.fmt();
                let x = r.vector(p)?;
                let c = cocycle_check(&r.matrix(a)?, &r.matrix(b)?, &x)?;
                let json = object(vec![
                    ("first", json!(a)),
                    ("second", json!(b)),
                    ("point", f.vec(&x)),
                    ("holds", json!(c.holds)),
                    ("exact", json!(c.exact)),
                    ("deviation", json!(c.deviation)),
                ]);
                Ok(Outcome { records: vec![Record::new(json)], failed: !c.holds })
            }
            (None, None, None) => Ok(criteria_outcome(vec![suite::cocycle(ctx.seed)], false)),
            _ => Err(Error::InvalidParameter("cocycle needs two matrices and --point, or nothing".into())),
        },
        VerifyCmd::Appendix => {
            let report = appendix_suite()?;
            let wanted = ctx.sig.map(|s| s.to_string());
            let scenarios: Vec<_> =
                report.scenarios.iter().filter(|s| wanted.as_ref().is_none_or(|w| *w == s.signature)).collect();
            if scenarios.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "no appendix scenario in signature {}",
                    wanted.unwrap_or_default()
                )));
            }
            let mut out = Outcome::default();
            for s in scenarios {
                out.failed |= !s.ok();
                let mut text = format!("[{}] {} ({})", if s.ok() { "PASS" } else { "FAIL" }, s.name, s.signature);
                for c in &s.checks {
                    text.push_str(&format!(
                        "\n  [{}] {}: expected {}, observed {}",
                        if c.ok() { "ok" } else { "MISMATCH" },
                        c.name,
                        verdict(c.expected),
                        verdict(c.observed)
                    ));
                }
                let mut json = to_json(s);
                json["pass"] = json!(s.ok());
                out.push(Record::with_text(json, text));
            }
            Ok(out)
        }
        VerifyCmd::All { criteria, timings } => {
            let mut ids = if criteria.is_empty() { (1..=10).collect() } else { criteria.clone() };
            ids.sort_unstable();
            ids.dedup();
            let mut reports = Vec::new();
            for id in ids {
                reports.push(
                    suite::run_criterion(id, ctx.seed, ctx.exec)
                        .ok_or_else(|| Error::InvalidParameter(format!("no criterion {id}")))?,
                );
            }
            Ok(criteria_outcome(reports, *timings))
        }
    }
}

fn verdict(zero: bool) -> &'static str {
    if zero {
        "zero"
    } else {
        "nonzero"
    }
}

fn catalog(sig: Signature) -> Result<Vec<(Expr, DiracKind)>, Error> {
    let mut out = Vec::new();
    for entry in monogenic_catalog(sig)? {
        out.push((entry.left, DiracKind::D));
        out.push((entry.right, DiracKind::RightD));
    }
    Ok(out)
}

fn verify_single(ctx: &Ctx, name: &str, function: Option<&str>, kind: DiracKind, args: &ChamberArgs) -> Result<Outcome, Error> {
    let r = ctx.resolver()?;
    let w = jfactor(&r.matrix(name)?)?;
    let functions = match function {
        Some(t) => vec![(r.expr(t)?, kind)],
        None => catalog(r.sig)?,
    };
    let mut ch = r.chamber(&w.omega_expr(), args)?.unwrap_or_default();
    match &args.at {
        Some(at) => {
            let p: Vec<f64> = r.vector(at)?.coords().iter().map(Rational::to_f64).collect();
            ch.merge(&w.chamber_at(&p)?)?;
            for (f, _) in &functions {
                ch.merge(&Chamber::containing(f, &p)?)?;
            }
        }
        None if args.chamber.is_none() && args.signs.is_empty() => ch = w.some_chamber(ctx.seed)?,
        None => {}
    }
    let mut canon = Canonicalizer::new(r.sig, &ch);
    let results = functions.iter().map(|(f, op)| verify_with(&mut canon, &w, f, *op, name, ctx.seed)).collect();
    Ok(sweep_outcome(results, r.sig))
}

fn criteria_outcome(reports: Vec<CriterionReport>, timings: bool) -> Outcome {
    let mut out = Outcome::default();
    for rep in reports {
        out.failed |= !rep.pass;
        let mut json = to_json(&rep);
        if !timings {
            // wall-clock time would break byte-identical reruns
            if let Value::Object(map) = &mut json {
                map.shift_remove("seconds");
            }
        }
        out.push(Record::with_text(json, rep.line()));
    }
    out
}

/// Runs a parsed command.
pub fn dispatch(ctx: &Ctx, cmd: &crate::args::Command) -> Result<Outcome, Error> {
    use crate::args::Command;
    match cmd {
        Command::Algebra(c) => algebra(ctx, c),
        Command::Vahlen(c) => vahlen(ctx, c),
        Command::Conformal(c) => conformal(ctx, c),
        Command::Fn(c) => function(ctx, c),
        Command::Verify(c) => verify(ctx, c),
        Command::Run => Err(Error::InvalidParameter("run cannot be nested inside a scene task".into())),
    }
}

