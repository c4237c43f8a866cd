//! Scene files and the resolution of names and inline arguments.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use monogen::function::{parse_element, parse_expr, Chamber, Expr};
use monogen::matrix::{Generator, Mat2};
use monogen::{CliffordElement, Error, Rational, Signature, Vector};
use serde::Deserialize;
use serde_json::Value;

use crate::args::ChamberArgs;

/// A single JSON document naming the objects that commands refer to.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default)]
    pub signature: Option<SignatureSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub matrices: BTreeMap<String, Value>,
    #[serde(default)]
    pub functions: BTreeMap<String, String>,
    #[serde(default)]
    pub chambers: BTreeMap<String, BTreeMap<String, i8>>,
    /// Argument vectors, without the program name.
    #[serde(default)]
    pub tasks: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SignatureSpec {
    Pair { p: usize, q: usize },
    Text(String),
}

impl SignatureSpec {
    fn resolve(&self) -> Result<Signature, Error> {
        match self {
            SignatureSpec::Pair { p, q } => Signature::new(*p, *q),
            SignatureSpec::Text(s) => s.parse(),
        }
    }
}

impl SceneFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("scene file {}: {e}", path.display())))
    }

    /// Checks that every entry parses in the scene signature.
    pub fn validate(&self, sig: Option<Signature>) -> Result<(), Error> {
        let Some(sig) = sig else {
            if self.matrices.is_empty() && self.functions.is_empty() && self.chambers.is_empty() {
                return Ok(());
            }
            return Err(Error::InvalidParameter("scene file entries need a signature".into()));
        };
        let ctx = Resolver { sig, scene: self };
        for name in self.matrices.keys() {
            ctx.matrix(name).map_err(|e| Error::InvalidParameter(format!("matrix {name:?}: {e}")))?;
        }
        for (name, text) in &self.functions {
            parse_expr(text, sig).map_err(|e| Error::InvalidParameter(format!("function {name:?}: {e}")))?;
        }
        for name in self.chambers.keys() {
            ctx.named_chamber(name).map_err(|e| Error::InvalidParameter(format!("chamber {name:?}: {e}")))?;
        }
        Ok(())
    }
}

/// The signature to use: the flag wins, but must agree with the scene.
pub fn resolve_signature(flag: Option<&str>, scene: &SceneFile) -> Result<Option<Signature>, Error> {
    let from_flag = flag.map(Signature::from_str).transpose()?;
    let from_scene = scene.signature.as_ref().map(SignatureSpec::resolve).transpose()?;
    match (from_flag, from_scene) {
        (Some(a), Some(b)) if a != b => Err(Error::SignatureMismatch(a.to_string(), b.to_string())),
        (a, b) => Ok(a.or(b)),
    }
}

/// Turns names and inline arguments into library values.
pub struct Resolver<'a> {
    pub sig: Signature,
    pub scene: &'a SceneFile,
}

const MAX_NESTING: usize = 32;

fn rational(text: &str) -> Result<Rational, Error> {
    text.trim().parse().map_err(|e| Error::InvalidParameter(format!("{:?}: {e}", text.trim())))
}

impl Resolver<'_> {
    fn function_text<'t>(&'t self, text: &'t str) -> &'t str {
        self.scene.functions.get(text.trim()).map(String::as_str).unwrap_or(text)
    }

    pub fn expr(&self, text: &str) -> Result<Expr, Error> {
        parse_expr(self.function_text(text), self.sig)
    }

    pub fn element(&self, text: &str) -> Result<CliffordElement, Error> {
        parse_element(self.function_text(text), self.sig)
    }

    /// A vector given as an expression (`e1 + 2*e3`) or as coordinates (`1,0,2`).
    pub fn vector(&self, text: &str) -> Result<Vector, Error> {
        if text.contains('e') {
            return Vector::from_element(&self.element(text)?);
        }
        let coords = text.split(',').map(rational).collect::<Result<Vec<_>, _>>()?;
        Vector::new(self.sig, coords)
    }

    pub fn matrix(&self, text: &str) -> Result<Mat2, Error> {
        self.matrix_text(text, 0)
    }

    fn matrix_text(&self, text: &str, depth: usize) -> Result<Mat2, Error> {
        if depth > MAX_NESTING {
            return Err(Error::InvalidParameter("matrix definitions nest too deeply".into()));
        }
        let text = text.trim();
        if text.starts_with('{') || text.starts_with('[') {
            let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("matrix literal: {e}")))?;
            return self.matrix_value(&v, depth + 1);
        }
        if let Some(v) = self.scene.matrices.get(text) {
            return self.matrix_value(v, depth + 1);
        }
        if text.contains(';') {
            let parts: Vec<Value> = text.split(';').map(|s| Value::String(s.to_string())).collect();
            return self.compose(&parts, depth + 1);
        }
        let (head, arg) = text.split_once(':').map_or((text, None), |(h, a)| (h.trim(), Some(a.trim())));
        let need = || arg.ok_or_else(|| Error::InvalidParameter(format!("{head} needs an argument, as {head}:VALUE")));
        match head {
            "identity" => Ok(Mat2::identity(self.sig)),
            "invert" => Generator::Inversion.matrix(self.sig),
            "translate" => Generator::Translation(self.vector(need()?)?).matrix(self.sig),
            "dilate" => Generator::Dilation(rational(need()?)?).matrix(self.sig),
            "orthogonal" => Generator::Orthogonal(self.element(need()?)?).matrix(self.sig),
            _ => Err(Error::InvalidParameter(format!("unknown matrix {text:?}"))),
        }
    }

    fn matrix_value(&self, v: &Value, depth: usize) -> Result<Mat2, Error> {
        let bad = || Error::InvalidParameter(format!("unrecognized matrix literal {v}"));
        match v {
            Value::String(s) => self.matrix_text(s, depth),
            Value::Array(parts) => self.compose(parts, depth),
            Value::Object(map) => {
                if ["a", "b", "c", "d"].iter().all(|k| map.contains_key(*k)) && map.len() == 4 {
                    let entry = |k: &str| map[k].as_str().ok_or_else(bad).and_then(|s| self.element(s));
                    return Mat2::new(entry("a")?, entry("b")?, entry("c")?, entry("d")?);
                }
                if map.len() != 1 {
                    return Err(bad());
                }
                let (key, arg) = map.iter().next().expect("one entry");
                let text_arg = || match arg {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => Err(bad()),
                };
                match key.as_str() {
                    "compose" => self.compose(arg.as_array().ok_or_else(bad)?, depth),
                    "invert" | "identity" => match arg {
                        Value::Bool(true) => self.matrix_text(key, depth),
                        _ => Err(bad()),
                    },
                    "translate" | "dilate" | "orthogonal" => self.matrix_text(&format!("{key}:{}", text_arg()?), depth),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }

    /// The product of the parts in the order written, so the last one acts first.
    fn compose(&self, parts: &[Value], depth: usize) -> Result<Mat2, Error> {
        if depth > MAX_NESTING {
            return Err(Error::InvalidParameter("matrix definitions nest too deeply".into()));
        }
        let mut acc = Mat2::identity(self.sig);
        for p in parts {
            acc = acc.try_mul(&self.matrix_value(p, depth + 1)?)?;
        }
        Ok(acc)
    }

    fn named_chamber(&self, name: &str) -> Result<Chamber, Error> {
        let decl = self
            .scene
            .chambers
            .get(name)
            .ok_or_else(|| Error::InvalidParameter(format!("no chamber named {name:?}")))?;
        let mut ch = Chamber::new();
        for (base, &sign) in decl {
            self.declare(&mut ch, base, sign)?;
        }
        Ok(ch)
    }

    fn declare(&self, ch: &mut Chamber, base: &str, sign: i8) -> Result<(), Error> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("sign of {base} must be 1 or -1")));
        }
        let b = self.expr(base)?;
        if !b.is_scalar_valued() {
            return Err(Error::Grade(format!("chamber base {b} is not scalar valued")));
        }
        ch.merge(&Chamber::new().with(b, sign))
    }

    /// The chamber from the flags, or `None` when none was given.
    pub fn chamber(&self, f: &Expr, args: &ChamberArgs) -> Result<Option<Chamber>, Error> {
        let mut ch = Chamber::new();
        let mut given = false;
        if let Some(name) = &args.chamber {
            ch.merge(&self.named_chamber(name)?)?;
            given = true;
        }
        for s in &args.signs {
            let (base, sign) = s
                .rsplit_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("--sign {s:?}: expected BASE=+1 or BASE=-1")))?;
            let sign = match sign.trim() {
                "1" | "+1" | "+" => 1,
                "-1" | "-" => -1,
                other => return Err(Error::InvalidParameter(format!("sign {other:?} must be +1 or -1"))),
            };
            self.declare(&mut ch, base, sign)?;
            given = true;
        }
        if let Some(at) = &args.at {
            let p: Vec<f64> = self.vector(at)?.coords().iter().map(Rational::to_f64).collect();
            ch.merge(&Chamber::containing(f, &p)?)?;
            given = true;
        }
        Ok(given.then_some(ch))
    }
}
