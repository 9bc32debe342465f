//! Sweep configuration as JSON. Nested objects and dotted keys are
//! interchangeable: `{"method": {"kind": "QuasiNewton"}}` and
//! `{"method.kind": "QuasiNewton"}` mean the same thing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thiserror::Error;

use crate::frac::INTEGER_ORDER_TOL;
use crate::methods::{MethodConfig, MethodKind};
use crate::numerics::{CVector, Complex};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config key `{key}`: {reason}")]
pub struct ConfigError {
    pub key: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { key: key.into(), reason: reason.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyRole {
    /// One line holding the scalar objective.
    Objective,
    /// A square system taken directly as the gradient field.
    Gradient,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Builtin,
    Polynomial { path: PathBuf, role: PolyRole },
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    List(Vec<f64>),
    Grid { lo: f64, hi: f64, count: usize },
    Random { lo: f64, hi: f64, count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortOrder {
    Ascending,
    Descending,
    /// Keep the order the α values were listed or sampled in.
    Input,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub problem: ProblemSpec,
    pub method: MethodConfig,
    pub x0: CVector,
    pub alpha: AlphaSpec,
    /// Sampled orders must satisfy `|α − round(α)| > integer_exclusion`.
    pub integer_exclusion: f64,
    pub dedup: bool,
    pub dedup_tol: f64,
    pub sort: SortOrder,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(problem: ProblemSpec, method: MethodConfig, x0: CVector, alpha: AlphaSpec) -> Self {
        Self {
            problem,
            method,
            x0,
            alpha,
            integer_exclusion: 0.01,
            dedup: false,
            dedup_tol: 1e-4,
            sort: SortOrder::Ascending,
            output: None,
        }
    }

    /// The α values to run, guarded and ordered.
    pub fn alphas(&self) -> Result<Vec<f64>, ConfigError> {
        let mut alphas = self.alpha.sample(self.integer_exclusion)?;
        match self.sort {
            SortOrder::Ascending => alphas.sort_by(f64::total_cmp),
            SortOrder::Descending => alphas.sort_by(|a, b| b.total_cmp(a)),
            SortOrder::Input => {}
        }
        Ok(alphas)
    }
}

fn near_integer(a: f64, exclusion: f64) -> bool {
    (a - a.round()).abs() <= exclusion
}

impl AlphaSpec {
    pub fn sample(&self, exclusion: f64) -> Result<Vec<f64>, ConfigError> {
        match *self {
            AlphaSpec::List(ref list) => {
                if list.is_empty() {
                    return Err(ConfigError::new("alpha.list", "empty list"));
                }
                for &a in list {
                    if !a.is_finite() {
                        return Err(ConfigError::new("alpha.list", format!("non-finite order {a}")));
                    }
                    if near_integer(a, exclusion) {
                        return Err(ConfigError::new(
                            "alpha.list",
                            format!("order {a} is within integer_exclusion {exclusion} of an integer"),
                        ));
                    }
                }
                Ok(list.clone())
            }
            AlphaSpec::Grid { lo, hi, count } => {
                check_interval("alpha.grid", lo, hi, count)?;
                let n = count;
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let a = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                    out.push(snap(a, exclusion, i == 0 && n > 1));
                }
                Ok(out)
            }
            AlphaSpec::Random { lo, hi, count, seed } => {
                check_interval("alpha.random", lo, hi, count)?;
                if lo == hi {
                    return Err(ConfigError::new("alpha.random", "lo and hi must differ"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(count);
                let mut attempts = 0usize;
                while out.len() < count {
                    attempts += 1;
                    if attempts > count.saturating_mul(1000).max(10_000) {
                        return Err(ConfigError::new(
                            "alpha.random",
                            format!("interval [{lo}, {hi}] is almost entirely within integer_exclusion of integers"),
                        ));
                    }
                    let a = rng.gen_range(lo..hi);
                    if !near_integer(a, exclusion) {
                        out.push(a);
                    }
                }
                Ok(out)
            }
        }
    }
}

fn check_interval(key: &str, lo: f64, hi: f64, count: usize) -> Result<(), ConfigError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(ConfigError::new(key, format!("need finite lo <= hi, got [{lo}, {hi}]")));
    }
    if count == 0 {
        return Err(ConfigError::new(format!("{key}.count"), "must be at least 1"));
    }
    Ok(())
}

/// Moves a grid point off an integer neighbourhood, staying on its own side.
/// A point exactly on an integer moves up, except for the last point of a
/// grid which moves down.
fn snap(a: f64, exclusion: f64, first: bool) -> f64 {
    if !near_integer(a, exclusion) {
        return a;
    }
    let k = a.round();
    let offset = exclusion * (1.0 + 1e-9);
    let up = a > k || (a == k && first);
    let moved = if up { k + offset } else { k - offset };
    warn!("alpha grid point {a} is within {exclusion} of {k}; moved to {moved}");
    moved
}

struct Keys {
    map: BTreeMap<String, Value>,
}

fn flatten(prefix: &str, value: Value, out: &mut BTreeMap<String, Value>) -> Result<(), ConfigError> {
    match value {
        Value::Object(obj) if !obj.is_empty() => {
            for (k, v) in obj {
                let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
                flatten(&key, v, out)?;
            }
            Ok(())
        }
        leaf => {
            if out.insert(prefix.to_string(), leaf).is_some() {
                return Err(ConfigError::new(prefix, "given more than once"));
            }
            Ok(())
        }
    }
}

impl Keys {
    fn take(&mut self, key: &str) -> Option<Value> {
        self.map.remove(key)
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        let dotted = format!("{prefix}.");
        self.map.keys().any(|k| k == prefix || k.starts_with(&dotted))
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| ConfigError::new(key, format!("expected a number, got {v}"))),
        }
    }

    fn nullable_f64(&mut self, key: &str) -> Result<Option<Option<f64>>, ConfigError> {
        match self.map.get(key) {
            Some(Value::Null) => {
                self.take(key);
                Ok(Some(None))
            }
            _ => Ok(self.f64(key)?.map(Some)),
        }
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| ConfigError::new(key, format!("expected a non-negative integer, got {v}"))),
        }
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.u64(key)?
            .map(|v| usize::try_from(v).map_err(|_| ConfigError::new(key, "value too large")))
            .transpose()
    }

    fn string(&mut self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(v) => Err(ConfigError::new(key, format!("expected a string, got {v}"))),
        }
    }

    fn bool(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(b)),
            Some(v) => Err(ConfigError::new(key, format!("expected true or false, got {v}"))),
        }
    }

    fn required<T>(key: &str, v: Option<T>) -> Result<T, ConfigError> {
        v.ok_or_else(|| ConfigError::new(key, "missing"))
    }
}

fn complex_entry(key: &str, v: &Value) -> Result<Complex, ConfigError> {
    let bad = || ConfigError::new(key, format!("expected a number or a [re, im] pair, got {v}"));
    match v {
        Value::Number(n) => n.as_f64().map(|re| Complex::new(re, 0.0)).ok_or_else(bad),
        Value::Array(pair) => match pair.as_slice() {
            [re, im] => Ok(Complex::new(re.as_f64().ok_or_else(bad)?, im.as_f64().ok_or_else(bad)?)),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn number_list(key: &str, v: Value) -> Result<Vec<f64>, ConfigError> {
    let arr = match v {
        Value::Array(arr) => arr,
        other => return Err(ConfigError::new(key, format!("expected a list of numbers, got {other}"))),
    };
    arr.iter()
        .map(|e| e.as_f64().ok_or_else(|| ConfigError::new(key, format!("expected a number, got {e}"))))
        .collect()
}

pub fn parse_config(path: &Path) -> Result<SweepConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::new("<file>", format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config_str(&text, base)
}

/// Parses a config document; relative paths resolve against `base_dir`.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<SweepConfig, ConfigError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ConfigError::new("<document>", e.to_string()))?;
    if !root.is_object() {
        return Err(ConfigError::new("<document>", "top level must be an object"));
    }
    let mut map = BTreeMap::new();
    flatten("", root, &mut map)?;
    let mut keys = Keys { map };

    let problem = parse_problem(&mut keys, base_dir)?;
    let method = parse_method(&mut keys)?;

    let x0 = match Keys::required("x0", keys.take("x0"))? {
        Value::Array(arr) if !arr.is_empty() => {
            let elems = arr.iter().map(|v| complex_entry("x0", v)).collect::<Result<Vec<_>, _>>()?;
            CVector::new(elems).map_err(|e| ConfigError::new("x0", e.to_string()))?
        }
        other => return Err(ConfigError::new("x0", format!("expected a non-empty list, got {other}"))),
    };
    if !x0.is_finite() {
        return Err(ConfigError::new("x0", "entries must be finite"));
    }

    let alpha = parse_alpha(&mut keys)?;
    let mut cfg = SweepConfig::new(problem, method, x0, alpha);

    if let Some(e) = keys.f64("integer_exclusion")? {
        if !(INTEGER_ORDER_TOL..0.5).contains(&e) {
            return Err(ConfigError::new("integer_exclusion", format!("must lie in [{INTEGER_ORDER_TOL}, 0.5), got {e}")));
        }
        cfg.integer_exclusion = e;
    }
    if let Some(d) = keys.bool("dedup")? {
        cfg.dedup = d;
    }
    if let Some(t) = keys.f64("dedup_tol")? {
        if !(t > 0.0) {
            return Err(ConfigError::new("dedup_tol", format!("must be > 0, got {t}")));
        }
        cfg.dedup_tol = t;
    }
    if let Some(s) = keys.string("sort")? {
        cfg.sort = match s.as_str() {
            "ascending" => SortOrder::Ascending,
            "descending" => SortOrder::Descending,
            "input" => SortOrder::Input,
            other => {
                return Err(ConfigError::new("sort", format!("expected ascending, descending or input, got {other:?}")))
            }
        };
    }
    if let Some(out) = keys.string("output")? {
        cfg.output = Some(base_dir.join(out));
    }

    if let Some(k) = keys.map.keys().next() {
        return Err(ConfigError::new(k.clone(), "unknown key"));
    }
    // surfaces guard violations and bad intervals at parse time
    cfg.alphas()?;
    Ok(cfg)
}

fn parse_problem(keys: &mut Keys, base_dir: &Path) -> Result<ProblemSpec, ConfigError> {
    let simple = keys.string("problem")?;
    let path = keys.string("problem.polynomial")?;
    let role = keys.string("problem.role")?;
    match (simple, path) {
        (Some(_), Some(_)) => Err(ConfigError::new("problem", "give either \"builtin\" or a polynomial file, not both")),
        (Some(s), None) if s == "builtin" => {
            if role.is_some() {
                return Err(ConfigError::new("problem.role", "only applies to polynomial problems"));
            }
            Ok(ProblemSpec::Builtin)
        }
        (Some(s), None) => Err(ConfigError::new("problem", format!("unknown problem {s:?}"))),
        (None, Some(p)) => {
            let role = match role.as_deref() {
                None | Some("objective") => PolyRole::Objective,
                Some("gradient") => PolyRole::Gradient,
                Some(other) => {
                    return Err(ConfigError::new("problem.role", format!("expected objective or gradient, got {other:?}")))
                }
            };
            Ok(ProblemSpec::Polynomial { path: base_dir.join(p), role })
        }
        (None, None) => Ok(ProblemSpec::Builtin),
    }
}

fn parse_method(keys: &mut Keys) -> Result<MethodConfig, ConfigError> {
    let kind_name = Keys::required("method.kind", keys.string("method.kind")?)?;
    let kind: MethodKind = kind_name.parse().map_err(|e: crate::methods::MethodError| ConfigError::new("method.kind", e.to_string()))?;
    let mut m = MethodConfig::new(kind);
    if let Some(e) = keys.f64("method.epsilon")? {
        m.epsilon = e;
    }
    if let Some(d) = keys.nullable_f64("method.hybrid_delta")? {
        m.hybrid_delta = d;
    }
    if let Some(n) = keys.usize("method.max_iter")? {
        m.max_iter = n;
    }
    if let Some(t) = keys.f64("method.tol_step")? {
        m.tol_step = t;
    }
    if let Some(t) = keys.f64("method.tol_grad")? {
        m.tol_grad = t;
    }
    match keys.map.get("method.rnd_digits") {
        Some(Value::Null) => {
            keys.take("method.rnd_digits");
            m.rnd_digits = None;
        }
        _ => {
            if let Some(d) = keys.u64("method.rnd_digits")? {
                let d = u32::try_from(d).ok().filter(|&d| d <= 300);
                m.rnd_digits = Some(d.ok_or_else(|| ConfigError::new("method.rnd_digits", "must be at most 300"))?);
            }
        }
    }
    m.validate().map_err(|e| ConfigError::new("method", e.to_string()))?;
    Ok(m)
}

fn parse_alpha(keys: &mut Keys) -> Result<AlphaSpec, ConfigError> {
    let modes: Vec<&str> = ["alpha.list", "alpha.grid", "alpha.random"]
        .into_iter()
        .filter(|m| keys.has_prefix(m))
        .collect();
    match modes.as_slice() {
        [] => {
            if keys.has_prefix("alpha") {
                let k = keys.map.keys().find(|k| k.starts_with("alpha")).cloned().unwrap_or_default();
                return Err(ConfigError::new(k, "expected alpha.list, alpha.grid or alpha.random"));
            }
            Err(ConfigError::new("alpha", "missing (one of list, grid, random)"))
        }
        ["alpha.list"] => {
            let v = Keys::required("alpha.list", keys.take("alpha.list"))?;
            Ok(AlphaSpec::List(number_list("alpha.list", v)?))
        }
        ["alpha.grid"] => Ok(AlphaSpec::Grid {
            lo: Keys::required("alpha.grid.lo", keys.f64("alpha.grid.lo")?)?,
            hi: Keys::required("alpha.grid.hi", keys.f64("alpha.grid.hi")?)?,
            count: Keys::required("alpha.grid.count", keys.usize("alpha.grid.count")?)?,
        }),
        ["alpha.random"] => Ok(AlphaSpec::Random {
            lo: Keys::required("alpha.random.lo", keys.f64("alpha.random.lo")?)?,
            hi: Keys::required("alpha.random.hi", keys.f64("alpha.random.hi")?)?,
            count: Keys::required("alpha.random.count", keys.usize("alpha.random.count")?)?,
            seed: keys.u64("alpha.random.seed")?.unwrap_or(0),
        }),
        _ => Err(ConfigError::new("alpha", format!("choose one of {}", modes.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SweepConfig, ConfigError> {
        parse_config_str(text, Path::new("/base"))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse(
            r#"{"problem": "builtin", "method.kind": "PseudoNewton", "x0": [14.55, 14.55], "alpha.list": [0.997025],
                "integer_exclusion": 1e-3}"#,
        )
        .unwrap();
        assert_eq!(cfg.method.kind, MethodKind::PseudoNewton);
        assert_eq!(cfg.method.epsilon, 1e-4);
        assert_eq!(cfg.method.rnd_digits, Some(5));
        assert_eq!(cfg.method.max_iter, 200);
        assert_eq!(cfg.alpha, AlphaSpec::List(vec![0.997025]));
        assert_eq!(cfg.problem, ProblemSpec::Builtin);
    }

    #[test]
    fn nested_and_flat_keys_agree() {
        let a = parse(r#"{"method": {"kind": "QuasiNewton", "hybrid_delta": 7}, "x0": [4.78, [4.78, 0]], "alpha": {"grid": {"lo": -0.9, "hi": -0.1, "count": 5}}}"#).unwrap();
        let b = parse(r#"{"method.kind": "QuasiNewton", "method.hybrid_delta": 7, "x0": [4.78, 4.78], "alpha.grid.lo": -0.9, "alpha.grid.hi": -0.1, "alpha.grid.count": 5}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.method.hybrid_delta, Some(7.0));
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            (r#"{"method.kind": "Secant", "x0": [1], "alpha.list": [0.5]}"#, "method.kind"),
            (r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": []}"#, "alpha.list"),
            (r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": [0.5], "colour": 1}"#, "colour"),
            (r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": [1.001]}"#, "alpha.list"),
            (r#"{"method.kind": "QuasiNewton", "x0": [], "alpha.list": [0.5]}"#, "x0"),
            (r#"{"method.kind": "QuasiNewton", "alpha.list": [0.5]}"#, "x0"),
            (r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": [0.5], "alpha.grid.lo": 0}"#, "alpha"),
            (r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": [0.5], "method.max_iter": 0}"#, "method"),
            (r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": [0.5], "method": {"kind": "QuasiNewton"}}"#, "method.kind"),
            (r#"[1, 2]"#, "<document>"),
        ];
        for (text, key) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.key, key, "{text}: {err}");
        }
    }

    #[test]
    fn polynomial_problem_paths_resolve_against_base() {
        let cfg = parse(r#"{"problem": {"polynomial": "f.poly", "role": "gradient"}, "method.kind": "FracNewtonRaphson", "x0": [1], "alpha.list": [0.5], "output": "out.csv"}"#).unwrap();
        assert_eq!(cfg.problem, ProblemSpec::Polynomial { path: PathBuf::from("/base/f.poly"), role: PolyRole::Gradient });
        assert_eq!(cfg.output, Some(PathBuf::from("/base/out.csv")));
    }

    #[test]
    fn grid_snaps_integer_endpoints_outward() {
        let a = AlphaSpec::Grid { lo: 1.0, hi: 2.0, count: 5 }.sample(0.01).unwrap();
        assert!(a[0] > 1.01 && a[0] < 1.0101);
        assert!(a[4] < 1.99 && a[4] > 1.9899);
        assert_eq!(&a[1..4], &[1.25, 1.5, 1.75]);
        let a = AlphaSpec::Grid { lo: 0.995, hi: 1.5, count: 2 }.sample(0.01).unwrap();
        assert!(a[0] < 0.99);
    }

    #[test]
    fn random_is_seeded_and_guarded() {
        let spec = AlphaSpec::Random { lo: -1.5, hi: 1.5, count: 200, seed: 42 };
        let a = spec.sample(0.05).unwrap();
        assert_eq!(a, spec.sample(0.05).unwrap());
        assert_ne!(a, AlphaSpec::Random { lo: -1.5, hi: 1.5, count: 200, seed: 43 }.sample(0.05).unwrap());
        assert!(a.iter().all(|x| (x - x.round()).abs() > 0.05 && (-1.5..1.5).contains(x)));
        assert!(AlphaSpec::Random { lo: 0.999, hi: 1.001, count: 3, seed: 1 }.sample(0.01).is_err());
    }

    #[test]
    fn sort_orders() {
        let mut cfg = parse(r#"{"method.kind": "QuasiNewton", "x0": [1], "alpha.list": [0.3, -0.2, 0.6], "sort": "descending"}"#).unwrap();
        assert_eq!(cfg.alphas().unwrap(), vec![0.6, 0.3, -0.2]);
        cfg.sort = SortOrder::Input;
        assert_eq!(cfg.alphas().unwrap(), vec![0.3, -0.2, 0.6]);
    }
}
