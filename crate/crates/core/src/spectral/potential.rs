//! Edge potentials of an equilateral tree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest number of grid values accepted for a sampled potential.
pub const MIN_SAMPLES: usize = 16;

/// Tolerance for the midpoint symmetry `v[i] = v[N-1-i]`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// The same potential is placed on every edge, each of length `ell`.
/// Sampled values sit on a uniform grid over `[0, ell]` and are linearly
/// interpolated between grid points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    Zero { ell: f64 },
    Constant { q: f64, ell: f64 },
    Sampled { ell: f64, values: Vec<f64> },
}

impl Potential {
    pub fn zero(ell: f64) -> Result<Self> {
        let p = Potential::Zero { ell };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(q: f64, ell: f64) -> Result<Self> {
        let p = Potential::Constant { q, ell };
        p.validate()?;
        Ok(p)
    }

    pub fn sampled(ell: f64, values: Vec<f64>) -> Result<Self> {
        let p = Potential::Sampled { ell, values };
        p.validate()?;
        Ok(p)
    }

    /// Samples `f` at `n` grid points of `[0, ell]`.
    pub fn from_fn(ell: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = ell / (n.max(2) - 1) as f64;
        Self::sampled(ell, (0..n).map(|i| f(i as f64 * h)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let ell = self.ell();
        if !(ell.is_finite() && ell > 0.0) {
            return Err(Error::InvalidInput(format!("edge length must be positive, got {ell}")));
        }
        match self {
            Potential::Zero { .. } => Ok(()),
            Potential::Constant { q, .. } if q.is_finite() => Ok(()),
            Potential::Constant { q, .. } => Err(Error::InvalidInput(format!("non-finite potential {q}"))),
            Potential::Sampled { values, .. } => {
                if values.len() < MIN_SAMPLES {
                    return Err(Error::InvalidInput(format!(
                        "sampled potential needs at least {MIN_SAMPLES} values, got {}",
                        values.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("non-finite sample".into()));
                }
                Ok(())
            }
        }
    }

    pub fn ell(&self) -> f64 {
        match self {
            Potential::Zero { ell } | Potential::Constant { ell, .. } | Potential::Sampled { ell, .. } => *ell,
        }
    }

    /// Constant value when the potential is constant (zero included).
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Potential::Zero { .. } => Some(0.0),
            Potential::Constant { q, .. } => Some(*q),
            Potential::Sampled { .. } => None,
        }
    }

    pub fn min_value(&self) -> f64 {
        match self {
            Potential::Sampled { values, .. } => values.iter().copied().fold(f64::INFINITY, f64::min),
            _ => self.constant_value().unwrap(),
        }
    }

    pub fn max_value(&self) -> f64 {
        match self {
            Potential::Sampled { values, .. } => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            _ => self.constant_value().unwrap(),
        }
    }

    /// Symmetric with respect to the edge midpoint.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Potential::Sampled { values, .. } => {
                let n = values.len();
                (0..n / 2).all(|i| (values[i] - values[n - 1 - i]).abs() <= SYMMETRY_TOL * (1.0 + values[i].abs()))
            }
            _ => true,
        }
    }

    /// Value at `x ∈ [0, ell]`.
    pub fn value_at(&self, x: f64) -> f64 {
        match self {
            Potential::Sampled { ell, values } => {
                let n = values.len();
                let t = (x / ell).clamp(0.0, 1.0) * (n - 1) as f64;
                let i = (t.floor() as usize).min(n - 2);
                let w = t - i as f64;
                values[i] * (1.0 - w) + values[i + 1] * w
            }
            _ => self.constant_value().unwrap(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("potential serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("potential serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Potential = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    /// Parses `zero`, `const:Q` or `sampled:FILE` (FILE holds potential JSON
    /// or a bare array of values); `ell` applies unless the file sets it.
    pub fn from_spec(spec: &str, ell: f64) -> Result<Self> {
        if spec == "zero" {
            return Self::zero(ell);
        }
        if let Some(q) = spec.strip_prefix("const:") {
            let q: f64 = q.parse().map_err(|_| Error::Parse(format!("bad constant in {spec:?}")))?;
            return Self::constant(q, ell);
        }
        if let Some(path) = spec.strip_prefix("sampled:") {
            let text = std::fs::read_to_string(path)?;
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            return match v {
                serde_json::Value::Array(_) => {
                    let values: Vec<f64> = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
                    Self::sampled(ell, values)
                }
                _ => Self::from_json(&text),
            };
        }
        Err(Error::Parse(format!("unknown potential spec {spec:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let p = Potential::from_json(r#"{"kind":"constant","q":-4.0,"ell":1.0}"#).unwrap();
        assert_eq!(p, Potential::Constant { q: -4.0, ell: 1.0 });
        let back = Potential::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert!(Potential::from_json(r#"{"kind":"zero","ell":-1.0}"#).is_err());
        assert!(Potential::from_json(r#"{"kind":"sampled","ell":1.0,"values":[1,2]}"#).is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(Potential::from_spec("zero", 2.0).unwrap(), Potential::Zero { ell: 2.0 });
        assert_eq!(
            Potential::from_spec("const:-10", 1.0).unwrap(),
            Potential::Constant { q: -10.0, ell: 1.0 }
        );
        assert!(Potential::from_spec("const:x", 1.0).is_err());
        assert!(Potential::from_spec("linear", 1.0).is_err());
    }

    #[test]
    fn symmetry_and_interpolation() {
        let p = Potential::from_fn(1.0, 21, |x| x * (1.0 - x)).unwrap();
        assert!(p.is_symmetric());
        assert!((p.value_at(0.5) - 0.25).abs() < 1e-15);
        assert!((p.value_at(0.525) - 0.5 * (0.25 + 0.55 * 0.45)).abs() < 1e-15);
        let q = Potential::from_fn(1.0, 21, |x| x).unwrap();
        assert!(!q.is_symmetric());
        assert_eq!(q.min_value(), 0.0);
        assert_eq!(q.max_value(), 1.0);
    }
}
