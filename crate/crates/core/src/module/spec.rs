use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AdAlpha, ModuleRef, Omega, OneVarExample, SignFlip, Tensor, Twist, WeylQuotient};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_laurent, parse_poly_h, q, QVec, Rational};
use crate::gl::GlSpec;

/// A rational given in JSON either as an integer or as a string like `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Scalar::Int(n) => Ok(q(*n)),
            Scalar::Text(s) => crate::exact::parse_rational(s),
        }
    }
}

impl From<&Rational> for Scalar {
    fn from(r: &Rational) -> Self {
        if r.is_integer() {
            if let Ok(n) = i64::try_from(r.to_integer()) {
                return Scalar::Int(n);
            }
        }
        Scalar::Text(fmt_rational(r))
    }
}

fn vector(entries: &[Scalar]) -> Result<QVec> {
    Ok(QVec::new(entries.iter().map(Scalar::value).collect::<Result<_>>()?))
}

/// JSON description of a module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Omega {
        lambda: Vec<Scalar>,
        a: Scalar,
    },
    Adalpha {
        alpha: Vec<Scalar>,
        a: Scalar,
    },
    /// `f[i] = [a_i1, ..., a_in]` as polynomials in `D1..Dd`.
    Weyl {
        f: Vec<Vec<String>>,
    },
    LaurentExample {
        g: String,
    },
    Tensor {
        #[serde(rename = "P")]
        p: Box<ModuleSpec>,
        #[serde(rename = "V")]
        v: GlSpec,
    },
    Twist {
        #[serde(rename = "P")]
        p: Box<ModuleSpec>,
        lambda: Vec<Scalar>,
    },
    SignFlip {
        #[serde(rename = "P")]
        p: Box<ModuleSpec>,
    },
}

impl ModuleSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("module spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("module specs serialize")
    }

    pub fn build(&self) -> Result<ModuleRef> {
        Ok(match self {
            ModuleSpec::Omega { lambda, a } => Arc::new(Omega::new(vector(lambda)?, a.value()?)?),
            ModuleSpec::Adalpha { alpha, a } => Arc::new(AdAlpha::new(vector(alpha)?, a.value()?)?),
            ModuleSpec::Weyl { .. } => Arc::new(self.weyl_quotient()?.expect("weyl spec")),
            ModuleSpec::LaurentExample { g } => Arc::new(OneVarExample::new(parse_laurent(1, g)?)?),
            ModuleSpec::Tensor { p, v } => {
                let p = p.build()?;
                let v = v.build(p.d())?;
                Arc::new(Tensor::new(p, v)?)
            }
            ModuleSpec::Twist { p, lambda } => Arc::new(Twist::new(p.build()?, vector(lambda)?)?),
            ModuleSpec::SignFlip { p } => Arc::new(SignFlip::new(p.build()?)),
        })
    }

    /// The quotient described by a `weyl` spec; `None` for other kinds.
    pub fn weyl_quotient(&self) -> Result<Option<WeylQuotient>> {
        let ModuleSpec::Weyl { f } = self else {
            return Ok(None);
        };
        let d = f.len();
        let coeffs = f
            .iter()
            .map(|row| row.iter().map(|s| parse_poly_h(d, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(WeylQuotient::new(coeffs)?))
    }

    pub fn omega(lambda: &[i64], a: i64) -> Self {
        ModuleSpec::Omega {
            lambda: lambda.iter().map(|&x| Scalar::Int(x)).collect(),
            a: Scalar::Int(a),
        }
    }

    pub fn adalpha(alpha: &QVec, a: &Rational) -> Self {
        ModuleSpec::Adalpha {
            alpha: alpha.iter().map(Scalar::from).collect(),
            a: Scalar::from(a),
        }
    }

    /// Same relation shape in every variable: `row` gives `a_1..a_n` with
    /// `D` standing for the matching `D_i`.
    pub fn weyl_uniform(d: usize, row: &[&str]) -> Self {
        let f = (1..=d)
            .map(|i| row.iter().map(|s| s.replace('D', &format!("D{i}"))).collect())
            .collect();
        ModuleSpec::Weyl { f }
    }

    pub fn tensor(p: ModuleSpec, v: GlSpec) -> Self {
        ModuleSpec::Tensor { p: Box::new(p), v }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_shapes() {
        let m = ModuleSpec::from_json(r#"{"type":"omega","lambda":[2,"3/2"],"a":1}"#).unwrap();
        assert_eq!(m.build().unwrap().d(), 2);
        let w = ModuleSpec::from_json(r#"{"type":"weyl","f":[["D1","1"],["0","-2"]]}"#).unwrap();
        assert_eq!(w.build().unwrap().free_rank(), Some(4));
        let t = ModuleSpec::from_json(
            r#"{"type":"tensor","P":{"type":"omega","lambda":[2,3],"a":1},"V":{"kind":"exterior","k":1}}"#,
        )
        .unwrap();
        assert_eq!(t.build().unwrap().free_rank(), Some(2));
        let l = ModuleSpec::from_json(r#"{"type":"laurent_example","g":"x^(-1) + x^(1)"}"#).unwrap();
        assert!(l.build().is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        let zero = ModuleSpec::from_json(r#"{"type":"omega","lambda":[0,2],"a":1}"#).unwrap();
        assert!(zero.build().is_err());
        assert!(ModuleSpec::from_json(r#"{"type":"omega","lambda":[1]}"#).is_err());
        assert!(ModuleSpec::from_json(r#"{"type":"nope"}"#).is_err());
    }

    #[test]
    fn round_trips() {
        let spec = ModuleSpec::tensor(ModuleSpec::weyl_uniform(2, &["D", "1"]), GlSpec::Exterior { k: 2 });
        assert_eq!(ModuleSpec::from_json(&spec.to_json()).unwrap(), spec);
        let ModuleSpec::Tensor { p, .. } = &spec else { unreachable!() };
        assert_eq!(
            **p,
            ModuleSpec::Weyl {
                f: vec![vec!["D1".into(), "1".into()], vec!["D2".into(), "1".into()]]
            }
        );
    }
}
