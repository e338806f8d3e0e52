//! Finite-dimensional normed spaces: lq^m factors and finite lq-direct sums,
//! over the real or complex field. Provides norm evaluation, duality,
//! extreme-point enumeration, norming functionals, and norming-pair sampling.

mod extreme;
mod functionals;
mod sampling;

pub use extreme::{extreme_norming_pairs, extreme_norming_pairs_with_cap, extreme_points, extreme_points_with_cap, DEFAULT_EXTREME_CAP};
pub use functionals::FunctionalSet;
pub use sampling::{sample_norming_pairs, sample_unit_vector};

use crate::error::{Error, Result};
use crate::scalar::{pairing, Field, Scalar};
use serde_json::{json, Value};

/// Extended-real exponent in [1, inf].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(q: f64) -> Result<Self> {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent(q));
        }
        Ok(Exponent::Finite(q))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Conjugate exponent: 1/q + 1/q' = 1, with 1 <-> inf.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(q) if q == 1.0 => Exponent::Infinity,
            Exponent::Finite(q) if q == 2.0 => Exponent::Finite(2.0),
            Exponent::Finite(q) => Exponent::Finite(q / (q - 1.0)),
        }
    }

    /// lq-aggregate of nonnegative values.
    pub fn aggregate(self, vals: impl Iterator<Item = f64>) -> f64 {
        match self {
            Exponent::Infinity => vals.fold(0.0, f64::max),
            Exponent::Finite(q) if q == 1.0 => vals.sum(),
            Exponent::Finite(q) => vals.map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q),
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            Exponent::Infinity => json!("inf"),
            Exponent::Finite(q) => json!(q),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "inf" || s == "c0" => Ok(Exponent::Infinity),
            Value::Number(n) => {
                let q = n.as_f64().ok_or_else(|| Error::Parse("bad exponent".into()))?;
                Exponent::new(q)
            }
            _ => Err(Error::Parse(format!("bad exponent: {v}"))),
        }
    }
}

/// A finite-dimensional normed space built from lq^m factors.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceDescriptor {
    Lq {
        q: Exponent,
        dim: usize,
        field: Field,
    },
    DirectSum {
        summands: Vec<SpaceDescriptor>,
        outer_q: Exponent,
        field: Field,
    },
}

impl SpaceDescriptor {
    pub fn lq(q: Exponent, dim: usize, field: Field) -> Self {
        assert!(dim > 0, "space dimension must be positive");
        SpaceDescriptor::Lq { q, dim, field }
    }

    pub fn l1(dim: usize, field: Field) -> Self {
        Self::lq(Exponent::Finite(1.0), dim, field)
    }

    pub fn l2(dim: usize, field: Field) -> Self {
        Self::lq(Exponent::Finite(2.0), dim, field)
    }

    pub fn linf(dim: usize, field: Field) -> Self {
        Self::lq(Exponent::Infinity, dim, field)
    }

    /// Finite lq-direct sum. Finite c0-sums coincide with linf-sums, so callers
    /// wanting c0 pass `Exponent::Infinity`.
    pub fn direct_sum(summands: Vec<SpaceDescriptor>, outer_q: Exponent) -> Self {
        assert!(!summands.is_empty(), "direct sum needs at least one summand");
        let field = summands[0].field();
        assert!(
            summands.iter().all(|s| s.field() == field),
            "all summands must share the field"
        );
        SpaceDescriptor::DirectSum { summands, outer_q, field }
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceDescriptor::Lq { dim, .. } => *dim,
            SpaceDescriptor::DirectSum { summands, .. } => summands.iter().map(|s| s.dim()).sum(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            SpaceDescriptor::Lq { field, .. } | SpaceDescriptor::DirectSum { field, .. } => *field,
        }
    }

    /// Dual space: conjugate exponents at every level, summand order preserved.
    pub fn dual(&self) -> SpaceDescriptor {
        match self {
            SpaceDescriptor::Lq { q, dim, field } => SpaceDescriptor::Lq {
                q: q.conjugate(),
                dim: *dim,
                field: *field,
            },
            SpaceDescriptor::DirectSum { summands, outer_q, field } => SpaceDescriptor::DirectSum {
                summands: summands.iter().map(|s| s.dual()).collect(),
                outer_q: outer_q.conjugate(),
                field: *field,
            },
        }
    }

    /// Norm of a coordinate vector, recursing through the direct-sum structure.
    pub fn norm(&self, x: &[Scalar]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[Scalar]) -> f64 {
        match self {
            SpaceDescriptor::Lq { q, .. } => q.aggregate(x.iter().map(|z| z.norm())),
            SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
                let mut offset = 0;
                let block_norms = summands.iter().map(|s| {
                    let d = s.dim();
                    let n = s.norm_unchecked(&x[offset..offset + d]);
                    offset += d;
                    n
                });
                outer_q.aggregate(block_norms)
            }
        }
    }

    /// Block boundaries of the top-level summands ((offset, dim) pairs); a
    /// plain lq space is a single block.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        match self {
            SpaceDescriptor::Lq { dim, .. } => vec![(0, *dim)],
            SpaceDescriptor::DirectSum { summands, .. } => {
                let mut out = Vec::with_capacity(summands.len());
                let mut offset = 0;
                for s in summands {
                    out.push((offset, s.dim()));
                    offset += s.dim();
                }
                out
            }
        }
    }

    /// True when the field is real and every factor at every level is
    /// polyhedral (q in {1, inf}), which is what the exact enumeration paths
    /// require.
    pub fn is_real_polyhedral(&self) -> bool {
        if self.field() != Field::Real {
            return false;
        }
        self.is_polyhedral_shape()
    }

    fn is_polyhedral_shape(&self) -> bool {
        match self {
            SpaceDescriptor::Lq { q, .. } => q.is_infinite() || *q == Exponent::Finite(1.0),
            SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
                (outer_q.is_infinite() || *outer_q == Exponent::Finite(1.0))
                    && summands.iter().all(|s| s.is_polyhedral_shape())
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SpaceDescriptor::Lq { q, dim, field } => json!({
                "lq": { "q": q.to_json(), "dim": dim },
                "field": field.as_str(),
            }),
            SpaceDescriptor::DirectSum { summands, outer_q, field } => json!({
                "sum": {
                    "outer_q": outer_q.to_json(),
                    "summands": summands.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
                },
                "field": field.as_str(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<SpaceDescriptor> {
        let field = match v.get("field").and_then(Value::as_str) {
            Some("real") => Field::Real,
            Some("complex") => Field::Complex,
            _ => return Err(Error::Parse("space needs \"field\": \"real\"|\"complex\"".into())),
        };
        if let Some(lq) = v.get("lq") {
            let q = Exponent::from_json(lq.get("q").ok_or_else(|| Error::Parse("lq needs q".into()))?)?;
            let dim = lq
                .get("dim")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("lq needs positive dim".into()))? as usize;
            if dim == 0 {
                return Err(Error::Parse("lq dim must be positive".into()));
            }
            Ok(SpaceDescriptor::Lq { q, dim, field })
        } else if let Some(sum) = v.get("sum") {
            let outer_q = Exponent::from_json(
                sum.get("outer_q").ok_or_else(|| Error::Parse("sum needs outer_q".into()))?,
            )?;
            let summands = sum
                .get("summands")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("sum needs summands".into()))?;
            if summands.is_empty() {
                return Err(Error::Parse("sum needs at least one summand".into()));
            }
            let summands = summands
                .iter()
                .map(SpaceDescriptor::from_json)
                .collect::<Result<Vec<_>>>()?;
            if summands.iter().any(|s| s.field() != field) {
                return Err(Error::Parse("summand fields must match the outer field".into()));
            }
            Ok(SpaceDescriptor::DirectSum { summands, outer_q, field })
        } else {
            Err(Error::Parse("space needs \"lq\" or \"sum\"".into()))
        }
    }
}

/// Scalar in JSON form: a number for the real field, [re, im] for complex.
pub fn scalar_to_json(field: Field, z: Scalar) -> Value {
    match field {
        Field::Real => json!(z.re),
        Field::Complex => json!([z.re, z.im]),
    }
}

pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    match field {
        Field::Real => v
            .as_f64()
            .map(|r| Scalar::new(r, 0.0))
            .ok_or_else(|| Error::Parse(format!("expected real scalar, got {v}"))),
        Field::Complex => {
            let arr = v.as_array().filter(|a| a.len() == 2);
            match arr {
                Some(a) => {
                    let re = a[0].as_f64().ok_or_else(|| Error::Parse("bad complex re".into()))?;
                    let im = a[1].as_f64().ok_or_else(|| Error::Parse("bad complex im".into()))?;
                    Ok(Scalar::new(re, im))
                }
                None => Err(Error::Parse(format!("expected [re, im], got {v}"))),
            }
        }
    }
}

pub fn vector_to_json(field: Field, x: &[Scalar]) -> Value {
    Value::Array(x.iter().map(|&z| scalar_to_json(field, z)).collect())
}

pub fn vector_from_json(field: Field, v: &Value) -> Result<Vec<Scalar>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected coordinate array".into()))?
        .iter()
        .map(|e| scalar_from_json(field, e))
        .collect()
}

/// A vector together with the space it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceVector {
    pub space: SpaceDescriptor,
    pub coords: Vec<Scalar>,
}

impl SpaceVector {
    pub fn new(space: SpaceDescriptor, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: coords.len() });
        }
        Ok(SpaceVector { space, coords })
    }

    pub fn norm(&self) -> f64 {
        self.space.norm_unchecked(&self.coords)
    }
}

/// A pair (x, f) with x in S_X, f acting as a dual unit vector, f(x) = 1.
/// `in_gx` marks pairs whose components are extreme points of the respective
/// unit balls (members of G_X).
#[derive(Clone, Debug)]
pub struct NormingPair {
    pub x: SpaceVector,
    pub f: SpaceVector,
    pub in_gx: bool,
}

impl NormingPair {
    pub fn pairing(&self) -> Scalar {
        pairing(&self.f.coords, &self.x.coords)
    }
}

/// Unique functional of a smooth point, or the canonical representative of a
/// face; see `FunctionalSet` for the full interface.
pub fn norming_functionals(space: &SpaceDescriptor, x: &[Scalar]) -> Result<FunctionalSet> {
    FunctionalSet::new(space, x)
}
