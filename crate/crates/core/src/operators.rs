//! Operator tuples (T_1, ..., T_k) between lq-built spaces: application,
//! adjoints, direct-sum lifts, linear combinations, and zero-padding.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::spaces::{scalar_from_json, scalar_to_json, SpaceDescriptor, SpaceVector};
use serde_json::{json, Value};

/// Dense row-major matrix over the scalar field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: crate::scalar::zeros(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::ShapeMismatch("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn matvec(&self, x: &[Scalar]) -> Vec<Scalar> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Plain transpose (no conjugation): the adjoint under the bilinear
    /// pairing convention.
    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn scaled(&self, c: Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

/// A k-tuple of operators in L(X, Y)^k, stored as dim(Y) x dim(X) matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTuple {
    pub mats: Vec<Matrix>,
    pub source: SpaceDescriptor,
    pub target: SpaceDescriptor,
}

impl OperatorTuple {
    pub fn new(mats: Vec<Matrix>, source: SpaceDescriptor, target: SpaceDescriptor) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::ShapeMismatch("tuple needs k >= 1 operators".into()));
        }
        let (r, c) = (target.dim(), source.dim());
        if mats.iter().any(|m| m.rows != r || m.cols != c) {
            return Err(Error::ShapeMismatch(format!(
                "every matrix must be {r} x {c} to map source into target"
            )));
        }
        Ok(OperatorTuple { mats, source, target })
    }

    pub fn zero(k: usize, source: SpaceDescriptor, target: SpaceDescriptor) -> Self {
        let m = Matrix::zero(target.dim(), source.dim());
        OperatorTuple { mats: vec![m; k], source, target }
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// Single-operator subtuple (T_i) with the same spaces.
    pub fn component(&self, i: usize) -> OperatorTuple {
        OperatorTuple {
            mats: vec![self.mats[i].clone()],
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }

    /// (T_1 x, ..., T_k x) in the target space.
    pub fn apply(&self, x: &SpaceVector) -> Result<Vec<SpaceVector>> {
        if x.space != self.source {
            return Err(Error::DimensionMismatch {
                expected: self.source.dim(),
                got: x.coords.len(),
            });
        }
        Ok(self
            .mats
            .iter()
            .map(|m| SpaceVector { space: self.target.clone(), coords: m.matvec(&x.coords) })
            .collect())
    }

    pub fn apply_coords(&self, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.mats.iter().map(|m| m.matvec(x)).collect()
    }

    /// Adjoint tuple (T_1^t, ..., T_k^t) in L(Y*, X*)^k. The matrices are
    /// plain transposes, consistent with pairing(f, Tx) = pairing(T^t f, x).
    pub fn adjoint(&self) -> OperatorTuple {
        OperatorTuple {
            mats: self.mats.iter().map(Matrix::transpose).collect(),
            source: self.target.dual(),
            target: self.source.dual(),
        }
    }

    /// alpha * a + beta * b, componentwise.
    pub fn combine(a: &OperatorTuple, b: &OperatorTuple, alpha: Scalar, beta: Scalar) -> Result<OperatorTuple> {
        if a.k() != b.k() || a.source != b.source || a.target != b.target {
            return Err(Error::ShapeMismatch("combine needs equal k and equal spaces".into()));
        }
        let mats = a
            .mats
            .iter()
            .zip(&b.mats)
            .map(|(ma, mb)| Matrix {
                rows: ma.rows,
                cols: ma.cols,
                data: ma
                    .data
                    .iter()
                    .zip(&mb.data)
                    .map(|(x, y)| alpha * x + beta * y)
                    .collect(),
            })
            .collect();
        Ok(OperatorTuple { mats, source: a.source.clone(), target: a.target.clone() })
    }

    /// Zero-pad to a k_new-tuple; both joint norms are unchanged.
    pub fn pad(&self, k_new: usize) -> Result<OperatorTuple> {
        if k_new < self.k() {
            return Err(Error::ShrinkNotAllowed { from: self.k(), to: k_new });
        }
        let mut mats = self.mats.clone();
        mats.resize(k_new, Matrix::zero(self.target.dim(), self.source.dim()));
        Ok(OperatorTuple { mats, source: self.source.clone(), target: self.target.clone() })
    }

    pub fn to_json(&self) -> Value {
        let field = self.field();
        json!({
            "k": self.k(),
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "mats": self
                .mats
                .iter()
                .map(|m| {
                    (0..m.rows)
                        .map(|i| {
                            (0..m.cols)
                                .map(|j| scalar_to_json(field, m.get(i, j)))
                                .collect::<Vec<_>>()
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<OperatorTuple> {
        let source = SpaceDescriptor::from_json(
            v.get("source").ok_or_else(|| Error::Parse("tuple needs source".into()))?,
        )?;
        let target = SpaceDescriptor::from_json(
            v.get("target").ok_or_else(|| Error::Parse("tuple needs target".into()))?,
        )?;
        if source.field() != target.field() {
            return Err(Error::Parse("source and target must share the field".into()));
        }
        let field = source.field();
        let mats_json = v
            .get("mats")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("tuple needs mats".into()))?;
        if let Some(k) = v.get("k").and_then(Value::as_u64) {
            if k as usize != mats_json.len() {
                return Err(Error::Parse("k does not match the number of matrices".into()));
            }
        }
        let mut mats = Vec::with_capacity(mats_json.len());
        for mj in mats_json {
            let rows_json = mj.as_array().ok_or_else(|| Error::Parse("matrix must be nested arrays".into()))?;
            let mut rows = Vec::with_capacity(rows_json.len());
            for rj in rows_json {
                let row = rj
                    .as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(|e| scalar_from_json(field, e))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
            mats.push(Matrix::from_rows(rows)?);
        }
        OperatorTuple::new(mats, source, target)
    }
}

/// Lift a tuple on summand `slot` of the direct sum `host` to block operators
/// acting as the original matrices on the slot and zero elsewhere.
pub fn lift_direct_sum(
    tuple: &OperatorTuple,
    host: &SpaceDescriptor,
    slot: usize,
) -> Result<OperatorTuple> {
    let summands = match host {
        SpaceDescriptor::DirectSum { summands, .. } => summands,
        _ => return Err(Error::SlotMismatch("host must be a direct sum".into())),
    };
    let summand = summands
        .get(slot)
        .ok_or_else(|| Error::SlotMismatch(format!("host has no summand {slot}")))?;
    if *summand != tuple.source || *summand != tuple.target {
        return Err(Error::SlotMismatch(
            "slot descriptor must equal the tuple's source and target".into(),
        ));
    }
    let offset = host.blocks()[slot].0;
    let n = host.dim();
    let d = summand.dim();
    let mats = tuple
        .mats
        .iter()
        .map(|a| {
            let mut m = Matrix::zero(n, n);
            for i in 0..d {
                for j in 0..d {
                    m.set(offset + i, offset + j, a.get(i, j));
                }
            }
            m
        })
        .collect();
    Ok(OperatorTuple { mats, source: host.clone(), target: host.clone() })
}

/// Restriction of a lifted tuple back to the slot block.
pub fn restrict_to_slot(
    tuple: &OperatorTuple,
    host: &SpaceDescriptor,
    slot: usize,
) -> Result<OperatorTuple> {
    let summands = match host {
        SpaceDescriptor::DirectSum { summands, .. } => summands,
        _ => return Err(Error::SlotMismatch("host must be a direct sum".into())),
    };
    let summand = summands
        .get(slot)
        .ok_or_else(|| Error::SlotMismatch(format!("host has no summand {slot}")))?;
    let offset = host.blocks()[slot].0;
    let d = summand.dim();
    let mats = tuple
        .mats
        .iter()
        .map(|m| {
            let mut a = Matrix::zero(d, d);
            for i in 0..d {
                for j in 0..d {
                    a.set(i, j, m.get(offset + i, offset + j));
                }
            }
            a
        })
        .collect();
    Ok(OperatorTuple { mats, source: summand.clone(), target: summand.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{pairing, real};
    use crate::spaces::{Exponent, SpaceVector};
    use crate::scalar::Field;

    fn rvec(space: &SpaceDescriptor, v: &[f64]) -> SpaceVector {
        SpaceVector::new(space.clone(), v.iter().map(|&r| real(r)).collect()).unwrap()
    }

    /// T(a,b) = (b,0), S(a,b) = (0,a) on l1^2: the non-convex-range example.
    pub fn shift_pair_tuple() -> OperatorTuple {
        let x = SpaceDescriptor::l1(2, Field::Real);
        let t = Matrix::from_rows(vec![vec![real(0.0), real(1.0)], vec![real(0.0), real(0.0)]]).unwrap();
        let s = Matrix::from_rows(vec![vec![real(0.0), real(0.0)], vec![real(1.0), real(0.0)]]).unwrap();
        OperatorTuple::new(vec![t, s], x.clone(), x).unwrap()
    }

    #[test]
    fn apply_examples() {
        let l2 = SpaceDescriptor::l2(2, Field::Real);
        let id = OperatorTuple::new(vec![Matrix::identity(2)], l2.clone(), l2.clone()).unwrap();
        let out = id.apply(&rvec(&l2, &[1.0, 0.0])).unwrap();
        assert_eq!(out[0].coords, rvec(&l2, &[1.0, 0.0]).coords);

        let ts = shift_pair_tuple();
        let x = rvec(&ts.source, &[1.0, 0.0]);
        let out = ts.apply(&x).unwrap();
        assert_eq!(out[0].coords, rvec(&ts.source, &[0.0, 0.0]).coords);
        assert_eq!(out[1].coords, rvec(&ts.source, &[0.0, 1.0]).coords);
    }

    #[test]
    fn adjoint_is_involution_and_respects_pairing() {
        use rand::Rng;
        let ts = shift_pair_tuple();
        let back = ts.adjoint().adjoint();
        assert_eq!(back, ts);

        let mut rng = crate::rng::stream_rng(3, 0);
        let adj = ts.adjoint();
        for _ in 0..20 {
            let x: Vec<Scalar> = (0..2).map(|_| real(rng.gen::<f64>() - 0.5)).collect();
            let f: Vec<Scalar> = (0..2).map(|_| real(rng.gen::<f64>() - 0.5)).collect();
            for i in 0..ts.k() {
                let lhs = pairing(&f, &ts.mats[i].matvec(&x));
                let rhs = pairing(&adj.mats[i].matvec(&f), &x);
                assert!((lhs - rhs).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_of_diagonal_projections_is_itself_on_the_dual() {
        let linf = SpaceDescriptor::linf(3, Field::Real);
        let mut mats = Vec::new();
        for i in 0..2 {
            let mut m = Matrix::zero(3, 3);
            m.set(i, i, real(1.0));
            mats.push(m);
        }
        let t = OperatorTuple::new(mats.clone(), linf.clone(), linf).unwrap();
        let adj = t.adjoint();
        assert_eq!(adj.mats, mats);
        assert_eq!(adj.source, SpaceDescriptor::l1(3, Field::Real));
    }

    #[test]
    fn combine_and_pad() {
        let ts = shift_pair_tuple();
        let zero = OperatorTuple::combine(&ts, &ts, real(1.0), real(-1.0)).unwrap();
        assert!(zero.mats.iter().all(Matrix::is_zero));
        let padded = ts.pad(5).unwrap();
        assert_eq!(padded.k(), 5);
        assert!(padded.mats[4].is_zero());
        assert!(matches!(ts.pad(1), Err(Error::ShrinkNotAllowed { from: 2, to: 1 })));
    }

    #[test]
    fn lift_and_restrict_roundtrip() {
        let y = SpaceDescriptor::l1(2, Field::Real);
        let host = SpaceDescriptor::direct_sum(
            vec![y.clone(), SpaceDescriptor::l2(2, Field::Real)],
            Exponent::Infinity,
        );
        let id = OperatorTuple::new(vec![Matrix::identity(2)], y.clone(), y.clone()).unwrap();
        let lifted = lift_direct_sum(&id, &host, 0).unwrap();
        assert_eq!(lifted.mats[0].rows, 4);
        assert_eq!(lifted.mats[0].get(0, 0), real(1.0));
        assert_eq!(lifted.mats[0].get(2, 2), real(0.0));
        let back = restrict_to_slot(&lifted, &host, 0).unwrap();
        assert_eq!(back.mats, id.mats);
        assert!(matches!(lift_direct_sum(&id, &host, 1), Err(Error::SlotMismatch(_))));
    }

    #[test]
    fn tuple_json_roundtrip() {
        let ts = shift_pair_tuple();
        let back = OperatorTuple::from_json(&ts.to_json()).unwrap();
        assert_eq!(back, ts);

        let c = SpaceDescriptor::l2(2, Field::Complex);
        let m = Matrix::from_rows(vec![
            vec![Scalar::new(0.0, 1.0), real(0.5)],
            vec![real(0.0), Scalar::new(-1.0, 2.0)],
        ])
        .unwrap();
        let t = OperatorTuple::new(vec![m], c.clone(), c).unwrap();
        let back = OperatorTuple::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
