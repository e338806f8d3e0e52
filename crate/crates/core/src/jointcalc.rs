//! Evaluation of the p-th joint operator norm and p-th joint numerical
//! radius: exact extreme-point enumeration on real polyhedral spaces,
//! multi-start projected ascent elsewhere, and a brute-force grid oracle for
//! low dimensions.

use crate::error::{Error, Result};
use crate::operators::OperatorTuple;
use crate::optimize::{ascend_on_sphere, AscentConfig};
use crate::scalar::{pairing, real_dim, Field, Scalar};
use crate::spaces::{
    extreme_norming_pairs, extreme_points, norming_functionals, sample_norming_pairs,
    vector_to_json, Exponent, NormingPair, SpaceVector,
};
use serde_json::{json, Value};

/// Evaluation strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Optimize,
    Auto,
}

/// Certificate achieving (or best found for) a computed value.
#[derive(Clone, Debug)]
pub enum Certificate {
    Point(SpaceVector),
    Pair(NormingPair),
}

/// A scalar value with its certificate. `exact = true` means the value is a
/// maximum over a finite enumerated set; otherwise it is a certified lower
/// bound found by optimization.
#[derive(Clone, Debug)]
pub struct ComputationResult {
    pub value: f64,
    pub certificate: Certificate,
    pub exact: bool,
    pub evaluations: usize,
    /// Trivial upper bound (sum_i ||T_i||^p)^(1/p), reported by the optimize
    /// path for k > 1.
    pub upper_bound: Option<f64>,
    /// Monte-Carlo cross-check reported by the optimized radius path.
    pub sampled_lower_bound: Option<f64>,
}

impl ComputationResult {
    pub fn to_json(&self) -> Value {
        let cert = match &self.certificate {
            Certificate::Point(x) => json!({
                "point": vector_to_json(x.space.field(), &x.coords),
            }),
            Certificate::Pair(p) => json!({
                "x": vector_to_json(p.x.space.field(), &p.x.coords),
                "f": vector_to_json(p.f.space.field(), &p.f.coords),
                "in_gx": p.in_gx,
            }),
        };
        let mut obj = json!({
            "value": self.value,
            "exact": self.exact,
            "certificate": cert,
            "evaluations": self.evaluations,
            "upper_bound": self.upper_bound,
        });
        if let Some(s) = self.sampled_lower_bound {
            obj["sampled_lower_bound"] = json!(s);
        }
        obj
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn p_aggregate(p: f64, vals: impl Iterator<Item = f64>) -> f64 {
    Exponent::Finite(p).aggregate(vals)
}

/// (sum_i |f(T_i x)|^p)^(1/p) for a norming pair of the source space.
pub fn pair_value(tuple: &OperatorTuple, pair: &NormingPair, p: f64) -> Result<f64> {
    check_p(p)?;
    if pair.x.coords.len() != tuple.source.dim() {
        return Err(Error::DimensionMismatch {
            expected: tuple.source.dim(),
            got: pair.x.coords.len(),
        });
    }
    if pair.f.coords.len() != tuple.target.dim() {
        return Err(Error::DimensionMismatch {
            expected: tuple.target.dim(),
            got: pair.f.coords.len(),
        });
    }
    Ok(pair_value_coords(tuple, &pair.f.coords, &pair.x.coords, p))
}

fn pair_value_coords(tuple: &OperatorTuple, f: &[Scalar], x: &[Scalar], p: f64) -> f64 {
    p_aggregate(p, tuple.mats.iter().map(|m| pairing(f, &m.matvec(x)).norm()))
}

/// (sum_i ||T_i x||^p)^(1/p) for x in the source space.
pub fn point_value(tuple: &OperatorTuple, x: &SpaceVector, p: f64) -> Result<f64> {
    check_p(p)?;
    if x.space != tuple.source {
        return Err(Error::DimensionMismatch {
            expected: tuple.source.dim(),
            got: x.coords.len(),
        });
    }
    Ok(point_value_coords(tuple, &x.coords, p))
}

fn point_value_coords(tuple: &OperatorTuple, x: &[Scalar], p: f64) -> f64 {
    p_aggregate(p, tuple.mats.iter().map(|m| tuple.target.norm_unchecked(&m.matvec(x))))
}

/// Best norming-pair value at x: the unique functional on smooth points, the
/// best extreme completion where the face is a real polytope, the canonical
/// representative otherwise.
fn radius_value_at(tuple: &OperatorTuple, x: &[Scalar], p: f64) -> (f64, Vec<Scalar>) {
    let fs = match norming_functionals(&tuple.source, x) {
        Ok(fs) => fs,
        Err(_) => return (0.0, crate::scalar::zeros(tuple.source.dim())),
    };
    if fs.is_unique() {
        let f = fs.canonical();
        return (pair_value_coords(tuple, &f, x, p), f);
    }
    if let Ok(exts) = fs.extremes_with_cap(4096) {
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for f in exts {
            let v = pair_value_coords(tuple, &f, x, p);
            if v > best.0 {
                best = (v, f);
            }
        }
        if best.1.is_empty() {
            let f = fs.canonical();
            return (pair_value_coords(tuple, &f, x, p), f);
        }
        return best;
    }
    let f = fs.canonical();
    (pair_value_coords(tuple, &f, x, p), f)
}

fn polyhedral_extra_starts(tuple: &OperatorTuple) -> Vec<Vec<Scalar>> {
    if tuple.source.is_real_polyhedral() {
        if let Ok(pts) = crate::spaces::extreme_points_with_cap(&tuple.source, 256) {
            return pts.into_iter().map(|v| v.coords).collect();
        }
    }
    Vec::new()
}

fn exact_admissible(tuple: &OperatorTuple, radius: bool) -> bool {
    if !tuple.source.is_real_polyhedral() {
        return false;
    }
    if radius {
        extreme_norming_pairs(&tuple.source).is_ok()
    } else {
        extreme_points(&tuple.source).is_ok()
    }
}

/// Operator norm of a k=1 tuple, without the recursive upper-bound report.
fn single_op_norm(tuple: &OperatorTuple, cfg: &AscentConfig) -> f64 {
    debug_assert_eq!(tuple.k(), 1);
    if let Ok(points) = extreme_points(&tuple.source) {
        return points
            .iter()
            .map(|x| point_value_coords(tuple, &x.coords, 1.0))
            .fold(0.0, f64::max);
    }
    let out = ascend_on_sphere(
        &tuple.source,
        |x| point_value_coords(tuple, x, 1.0),
        &AscentConfig { extra_starts: polyhedral_extra_starts(tuple), ..cfg.clone() },
    );
    out.value
}

/// The p-th joint operator norm ||T||_p.
pub fn joint_operator_norm(tuple: &OperatorTuple, p: f64, mode: Mode) -> Result<ComputationResult> {
    joint_operator_norm_with_config(tuple, p, mode, &AscentConfig::default())
}

pub fn joint_operator_norm_with_config(
    tuple: &OperatorTuple,
    p: f64,
    mode: Mode,
    cfg: &AscentConfig,
) -> Result<ComputationResult> {
    check_p(p)?;
    let use_exact = match mode {
        Mode::Exact => true,
        Mode::Optimize => false,
        Mode::Auto => exact_admissible(tuple, false),
    };
    if use_exact {
        let points = extreme_points(&tuple.source)?;
        let mut best_v = 0.0;
        let mut best_x = points[0].clone();
        for x in &points {
            let v = point_value_coords(tuple, &x.coords, p);
            if v > best_v {
                best_v = v;
                best_x = x.clone();
            }
        }
        return Ok(ComputationResult {
            value: best_v,
            certificate: Certificate::Point(best_x),
            exact: true,
            evaluations: points.len(),
            upper_bound: None,
            sampled_lower_bound: None,
        });
    }
    let out = ascend_on_sphere(
        &tuple.source,
        |x| point_value_coords(tuple, x, p),
        &AscentConfig { extra_starts: polyhedral_extra_starts(tuple), ..cfg.clone() },
    );
    let upper = if tuple.k() > 1 {
        Some(p_aggregate(
            p,
            (0..tuple.k()).map(|i| single_op_norm(&tuple.component(i), cfg)),
        ))
    } else {
        None
    };
    Ok(ComputationResult {
        value: out.value,
        certificate: Certificate::Point(SpaceVector {
            space: tuple.source.clone(),
            coords: out.x,
        }),
        exact: false,
        evaluations: out.evaluations,
        upper_bound: upper,
        sampled_lower_bound: None,
    })
}

/// The p-th joint numerical radius w_p(T) of an endomorphism tuple.
pub fn joint_numerical_radius(tuple: &OperatorTuple, p: f64, mode: Mode) -> Result<ComputationResult> {
    joint_numerical_radius_with_config(tuple, p, mode, &AscentConfig::default())
}

pub fn joint_numerical_radius_with_config(
    tuple: &OperatorTuple,
    p: f64,
    mode: Mode,
    cfg: &AscentConfig,
) -> Result<ComputationResult> {
    check_p(p)?;
    if !tuple.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    let use_exact = match mode {
        Mode::Exact => true,
        Mode::Optimize => false,
        Mode::Auto => exact_admissible(tuple, true),
    };
    if use_exact {
        let pairs = extreme_norming_pairs(&tuple.source)?;
        let mut best_v = 0.0;
        let mut best = pairs
            .first()
            .cloned()
            .ok_or_else(|| Error::UnsupportedExact("empty G_X".into()))?;
        for pr in &pairs {
            let v = pair_value_coords(tuple, &pr.f.coords, &pr.x.coords, p);
            if v > best_v {
                best_v = v;
                best = pr.clone();
            }
        }
        return Ok(ComputationResult {
            value: best_v,
            certificate: Certificate::Pair(best),
            exact: true,
            evaluations: pairs.len(),
            upper_bound: None,
            sampled_lower_bound: None,
        });
    }
    let out = ascend_on_sphere(
        &tuple.source,
        |x| radius_value_at(tuple, x, p).0,
        &AscentConfig { extra_starts: polyhedral_extra_starts(tuple), ..cfg.clone() },
    );
    let (best_v, best_f) = radius_value_at(tuple, &out.x, p);
    // Monte-Carlo cross-check over sampled norming pairs
    let sample_count = 256;
    let sampled = sample_norming_pairs(&tuple.source, sample_count, crate::rng::split_seed(cfg.seed, 0x5a17));
    let sampled_lb = sampled
        .iter()
        .map(|pr| pair_value_coords(tuple, &pr.f.coords, &pr.x.coords, p))
        .fold(0.0, f64::max);
    let (value, cert) = if sampled_lb > best_v {
        let best_pair = sampled
            .into_iter()
            .max_by(|a, b| {
                pair_value_coords(tuple, &a.f.coords, &a.x.coords, p)
                    .partial_cmp(&pair_value_coords(tuple, &b.f.coords, &b.x.coords, p))
                    .unwrap()
            })
            .unwrap();
        (sampled_lb, Certificate::Pair(best_pair))
    } else {
        let dual = tuple.source.dual();
        (
            best_v,
            Certificate::Pair(NormingPair {
                x: SpaceVector { space: tuple.source.clone(), coords: out.x },
                f: SpaceVector { space: dual, coords: best_f },
                in_gx: false,
            }),
        )
    };
    Ok(ComputationResult {
        value,
        certificate: cert,
        exact: false,
        evaluations: out.evaluations + sample_count,
        upper_bound: None,
        sampled_lower_bound: Some(sampled_lb),
    })
}

/// Which quantity the grid oracle maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleTarget {
    Norm,
    Radius,
}

/// Exhaustive sweep over an angular grid of S_X; a lower bound within
/// O(resolution) * Lipschitz of the true value. Restricted to real total
/// dimension <= 3 or complex total dimension <= 2.
pub fn grid_oracle(
    tuple: &OperatorTuple,
    p: f64,
    which: OracleTarget,
    resolution: f64,
) -> Result<f64> {
    check_p(p)?;
    if !(resolution > 0.0) {
        return Err(Error::Parse("resolution must be positive".into()));
    }
    if which == OracleTarget::Radius && !tuple.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    let dim = tuple.source.dim();
    let d = real_dim(tuple.source.field(), dim);
    let allowed = match tuple.source.field() {
        Field::Real => dim <= 3,
        Field::Complex => dim <= 2,
    };
    if !allowed {
        return Err(Error::DimensionTooLarge(d));
    }
    let value_at = |u: &[f64]| -> Option<f64> {
        let coords = crate::scalar::from_real_params(tuple.source.field(), u);
        let n = tuple.source.norm_unchecked(&coords);
        if n <= 1e-12 {
            return None;
        }
        let x: Vec<Scalar> = coords.iter().map(|z| z / n).collect();
        Some(match which {
            OracleTarget::Norm => point_value_coords(tuple, &x, p),
            OracleTarget::Radius => radius_value_at(tuple, &x, p).0,
        })
    };
    let mut best: f64 = 0.0;
    let steps = |span: f64| -> usize { (span / resolution).ceil() as usize + 1 };
    use std::f64::consts::{PI, TAU};
    match d {
        1 => {
            for u in [[1.0], [-1.0]] {
                if let Some(v) = value_at(&u) {
                    best = best.max(v);
                }
            }
        }
        2 => {
            for i in 0..steps(TAU) {
                let t = i as f64 * resolution;
                if let Some(v) = value_at(&[t.cos(), t.sin()]) {
                    best = best.max(v);
                }
            }
        }
        3 => {
            for i in 0..steps(PI) {
                let a = i as f64 * resolution;
                for j in 0..steps(TAU) {
                    let b = j as f64 * resolution;
                    let u = [a.cos(), a.sin() * b.cos(), a.sin() * b.sin()];
                    if let Some(v) = value_at(&u) {
                        best = best.max(v);
                    }
                }
            }
        }
        4 => {
            for i in 0..steps(PI) {
                let a = i as f64 * resolution;
                for j in 0..steps(PI) {
                    let b = j as f64 * resolution;
                    for l in 0..steps(TAU) {
                        let c = l as f64 * resolution;
                        let u = [
                            a.cos(),
                            a.sin() * b.cos(),
                            a.sin() * b.sin() * c.cos(),
                            a.sin() * b.sin() * c.sin(),
                        ];
                        if let Some(v) = value_at(&u) {
                            best = best.max(v);
                        }
                    }
                }
            }
        }
        _ => return Err(Error::DimensionTooLarge(d)),
    }
    Ok(best)
}

/// Report of the reflexivity check w_p(T) = w_p(T*).
#[derive(Clone, Debug)]
pub struct AdjointRadiusReport {
    pub value: f64,
    pub adjoint_value: f64,
    pub difference: f64,
    pub tolerance: f64,
    pub exact_both: bool,
    pub pass: bool,
}

impl AdjointRadiusReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "adjoint_value": self.adjoint_value,
            "difference": self.difference,
            "tolerance": self.tolerance,
            "exact_both": self.exact_both,
            "pass": self.pass,
        })
    }
}

/// Compute w_p(T) and w_p(T*) and compare them: tolerance 1e-10 when both
/// sides are exact, 1e-3 otherwise.
pub fn verify_adjoint_radius(tuple: &OperatorTuple, p: f64) -> Result<AdjointRadiusReport> {
    let a = joint_numerical_radius(tuple, p, Mode::Auto)?;
    let b = joint_numerical_radius(&tuple.adjoint(), p, Mode::Auto)?;
    let exact_both = a.exact && b.exact;
    let tolerance = if exact_both { 1e-10 } else { 1e-3 };
    let difference = (a.value - b.value).abs();
    Ok(AdjointRadiusReport {
        value: a.value,
        adjoint_value: b.value,
        difference,
        tolerance,
        exact_both,
        pass: difference <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Matrix;
    use crate::scalar::real;
    use crate::spaces::SpaceDescriptor;

    fn rmat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| real(v)).collect()).collect())
            .unwrap()
    }

    fn diag_projections(space: SpaceDescriptor, k: usize) -> OperatorTuple {
        let m = space.dim();
        let mats = (0..k)
            .map(|i| {
                let mut mt = Matrix::zero(m, m);
                mt.set(i, i, real(1.0));
                mt
            })
            .collect();
        OperatorTuple::new(mats, space.clone(), space).unwrap()
    }

    fn shift_pair_tuple() -> OperatorTuple {
        let x = SpaceDescriptor::l1(2, Field::Real);
        OperatorTuple::new(
            vec![rmat(&[&[0.0, 1.0], &[0.0, 0.0]]), rmat(&[&[0.0, 0.0], &[1.0, 0.0]])],
            x.clone(),
            x,
        )
        .unwrap()
    }

    #[test]
    fn pair_and_point_value_examples() {
        let l2 = SpaceDescriptor::l2(2, Field::Real);
        let id = OperatorTuple::new(vec![Matrix::identity(2)], l2.clone(), l2.clone()).unwrap();
        let x = SpaceVector::new(l2.clone(), vec![real(1.0), real(0.0)]).unwrap();
        let f = SpaceVector::new(l2.clone(), vec![real(1.0), real(0.0)]).unwrap();
        let pair = NormingPair { x: x.clone(), f, in_gx: false };
        assert_eq!(pair_value(&id, &pair, 2.0).unwrap(), 1.0);
        assert_eq!(point_value(&id, &x, 3.0).unwrap(), 1.0);

        // shift pair at ((1,0),(1,1)), p = 1 -> |0| + |1| = 1
        let ts = shift_pair_tuple();
        let x = SpaceVector::new(ts.source.clone(), vec![real(1.0), real(0.0)]).unwrap();
        let f = SpaceVector::new(ts.source.dual(), vec![real(1.0), real(1.0)]).unwrap();
        let pair = NormingPair { x, f, in_gx: true };
        assert_eq!(pair_value(&ts, &pair, 1.0).unwrap(), 1.0);

        // diagonal projections on linf^4 (k = 3) at the all-ones point, p = 2
        let t = diag_projections(SpaceDescriptor::linf(4, Field::Real), 3);
        let x = SpaceVector::new(t.source.clone(), vec![real(1.0); 4]).unwrap();
        assert!((point_value(&t, &x, 2.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_projection_norm_and_radius_closed_form() {
        // ||T||_p = k^(1/p) and w_p(T) = 1 on linf^m
        for m in [3, 4] {
            for k in 1..=m.min(4) {
                for p in [1.0, 2.0, 3.0] {
                    let t = diag_projections(SpaceDescriptor::linf(m, Field::Real), k);
                    let n = joint_operator_norm(&t, p, Mode::Exact).unwrap();
                    assert!(n.exact);
                    assert!((n.value - (k as f64).powf(1.0 / p)).abs() <= 1e-12);
                    let w = joint_numerical_radius(&t, p, Mode::Exact).unwrap();
                    assert!((w.value - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn adjoint_norm_is_one() {
        let t = diag_projections(SpaceDescriptor::linf(4, Field::Real), 3).adjoint();
        assert_eq!(t.source, SpaceDescriptor::l1(4, Field::Real));
        let n = joint_operator_norm(&t, 2.0, Mode::Exact).unwrap();
        assert!((n.value - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn skew_operator_radius_vanishes() {
        let l2 = SpaceDescriptor::l2(2, Field::Real);
        let skew = OperatorTuple::new(vec![rmat(&[&[0.0, 1.0], &[-1.0, 0.0]])], l2.clone(), l2).unwrap();
        let w = joint_numerical_radius(&skew, 2.0, Mode::Optimize).unwrap();
        assert!(w.value <= 1e-8, "{}", w.value);
    }

    #[test]
    fn exact_mode_rejects_smooth_space() {
        let l2 = SpaceDescriptor::l2(2, Field::Real);
        let id = OperatorTuple::new(vec![Matrix::identity(2)], l2.clone(), l2).unwrap();
        assert!(matches!(
            joint_operator_norm(&id, 2.0, Mode::Exact),
            Err(Error::UnsupportedExact(_))
        ));
    }

    #[test]
    fn grid_oracle_identity() {
        let l2 = SpaceDescriptor::l2(2, Field::Real);
        let id = OperatorTuple::new(vec![Matrix::identity(2)], l2.clone(), l2).unwrap();
        let v = grid_oracle(&id, 2.0, OracleTarget::Norm, 1e-2).unwrap();
        assert!((v - 1.0).abs() <= 1e-2);
    }

    #[test]
    fn grid_oracle_radius_on_shift_pair() {
        let ts = shift_pair_tuple();
        let v = grid_oracle(&ts, 1.0, OracleTarget::Radius, 1e-3).unwrap();
        assert!((v - 1.0).abs() <= 2e-3, "{v}");
    }

    #[test]
    fn grid_oracle_rejects_large_dims() {
        let l2 = SpaceDescriptor::l2(4, Field::Real);
        let id = OperatorTuple::new(vec![Matrix::identity(4)], l2.clone(), l2).unwrap();
        assert!(matches!(
            grid_oracle(&id, 2.0, OracleTarget::Norm, 0.1),
            Err(Error::DimensionTooLarge(_))
        ));
    }

    #[test]
    fn adjoint_radius_report_exact() {
        let t = shift_pair_tuple();
        let rep = verify_adjoint_radius(&t, 1.0).unwrap();
        assert!(rep.exact_both);
        assert!(rep.pass, "difference {}", rep.difference);
    }

    #[test]
    fn complex_hilbert_witness_radius() {
        // T_i e_3 = (1/sqrt 2) e_i on complex l2^3: w_2 = 1/(2 sqrt 2)
        let l2 = SpaceDescriptor::l2(3, Field::Complex);
        let mut mats = Vec::new();
        for i in 0..2 {
            let mut m = Matrix::zero(3, 3);
            m.set(i, 2, real(1.0 / 2f64.sqrt()));
            mats.push(m);
        }
        let t = OperatorTuple::new(mats, l2.clone(), l2).unwrap();
        let w = joint_numerical_radius(&t, 2.0, Mode::Optimize).unwrap();
        let want = 1.0 / (2.0 * 2f64.sqrt());
        assert!((w.value - want).abs() <= 1e-4, "{} vs {want}", w.value);
        assert!(!w.exact);
        let n = joint_operator_norm(&t, 2.0, Mode::Optimize).unwrap();
        assert!((n.value - 1.0).abs() <= 1e-6);
    }
}
