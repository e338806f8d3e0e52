//! The (p,k)-th joint numerical index: closed-form table, theoretical bounds,
//! witness tuples, and min-max estimation.
//!
//! The index n_(p,k)(X) is the infimum of w_p(T)/||T||_p over nonzero
//! k-tuples. The estimator reports an upper bound on that infimum together
//! with a theoretical lower bound; the two are only claimed equal when they
//! pinch within tolerance.

use crate::error::{Error, Result};
use crate::jointcalc::{
    joint_numerical_radius_with_config, joint_operator_norm_with_config, Mode,
};
use crate::operators::{lift_direct_sum, Matrix, OperatorTuple};
use crate::optimize::{compass_minimize, AscentConfig};
use crate::rng::{split_seed, stream_rng};
use crate::scalar::{real, Field, Scalar};
use crate::spaces::{Exponent, SpaceDescriptor};
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

const PINCH_TOL: f64 = 1e-3;

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    Ok(())
}

fn k_root(k: usize, p: f64) -> f64 {
    (k as f64).powf(1.0 / p)
}

/// The classical numerical index n(X) when it is known for the descriptor:
/// 1 for l1^m and linf^m, 0 for real l2^m, 1/2 for complex l2^m (m >= 2),
/// 1 in dimension one. Absent otherwise.
pub fn classical_index(space: &SpaceDescriptor) -> Option<f64> {
    match space {
        SpaceDescriptor::Lq { dim: 1, .. } => Some(1.0),
        SpaceDescriptor::Lq { q, field, .. } => match q {
            Exponent::Infinity => Some(1.0),
            Exponent::Finite(v) if *v == 1.0 => Some(1.0),
            Exponent::Finite(v) if *v == 2.0 => {
                Some(if *field == Field::Complex { 0.5 } else { 0.0 })
            }
            _ => None,
        },
        SpaceDescriptor::DirectSum { .. } => None,
    }
}

/// A known exact index value together with the identity it instantiates.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub value: f64,
    pub citation: String,
}

/// Exact n_(p,k)(X) where a formula is known. Hypothesis guards are literal:
/// linf^m needs k <= m; l1^m needs k = 2, m >= 2; complex l2^m needs
/// (p = 2, k < m, m >= 3) or (k = 2, p > 2, m >= 3). k = 1 falls back to the
/// classical index. No extrapolation outside these ranges.
pub fn closed_form_index(space: &SpaceDescriptor, p: f64, k: usize) -> Result<Option<ClosedForm>> {
    check_p(p)?;
    check_k(k)?;
    if k == 1 {
        return Ok(classical_index(space).map(|value| ClosedForm {
            value,
            citation: "n_(1,1)(X) = n(X), the classical numerical index".into(),
        }));
    }
    let SpaceDescriptor::Lq { q, dim, field } = space else {
        return Ok(None);
    };
    let (m, f) = (*dim, *field);
    match q {
        Exponent::Infinity if k <= m => Ok(Some(ClosedForm {
            value: 1.0 / k_root(k, p),
            citation: "n_(p,k)(linf^m) = 1/k^(1/p) for 1 <= k <= m".into(),
        })),
        Exponent::Finite(v) if *v == 1.0 && k == 2 && m >= 2 => Ok(Some(ClosedForm {
            value: 0.5f64.powf(1.0 / p),
            citation: "n_(p,2)(l1^m) = 1/2^(1/p) for m >= 2".into(),
        })),
        Exponent::Finite(v) if *v == 2.0 && f == Field::Complex && m >= 3 => {
            if p == 2.0 && k < m {
                Ok(Some(ClosedForm {
                    value: 0.5 / (k as f64).sqrt(),
                    citation: "n_(2,k)(complex l2^m) = 1/(2 sqrt(k)) for 1 <= k < m".into(),
                }))
            } else if k == 2 && p > 2.0 {
                Ok(Some(ClosedForm {
                    value: 0.5f64.powf(1.0 + 1.0 / p),
                    citation: "n_(p,2)(complex l2^m) = 1/2^(1+1/p) for p > 2, m >= 3".into(),
                }))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

/// Closed forms for the classical infinite sequence spaces, recorded for
/// reference only (the descriptors here are finite-dimensional). `name` is one
/// of "linf", "l1", "l2_complex".
pub fn sequence_space_closed_form(name: &str, p: f64, k: usize) -> Option<f64> {
    if !(p >= 1.0) || !p.is_finite() || k == 0 {
        return None;
    }
    match name {
        "linf" => Some(1.0 / k_root(k, p)),
        "l1" if k == 2 => Some(0.5f64.powf(1.0 / p)),
        "l1" if k == 1 => Some(1.0),
        "l2_complex" if p == 2.0 => Some(0.5 / (k as f64).sqrt()),
        "l2_complex" if k == 2 && p > 2.0 => Some(0.5f64.powf(1.0 + 1.0 / p)),
        "l2_complex" if k == 1 => Some(0.5),
        _ => None,
    }
}

/// Theoretical sandwich for n_(p,k)(X) with the identity that produced each
/// side.
#[derive(Clone, Debug)]
pub struct IndexBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_provenance: String,
    pub upper_provenance: String,
}

impl IndexBounds {
    pub fn to_json(&self) -> Value {
        json!({
            "lower": self.lower,
            "upper": self.upper,
            "provenance": {
                "lower": self.lower_provenance,
                "upper": self.upper_provenance,
            },
        })
    }
}

pub fn index_bounds(space: &SpaceDescriptor, p: f64, k: usize) -> Result<IndexBounds> {
    check_p(p)?;
    check_k(k)?;
    let kr = k_root(k, p);
    let (lower, lower_provenance) = match classical_index(space) {
        Some(n) => (n / kr, format!("n(X)/k^(1/p) with n(X) = {n}")),
        None if space.field() == Field::Complex => (
            1.0 / (std::f64::consts::E * kr),
            "1/(e k^(1/p)), complex spaces have n(X) >= 1/e".to_string(),
        ),
        None => (0.0, "trivial: the index is nonnegative".to_string()),
    };
    let mut upper = 1.0;
    let mut upper_provenance = "w_p(T) <= ||T||_p".to_string();
    if let Some(n) = classical_index(space) {
        if n < upper {
            upper = n;
            upper_provenance = format!("n_(p,k)(X) <= n(X) = {n}");
        }
    }
    if let SpaceDescriptor::DirectSum { summands, outer_q, .. } = space {
        for s in summands {
            let v = match closed_form_index(s, p, k)? {
                Some(cf) => cf.value,
                None => index_bounds(s, p, k)?.upper,
            };
            if v < upper {
                upper = v;
                upper_provenance =
                    "n_(p,k)(X) <= inf over summands of n_(p,k)(X_i)".to_string();
            }
        }
        if let Exponent::Finite(q) = outer_q {
            if *q > 1.0 {
                let v = (1.0 / q).max(1.0 - 1.0 / q);
                if v < upper {
                    upper = v;
                    upper_provenance =
                        "n_(p,k)(Z) <= max(1/q, 1/q') for lq-sums with 1 < q < inf".to_string();
                }
            }
        }
    }
    Ok(IndexBounds { lower, upper, lower_provenance, upper_provenance })
}

fn basis_matrix(n: usize, i: usize, j: usize, c: f64) -> Matrix {
    let mut m = Matrix::zero(n, n);
    m.set(i, j, real(c));
    m
}

/// An explicit normalized tuple whose radius-to-norm ratio attains the closed
/// form for (space, p, k). Errors with NoWitnessKnown when no closed form is
/// implemented for the triple.
pub fn witness_tuple(space: &SpaceDescriptor, p: f64, k: usize) -> Result<OperatorTuple> {
    check_p(p)?;
    check_k(k)?;
    let SpaceDescriptor::Lq { q, dim, field } = space else {
        return Err(Error::NoWitnessKnown);
    };
    let (m, f) = (*dim, *field);
    if k == 1 {
        let mat = match q {
            _ if m == 1 => Matrix::identity(1),
            Exponent::Infinity => Matrix::identity(m),
            Exponent::Finite(v) if *v == 1.0 => Matrix::identity(m),
            Exponent::Finite(v) if *v == 2.0 && f == Field::Complex => {
                basis_matrix(m, 0, m - 1, 1.0)
            }
            Exponent::Finite(v) if *v == 2.0 => {
                // skew rotation generator: norm 1, vanishing radius
                let mut s = Matrix::zero(m, m);
                s.set(0, 1, real(1.0));
                s.set(1, 0, real(-1.0));
                s
            }
            _ => return Err(Error::NoWitnessKnown),
        };
        return OperatorTuple::new(vec![mat], space.clone(), space.clone());
    }
    match q {
        Exponent::Infinity if k <= m => {
            // scaled diagonal projections: ||T||_p = 1 exactly, w_p = k^(-1/p)
            let c = 1.0 / k_root(k, p);
            let mats = (0..k).map(|i| basis_matrix(m, i, i, c)).collect();
            OperatorTuple::new(mats, space.clone(), space.clone())
        }
        Exponent::Finite(v) if *v == 1.0 && k == 2 && m >= 2 => {
            // conjugate the linf^2 projection pair through the isometry
            // U: l1^2 -> linf^2, (a,b) -> (a+b, a-b), then embed top-left
            let c = 0.5f64.powf(1.0 / p);
            let mut t1 = Matrix::zero(m, m);
            let mut t2 = Matrix::zero(m, m);
            for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                t1.set(i, j, real(0.5 * c));
                let sign = if i == j { 0.5 } else { -0.5 };
                t2.set(i, j, real(sign * c));
            }
            OperatorTuple::new(vec![t1, t2], space.clone(), space.clone())
        }
        Exponent::Finite(v) if *v == 2.0 && f == Field::Complex && m >= 3 => {
            if p == 2.0 && k < m {
                // T_i e_m = (1/sqrt(k)) e_i, zero elsewhere; ||T||_2 = 1
                let c = 1.0 / (k as f64).sqrt();
                let mats = (0..k).map(|i| basis_matrix(m, i, m - 1, c)).collect();
                OperatorTuple::new(mats, space.clone(), space.clone())
            } else if k == 2 && p > 2.0 {
                // last-coordinate loading pair; ||T||_p = 1 for p > 2
                let c = 0.5f64.powf(1.0 / p);
                let mats = vec![basis_matrix(m, 0, m - 1, c), basis_matrix(m, 1, m - 1, c)];
                OperatorTuple::new(mats, space.clone(), space.clone())
            } else {
                Err(Error::NoWitnessKnown)
            }
        }
        _ => Err(Error::NoWitnessKnown),
    }
}

fn random_tuple<R: Rng>(space: &SpaceDescriptor, k: usize, rng: &mut R) -> OperatorTuple {
    let n = space.dim();
    let complex = space.field() == Field::Complex;
    let mats = (0..k)
        .map(|_| {
            let mut m = Matrix::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
                    m.set(i, j, Scalar::new(re, im));
                }
            }
            m
        })
        .collect();
    OperatorTuple::new(mats, space.clone(), space.clone()).expect("square shapes")
}

fn tuple_to_params(t: &OperatorTuple) -> Vec<f64> {
    let complex = t.field() == Field::Complex;
    let n = t.source.dim();
    let mut out = Vec::with_capacity(t.k() * n * n * if complex { 2 } else { 1 });
    for m in &t.mats {
        for i in 0..n {
            for j in 0..n {
                let z = m.get(i, j);
                out.push(z.re);
                if complex {
                    out.push(z.im);
                }
            }
        }
    }
    out
}

fn tuple_from_params(space: &SpaceDescriptor, k: usize, params: &[f64]) -> OperatorTuple {
    let n = space.dim();
    let complex = space.field() == Field::Complex;
    let stride = if complex { 2 } else { 1 };
    let mut mats = Vec::with_capacity(k);
    let mut idx = 0;
    for _ in 0..k {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let re = params[idx];
                let im = if complex { params[idx + 1] } else { 0.0 };
                idx += stride;
                m.set(i, j, Scalar::new(re, im));
            }
        }
        mats.push(m);
    }
    OperatorTuple::new(mats, space.clone(), space.clone()).expect("square shapes")
}

/// Result of the index search: a certified lower bound and the best ratio
/// found (an upper bound on the infimum).
#[derive(Clone, Debug)]
pub struct IndexEstimate {
    pub estimate: f64,
    pub lower_bound: f64,
    pub closed_form: Option<ClosedForm>,
    /// Best tuple found, rescaled to joint norm one.
    pub witness: OperatorTuple,
    pub method: String,
    pub evaluations: usize,
    pub seed: u64,
    /// Estimate meets the lower bound within tolerance, certifying the value.
    pub pinched: bool,
    /// Inner radius values came from the optimizer, so the ratio may
    /// underestimate.
    pub inner_approximate: bool,
}

impl IndexEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "estimate": self.estimate,
            "lower_bound": self.lower_bound,
            "closed_form": self.closed_form.as_ref().map(|c| c.value),
            "citation": self.closed_form.as_ref().map(|c| c.citation.clone()),
            "pinched": self.pinched,
            "inner_approximate": self.inner_approximate,
            "witness": self.witness.to_json(),
            "evaluations": self.evaluations,
            "seed": self.seed,
        })
    }
}

/// Minimize the scale-invariant ratio w_p(T)/||T||_p by compass search over
/// matrix entries, started from the known witness (padded from k = 1 when
/// needed) plus seeded random tuples. `budget` caps the number of outer ratio
/// evaluations; partial results are returned when it runs out.
pub fn estimate_index(
    space: &SpaceDescriptor,
    p: f64,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<IndexEstimate> {
    check_p(p)?;
    check_k(k)?;
    let bounds = index_bounds(space, p, k)?;
    let closed_form = closed_form_index(space, p, k)?;

    let inner_cfg = AscentConfig {
        starts: 10,
        max_iters: 80,
        seed: split_seed(seed, 1),
        ..Default::default()
    };

    let mut starts: Vec<OperatorTuple> = Vec::new();
    match witness_tuple(space, p, k) {
        Ok(w) => starts.push(w),
        Err(_) => {
            if let Ok(w1) = witness_tuple(space, p, 1) {
                if let Ok(padded) = w1.pad(k) {
                    starts.push(padded);
                }
            }
        }
    }
    let random_needed = 4usize.saturating_sub(starts.len());
    let mut rng = stream_rng(split_seed(seed, 2), 0);
    for _ in 0..random_needed {
        starts.push(random_tuple(space, k, &mut rng));
    }

    let ratio = |params: &[f64]| -> Option<f64> {
        let t = tuple_from_params(space, k, params);
        let nrm = joint_operator_norm_with_config(&t, p, Mode::Auto, &inner_cfg).ok()?;
        if nrm.value <= 1e-8 {
            return None;
        }
        let rad = joint_numerical_radius_with_config(&t, p, Mode::Auto, &inner_cfg).ok()?;
        Some(rad.value / nrm.value)
    };

    let probe = joint_numerical_radius_with_config(&starts[0], p, Mode::Auto, &inner_cfg)?;
    let inner_approximate = !probe.exact;

    let per_start = (budget.max(1) / starts.len()).max(1);
    let mut evaluations = 0usize;
    let mut best_params = tuple_to_params(&starts[0]);
    let mut best_value = f64::INFINITY;
    for s in &starts {
        let out = compass_minimize(tuple_to_params(s), per_start, &ratio);
        evaluations += out.evaluations;
        if out.value < best_value {
            best_value = out.value;
            best_params = out.params;
        }
    }

    let best_tuple = tuple_from_params(space, k, &best_params);
    let nrm = joint_operator_norm_with_config(&best_tuple, p, Mode::Auto, &inner_cfg)?;
    let witness = {
        let inv = real(1.0 / nrm.value);
        let mats = best_tuple.mats.iter().map(|m| m.scaled(inv)).collect();
        OperatorTuple::new(mats, space.clone(), space.clone())?
    };
    let pinched = best_value - bounds.lower <= PINCH_TOL;
    let method = format!(
        "compass search over matrix entries, {} inner evaluation",
        if inner_approximate { "ascent" } else { "enumerated" }
    );
    Ok(IndexEstimate {
        estimate: best_value,
        lower_bound: bounds.lower,
        closed_form,
        witness,
        method,
        evaluations,
        seed,
        pinched,
        inner_approximate,
    })
}

/// Per-slot verdicts for the norm/radius invariance of direct-sum lifts.
#[derive(Clone, Debug)]
pub struct DirectSumReport {
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    /// Largest deviation seen: absolute for exact comparisons, one-sided
    /// shortfall of the lifted value otherwise.
    pub max_gap: f64,
    pub pass: bool,
}

impl DirectSumReport {
    pub fn to_json(&self) -> Value {
        json!({
            "trials": self.trials,
            "checks": self.checks,
            "failures": self.failures,
            "max_gap": self.max_gap,
            "pass": self.pass,
        })
    }
}

/// Lift random tuples from each summand and check that the joint norm and
/// radius are preserved: equality within 1e-10 when both sides enumerate,
/// lifted value >= summand value - 1e-4 when the optimizer is involved.
pub fn verify_direct_sum_theorems(
    space: &SpaceDescriptor,
    p: f64,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<DirectSumReport> {
    check_p(p)?;
    check_k(k)?;
    let SpaceDescriptor::DirectSum { summands, .. } = space else {
        return Err(Error::UnsupportedExact("direct sum required".into()));
    };
    let cfg = AscentConfig { starts: 12, max_iters: 80, seed: split_seed(seed, 3), ..Default::default() };
    let mut checks = 0usize;
    let mut failures = 0usize;
    let mut max_gap = 0.0f64;
    for (slot, summand) in summands.iter().enumerate() {
        for t in 0..trials {
            let mut rng = stream_rng(split_seed(seed, slot as u64), t as u64);
            let tuple = random_tuple(summand, k, &mut rng);
            let lifted = lift_direct_sum(&tuple, space, slot)?;
            for radius in [false, true] {
                let (sv, hv) = if radius {
                    (
                        joint_numerical_radius_with_config(&tuple, p, Mode::Auto, &cfg)?,
                        joint_numerical_radius_with_config(&lifted, p, Mode::Auto, &cfg)?,
                    )
                } else {
                    (
                        joint_operator_norm_with_config(&tuple, p, Mode::Auto, &cfg)?,
                        joint_operator_norm_with_config(&lifted, p, Mode::Auto, &cfg)?,
                    )
                };
                checks += 1;
                let (gap, ok) = if sv.exact && hv.exact {
                    let g = (sv.value - hv.value).abs();
                    (g, g <= 1e-10)
                } else if sv.exact {
                    // host value is a certified lower bound of the true
                    // (equal) value, so it may not exceed the summand side
                    let shortfall = (sv.value - hv.value).max(0.0);
                    let excess = (hv.value - sv.value).max(0.0);
                    (shortfall.max(excess), shortfall <= 1e-4 && excess <= 1e-10)
                } else {
                    let g = (sv.value - hv.value).max(0.0);
                    (g, g <= 1e-4)
                };
                max_gap = max_gap.max(gap);
                if !ok {
                    failures += 1;
                }
            }
        }
    }
    Ok(DirectSumReport { trials, checks, failures, max_gap, pass: failures == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jointcalc::joint_numerical_radius;

    #[test]
    fn classical_values() {
        assert_eq!(classical_index(&SpaceDescriptor::l1(3, Field::Real)), Some(1.0));
        assert_eq!(classical_index(&SpaceDescriptor::linf(4, Field::Complex)), Some(1.0));
        assert_eq!(classical_index(&SpaceDescriptor::l2(3, Field::Real)), Some(0.0));
        assert_eq!(classical_index(&SpaceDescriptor::l2(3, Field::Complex)), Some(0.5));
        assert_eq!(classical_index(&SpaceDescriptor::l2(1, Field::Complex)), Some(1.0));
        let q3 = SpaceDescriptor::lq(Exponent::new(3.0).unwrap(), 3, Field::Real);
        assert_eq!(classical_index(&q3), None);
    }

    #[test]
    fn closed_form_examples() {
        let linf4 = SpaceDescriptor::linf(4, Field::Real);
        let v = closed_form_index(&linf4, 2.0, 3).unwrap().unwrap();
        assert!((v.value - 1.0 / 3.0f64.sqrt()).abs() <= 1e-15);

        let l1_3 = SpaceDescriptor::l1(3, Field::Real);
        let v = closed_form_index(&l1_3, 1.0, 2).unwrap().unwrap();
        assert!((v.value - 0.5).abs() <= 1e-15);

        let c3 = SpaceDescriptor::l2(3, Field::Complex);
        let v = closed_form_index(&c3, 3.0, 2).unwrap().unwrap();
        assert!((v.value - 0.5f64.powf(4.0 / 3.0)).abs() <= 1e-15);
        let v = closed_form_index(&c3, 2.0, 2).unwrap().unwrap();
        assert!((v.value - 0.5 / 2.0f64.sqrt()).abs() <= 1e-15);
    }

    #[test]
    fn hypothesis_guards_are_literal() {
        let linf3 = SpaceDescriptor::linf(3, Field::Real);
        assert!(closed_form_index(&linf3, 2.0, 4).unwrap().is_none());
        let l1_3 = SpaceDescriptor::l1(3, Field::Real);
        assert!(closed_form_index(&l1_3, 2.0, 3).unwrap().is_none());
        let c2 = SpaceDescriptor::l2(2, Field::Complex);
        assert!(closed_form_index(&c2, 3.0, 2).unwrap().is_none());
        let c3 = SpaceDescriptor::l2(3, Field::Complex);
        // p = 2 needs k < m; k = 3 = m fails both hypotheses
        assert!(closed_form_index(&c3, 2.0, 3).unwrap().is_none());
        let r3 = SpaceDescriptor::l2(3, Field::Real);
        assert!(closed_form_index(&r3, 2.0, 2).unwrap().is_none());
    }

    #[test]
    fn bounds_examples() {
        let linf4 = SpaceDescriptor::linf(4, Field::Real);
        let b = index_bounds(&linf4, 2.0, 3).unwrap();
        assert!((b.lower - 1.0 / 3.0f64.sqrt()).abs() <= 1e-15);
        assert!((b.upper - 1.0).abs() <= 1e-15);

        let r3 = SpaceDescriptor::l2(3, Field::Real);
        let b = index_bounds(&r3, 2.0, 2).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));

        let sum = SpaceDescriptor::direct_sum(
            vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l2(2, Field::Real)],
            Exponent::new(2.0).unwrap(),
        );
        let b = index_bounds(&sum, 2.0, 2).unwrap();
        assert!(b.upper <= 0.5 + 1e-15);
        assert!(b.lower <= b.upper);

        let q3 = SpaceDescriptor::lq(Exponent::new(3.0).unwrap(), 2, Field::Complex);
        let b = index_bounds(&q3, 2.0, 2).unwrap();
        assert!((b.lower - 1.0 / (std::f64::consts::E * 2.0f64.sqrt())).abs() <= 1e-15);
    }

    #[test]
    fn linf_witness_ratio_is_exact() {
        let linf4 = SpaceDescriptor::linf(4, Field::Real);
        for (p, k) in [(1.0, 2usize), (2.0, 3), (3.0, 4)] {
            let w = witness_tuple(&linf4, p, k).unwrap();
            let nrm = crate::jointcalc::joint_operator_norm(&w, p, Mode::Exact).unwrap();
            let rad = joint_numerical_radius(&w, p, Mode::Exact).unwrap();
            assert!((nrm.value - 1.0).abs() <= 1e-12);
            let expect = 1.0 / k_root(k, p);
            assert!((rad.value - expect).abs() <= 1e-12, "p={p} k={k}: {}", rad.value);
        }
    }

    #[test]
    fn l1_witness_ratio_is_exact() {
        for m in [2usize, 3] {
            let l1m = SpaceDescriptor::l1(m, Field::Real);
            for p in [1.0, 2.0, 4.0] {
                let w = witness_tuple(&l1m, p, 2).unwrap();
                let nrm = crate::jointcalc::joint_operator_norm(&w, p, Mode::Exact).unwrap();
                let rad = joint_numerical_radius(&w, p, Mode::Exact).unwrap();
                assert!((nrm.value - 1.0).abs() <= 1e-12);
                let expect = 0.5f64.powf(1.0 / p);
                assert!((rad.value - expect).abs() <= 1e-12, "m={m} p={p}: {}", rad.value);
            }
        }
    }

    #[test]
    fn complex_hilbert_witnesses() {
        let c3 = SpaceDescriptor::l2(3, Field::Complex);
        let cfg = AscentConfig { starts: 24, ..Default::default() };

        let w = witness_tuple(&c3, 2.0, 2).unwrap();
        let nrm = joint_operator_norm_with_config(&w, 2.0, Mode::Optimize, &cfg).unwrap();
        assert!((nrm.value - 1.0).abs() <= 1e-6);
        let rad = joint_numerical_radius_with_config(&w, 2.0, Mode::Optimize, &cfg).unwrap();
        assert!((rad.value - 0.5 / 2.0f64.sqrt()).abs() <= 1e-4, "{}", rad.value);

        let w = witness_tuple(&c3, 3.0, 2).unwrap();
        let nrm = joint_operator_norm_with_config(&w, 3.0, Mode::Optimize, &cfg).unwrap();
        assert!((nrm.value - 1.0).abs() <= 1e-6);
        let rad = joint_numerical_radius_with_config(&w, 3.0, Mode::Optimize, &cfg).unwrap();
        assert!((rad.value - 0.5f64.powf(4.0 / 3.0)).abs() <= 1e-4, "{}", rad.value);
    }

    #[test]
    fn no_witness_for_unknown_cases() {
        let q3 = SpaceDescriptor::lq(Exponent::new(3.0).unwrap(), 2, Field::Real);
        assert!(matches!(witness_tuple(&q3, 2.0, 2), Err(Error::NoWitnessKnown)));
        let l1_3 = SpaceDescriptor::l1(3, Field::Real);
        assert!(matches!(witness_tuple(&l1_3, 2.0, 3), Err(Error::NoWitnessKnown)));
    }

    #[test]
    fn estimate_classical_l1() {
        let l1_2 = SpaceDescriptor::l1(2, Field::Real);
        let est = estimate_index(&l1_2, 2.0, 1, 300, 1).unwrap();
        assert!(est.estimate >= 1.0 - 1e-9 && est.estimate <= 1.0 + 1e-3, "{}", est.estimate);
        assert!(est.pinched);
        assert!(!est.inner_approximate);
        assert!(est.lower_bound - 1e-9 <= est.estimate);
    }

    #[test]
    fn estimate_real_hilbert_degenerates() {
        let r3 = SpaceDescriptor::l2(3, Field::Real);
        let est = estimate_index(&r3, 2.0, 2, 40, 1).unwrap();
        assert_eq!(est.lower_bound, 0.0);
        assert!(est.estimate <= 1e-6, "{}", est.estimate);
        assert!(est.inner_approximate);
    }

    #[test]
    fn estimate_json_shape() {
        let linf2 = SpaceDescriptor::linf(2, Field::Real);
        let est = estimate_index(&linf2, 1.0, 2, 60, 7).unwrap();
        let j = est.to_json();
        for key in ["estimate", "lower_bound", "closed_form", "citation", "pinched",
                    "inner_approximate", "witness", "evaluations", "seed"] {
            assert!(j.get(key).is_some(), "missing {key}");
        }
        assert!(est.estimate <= 0.5 + 1e-9);
    }

    #[test]
    fn direct_sum_lifts_match_exactly_on_l1() {
        let host = SpaceDescriptor::direct_sum(
            vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l1(2, Field::Real)],
            Exponent::new(1.0).unwrap(),
        );
        let report = verify_direct_sum_theorems(&host, 2.0, 2, 3, 5).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(report.max_gap <= 1e-10);
        assert_eq!(report.checks, 12);
    }

    #[test]
    fn zero_tuple_lift_is_zero() {
        let host = SpaceDescriptor::direct_sum(
            vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l2(2, Field::Real)],
            Exponent::Infinity,
        );
        let z = OperatorTuple::zero(2, SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l1(2, Field::Real));
        let lifted = lift_direct_sum(&z, &host, 0).unwrap();
        let nrm = crate::jointcalc::joint_operator_norm(&lifted, 2.0, Mode::Auto).unwrap();
        assert_eq!(nrm.value, 0.0);
    }

    #[test]
    fn sequence_space_table() {
        assert_eq!(sequence_space_closed_form("linf", 2.0, 4), Some(0.5));
        assert_eq!(sequence_space_closed_form("l1", 1.0, 2), Some(0.5));
        assert_eq!(sequence_space_closed_form("l2_complex", 2.0, 4), Some(0.25));
        assert_eq!(sequence_space_closed_form("l1", 2.0, 3), None);
    }
}
