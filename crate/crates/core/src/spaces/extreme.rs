//! Exact extreme-point enumeration for real polyhedral spaces, and the G_X
//! pair enumeration built on top of it.

use super::{SpaceDescriptor, SpaceVector, NormingPair};
use crate::error::{Error, Result};
use crate::scalar::{real, zeros, Field, Scalar};

/// Default cap on enumerated entry counts; linf^m extreme sets grow as 2^m.
pub const DEFAULT_EXTREME_CAP: usize = 1 << 20;

fn require_real_polyhedral(space: &SpaceDescriptor) -> Result<()> {
    if space.field() != Field::Real {
        return Err(Error::UnsupportedExact(
            "extreme-point enumeration requires the real field".into(),
        ));
    }
    if !space.is_real_polyhedral() {
        return Err(Error::UnsupportedExact(
            "extreme-point enumeration requires every factor to have q in {1, inf}".into(),
        ));
    }
    Ok(())
}

/// Number of extreme points, computed before enumerating so the cap can be
/// enforced cheaply.
fn count_extreme(space: &SpaceDescriptor) -> u128 {
    match space {
        SpaceDescriptor::Lq { q, dim, .. } => {
            if q.is_infinite() {
                1u128 << (*dim).min(127)
            } else {
                2 * (*dim as u128)
            }
        }
        SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
            if outer_q.is_infinite() {
                summands.iter().map(count_extreme).product()
            } else {
                summands.iter().map(count_extreme).sum()
            }
        }
    }
}

fn enumerate(space: &SpaceDescriptor) -> Vec<Vec<Scalar>> {
    match space {
        SpaceDescriptor::Lq { q, dim, .. } => {
            if q.is_infinite() {
                // {-1, +1}^dim
                let mut out = Vec::with_capacity(1 << dim);
                for mask in 0u64..(1u64 << dim) {
                    let v: Vec<Scalar> = (0..*dim)
                        .map(|j| real(if mask >> j & 1 == 1 { -1.0 } else { 1.0 }))
                        .collect();
                    out.push(v);
                }
                out
            } else {
                // l1: +-e_j
                let mut out = Vec::with_capacity(2 * dim);
                for j in 0..*dim {
                    for s in [1.0, -1.0] {
                        let mut v = zeros(*dim);
                        v[j] = real(s);
                        out.push(v);
                    }
                }
                out
            }
        }
        SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
            let block_sets: Vec<Vec<Vec<Scalar>>> = summands.iter().map(enumerate).collect();
            if outer_q.is_infinite() {
                // cartesian product across blocks
                let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
                for set in &block_sets {
                    let mut next = Vec::with_capacity(out.len() * set.len());
                    for prefix in &out {
                        for block in set {
                            let mut v = prefix.clone();
                            v.extend_from_slice(block);
                            next.push(v);
                        }
                    }
                    out = next;
                }
                out
            } else {
                // l1-sum: union of summand sets embedded with zeros elsewhere
                let total = space.dim();
                let mut out = Vec::new();
                let mut offset = 0;
                for (s, set) in summands.iter().zip(&block_sets) {
                    for block in set {
                        let mut v = zeros(total);
                        v[offset..offset + s.dim()].copy_from_slice(block);
                        out.push(v);
                    }
                    offset += s.dim();
                }
                out
            }
        }
    }
}

/// E_X for real polyhedral spaces, as an exact finite list.
pub fn extreme_points(space: &SpaceDescriptor) -> Result<Vec<SpaceVector>> {
    extreme_points_with_cap(space, DEFAULT_EXTREME_CAP)
}

pub fn extreme_points_with_cap(space: &SpaceDescriptor, cap: usize) -> Result<Vec<SpaceVector>> {
    require_real_polyhedral(space)?;
    let count = count_extreme(space);
    if count > cap as u128 {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(enumerate(space)
        .into_iter()
        .map(|coords| SpaceVector { space: space.clone(), coords })
        .collect())
}

/// The full finite set G_X = {(x, f): x in E_X, f in E_{X*}, f(x) = 1}.
pub fn extreme_norming_pairs(space: &SpaceDescriptor) -> Result<Vec<NormingPair>> {
    extreme_norming_pairs_with_cap(space, DEFAULT_EXTREME_CAP)
}

pub fn extreme_norming_pairs_with_cap(
    space: &SpaceDescriptor,
    cap: usize,
) -> Result<Vec<NormingPair>> {
    let dual = space.dual();
    let points = extreme_points_with_cap(space, cap)?;
    let functionals = extreme_points_with_cap(&dual, cap)?;
    let mut out = Vec::new();
    for x in &points {
        for f in &functionals {
            // entries are 0 or +-1, so the pairing is exact
            let p: Scalar = crate::scalar::pairing(&f.coords, &x.coords);
            if p.re == 1.0 && p.im == 0.0 {
                out.push(NormingPair { x: x.clone(), f: f.clone(), in_gx: true });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Exponent;
    use std::collections::HashSet;

    fn key(v: &[Scalar]) -> Vec<i64> {
        v.iter().map(|z| z.re.round() as i64).collect()
    }

    #[test]
    fn l1_square_vertices() {
        let x = SpaceDescriptor::l1(2, Field::Real);
        let pts = extreme_points(&x).unwrap();
        let got: HashSet<Vec<i64>> = pts.iter().map(|p| key(&p.coords)).collect();
        let want: HashSet<Vec<i64>> =
            [vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn linf_square_vertices() {
        let x = SpaceDescriptor::linf(2, Field::Real);
        let pts = extreme_points(&x).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            assert!(p.coords.iter().all(|z| z.re.abs() == 1.0));
        }
    }

    #[test]
    fn l1_sum_matches_flat_l1() {
        // [l1^2 (+) l1^2]_l1 is isometric to l1^4
        let sum = SpaceDescriptor::direct_sum(
            vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l1(2, Field::Real)],
            Exponent::Finite(1.0),
        );
        let flat = SpaceDescriptor::l1(4, Field::Real);
        let a: HashSet<Vec<i64>> = extreme_points(&sum).unwrap().iter().map(|p| key(&p.coords)).collect();
        let b: HashSet<Vec<i64>> = extreme_points(&flat).unwrap().iter().map(|p| key(&p.coords)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn extreme_points_closed_under_negation_and_unit_norm() {
        let spaces = [
            SpaceDescriptor::l1(3, Field::Real),
            SpaceDescriptor::linf(3, Field::Real),
            SpaceDescriptor::direct_sum(
                vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::linf(2, Field::Real)],
                Exponent::Infinity,
            ),
        ];
        for s in spaces {
            let pts = extreme_points(&s).unwrap();
            let set: HashSet<Vec<i64>> = pts.iter().map(|p| key(&p.coords)).collect();
            assert_eq!(set.len(), pts.len(), "no duplicates");
            for p in &pts {
                assert_eq!(p.norm(), 1.0);
                let neg: Vec<i64> = key(&p.coords).iter().map(|v| -v).collect();
                assert!(set.contains(&neg));
            }
        }
    }

    #[test]
    fn smooth_factor_rejected() {
        let x = SpaceDescriptor::l2(3, Field::Real);
        assert!(matches!(extreme_points(&x), Err(Error::UnsupportedExact(_))));
        let c = SpaceDescriptor::l1(2, Field::Complex);
        assert!(matches!(extreme_points(&c), Err(Error::UnsupportedExact(_))));
    }

    #[test]
    fn cap_enforced() {
        let x = SpaceDescriptor::linf(25, Field::Real);
        assert!(matches!(extreme_points(&x), Err(Error::CapExceeded { .. })));
        assert!(extreme_points_with_cap(&SpaceDescriptor::linf(4, Field::Real), 8).is_err());
    }

    #[test]
    fn g_x_of_l1_square() {
        // 8 pairs: ((+-1,0),(+-1,+-1)) and ((0,+-1),(+-1,+-1)) with f(x) = 1
        let x = SpaceDescriptor::l1(2, Field::Real);
        let pairs = extreme_norming_pairs(&x).unwrap();
        assert_eq!(pairs.len(), 8);
        for pr in &pairs {
            assert!(pr.in_gx);
            let p = pr.pairing();
            assert_eq!((p.re, p.im), (1.0, 0.0));
        }
        let with_e1: Vec<_> = pairs
            .iter()
            .filter(|p| p.x.coords[0].re == 1.0 && p.x.coords[1].re == 0.0)
            .collect();
        assert_eq!(with_e1.len(), 2); // f = (1, +-1)
        for p in with_e1 {
            assert_eq!(p.f.coords[0].re, 1.0);
        }
    }

    #[test]
    fn g_x_of_linf_square() {
        let x = SpaceDescriptor::linf(2, Field::Real);
        let pairs = extreme_norming_pairs(&x).unwrap();
        assert_eq!(pairs.len(), 8);
    }
}
