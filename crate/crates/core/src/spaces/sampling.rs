//! Seeded Monte-Carlo cover of the norming-pair set.

use super::{norming_functionals, NormingPair, SpaceDescriptor, SpaceVector};
use crate::rng::stream_rng;
use crate::scalar::{Field, Scalar};
use rand::Rng;
use rand_distr::StandardNormal;

/// Field-Gaussian vector normalized to S_X.
pub fn sample_unit_vector<R: Rng>(space: &SpaceDescriptor, rng: &mut R) -> Vec<Scalar> {
    let dim = space.dim();
    loop {
        let coords: Vec<Scalar> = (0..dim)
            .map(|_| match space.field() {
                Field::Real => Scalar::new(rng.sample(StandardNormal), 0.0),
                Field::Complex => {
                    Scalar::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                }
            })
            .collect();
        let n = space.norm_unchecked(&coords);
        if n > 1e-8 {
            return coords.iter().map(|z| z / n).collect();
        }
    }
}

/// `count` norming pairs, deterministic for a fixed seed; pair i is drawn from
/// its own counter-derived stream.
pub fn sample_norming_pairs(
    space: &SpaceDescriptor,
    count: usize,
    seed: u64,
) -> Vec<NormingPair> {
    let dual = space.dual();
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = sample_unit_vector(space, &mut rng);
            let fs = norming_functionals(space, &x).expect("unit vector is nonzero");
            let f = fs.sample(&mut rng);
            NormingPair {
                x: SpaceVector { space: space.clone(), coords: x },
                f: SpaceVector { space: dual.clone(), coords: f },
                in_gx: false,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Exponent;

    #[test]
    fn hilbert_pairs_are_conjugates() {
        let s = SpaceDescriptor::l2(2, Field::Real);
        let pairs = sample_norming_pairs(&s, 10, 7);
        assert_eq!(pairs.len(), 10);
        for p in &pairs {
            for (f, x) in p.f.coords.iter().zip(&p.x.coords) {
                assert!((f - x.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pairs_satisfy_invariants() {
        let spaces = [
            SpaceDescriptor::l1(2, Field::Real),
            SpaceDescriptor::linf(3, Field::Real),
            SpaceDescriptor::l2(3, Field::Complex),
            SpaceDescriptor::direct_sum(
                vec![SpaceDescriptor::l1(2, Field::Real), SpaceDescriptor::l2(2, Field::Real)],
                Exponent::Finite(2.0),
            ),
        ];
        for s in &spaces {
            for p in sample_norming_pairs(s, 100, 1) {
                assert!((p.x.norm() - 1.0).abs() <= 1e-12);
                assert!((p.f.norm() - 1.0).abs() <= 1e-12);
                let v = p.pairing();
                assert!((v.re - 1.0).abs() <= 1e-12 && v.im.abs() <= 1e-12);
                assert!(!p.in_gx);
            }
        }
    }

    #[test]
    fn linf_samples_support_argmax() {
        let s = SpaceDescriptor::linf(3, Field::Real);
        for p in sample_norming_pairs(&s, 5, 2) {
            let max = p.x.coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (j, f) in p.f.coords.iter().enumerate() {
                if f.norm() > 0.0 {
                    assert!(p.x.coords[j].norm() >= max * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = SpaceDescriptor::l1(3, Field::Real);
        let a = sample_norming_pairs(&s, 20, 42);
        let b = sample_norming_pairs(&s, 20, 42);
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.x.coords, q.x.coords);
            assert_eq!(p.f.coords, q.f.coords);
        }
    }
}
