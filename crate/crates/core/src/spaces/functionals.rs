//! Norming functionals J(x) = {f : ||f||_* = 1, f(x) = ||x||}, evaluated
//! through the factor structure. Functionals are stored as acting-coordinate
//! vectors with the bilinear pairing sum f_i x_i; the Hilbert duality map is
//! therefore the coordinatewise conjugate.

use super::{extreme_points_with_cap, Exponent, SpaceDescriptor, DEFAULT_EXTREME_CAP};
use crate::error::{Error, Result};
use crate::scalar::{phase_conj, real, zeros, Field, Scalar};
use rand::Rng;

/// Relative tolerance for argmax ties in linf factors.
const TIE_TOL: f64 = 1e-12;

/// The set J(x) of norming functionals of a nonzero x, with three access
/// paths: a canonical representative, seeded sampling over the face, and
/// exact extreme-point enumeration where the face is a real polytope.
#[derive(Clone, Debug)]
pub struct FunctionalSet {
    space: SpaceDescriptor,
    x: Vec<Scalar>,
    norm: f64,
}

impl FunctionalSet {
    pub fn new(space: &SpaceDescriptor, x: &[Scalar]) -> Result<Self> {
        let norm = space.norm(x)?;
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(FunctionalSet { space: space.clone(), x: x.to_vec(), norm })
    }

    /// Norm of the underlying vector; every returned functional f satisfies
    /// f(x) = this value with dual norm 1.
    pub fn vector_norm(&self) -> f64 {
        self.norm
    }

    /// True when J(x) is a singleton (every factor met along nonzero blocks is
    /// smooth and no linf/l1 face freedom arises).
    pub fn is_unique(&self) -> bool {
        is_unique(&self.space, &self.x, self.norm)
    }

    /// Deterministic representative of J(x): the duality-map functional on
    /// smooth factors, sign-on-support (zeros elsewhere) on l1 factors, the
    /// lowest-index argmax coordinate on linf factors.
    pub fn canonical(&self) -> Vec<Scalar> {
        canonical(&self.space, &self.x, self.norm)
    }

    /// Random element of J(x): free l1 signs uniform (+-1, or a uniform phase
    /// over the complex field), simplex-uniform weights over supporting faces.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<Scalar> {
        sample(&self.space, &self.x, self.norm, rng)
    }

    /// All extreme points of the face J(x), when finite (real field, with
    /// every source of freedom polyhedral). Smooth factors contribute their
    /// unique functional.
    pub fn extremes(&self) -> Result<Vec<Vec<Scalar>>> {
        self.extremes_with_cap(DEFAULT_EXTREME_CAP)
    }

    pub fn extremes_with_cap(&self, cap: usize) -> Result<Vec<Vec<Scalar>>> {
        let out = extremes(&self.space, &self.x, self.norm, cap)?;
        if out.len() > cap {
            return Err(Error::CapExceeded { count: out.len() as u128, cap });
        }
        Ok(out)
    }
}

fn is_unique(space: &SpaceDescriptor, x: &[Scalar], norm: f64) -> bool {
    match space {
        SpaceDescriptor::Lq { q, .. } => match q {
            Exponent::Infinity => {
                let m: Vec<f64> = x.iter().map(|z| z.norm()).collect();
                m.iter().filter(|&&v| v >= norm * (1.0 - TIE_TOL)).count() == 1
            }
            Exponent::Finite(qv) if *qv == 1.0 => x.iter().all(|z| z.norm() > 0.0),
            _ => true,
        },
        SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
            let (norms, blocks) = block_norms(summands, x);
            match outer_q {
                Exponent::Infinity => {
                    let winners: Vec<usize> = (0..summands.len())
                        .filter(|&b| norms[b] >= norm * (1.0 - TIE_TOL))
                        .collect();
                    winners.len() == 1
                        && is_unique(&summands[winners[0]], blocks[winners[0]], norms[winners[0]])
                }
                Exponent::Finite(qv) if *qv == 1.0 => summands
                    .iter()
                    .zip(&blocks)
                    .zip(&norms)
                    .all(|((s, b), &n)| n > 0.0 && is_unique(s, b, n)),
                _ => summands
                    .iter()
                    .zip(&blocks)
                    .zip(&norms)
                    .all(|((s, b), &n)| n == 0.0 || is_unique(s, b, n)),
            }
        }
    }
}

fn block_norms<'a>(
    summands: &[SpaceDescriptor],
    x: &'a [Scalar],
) -> (Vec<f64>, Vec<&'a [Scalar]>) {
    let mut norms = Vec::with_capacity(summands.len());
    let mut blocks = Vec::with_capacity(summands.len());
    let mut offset = 0;
    for s in summands {
        let b = &x[offset..offset + s.dim()];
        norms.push(s.norm_unchecked(b));
        blocks.push(b);
        offset += s.dim();
    }
    (norms, blocks)
}

fn canonical(space: &SpaceDescriptor, x: &[Scalar], norm: f64) -> Vec<Scalar> {
    match space {
        SpaceDescriptor::Lq { q, dim, .. } => match q {
            Exponent::Infinity => {
                let j = x
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                    .map(|(i, _)| i)
                    .unwrap();
                // ties break to the lowest index via max_by keeping the first max
                let j = x.iter().position(|z| z.norm() >= x[j].norm()).unwrap();
                let mut f = zeros(*dim);
                f[j] = phase_conj(x[j]);
                f
            }
            Exponent::Finite(qv) if *qv == 1.0 => x.iter().map(|&z| phase_conj(z)).collect(),
            Exponent::Finite(qv) => x
                .iter()
                .map(|&z| phase_conj(z) * (z.norm() / norm).powf(qv - 1.0))
                .collect(),
        },
        SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
            let (norms, blocks) = block_norms(summands, x);
            let mut f = zeros(x.len());
            let offsets: Vec<usize> = space.blocks().iter().map(|&(o, _)| o).collect();
            match outer_q {
                Exponent::Infinity => {
                    let b = norms
                        .iter()
                        .position(|&n| n >= norm * (1.0 - TIE_TOL))
                        .unwrap();
                    let g = canonical(&summands[b], blocks[b], norms[b]);
                    f[offsets[b]..offsets[b] + g.len()].copy_from_slice(&g);
                }
                Exponent::Finite(qv) if *qv == 1.0 => {
                    for b in 0..summands.len() {
                        if norms[b] > 0.0 {
                            let g = canonical(&summands[b], blocks[b], norms[b]);
                            f[offsets[b]..offsets[b] + g.len()].copy_from_slice(&g);
                        }
                    }
                }
                Exponent::Finite(qv) => {
                    for b in 0..summands.len() {
                        if norms[b] > 0.0 {
                            let scale = (norms[b] / norm).powf(qv - 1.0);
                            let g = canonical(&summands[b], blocks[b], norms[b]);
                            for (i, gi) in g.iter().enumerate() {
                                f[offsets[b] + i] = gi * scale;
                            }
                        }
                    }
                }
            }
            f
        }
    }
}

fn random_phase<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Real => real(if rng.gen::<bool>() { 1.0 } else { -1.0 }),
        Field::Complex => {
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            Scalar::new(t.cos(), t.sin())
        }
    }
}

/// Uniform point of the probability simplex over `n` slots.
fn simplex_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    for v in &mut w {
        *v /= s;
    }
    w
}

fn sample<R: Rng>(space: &SpaceDescriptor, x: &[Scalar], norm: f64, rng: &mut R) -> Vec<Scalar> {
    let field = space.field();
    match space {
        SpaceDescriptor::Lq { q, .. } => match q {
            Exponent::Infinity => {
                let winners: Vec<usize> = (0..x.len())
                    .filter(|&j| x[j].norm() >= norm * (1.0 - TIE_TOL))
                    .collect();
                let w = simplex_weights(winners.len(), rng);
                let mut f = zeros(x.len());
                for (t, &j) in w.iter().zip(&winners) {
                    f[j] = phase_conj(x[j]) * *t;
                }
                f
            }
            Exponent::Finite(qv) if *qv == 1.0 => x
                .iter()
                .map(|&z| if z.norm() > 0.0 { phase_conj(z) } else { random_phase(field, rng) })
                .collect(),
            _ => canonical(space, x, norm),
        },
        SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
            let (norms, blocks) = block_norms(summands, x);
            let offsets: Vec<usize> = space.blocks().iter().map(|&(o, _)| o).collect();
            let mut f = zeros(x.len());
            match outer_q {
                Exponent::Infinity => {
                    let winners: Vec<usize> = (0..summands.len())
                        .filter(|&b| norms[b] >= norm * (1.0 - TIE_TOL))
                        .collect();
                    let w = simplex_weights(winners.len(), rng);
                    for (t, &b) in w.iter().zip(&winners) {
                        let g = sample(&summands[b], blocks[b], norms[b], rng);
                        for (i, gi) in g.iter().enumerate() {
                            f[offsets[b] + i] = gi * *t;
                        }
                    }
                }
                Exponent::Finite(qv) if *qv == 1.0 => {
                    for b in 0..summands.len() {
                        if norms[b] > 0.0 {
                            let g = sample(&summands[b], blocks[b], norms[b], rng);
                            f[offsets[b]..offsets[b] + g.len()].copy_from_slice(&g);
                        } else {
                            // zero block: the face is the whole dual ball of
                            // the block; draw a dual unit vector
                            let dual = summands[b].dual();
                            let g = super::sampling::sample_unit_vector(&dual, rng);
                            f[offsets[b]..offsets[b] + g.len()].copy_from_slice(&g);
                        }
                    }
                }
                Exponent::Finite(qv) => {
                    for b in 0..summands.len() {
                        if norms[b] > 0.0 {
                            let scale = (norms[b] / norm).powf(qv - 1.0);
                            let g = sample(&summands[b], blocks[b], norms[b], rng);
                            for (i, gi) in g.iter().enumerate() {
                                f[offsets[b] + i] = gi * scale;
                            }
                        }
                    }
                }
            }
            f
        }
    }
}

fn cross_product(sets: Vec<Vec<Vec<Scalar>>>, cap: usize) -> Result<Vec<Vec<Scalar>>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for set in sets {
        let count = out.len() as u128 * set.len() as u128;
        if count > cap as u128 {
            return Err(Error::CapExceeded { count, cap });
        }
        let mut next = Vec::with_capacity(count as usize);
        for prefix in &out {
            for block in &set {
                let mut v = prefix.clone();
                v.extend_from_slice(block);
                next.push(v);
            }
        }
        out = next;
    }
    Ok(out)
}

fn extremes(
    space: &SpaceDescriptor,
    x: &[Scalar],
    norm: f64,
    cap: usize,
) -> Result<Vec<Vec<Scalar>>> {
    let field = space.field();
    match space {
        SpaceDescriptor::Lq { q, dim, .. } => match q {
            Exponent::Infinity => {
                let winners: Vec<usize> = (0..x.len())
                    .filter(|&j| x[j].norm() >= norm * (1.0 - TIE_TOL))
                    .collect();
                Ok(winners
                    .into_iter()
                    .map(|j| {
                        let mut f = zeros(*dim);
                        f[j] = phase_conj(x[j]);
                        f
                    })
                    .collect())
            }
            Exponent::Finite(qv) if *qv == 1.0 => {
                let free: Vec<usize> = (0..x.len()).filter(|&j| x[j].norm() == 0.0).collect();
                if !free.is_empty() && field == Field::Complex {
                    return Err(Error::UnsupportedExact(
                        "complex l1 face has infinitely many extreme points".into(),
                    ));
                }
                let count = 1u128 << free.len().min(127);
                if count > cap as u128 {
                    return Err(Error::CapExceeded { count, cap });
                }
                let base: Vec<Scalar> = x.iter().map(|&z| phase_conj(z)).collect();
                let mut out = Vec::with_capacity(count as usize);
                for mask in 0u64..(1u64 << free.len()) {
                    let mut f = base.clone();
                    for (bit, &j) in free.iter().enumerate() {
                        f[j] = real(if mask >> bit & 1 == 1 { -1.0 } else { 1.0 });
                    }
                    out.push(f);
                }
                Ok(out)
            }
            _ => Ok(vec![canonical(space, x, norm)]),
        },
        SpaceDescriptor::DirectSum { summands, outer_q, .. } => {
            let (norms, blocks) = block_norms(summands, x);
            let offsets: Vec<usize> = space.blocks().iter().map(|&(o, _)| o).collect();
            let total = x.len();
            match outer_q {
                Exponent::Infinity => {
                    // extreme points concentrate on a single argmax block
                    let mut out = Vec::new();
                    for b in 0..summands.len() {
                        if norms[b] >= norm * (1.0 - TIE_TOL) {
                            for g in extremes(&summands[b], blocks[b], norms[b], cap)? {
                                let mut f = zeros(total);
                                f[offsets[b]..offsets[b] + g.len()].copy_from_slice(&g);
                                out.push(f);
                            }
                        }
                    }
                    Ok(out)
                }
                Exponent::Finite(qv) if *qv == 1.0 => {
                    let mut sets = Vec::with_capacity(summands.len());
                    for b in 0..summands.len() {
                        if norms[b] > 0.0 {
                            sets.push(extremes(&summands[b], blocks[b], norms[b], cap)?);
                        } else {
                            // zero block: whole dual ball of the block
                            let dual = summands[b].dual();
                            sets.push(
                                extreme_points_with_cap(&dual, cap)?
                                    .into_iter()
                                    .map(|v| v.coords)
                                    .collect(),
                            );
                        }
                    }
                    cross_product(sets, cap)
                }
                Exponent::Finite(qv) => {
                    let mut sets = Vec::with_capacity(summands.len());
                    for b in 0..summands.len() {
                        if norms[b] > 0.0 {
                            let scale = (norms[b] / norm).powf(qv - 1.0);
                            sets.push(
                                extremes(&summands[b], blocks[b], norms[b], cap)?
                                    .into_iter()
                                    .map(|g| g.into_iter().map(|z| z * scale).collect())
                                    .collect(),
                            );
                        } else {
                            sets.push(vec![zeros(summands[b].dim())]);
                        }
                    }
                    cross_product(sets, cap)
                }
            }
        }
    }
}
