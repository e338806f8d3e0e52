//! Field scalars. All coordinates are stored as `Complex64`; vectors attached
//! to a real space keep a zero imaginary part.

use num_complex::Complex64;

pub type Scalar = Complex64;

/// Scalar field of a space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

/// conj(z)/|z|, or 0 for z = 0. Multiplying by the argument recovers |z|
/// under the bilinear pairing, which is what norming functionals need.
pub fn phase_conj(z: Scalar) -> Scalar {
    let m = z.norm();
    if m == 0.0 {
        Scalar::new(0.0, 0.0)
    } else {
        z.conj() / m
    }
}

/// Bilinear pairing sum f_i * x_i (no conjugation).
pub fn pairing(f: &[Scalar], x: &[Scalar]) -> Scalar {
    debug_assert_eq!(f.len(), x.len());
    f.iter().zip(x).map(|(a, b)| a * b).sum()
}

pub fn zeros(n: usize) -> Vec<Scalar> {
    vec![Scalar::new(0.0, 0.0); n]
}

pub fn real(v: f64) -> Scalar {
    Scalar::new(v, 0.0)
}

/// Real parametrization length of an n-dim vector over the field.
pub fn real_dim(field: Field, n: usize) -> usize {
    match field {
        Field::Real => n,
        Field::Complex => 2 * n,
    }
}

pub fn to_real_params(field: Field, x: &[Scalar]) -> Vec<f64> {
    match field {
        Field::Real => x.iter().map(|z| z.re).collect(),
        Field::Complex => x.iter().flat_map(|z| [z.re, z.im]).collect(),
    }
}

pub fn from_real_params(field: Field, p: &[f64]) -> Vec<Scalar> {
    match field {
        Field::Real => p.iter().map(|&v| Scalar::new(v, 0.0)).collect(),
        Field::Complex => p.chunks(2).map(|c| Scalar::new(c[0], c[1])).collect(),
    }
}
