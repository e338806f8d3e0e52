//! Sampling of the joint numerical range W(T) in F^k, convexity testing at
//! sample resolution, coordinate projections, and export.

use crate::error::{Error, Result};
use crate::operators::OperatorTuple;
use crate::rng::stream_rng;
use crate::scalar::{pairing, Field, Scalar};
use crate::spaces::{
    extreme_norming_pairs, extreme_points_with_cap, norming_functionals, sample_unit_vector,
    vector_from_json, vector_to_json, NormingPair, SpaceDescriptor, SpaceVector,
};
use rand::Rng;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

/// How a range sample was generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleSource {
    Sampled,
    /// Exact image of G_X; covers only the G_X slice of W(T).
    Enumerated,
}

impl SampleSource {
    fn as_str(self) -> &'static str {
        match self {
            SampleSource::Sampled => "sampled",
            SampleSource::Enumerated => "enumerated",
        }
    }
}

/// A sample of W(T): k-vectors over the field, each tied to the norming pair
/// that generated it.
#[derive(Clone, Debug)]
pub struct RangeSample {
    pub points: Vec<Vec<Scalar>>,
    /// Index into `pairs` of the generating pair of each point.
    pub pair_indices: Vec<usize>,
    pub pairs: Vec<NormingPair>,
    pub space: SpaceDescriptor,
    pub k: usize,
    pub seed: u64,
    pub count: usize,
    pub source: SampleSource,
}

/// Verdict of the midpoint convexity test; resolution-qualified, never an
/// absolute claim.
#[derive(Clone, Debug)]
pub struct ConvexityReport {
    pub convex_at_resolution: bool,
    pub tolerance: f64,
    pub witness: Option<ConvexityWitness>,
}

#[derive(Clone, Debug)]
pub struct ConvexityWitness {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub midpoint: Vec<f64>,
    pub distance: f64,
}

impl ConvexityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "convex_at_resolution": self.convex_at_resolution,
            "tolerance": self.tolerance,
            "witness": self.witness.as_ref().map(|w| json!({
                "a": w.a,
                "b": w.b,
                "midpoint": w.midpoint,
                "distance": w.distance,
            })),
        })
    }
}

fn range_point(tuple: &OperatorTuple, pair: &NormingPair) -> Vec<Scalar> {
    tuple
        .mats
        .iter()
        .map(|m| pairing(&pair.f.coords, &m.matvec(&pair.x.coords)))
        .collect()
}

/// Sample W(T). Sampled mode mixes Gaussian norming pairs with, on real
/// polyhedral spaces, a face-stratified sweep (a random dual extreme
/// functional together with a uniform convex combination of the face vertices
/// it norms). Enumerated mode maps G_X exactly.
pub fn sample_range(
    tuple: &OperatorTuple,
    count: usize,
    seed: u64,
    mode: SampleSource,
) -> Result<RangeSample> {
    if !tuple.is_endomorphism() {
        return Err(Error::NotEndomorphism);
    }
    let space = tuple.source.clone();
    let dual = space.dual();
    let pairs: Vec<NormingPair> = match mode {
        SampleSource::Enumerated => extreme_norming_pairs(&space)?,
        SampleSource::Sampled => {
            let face_data = if space.is_real_polyhedral() {
                let verts = extreme_points_with_cap(&space, 4096).ok();
                let duals = extreme_points_with_cap(&dual, 4096).ok();
                verts.zip(duals)
            } else {
                None
            };
            (0..count)
                .map(|i| {
                    let mut rng = stream_rng(seed, i as u64);
                    // odd indices take the stratified face path when available
                    if let Some((verts, duals)) = face_data.as_ref().filter(|_| i % 2 == 1) {
                        let f = &duals[rng.gen_range(0..duals.len())];
                        let face: Vec<&SpaceVector> = verts
                            .iter()
                            .filter(|v| {
                                let p = pairing(&f.coords, &v.coords);
                                p.re == 1.0 && p.im == 0.0
                            })
                            .collect();
                        if !face.is_empty() {
                            let mut w: Vec<f64> =
                                (0..face.len()).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
                            let s: f64 = w.iter().sum();
                            for v in &mut w {
                                *v /= s;
                            }
                            let mut coords = crate::scalar::zeros(space.dim());
                            for (t, v) in w.iter().zip(&face) {
                                for (c, z) in coords.iter_mut().zip(&v.coords) {
                                    *c += z * *t;
                                }
                            }
                            return NormingPair {
                                x: SpaceVector { space: space.clone(), coords },
                                f: f.clone(),
                                in_gx: false,
                            };
                        }
                    }
                    let x = sample_unit_vector(&space, &mut rng);
                    let f = norming_functionals(&space, &x)
                        .expect("unit vector")
                        .sample(&mut rng);
                    NormingPair {
                        x: SpaceVector { space: space.clone(), coords: x },
                        f: SpaceVector { space: dual.clone(), coords: f },
                        in_gx: false,
                    }
                })
                .collect()
        }
    };
    let points: Vec<Vec<Scalar>> = pairs.iter().map(|pr| range_point(tuple, pr)).collect();
    let n = points.len();
    Ok(RangeSample {
        points,
        pair_indices: (0..n).collect(),
        pairs,
        space,
        k: tuple.k(),
        seed,
        count: n,
        source: mode,
    })
}

/// Flatten a range point to real geometry coordinates (2k reals for complex).
pub fn flatten_point(field: Field, p: &[Scalar]) -> Vec<f64> {
    crate::scalar::to_real_params(field, p)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Diagonal of the bounding box of the flattened sample; 5% of this is the
/// default convexity tolerance.
pub fn bounding_box_diagonal(sample: &RangeSample) -> f64 {
    let field = sample.space.field();
    let flat: Vec<Vec<f64>> = sample.points.iter().map(|p| flatten_point(field, p)).collect();
    if flat.is_empty() {
        return 0.0;
    }
    let d = flat[0].len();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in &flat {
        for j in 0..d {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    (0..d).map(|j| (hi[j] - lo[j]).powi(2)).sum::<f64>().sqrt()
}

/// Midpoint convexity test: draw `trials` random point pairs, measure the
/// distance from each midpoint to the nearest sample point, and report the
/// worst witness exceeding `tolerance`.
pub fn convexity_report(
    sample: &RangeSample,
    trials: usize,
    tolerance: f64,
    seed: u64,
) -> Result<ConvexityReport> {
    if sample.points.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(tolerance > 0.0) {
        return Err(Error::Parse("tolerance must be positive".into()));
    }
    let field = sample.space.field();
    let flat: Vec<Vec<f64>> = sample.points.iter().map(|p| flatten_point(field, p)).collect();
    let mut worst: Option<ConvexityWitness> = None;
    for t in 0..trials {
        let mut rng = stream_rng(seed, t as u64);
        let i = rng.gen_range(0..flat.len());
        let j = rng.gen_range(0..flat.len());
        let mid: Vec<f64> = flat[i].iter().zip(&flat[j]).map(|(a, b)| (a + b) / 2.0).collect();
        let d = flat.iter().map(|p| dist(&mid, p)).fold(f64::INFINITY, f64::min);
        if d > tolerance && worst.as_ref().map_or(true, |w| d > w.distance) {
            worst = Some(ConvexityWitness {
                a: flat[i].clone(),
                b: flat[j].clone(),
                midpoint: mid,
                distance: d,
            });
        }
    }
    Ok(ConvexityReport {
        convex_at_resolution: worst.is_none(),
        tolerance,
        witness: worst,
    })
}

/// Coordinate projections of the sample, one k=1 sample per component,
/// preserving generating-pair indices.
pub fn component_ranges(sample: &RangeSample) -> Result<Vec<RangeSample>> {
    if sample.points.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok((0..sample.k)
        .map(|i| RangeSample {
            points: sample.points.iter().map(|p| vec![p[i]]).collect(),
            pair_indices: sample.pair_indices.clone(),
            pairs: sample.pairs.clone(),
            space: sample.space.clone(),
            k: 1,
            seed: sample.seed,
            count: sample.count,
            source: sample.source,
        })
        .collect())
}

/// Export format for range samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub fn range_sample_to_json(sample: &RangeSample) -> Value {
    let field = sample.space.field();
    json!({
        "space": sample.space.to_json(),
        "k": sample.k,
        "seed": sample.seed,
        "count": sample.count,
        "source": sample.source.as_str(),
        "points": sample.points.iter().map(|p| vector_to_json(field, p)).collect::<Vec<_>>(),
        "pair_indices": sample.pair_indices,
        "pairs": sample.pairs.iter().map(|pr| json!({
            "x": vector_to_json(field, &pr.x.coords),
            "f": vector_to_json(field, &pr.f.coords),
            "in_gx": pr.in_gx,
        })).collect::<Vec<_>>(),
    })
}

pub fn range_sample_from_json(v: &Value) -> Result<RangeSample> {
    let space = SpaceDescriptor::from_json(
        v.get("space").ok_or_else(|| Error::Parse("sample needs space".into()))?,
    )?;
    let field = space.field();
    let dual = space.dual();
    let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| Error::Parse("sample needs k".into()))? as usize;
    let seed = v.get("seed").and_then(Value::as_u64).unwrap_or(0);
    let count = v.get("count").and_then(Value::as_u64).unwrap_or(0) as usize;
    let source = match v.get("source").and_then(Value::as_str) {
        Some("enumerated") => SampleSource::Enumerated,
        _ => SampleSource::Sampled,
    };
    let points = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("sample needs points".into()))?
        .iter()
        .map(|p| vector_from_json(field, p))
        .collect::<Result<Vec<_>>>()?;
    let pair_indices = v
        .get("pair_indices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("sample needs pair_indices".into()))?
        .iter()
        .map(|e| e.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse("bad pair index".into())))
        .collect::<Result<Vec<_>>>()?;
    let pairs = v
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("sample needs pairs".into()))?
        .iter()
        .map(|pj| {
            let x = vector_from_json(field, pj.get("x").ok_or_else(|| Error::Parse("pair needs x".into()))?)?;
            let f = vector_from_json(field, pj.get("f").ok_or_else(|| Error::Parse("pair needs f".into()))?)?;
            Ok(NormingPair {
                x: SpaceVector { space: space.clone(), coords: x },
                f: SpaceVector { space: dual.clone(), coords: f },
                in_gx: pj.get("in_gx").and_then(Value::as_bool).unwrap_or(false),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RangeSample { points, pair_indices, pairs, space, k, seed, count, source })
}

/// Write the sample to `path`. CSV columns are re_1,..,re_k (plus im_i for
/// complex) and pair_index, after a header row; JSON round-trips bit-exactly.
pub fn export_range(sample: &RangeSample, path: &Path, format: ExportFormat) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    match format {
        ExportFormat::Json => {
            let text = serde_json::to_string_pretty(&range_sample_to_json(sample))
                .map_err(|e| Error::Parse(e.to_string()))?;
            file.write_all(text.as_bytes())?;
            file.write_all(b"\n")?;
        }
        ExportFormat::Csv => {
            let complex = sample.space.field() == Field::Complex;
            let mut header: Vec<String> = Vec::new();
            for i in 1..=sample.k {
                header.push(format!("re_{i}"));
                if complex {
                    header.push(format!("im_{i}"));
                }
            }
            header.push("pair_index".into());
            writeln!(file, "{}", header.join(","))?;
            for (p, &idx) in sample.points.iter().zip(&sample.pair_indices) {
                let mut row: Vec<String> = Vec::new();
                for z in p {
                    row.push(format!("{}", z.re));
                    if complex {
                        row.push(format!("{}", z.im));
                    }
                }
                row.push(format!("{idx}"));
                writeln!(file, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Matrix;
    use crate::scalar::real;

    fn shift_pair_tuple() -> OperatorTuple {
        let x = SpaceDescriptor::l1(2, Field::Real);
        let t = Matrix::from_rows(vec![vec![real(0.0), real(1.0)], vec![real(0.0), real(0.0)]]).unwrap();
        let s = Matrix::from_rows(vec![vec![real(0.0), real(0.0)], vec![real(1.0), real(0.0)]]).unwrap();
        OperatorTuple::new(vec![t, s], x.clone(), x).unwrap()
    }

    fn id_zero_tuple(space: SpaceDescriptor) -> OperatorTuple {
        let n = space.dim();
        OperatorTuple::new(vec![Matrix::identity(n), Matrix::zero(n, n)], space.clone(), space)
            .unwrap()
    }

    #[test]
    fn shift_pair_range_lies_on_the_two_segments() {
        // W(T) = {+-(a, b): a, b >= 0, a + b = 1}
        let t = shift_pair_tuple();
        let sample = sample_range(&t, 2000, 11, SampleSource::Sampled).unwrap();
        for p in &sample.points {
            let (u, v) = (p[0].re, p[1].re);
            let on_plus = (u + v - 1.0).abs() <= 1e-10 && u >= -1e-10 && v >= -1e-10;
            let on_minus = (u + v + 1.0).abs() <= 1e-10 && u <= 1e-10 && v <= 1e-10;
            assert!(on_plus || on_minus, "({u}, {v}) off the segments");
        }
    }

    #[test]
    fn shift_pair_range_is_not_convex() {
        let t = shift_pair_tuple();
        let sample = sample_range(&t, 4000, 11, SampleSource::Sampled).unwrap();
        let report = convexity_report(&sample, 400, 0.05, 3).unwrap();
        assert!(!report.convex_at_resolution);
        let w = report.witness.unwrap();
        assert!(w.distance > 0.05);
    }

    #[test]
    fn singleton_range_is_convex() {
        let t = id_zero_tuple(SpaceDescriptor::l1(3, Field::Real));
        let sample = sample_range(&t, 500, 4, SampleSource::Sampled).unwrap();
        for p in &sample.points {
            assert!((p[0] - real(1.0)).norm() <= 1e-12);
            assert!(p[1].norm() <= 1e-12);
        }
        let report = convexity_report(&sample, 100, 1e-6, 5).unwrap();
        assert!(report.convex_at_resolution);
    }

    #[test]
    fn points_reproducible_from_pairs() {
        let t = shift_pair_tuple();
        let sample = sample_range(&t, 300, 9, SampleSource::Sampled).unwrap();
        for (p, &idx) in sample.points.iter().zip(&sample.pair_indices) {
            let again = range_point(&t, &sample.pairs[idx]);
            for (a, b) in p.iter().zip(&again) {
                assert!((a - b).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn component_projection_necessary_condition() {
        let t = shift_pair_tuple();
        let sample = sample_range(&t, 1000, 2, SampleSource::Sampled).unwrap();
        let comps = component_ranges(&sample).unwrap();
        assert_eq!(comps.len(), 2);
        // each projection covers [-1, 1]
        for c in &comps {
            let vals: Vec<f64> = c.points.iter().map(|p| p[0].re).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(lo <= -0.99 && hi >= 0.99, "[{lo}, {hi}]");
        }
    }

    #[test]
    fn enumerated_mode_maps_g_x() {
        let t = shift_pair_tuple();
        let sample = sample_range(&t, 0, 0, SampleSource::Enumerated).unwrap();
        assert_eq!(sample.points.len(), 8);
        assert!(sample.pairs.iter().all(|p| p.in_gx));
    }

    #[test]
    fn json_export_roundtrip() {
        let t = shift_pair_tuple();
        let sample = sample_range(&t, 50, 1, SampleSource::Sampled).unwrap();
        let dir = std::env::temp_dir().join("jointrad_range_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sample.json");
        export_range(&sample, &path, ExportFormat::Json).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let back = range_sample_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.points, sample.points);
        assert_eq!(back.pair_indices, sample.pair_indices);
    }

    #[test]
    fn csv_column_counts() {
        let dir = std::env::temp_dir().join("jointrad_range_test");
        std::fs::create_dir_all(&dir).unwrap();

        let t = shift_pair_tuple();
        let sample = sample_range(&t, 10, 1, SampleSource::Sampled).unwrap();
        let path = dir.join("real.csv");
        export_range(&sample, &path, ExportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 11); // header + 10 rows
        assert_eq!(lines[0].split(',').count(), 3);

        let c2 = SpaceDescriptor::l2(2, Field::Complex);
        let tc = id_zero_tuple(c2);
        let sc = sample_range(&tc, 10, 1, SampleSource::Sampled).unwrap();
        let path = dir.join("complex.csv");
        export_range(&sc, &path, ExportFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap().split(',').count(), 5);
    }

    #[test]
    fn negation_symmetry() {
        let t = shift_pair_tuple();
        let neg = OperatorTuple::combine(&t, &t, real(-1.0), real(0.0)).unwrap();
        let a = sample_range(&t, 200, 7, SampleSource::Sampled).unwrap();
        let b = sample_range(&neg, 200, 7, SampleSource::Sampled).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            for (u, v) in p.iter().zip(q) {
                assert!((u + v).norm() <= 1e-12);
            }
        }
    }
}
