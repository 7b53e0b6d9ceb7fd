//! Seeded random instances: curves of a prescribed Kodaira type, smooth
//! rational points, invertible bundles of a given degree, bimodules.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bimodules::BimodConcrete;
use crate::curves::{classify_kodaira, enumerate_points, CurveW, KodairaType, PointW};
use crate::error::{Error, Result};
use crate::exactmath::{Field, Matrix, Scalar};
use crate::linebundles::{lb_make, LineBundleRep, NRLineBundle};
use crate::polyring::MultiPoly;

/// Draws before giving up on a rejection-sampling loop.
pub const RETRIES: usize = 200;

pub fn random_scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Fp(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Fp2 { p, .. } => field.adjoin(rng.gen_range(0..p) as i64, rng.gen_range(0..p) as i64).expect("in range"),
        Field::Q => field.from_i64(rng.gen_range(-9..=9)),
    }
}

pub fn random_nonzero<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    loop {
        let x = random_scalar(field, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_gl2<R: Rng>(field: Field, rng: &mut R) -> Matrix {
    loop {
        let rows = vec![
            vec![random_scalar(field, rng), random_scalar(field, rng)],
            vec![random_scalar(field, rng), random_scalar(field, rng)],
        ];
        let m = Matrix::from_rows(field, &rows).expect("2x2");
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// Form of bidegree (2,2) with coefficient c[i][j] on x0^(2-i) x1^i y0^(2-j) y1^j.
pub fn form_from_grid(field: Field, c: &[[Scalar; 3]; 3]) -> MultiPoly {
    let mut f = MultiPoly::zero(field, &[2, 2]);
    for (i, row) in c.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let (i, j) = (i as u32, j as u32);
            f.add_term(vec![2 - i, i, 2 - j, j], x.clone()).expect("homogeneous");
        }
    }
    f
}

/// Form of bidegree (1,1) with coefficients on x0y0, x0y1, x1y0, x1y1.
pub fn form11(field: Field, c: [&Scalar; 4]) -> MultiPoly {
    let mut f = MultiPoly::zero(field, &[1, 1]);
    let exps = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]];
    for (e, x) in exps.iter().zip(c) {
        f.add_term(e.to_vec(), x.clone()).expect("homogeneous");
    }
    f
}

fn random_form11<R: Rng>(field: Field, rng: &mut R) -> MultiPoly {
    loop {
        let c: Vec<Scalar> = (0..4).map(|_| random_scalar(field, rng)).collect();
        // x0y0 x1y1 - x0y1 x1y0 != 0: the graph of a Moebius map
        if !(&(&c[0] * &c[3]) - &(&c[1] * &c[2])).is_zero() {
            return form11(field, [&c[0], &c[1], &c[2], &c[3]]);
        }
    }
}

/// Diagonal x0 y1 - x1 y0.
pub fn diagonal(field: Field) -> MultiPoly {
    form11(field, [&field.zero(), &field.one(), &field.one().neg(), &field.zero()])
}

fn grid_from<R: Rng>(field: Field, rng: &mut R, fixed: &[((usize, usize), i64)], zero: &[(usize, usize)]) -> [[Scalar; 3]; 3] {
    let mut c: [[Scalar; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| random_scalar(field, rng)));
    for &(i, j) in zero {
        c[i][j] = field.zero();
    }
    for &((i, j), v) in fixed {
        c[i][j] = field.from_i64(v);
    }
    c
}

/// A random curve of the requested type, moved by a random (g, h).
pub fn random_curve<R: Rng>(field: Field, kind: KodairaType, rng: &mut R) -> Result<CurveW> {
    for _ in 0..RETRIES {
        // local coordinates s = x1/x0, t = y1/y0 at ([1:0],[1:0])
        let f = match kind {
            KodairaType::I0 => form_from_grid(field, &grid_from(field, rng, &[], &[])),
            // no constant or linear terms
            KodairaType::I1 => form_from_grid(field, &grid_from(field, rng, &[], &[(0, 0), (1, 0), (0, 1)])),
            // (t - s)^2 + s^2 t + c s t^2 + e s^2 t^2, cubic part prime to t - s
            KodairaType::II => {
                let mut c = grid_from(field, rng, &[((0, 2), 1), ((1, 1), -2), ((2, 0), 1), ((2, 1), 1)], &[(0, 0), (1, 0), (0, 1)]);
                if c[1][2] == field.one().neg() {
                    c[1][2] = field.zero();
                }
                form_from_grid(field, &c)
            }
            KodairaType::I2 => random_form11(field, rng).mul(&random_form11(field, rng))?,
            KodairaType::III => {
                // y = x and y = x / (1 + x) touch at the origin only
                let h = form11(field, [&field.zero(), &field.one(), &field.one().neg(), &field.one()]);
                diagonal(field).mul(&h)?
            }
            KodairaType::NonReduced => {
                let g = random_form11(field, rng);
                g.mul(&g)?
            }
        };
        let moved = f.substitute_block(0, &random_gl2(field, rng))?.substitute_block(1, &random_gl2(field, rng))?;
        let Ok(w) = CurveW::new(moved) else { continue };
        if classify_kodaira(&w).ok() == Some(kind) {
            return Ok(w);
        }
    }
    Err(Error::RetriesExhausted(format!("no {kind} curve over {field}")))
}

/// Distinct smooth rational points of W over a finite field, in random order.
pub fn smooth_points<R: Rng>(w: &CurveW, rng: &mut R) -> Result<Vec<PointW>> {
    let mut pts = Vec::new();
    for p in enumerate_points(w, 1)? {
        if !w.is_singular_at(&p)? {
            pts.push(p);
        }
    }
    pts.shuffle(rng);
    Ok(pts)
}

/// O(m,n)|_W(-Z) of degree `deg` with m, n in 0..=2 and random Z.
pub fn random_bundle<R: Rng>(w: &CurveW, deg: i64, rng: &mut R) -> Result<LineBundleRep> {
    let pts = smooth_points(w, rng)?;
    for _ in 0..RETRIES {
        let m = rng.gen_range(0..=2);
        let n = rng.gen_range(0..=2);
        let z = 2 * (m + n) - deg;
        if z < 0 || z as usize > pts.len() {
            continue;
        }
        return lb_make(w, m, n, &pts[..z as usize]);
    }
    Err(Error::RetriesExhausted(format!("no bundle of degree {deg}")))
}

/// A random invertible bimodule on a curve of the given type.
pub fn random_bimodule<R: Rng>(field: Field, kind: KodairaType, deg: i64, rng: &mut R) -> Result<BimodConcrete> {
    let w = random_curve(field, kind, rng)?;
    Ok(BimodConcrete::Reduced { u: random_bundle(&w, deg, rng)? })
}

/// L = u*O(k_u) v*O(k_v) L_a on 2Δ with D of degree `d_deg` at distinct random points.
pub fn random_non_reduced<R: Rng>(field: Field, d_deg: u32, rng: &mut R) -> Result<BimodConcrete> {
    let k_u = rng.gen_range(-1..=2);
    let k_v = rng.gen_range(-1..=2);
    let a = if rng.gen_bool(0.3) { field.zero() } else { random_scalar(field, rng) };
    let mut d: Vec<(Scalar, u32)> = Vec::new();
    let mut left = d_deg;
    while left > 0 {
        let z = random_scalar(field, rng);
        if d.iter().any(|(y, _)| *y == z) {
            continue;
        }
        let m = rng.gen_range(1..=left);
        d.push((z, m));
        left -= m;
    }
    Ok(BimodConcrete::NonReduced { l: NRLineBundle::new(k_u, k_v, a), d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_type_can_be_drawn() {
        let f = Field::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [KodairaType::I0, KodairaType::I1, KodairaType::II, KodairaType::I2, KodairaType::III, KodairaType::NonReduced] {
            let w = random_curve(f, kind, &mut rng).unwrap();
            assert_eq!(classify_kodaira(&w).unwrap(), kind);
        }
    }
}
