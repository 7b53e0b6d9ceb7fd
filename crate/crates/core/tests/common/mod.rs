//! Oracles shared by the integration tests. Nothing here calls into the
//! classification code it is used to check.
#![allow(dead_code)]

use bimodulus::bimodules::{BimodDescriptor, Resolution};
use bimodulus::curves::KodairaType;
use bimodulus::exactmath::{Field, Matrix, Scalar};
use bimodulus::polyring::{p1_points, MultiPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn f101() -> Field {
    Field::prime(101).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn det2(p: &[Scalar; 2], q: &[Scalar; 2]) -> Scalar {
    &(&p[0] * &q[1]) - &(&p[1] * &q[0])
}

/// Cross-ratio of four distinct points of P^1, in homogeneous coordinates.
pub fn cross_ratio(r: &[[Scalar; 2]; 4]) -> Scalar {
    let num = &det2(&r[0], &r[2]) * &det2(&r[1], &r[3]);
    let den = &det2(&r[0], &r[3]) * &det2(&r[1], &r[2]);
    num.div(&den).expect("distinct points")
}

/// 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2).
pub fn j_from_lambda(l: &Scalar) -> Scalar {
    let f = l.field();
    let one = f.one();
    let l2 = l * l;
    let num = &f.from_i64(256) * &(&(&l2 - l) + &one).pow(3);
    let lm1 = l - &one;
    let den = &l2 * &(&lm1 * &lm1);
    num.div(&den).expect("lambda is not 0 or 1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    FiberComponent,
    Kind(KodairaType),
    /// A single singular point whose tangent cone is zero.
    Unexpected,
}

fn restriction_vanishes(f: &MultiPoly, block: usize, pts: &[[Scalar; 2]]) -> bool {
    pts.iter().any(|x| f.restrict_block(block, x).unwrap().is_zero())
}

/// A matrix whose first column is the point, so that [1:0] maps onto it.
fn chart_at(field: Field, p: &[Scalar; 2]) -> Matrix {
    let (e0, e1) = if p[0].is_zero() { (field.one(), field.zero()) } else { (field.zero(), field.one()) };
    Matrix::from_rows(field, &[vec![p[0].clone(), e0], vec![p[1].clone(), e1]]).unwrap()
}

/// Exhaustive classification of a (2,2) form over F_p by its singular
/// points over F_{p^2}.
///
/// Singular points of a reduced (2,2) curve without fiber components are
/// defined over F_{p^2} (a single point is Galois-fixed, two points form a
/// Galois orbit of size at most 2), so the scan finds all of them. More than
/// two means the curve is singular along a component, i.e. non-reduced.
pub fn kodaira_oracle(f: &MultiPoly) -> OracleVerdict {
    let ext = f.field.quadratic_extension().unwrap();
    let g = f.embed(ext).unwrap();
    let pts = p1_points(ext).unwrap();
    if restriction_vanishes(&g, 0, &pts) || restriction_vanishes(&g, 1, &pts) {
        return OracleVerdict::FiberComponent;
    }
    let partials = g.partials();
    let mut sing = Vec::new();
    for x in &pts {
        for y in &pts {
            let pt = vec![x.clone(), y.clone()];
            if !g.eval(&pt).unwrap().is_zero() {
                continue;
            }
            if partials.iter().all(|d| d.eval(&pt).unwrap().is_zero()) {
                sing.push(pt);
            }
        }
    }
    match sing.len() {
        0 => OracleVerdict::Kind(KodairaType::I0),
        1 => local_type(&g, &sing[0]),
        2 => OracleVerdict::Kind(KodairaType::I2),
        _ => OracleVerdict::Kind(KodairaType::NonReduced),
    }
}

/// Node, cusp or tacnode from the Taylor expansion at the point.
fn local_type(g: &MultiPoly, p: &[[Scalar; 2]]) -> OracleVerdict {
    let field = g.field;
    let local = g.substitute_block(0, &chart_at(field, &p[0])).unwrap().substitute_block(1, &chart_at(field, &p[1])).unwrap();
    // c(i, j) is the coefficient of s^i t^j
    let c = |i: u32, j: u32| local.coeff(&[2 - i, i, 2 - j, j]);
    let (q20, q11, q02) = (c(2, 0), c(1, 1), c(0, 2));
    let disc = &(&q11 * &q11) - &(&field.from_i64(4) * &(&q20 * &q02));
    if !disc.is_zero() {
        return OracleVerdict::Kind(KodairaType::I1);
    }
    // the quadratic part is a square L^2; (s, t) spans the kernel of L
    let root = if !q20.is_zero() {
        [q11.div(&(&field.from_i64(-2) * &q20)).unwrap(), field.one()]
    } else if !q02.is_zero() {
        [field.one(), field.zero()]
    } else {
        return OracleVerdict::Unexpected;
    };
    // no s^3 or t^3 terms in bidegree (2,2)
    let (s, t) = (&root[0], &root[1]);
    let cubic = &(&c(2, 1) * &(&(s * s) * t)) + &(&c(1, 2) * &(&(s * t) * t));
    if cubic.is_zero() {
        OracleVerdict::Kind(KodairaType::III)
    } else {
        OracleVerdict::Kind(KodairaType::II)
    }
}

/// A uniformly random (2,2) form over a prime field.
pub fn random_form<R: rand::Rng>(field: Field, rng: &mut R) -> MultiPoly {
    let p = field.characteristic();
    let mut f = MultiPoly::zero(field, &[2, 2]);
    for i in 0..3u32 {
        for j in 0..3u32 {
            let c = field.from_i64(rng.gen_range(0..p) as i64);
            if !c.is_zero() {
                f.add_term(vec![2 - i, i, 2 - j, j], c).unwrap();
            }
        }
    }
    f
}

#[derive(Clone, Debug, serde::Deserialize)]
pub struct StabilityRow {
    pub table: String,
    pub parameter: String,
    pub min: i64,
    pub max: Option<i64>,
    pub stability: String,
}

pub fn stability_rows() -> Vec<StabilityRow> {
    let text = include_str!("../golden/stability_table.json");
    serde_json::from_str(text).unwrap()
}

/// Descriptors belonging to one table of the golden file with the given
/// value of its parameter.
pub fn descriptors_for(table: &str, param: i64) -> Vec<BimodDescriptor> {
    use BimodDescriptor::*;
    let mut out = Vec::new();
    match table {
        "type_1_1" => {
            for a in -3..=2 {
                out.push(Type11 { a, b: a + param });
            }
        }
        "non_reduced" => {
            for k in -1..=3 {
                for (a_zero, twist_a_zero) in [(false, false), (true, false), (false, true)] {
                    out.push(NonReduced { k, a_zero, twist_a_zero, d_degree: param, chi: 2 * k - param });
                }
            }
        }
        "integral" => {
            for kodaira in [KodairaType::I0, KodairaType::I1, KodairaType::II] {
                for deg in -2..=4 {
                    for (pullback, twist_pullback) in [(false, false), (true, false), (false, true)] {
                        out.push(IntegralInvertible { kodaira, deg, pullback, twist_pullback });
                    }
                }
            }
            for kodaira in [KodairaType::I1, KodairaType::II] {
                for i in -2..=3 {
                    out.push(IntegralNonInvertible { kodaira, i });
                }
            }
        }
        "reducible_invertible" => {
            for kodaira in [KodairaType::I2, KodairaType::III] {
                for p in -2..=2 {
                    for (pullback, twist_pullback) in [(false, false), (true, false), (false, true)] {
                        out.push(ReducibleInvertible { kodaira, p, q: p + param, pullback, twist_pullback });
                    }
                }
            }
        }
        "nodal_conic" | "two_lines" => {
            let resolution = if table == "nodal_conic" { Resolution::NodalConic } else { Resolution::TwoLines };
            for kodaira in [KodairaType::I2, KodairaType::III] {
                for p in -2..=2 {
                    out.push(ReducibleNonInvertible { kodaira, resolution, p, q: p + param });
                }
            }
        }
        other => panic!("unknown table {other}"),
    }
    out.retain(|d| d.validate().is_ok());
    out
}

/// Every consistent descriptor with integer parameters in `range` and chi
/// in `chis`.
pub fn descriptor_grid(range: std::ops::RangeInclusive<i64>, chis: &[i64]) -> Vec<BimodDescriptor> {
    use BimodDescriptor::*;
    let flags = [(false, false), (true, false), (false, true), (true, true)];
    let mut out = Vec::new();
    for x in range.clone() {
        for y in range.clone() {
            out.push(Type11 { a: x, b: y });
            for kodaira in [KodairaType::I2, KodairaType::III] {
                for (pullback, twist_pullback) in flags {
                    out.push(ReducibleInvertible { kodaira, p: x, q: y, pullback, twist_pullback });
                }
                for resolution in [Resolution::NodalConic, Resolution::TwoLines] {
                    out.push(ReducibleNonInvertible { kodaira, resolution, p: x, q: y });
                }
            }
            if y >= 0 {
                for (a_zero, twist_a_zero) in flags {
                    for chi in chis {
                        out.push(NonReduced { k: x, a_zero, twist_a_zero, d_degree: y, chi: *chi });
                    }
                }
            }
        }
        for kodaira in [KodairaType::I0, KodairaType::I1, KodairaType::II] {
            for (pullback, twist_pullback) in flags {
                out.push(IntegralInvertible { kodaira, deg: x, pullback, twist_pullback });
            }
            out.push(IntegralNonInvertible { kodaira, i: x });
        }
    }
    out.retain(|d| d.validate().is_ok() && chis.contains(&d.chi()));
    out
}
