//! Quivers with four vertices: path spaces, hom/ext dimensions of the
//! exceptional collection attached to a bimodule, strongness, King stability
//! of thin representations, and the toric matrices for the F1-type quiver.

use serde::{Deserialize, Serialize};

use crate::bimodules::{split_table, BimodDescriptor, SplitType};
use crate::error::{Error, Result};
use crate::exactmath::{Field, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

/// Vertices are 1..=vertices; every arrow goes from a smaller to a larger vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDesc {
    pub name: String,
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
}

impl QuiverDesc {
    pub fn new(name: &str, vertices: usize, arrows: &[(usize, usize, &str)]) -> Result<QuiverDesc> {
        let arrows: Vec<Arrow> = arrows
            .iter()
            .map(|&(s, t, l)| Arrow { source: s, target: t, label: l.to_string() })
            .collect();
        for a in &arrows {
            if a.source == 0 || a.target > vertices || a.source >= a.target {
                return Err(Error::Invalid(format!("arrow {} {}->{} breaks the vertex order", a.label, a.source, a.target)));
            }
        }
        Ok(QuiverDesc { name: name.to_string(), vertices, arrows })
    }

    pub fn arrow(&self, label: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::Invalid(format!("no arrow {label} in {}", self.name)))
    }
}

/// a_i, b_i : i -> i+1.
pub fn q0() -> QuiverDesc {
    QuiverDesc::new("Q0", 4, &[(1, 2, "a1"), (1, 2, "b1"), (2, 3, "a2"), (2, 3, "b2"), (3, 4, "a3"), (3, 4, "b3")])
        .expect("well-formed")
}

pub fn q1() -> QuiverDesc {
    QuiverDesc::new(
        "Q1",
        4,
        &[(1, 2, "a1"), (1, 2, "a2"), (1, 3, "a3"), (3, 4, "a4"), (3, 4, "a5"), (2, 4, "a6"), (2, 3, "a7")],
    )
    .expect("well-formed")
}

/// Q0 with the two long arrows c1 : 1 -> 3, c2 : 2 -> 4.
pub fn sigma2() -> QuiverDesc {
    QuiverDesc::new(
        "Sigma2",
        4,
        &[(1, 2, "a1"), (1, 2, "b1"), (2, 3, "a2"), (2, 3, "b2"), (3, 4, "a3"), (3, 4, "b3"), (1, 3, "c1"), (2, 4, "c2")],
    )
    .expect("well-formed")
}

/// Paths from `source` to `target`, each a list of arrow indices in traversal
/// order. Sorted by the labels read from the last arrow back to the first,
/// which is how compositions are written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpace {
    pub quiver: QuiverDesc,
    pub source: usize,
    pub target: usize,
    pub paths: Vec<Vec<usize>>,
}

impl PathSpace {
    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn index_of(&self, path: &[usize]) -> Option<usize> {
        self.paths.iter().position(|p| p == path)
    }

    /// Composition notation, e.g. "b3 a2 a1".
    pub fn label(&self, i: usize) -> String {
        let p = &self.paths[i];
        p.iter().rev().map(|&a| self.quiver.arrows[a].label.as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    /// Index of a path given in composition notation.
    pub fn index_of_labels(&self, labels: &[&str]) -> Result<usize> {
        let mut path = Vec::new();
        for l in labels.iter().rev() {
            path.push(self.quiver.arrow(l)?);
        }
        self.index_of(&path)
            .ok_or_else(|| Error::Invalid(format!("{} is not a path {}->{}", labels.join(" "), self.source, self.target)))
    }
}

pub fn path_basis(q: &QuiverDesc, i: usize, j: usize) -> Result<PathSpace> {
    if i > j || j > q.vertices || i == 0 {
        return Err(Error::Invalid(format!("no path space {i}->{j}")));
    }
    let mut done: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<(usize, Vec<usize>)> = vec![(i, Vec::new())];
    while let Some((v, p)) = frontier.pop() {
        if v == j {
            done.push(p);
            continue;
        }
        for (k, a) in q.arrows.iter().enumerate() {
            if a.source == v && a.target <= j {
                let mut p2 = p.clone();
                p2.push(k);
                frontier.push((a.target, p2));
            }
        }
    }
    let key = |p: &Vec<usize>| -> Vec<String> { p.iter().rev().map(|&a| q.arrows[a].label.clone()).collect() };
    done.sort_by_key(key);
    Ok(PathSpace { quiver: q.clone(), source: i, target: j, paths: done })
}

/// A subspace of the path space 1 -> 4, kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationsIdeal {
    pub space: PathSpace,
    pub basis: Vec<Vec<Scalar>>,
}

impl RelationsIdeal {
    pub fn new(space: PathSpace, vecs: &[Vec<Scalar>], field: Field) -> RelationsIdeal {
        let basis = crate::exactmath::canonical_basis(field, space.dim(), vecs);
        RelationsIdeal { space, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn same_subspace(&self, o: &RelationsIdeal) -> bool {
        self.space.paths == o.space.paths && crate::exactmath::subspace_equal(&self.basis, &o.basis)
    }
}

/// hom(O(s), O(t)) on P1.
pub fn hom_p1(s: i64, t: i64) -> i64 {
    (t - s + 1).max(0)
}

/// ext^1(O(s), O(t)) on P1.
pub fn ext1_p1(s: i64, t: i64) -> i64 {
    (s - t - 1).max(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomExtMatrix {
    pub hom: [[i64; 4]; 4],
    pub ext1: [[i64; 4]; 4],
}

fn collection_summands(s: &SplitType, m: i64) -> [Vec<i64>; 4] {
    [vec![-m - 1], vec![-m], vec![s.a_prime, s.b_prime], vec![s.a, s.b]]
}

/// Hom and Ext^1 between the objects E_1..E_4 of the collection with twist m.
pub fn hom_ext_matrix(s: &SplitType, m: i64) -> HomExtMatrix {
    let f = collection_summands(s, m);
    let mut hom = [[0; 4]; 4];
    let mut ext1 = [[0; 4]; 4];
    for i in 0..4 {
        hom[i][i] = 1;
        for j in i + 1..4 {
            if (i, j) == (2, 3) {
                hom[i][j] = 2;
                continue;
            }
            for &x in &f[i] {
                for &y in &f[j] {
                    hom[i][j] += hom_p1(x, y);
                    ext1[i][j] += ext1_p1(x, y);
                }
            }
        }
    }
    HomExtMatrix { hom, ext1 }
}

/// chi(E_i, E_j) from the splitting types alone.
pub fn euler_pairing(s: &SplitType, m: i64) -> [[i64; 4]; 4] {
    let f = collection_summands(s, m);
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        out[i][i] = 1;
        for j in i + 1..4 {
            out[i][j] = if (i, j) == (2, 3) {
                2
            } else {
                f[i].iter().flat_map(|&x| f[j].iter().map(move |&y| y - x + 1)).sum()
            };
        }
    }
    out
}

/// No Ext^1 anywhere in the collection.
pub fn is_strong(s: &SplitType, m: i64) -> bool {
    hom_ext_matrix(s, m).ext1.iter().flatten().all(|&e| e == 0)
}

/// The closed-form criterion a' >= -m - 1.
pub fn strong_by_inequality(s: &SplitType, m: i64) -> bool {
    s.a_prime >= -m - 1
}

/// Strongness at m = 1 read off the case lists for chi = 1, 2.
pub fn strong_m1_table(d: &BimodDescriptor) -> Result<bool> {
    d.validate()?;
    let chi = d.chi();
    if chi != 1 && chi != 2 {
        return Err(Error::Inconsistent(format!("strongness lists cover chi 1 and 2, not {chi}")));
    }
    Ok(match *d {
        BimodDescriptor::NonReduced { d_degree, .. } => {
            if chi == 2 {
                matches!(d_degree, 0 | 2 | 4)
            } else {
                matches!(d_degree, 1 | 3)
            }
        }
        BimodDescriptor::IntegralInvertible { .. } | BimodDescriptor::IntegralNonInvertible { .. } => true,
        BimodDescriptor::ReducibleInvertible { p, .. } | BimodDescriptor::ReducibleNonInvertible { p, .. } => p >= -1,
        BimodDescriptor::Type11 { a, .. } => a >= -1,
    })
}

/// is_strong at m on the tabulated splitting type.
pub fn is_strong_descriptor(d: &BimodDescriptor, m: i64) -> Result<bool> {
    Ok(is_strong(&split_table(d)?, m))
}

/// The stability weight (-3, 1, 1, 1) or any other integer weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaVector(pub [i64; 4]);

impl ThetaVector {
    pub fn standard() -> ThetaVector {
        ThetaVector([-3, 1, 1, 1])
    }

    pub fn pairing(&self, dims: [i64; 4]) -> i64 {
        self.0.iter().zip(dims).map(|(t, d)| t * d).sum()
    }
}

/// Representation with dimension vector (1,1,1,1): one scalar per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep1111 {
    pub quiver: QuiverDesc,
    pub values: Vec<Scalar>,
}

impl Rep1111 {
    pub fn new(quiver: QuiverDesc, values: Vec<Scalar>) -> Result<Rep1111> {
        if values.len() != quiver.arrows.len() {
            return Err(Error::Invalid(format!("{} arrow values for {} arrows", values.len(), quiver.arrows.len())));
        }
        Ok(Rep1111 { quiver, values })
    }

    /// Vertex subsets (bit k = vertex k+1) spanning a subrepresentation.
    pub fn subrepresentations(&self) -> Vec<u8> {
        (0u8..16)
            .filter(|&s| {
                self.quiver.arrows.iter().zip(&self.values).all(|(a, x)| {
                    let src = s >> (a.source - 1) & 1 == 1;
                    let tgt = s >> (a.target - 1) & 1 == 1;
                    !src || tgt || x.is_zero()
                })
            })
            .collect()
    }
}

fn dims_of(s: u8) -> [i64; 4] {
    std::array::from_fn(|k| (s >> k & 1) as i64)
}

/// King stability: theta(N) > 0 for every proper nonzero subrepresentation.
pub fn theta_stable(r: &Rep1111, theta: &ThetaVector) -> bool {
    r.subrepresentations().into_iter().filter(|&s| s != 0 && s != 15).all(|s| theta.pairing(dims_of(s)) > 0)
}

pub fn theta_semistable(r: &Rep1111, theta: &ThetaVector) -> bool {
    r.subrepresentations().into_iter().filter(|&s| s != 0 && s != 15).all(|s| theta.pairing(dims_of(s)) >= 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrelDims {
    pub ambient: usize,
    pub group: usize,
    pub stabilizer: usize,
    pub dim: i64,
}

/// Dimension of the stack of relations for Q0: tensors in V1..V4 modulo
/// GL(V1) x ... x GL(V4), with the generic stabilizer the kernel of the
/// product character on the centres.
pub fn mrel_dim_check() -> MrelDims {
    let ambient = 2usize.pow(4);
    let group = 4 * 4;
    let character = Matrix::from_i64(Field::Q, &[&[1, 1, 1, 1]]);
    let stabilizer = 4 - character.rank();
    MrelDims { ambient, group, stabilizer, dim: ambient as i64 - group as i64 + stabilizer as i64 }
}

/// Torus weights of a1..a7 (columns) for the F1-type quiver.
pub const TORIC_WEIGHTS: [[i64; 7]; 3] = [[1, 1, 1, 0, 0, -1, -1], [0, 0, 1, -1, -1, 0, 1], [0, 0, 0, 1, 1, 1, 0]];

/// Rows a1..a7; its image is the kernel of the weight matrix.
pub const TORIC_KERNEL: [[i64; 4]; 7] =
    [[-1, -1, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -1, -1], [0, 0, 0, 1], [0, -1, 0, -1]];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMismatch {
    pub torus: String,
    pub arrow: String,
    pub stored: i64,
    pub from_quiver: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricReport {
    /// W K = 0 for the stored constants.
    pub product_zero: bool,
    pub product: Vec<Vec<i64>>,
    pub weight_rank: usize,
    pub kernel_rank: usize,
    /// Weights t_target - t_source (t_1 = 1) read off the quiver.
    pub quiver_weights: Vec<Vec<i64>>,
    pub quiver_product_zero: bool,
    pub mismatches: Vec<WeightMismatch>,
}

/// Weight of each arrow of Q1 under (t_2, t_3, t_4), the torus at vertex 1
/// acting trivially.
pub fn quiver_torus_weights(q: &QuiverDesc) -> Vec<Vec<i64>> {
    let mut w = vec![vec![0; q.arrows.len()]; q.vertices - 1];
    for (k, a) in q.arrows.iter().enumerate() {
        if a.target >= 2 {
            w[a.target - 2][k] += 1;
        }
        if a.source >= 2 {
            w[a.source - 2][k] -= 1;
        }
    }
    w
}

fn int_matrix(rows: &[Vec<i64>]) -> Matrix {
    let r: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_i64(Field::Q, &r)
}

fn to_ints(m: &Matrix) -> Vec<Vec<i64>> {
    m.rows_vec()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string().trim_end_matches("/1").parse().expect("integer entry")).collect())
        .collect()
}

pub fn toric_matrices_check() -> ToricReport {
    let w = int_matrix(&TORIC_WEIGHTS.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let k = int_matrix(&TORIC_KERNEL.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let product = w.mul(&k).expect("3x7 times 7x4");
    // columns of the stored matrix are a1..a7; reorder the quiver's arrows to match
    let q = q1();
    let derived = quiver_torus_weights(&q);
    let order: Vec<usize> = (1..=7).map(|i| q.arrow(&format!("a{i}")).expect("a1..a7")).collect();
    let quiver_weights: Vec<Vec<i64>> = derived.iter().map(|row| order.iter().map(|&c| row[c]).collect()).collect();
    let qprod = int_matrix(&quiver_weights).mul(&k).expect("3x7 times 7x4");
    let mut mismatches = Vec::new();
    for (t, (row, qrow)) in TORIC_WEIGHTS.iter().zip(&quiver_weights).enumerate() {
        for (c, (&x, &y)) in row.iter().zip(qrow).enumerate() {
            if x != y {
                mismatches.push(WeightMismatch {
                    torus: format!("t{}", t + 2),
                    arrow: format!("a{}", c + 1),
                    stored: x,
                    from_quiver: y,
                });
            }
        }
    }
    ToricReport {
        product_zero: product.is_zero(),
        product: to_ints(&product),
        weight_rank: w.rank(),
        kernel_rank: k.rank(),
        quiver_weights,
        quiver_product_zero: qprod.is_zero(),
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(a: i64, b: i64, ap: i64, bp: i64) -> SplitType {
        SplitType { a, b, a_prime: ap, b_prime: bp }
    }

    #[test]
    fn path_counts() {
        assert_eq!(path_basis(&q0(), 1, 4).unwrap().dim(), 8);
        assert_eq!(path_basis(&q1(), 1, 4).unwrap().dim(), 8);
        assert_eq!(path_basis(&sigma2(), 1, 4).unwrap().dim(), 12);
        assert_eq!(path_basis(&q0(), 2, 2).unwrap().dim(), 1);
        let p = path_basis(&q0(), 1, 4).unwrap();
        assert_eq!(p.label(0), "a3 a2 a1");
        assert_eq!(p.label(1), "a3 a2 b1");
        assert_eq!(p.label(4), "b3 a2 a1");
        let p1 = path_basis(&q1(), 1, 4).unwrap();
        assert_eq!(p1.labels(), ["a4 a3", "a4 a7 a1", "a4 a7 a2", "a5 a3", "a5 a7 a1", "a5 a7 a2", "a6 a1", "a6 a2"]);
    }

    #[test]
    fn hom_rows() {
        let h = hom_ext_matrix(&st(0, 0, -1, -1), 1);
        assert_eq!(h.hom[0], [1, 2, 4, 6]);
        assert!(h.ext1.iter().flatten().all(|&e| e == 0));
        let h = hom_ext_matrix(&st(-1, 0, -2, -1), 1);
        assert_eq!(h.hom[1][2], 1);
        assert_eq!(h.hom[0][3], 5);
        assert_eq!(h.hom[2][3], 2);
    }

    #[test]
    fn stability_examples() {
        let f = Field::prime(101).unwrap();
        let th = ThetaVector::standard();
        let generic = Rep1111::new(q0(), (1..=6).map(|k| f.from_i64(k)).collect()).unwrap();
        assert!(theta_stable(&generic, &th));
        let mut v: Vec<Scalar> = (1..=6).map(|k| f.from_i64(k)).collect();
        v[0] = f.zero();
        v[1] = f.zero();
        assert!(!theta_stable(&Rep1111::new(q0(), v).unwrap(), &th));
        assert!(!theta_stable(&Rep1111::new(q0(), vec![f.zero(); 6]).unwrap(), &th));
    }

    #[test]
    fn numerology() {
        let r = mrel_dim_check();
        assert_eq!((r.ambient, r.stabilizer, r.dim), (16, 3, 3));
        let t = toric_matrices_check();
        assert_eq!((t.weight_rank, t.kernel_rank), (3, 4));
        // the stored a3 weight disagrees with the quiver in one entry
        assert!(!t.product_zero);
        assert_eq!(t.product[0], [0, 1, 0, 0]);
        assert!(t.quiver_product_zero);
        assert_eq!(t.mismatches.len(), 1);
        assert_eq!((t.mismatches[0].torus.as_str(), t.mismatches[0].arrow.as_str()), ("t2", "a3"));
    }
}
