//! The algebra k<x,y,z>/(yx - xy, zx - lambda xz, zy - yz) with z of degree d,
//! the Sigma2 quiver with its four relations, and the same relations read off
//! explicit maps between sums of line bundles on P1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{canonical_basis, kernel_of_columns, span_rank, subspace_equal, Field, Scalar};
use crate::polyring::MultiPoly;
use crate::quivers::{path_basis, sigma2, PathSpace};

/// Generators x, y, z as 0, 1, 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QWeylAlgebra {
    pub lambda: Scalar,
    pub d: u32,
}

/// Linear combination of words.
pub type Element = BTreeMap<Vec<u8>, Scalar>;

impl QWeylAlgebra {
    pub fn new(lambda: Scalar, d: u32) -> Result<QWeylAlgebra> {
        if lambda.is_zero() {
            return Err(Error::Invalid("lambda must be nonzero".into()));
        }
        Ok(QWeylAlgebra { lambda, d })
    }

    pub fn field(&self) -> Field {
        self.lambda.field()
    }

    pub fn degree(&self, word: &[u8]) -> u32 {
        word.iter().map(|&g| if g == 2 { self.d } else { 1 }).sum()
    }

    /// One rewrite at position i (requires word[i] > word[i+1]).
    fn rewrite_at(&self, word: &[u8], i: usize) -> (Vec<u8>, Scalar) {
        let mut w = word.to_vec();
        w.swap(i, i + 1);
        let c = if (word[i], word[i + 1]) == (2, 0) { self.lambda.clone() } else { self.field().one() };
        (w, c)
    }

    /// x^i y^j z^k normal form by repeated leftmost rewriting.
    pub fn normal_form(&self, e: &Element) -> Element {
        let mut todo: Vec<(Vec<u8>, Scalar)> = e.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut out = Element::new();
        while let Some((w, c)) = todo.pop() {
            match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
                Some(i) => {
                    let (w2, k) = self.rewrite_at(&w, i);
                    todo.push((w2, &c * &k));
                }
                None => {
                    let s = out.remove(&w).map_or(c.clone(), |x| &x + &c);
                    if !s.is_zero() {
                        out.insert(w, s);
                    }
                }
            }
        }
        out
    }

    /// The only overlap zyx reduced through (zy)x and through z(yx).
    pub fn overlap_resolves(&self) -> bool {
        let zyx = vec![2, 1, 0];
        let mut results = Vec::new();
        for i in [0, 1] {
            let (w, c) = self.rewrite_at(&zyx, i);
            results.push(self.normal_form(&Element::from([(w, c)])));
        }
        results[0] == results[1]
    }

    /// Normal words of degree n.
    pub fn normal_words(&self, n: u32) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for k in 0..=n / self.d.max(1) {
            let rest = n - k * self.d;
            for i in 0..=rest {
                let mut w = vec![0u8; i as usize];
                w.extend(std::iter::repeat_n(1u8, (rest - i) as usize));
                w.extend(std::iter::repeat_n(2u8, k as usize));
                out.push(w);
            }
        }
        out
    }
}

/// #{(i,j,k) >= 0 : i + j + d k = n}.
pub fn s_graded_dim(d: u32, n: u32) -> usize {
    if d == 0 {
        return 0;
    }
    (0..=n / d).map(|k| (n - k * d + 1) as usize).sum()
}

/// Degrees of the four objects: 0, 1, 2, 3 for d = 2, else 0, 1, d, d + 1.
pub fn collection_degrees(d: u32) -> Result<[u32; 4]> {
    match d {
        0 | 1 => Err(Error::Invalid(format!("collection needs d >= 2, got {d}"))),
        2 => Ok([0, 1, 2, 3]),
        _ => Ok([0, 1, d, d + 1]),
    }
}

pub fn collection_hom_dims(d: u32) -> Result<[[usize; 4]; 4]> {
    let deg = collection_degrees(d)?;
    let mut m = [[0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            m[i][j] = s_graded_dim(d, deg[j] - deg[i]);
        }
    }
    Ok(m)
}

/// The four relations of the Sigma2 quiver, each in its own path space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRelations {
    pub r13: Vec<Scalar>,
    pub r24: Vec<Scalar>,
    pub r14: [Vec<Scalar>; 2],
}

fn vector_of(space: &PathSpace, field: Field, terms: &[(&[&str], Scalar)]) -> Result<Vec<Scalar>> {
    let mut v = vec![field.zero(); space.dim()];
    for (labels, c) in terms {
        let i = space.index_of_labels(labels)?;
        v[i] = &v[i] + c;
    }
    Ok(v)
}

/// b2 a1 - a2 b1, b3 a2 - a3 b2, c2 a1 - lambda a3 c1, c2 b1 - b3 c1.
pub fn stephenson_relations(lambda: &Scalar) -> Result<SigmaRelations> {
    if lambda.is_zero() {
        return Err(Error::Invalid("lambda must be nonzero".into()));
    }
    let f = lambda.field();
    let q = sigma2();
    let (one, mone) = (f.one(), f.one().neg());
    let s13 = path_basis(&q, 1, 3)?;
    let s24 = path_basis(&q, 2, 4)?;
    let s14 = path_basis(&q, 1, 4)?;
    Ok(SigmaRelations {
        r13: vector_of(&s13, f, &[(&["b2", "a1"], one.clone()), (&["a2", "b1"], mone.clone())])?,
        r24: vector_of(&s24, f, &[(&["b3", "a2"], one.clone()), (&["a3", "b2"], mone.clone())])?,
        r14: [
            vector_of(&s14, f, &[(&["c2", "a1"], one.clone()), (&["a3", "c1"], lambda.neg())])?,
            vector_of(&s14, f, &[(&["c2", "b1"], one), (&["b3", "c1"], mone)])?,
        ],
    })
}

/// Push a relation on paths i -> j into paths i' -> j' by pre- or
/// post-composing with one arrow.
fn compose(v: &[Scalar], from: &PathSpace, to: &PathSpace, before: Option<usize>, after: Option<usize>) -> Result<Vec<Scalar>> {
    let field = v.first().map_or(Field::Q, Scalar::field);
    let mut out = vec![field.zero(); to.dim()];
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut p = Vec::new();
        p.extend(before);
        p.extend(from.paths[k].iter().copied());
        p.extend(after);
        let i = to.index_of(&p).ok_or_else(|| Error::Internal("composed path missing".into()))?;
        out[i] = &out[i] + c;
    }
    Ok(out)
}

/// The part of the two-sided ideal in the 12-dimensional space of paths 1 -> 4.
pub fn stephenson_closure(lambda: &Scalar) -> Result<Vec<Vec<Scalar>>> {
    let rel = stephenson_relations(lambda)?;
    let q = sigma2();
    let (s13, s24, s14) = (path_basis(&q, 1, 3)?, path_basis(&q, 2, 4)?, path_basis(&q, 1, 4)?);
    let mut vecs = rel.r14.to_vec();
    for a in ["a3", "b3"] {
        vecs.push(compose(&rel.r13, &s13, &s14, None, Some(q.arrow(a)?))?);
    }
    for a in ["a1", "b1"] {
        vecs.push(compose(&rel.r24, &s24, &s14, Some(q.arrow(a)?), None)?);
    }
    Ok(canonical_basis(lambda.field(), s14.dim(), &vecs))
}

/// Matrix of maps between sums of line bundles on P1; `None` is the zero map.
type PolyMatrix = Vec<Vec<Option<MultiPoly>>>;

fn pm_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    let mut out = Vec::new();
    for row in a {
        let mut orow = Vec::new();
        for j in 0..b[0].len() {
            let mut acc: Option<MultiPoly> = None;
            for (k, x) in row.iter().enumerate() {
                if let (Some(x), Some(y)) = (x, &b[k][j]) {
                    let t = x.mul(y)?;
                    acc = Some(match acc {
                        Some(s) => s.add(&t)?,
                        None => t,
                    });
                }
            }
            orow.push(acc);
        }
        out.push(orow);
    }
    Ok(out)
}

/// Generators on the bundle side, indexed like the arrows of `sigma2()`:
/// O(-1) -> O -> O(1)+O(-1) -> O(2)+O.
fn bimodule_arrows(lambda: &Scalar) -> Result<Vec<PolyMatrix>> {
    let f = lambda.field();
    let x = MultiPoly::variable(f, 1, 0, 0);
    let y = MultiPoly::variable(f, 1, 0, 1);
    let one = MultiPoly::constant(f.one(), 1);
    let xl = x.scale(&lambda.inv()?);
    let q = sigma2();
    let mut out = vec![Vec::new(); q.arrows.len()];
    out[q.arrow("a1")?] = vec![vec![Some(x.clone())]];
    out[q.arrow("b1")?] = vec![vec![Some(y.clone())]];
    out[q.arrow("a2")?] = vec![vec![Some(x.clone())], vec![None]];
    out[q.arrow("b2")?] = vec![vec![Some(y.clone())], vec![None]];
    out[q.arrow("a3")?] = vec![vec![Some(x), None], vec![None, Some(xl)]];
    out[q.arrow("b3")?] = vec![vec![Some(y.clone()), None], vec![None, Some(y)]];
    out[q.arrow("c1")?] = vec![vec![None], vec![Some(one.clone())]];
    out[q.arrow("c2")?] = vec![vec![None], vec![Some(one)]];
    Ok(out)
}

/// Kernel of the evaluation of paths 1 -> 4 in Hom(O(-1), O(2) + O), a
/// space of dimension 4 + 2.
pub fn bimodule_relations(lambda: &Scalar) -> Result<Vec<Vec<Scalar>>> {
    if lambda.is_zero() {
        return Err(Error::Invalid("lambda must be nonzero".into()));
    }
    let f = lambda.field();
    let arrows = bimodule_arrows(lambda)?;
    let space = path_basis(&sigma2(), 1, 4)?;
    let target_degrees = [3u32, 1];
    let mut images = Vec::new();
    for p in &space.paths {
        let mut m = arrows[p[0]].clone();
        for &a in &p[1..] {
            m = pm_mul(&arrows[a], &m)?;
        }
        let mut v = Vec::new();
        for (r, &deg) in target_degrees.iter().enumerate() {
            match &m[r][0] {
                Some(e) if e.degree == [deg] => v.extend(e.coeff_vector()),
                Some(e) => return Err(Error::Internal(format!("entry of degree {:?}, expected {deg}", e.degree))),
                None => v.extend(vec![f.zero(); deg as usize + 1]),
            }
        }
        images.push(v);
    }
    let kernel = kernel_of_columns(f, 6, &images);
    Ok(canonical_basis(f, space.dim(), &kernel))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayReport {
    pub lambda: Scalar,
    pub paths: usize,
    pub closure_dim: usize,
    pub bimodule_kernel_dim: usize,
    pub equal: bool,
    pub surviving: usize,
    pub s_graded_dim_2_3: usize,
    pub overlap_resolves: bool,
    pub pass: bool,
}

pub fn mckay_verify(lambda: &Scalar) -> Result<McKayReport> {
    let closure = stephenson_closure(lambda)?;
    let bim = bimodule_relations(lambda)?;
    let paths = path_basis(&sigma2(), 1, 4)?.dim();
    let closure_dim = span_rank(lambda.field(), paths, &closure);
    let equal = subspace_equal(&closure, &bim);
    let surviving = paths - closure_dim;
    let s = s_graded_dim(2, 3);
    let overlap = QWeylAlgebra::new(lambda.clone(), 2)?.overlap_resolves();
    Ok(McKayReport {
        lambda: lambda.clone(),
        paths,
        closure_dim,
        bimodule_kernel_dim: bim.len(),
        equal,
        surviving,
        s_graded_dim_2_3: s,
        overlap_resolves: overlap,
        pass: equal && closure_dim == 6 && surviving == s && overlap,
    })
}
