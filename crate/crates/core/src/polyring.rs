//! Multihomogeneous polynomials on products of P^1, binary forms and the
//! classical invariants of binary quartics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{Field, Matrix, Scalar};

/// Exponent tuple: two entries per block, `[x0, x1, y0, y1, ...]`.
pub type Exp = Vec<u32>;

/// A point of (P^1)^k: one homogeneous pair per block.
pub type MultiPoint = Vec<[Scalar; 2]>;

/// Multihomogeneous polynomial in `blocks` pairs of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub field: Field,
    pub degree: Vec<u32>,
    terms: BTreeMap<Exp, Scalar>,
}

/// Monomials of the given multidegree. Order: block by block, and inside a
/// block x0^d, x0^(d-1) x1, ..., x1^d.
pub fn component_basis(degree: &[u32]) -> Vec<Exp> {
    let mut out: Vec<Exp> = vec![Vec::new()];
    for &d in degree {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        for e in &out {
            for i in 0..=d {
                let mut e2 = e.clone();
                e2.push(d - i);
                e2.push(i);
                next.push(e2);
            }
        }
        out = next;
    }
    out
}

/// Dimension of the space of forms of this multidegree (0 if any entry is negative).
pub fn component_dim(degree: &[i64]) -> usize {
    degree.iter().map(|&d| if d < 0 { 0 } else { d as usize + 1 }).product()
}

impl MultiPoly {
    pub fn zero(field: Field, degree: &[u32]) -> MultiPoly {
        MultiPoly { field, degree: degree.to_vec(), terms: BTreeMap::new() }
    }

    pub fn blocks(&self) -> usize {
        self.degree.len()
    }

    /// Constant polynomial (multidegree all zeros).
    pub fn constant(c: Scalar, blocks: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(c.field(), &vec![0; blocks]);
        p.add_term(vec![0; 2 * blocks], c).expect("homogeneous");
        p
    }

    /// Single monomial c * x^exp; the multidegree is read off the exponents.
    pub fn monomial(c: Scalar, exp: &[u32]) -> MultiPoly {
        let degree: Vec<u32> = exp.chunks(2).map(|w| w[0] + w[1]).collect();
        let mut p = MultiPoly::zero(c.field(), &degree);
        p.add_term(exp.to_vec(), c).expect("homogeneous");
        p
    }

    /// The coordinate variable `var` (0 or 1) of `block` among `blocks` blocks.
    pub fn variable(field: Field, blocks: usize, block: usize, var: usize) -> MultiPoly {
        let mut exp = vec![0; 2 * blocks];
        exp[2 * block + var] = 1;
        MultiPoly::monomial(field.one(), &exp)
    }

    /// Linear form a x0 + b x1 in one block.
    pub fn linear(blocks: usize, block: usize, a: &Scalar, b: &Scalar) -> MultiPoly {
        let f = a.field();
        let mut x0 = MultiPoly::variable(f, blocks, block, 0).scale(a);
        let x1 = MultiPoly::variable(f, blocks, block, 1).scale(b);
        x0 = x0.add(&x1).expect("same ring");
        x0
    }

    pub fn from_terms(field: Field, degree: &[u32], terms: Vec<(Exp, Scalar)>) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(field, degree);
        for (e, c) in terms {
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    fn check_exp(&self, e: &[u32]) -> Result<()> {
        if e.len() != 2 * self.blocks() {
            return Err(Error::Invalid(format!("exponent {e:?} has wrong length")));
        }
        for (b, &d) in self.degree.iter().enumerate() {
            if e[2 * b] + e[2 * b + 1] != d {
                return Err(Error::Invalid(format!("exponent {e:?} not of multidegree {:?}", self.degree)));
            }
        }
        Ok(())
    }

    /// Add c * x^e in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exp, c: Scalar) -> Result<()> {
        self.check_exp(&e)?;
        if c.field() != self.field {
            return Err(Error::MixedFields(self.field.to_string(), c.field().to_string()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let v = match self.terms.get(&e) {
            Some(old) => old.try_add(&c)?,
            None => c,
        };
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn same_ring(&self, o: &MultiPoly) -> Result<()> {
        if self.field != o.field {
            return Err(Error::MixedFields(self.field.to_string(), o.field.to_string()));
        }
        if self.blocks() != o.blocks() {
            return Err(Error::Invalid("polynomials in different rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(o)?;
        if self.degree != o.degree {
            if self.is_zero() {
                return Ok(o.clone());
            }
            if o.is_zero() {
                return Ok(self.clone());
            }
            return Err(Error::Invalid("sum of forms of different multidegree".into()));
        }
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone())?;
        }
        Ok(r)
    }

    pub fn sub(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let mut r = MultiPoly::zero(self.field, &self.degree);
        if c.is_zero() {
            return r;
        }
        for (e, x) in &self.terms {
            r.terms.insert(e.clone(), x * c);
        }
        r
    }

    pub fn mul(&self, o: &MultiPoly) -> Result<MultiPoly> {
        self.same_ring(o)?;
        let degree: Vec<u32> = self.degree.iter().zip(&o.degree).map(|(a, b)| a + b).collect();
        let mut r = MultiPoly::zero(self.field, &degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2)?;
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut r = MultiPoly::constant(self.field.one(), self.blocks());
        for _ in 0..k {
            r = r.mul(self).expect("same ring");
        }
        r
    }

    pub fn eval(&self, point: &[[Scalar; 2]]) -> Result<Scalar> {
        if point.len() != self.blocks() {
            return Err(Error::Invalid("point has wrong number of blocks".into()));
        }
        let f = point[0][0].field();
        let mut acc = f.zero();
        // power tables per block variable
        let mut pows: Vec<[Vec<Scalar>; 2]> = Vec::with_capacity(point.len());
        for (b, pt) in point.iter().enumerate() {
            let d = self.degree[b] as usize;
            let mut tab = [vec![f.one()], vec![f.one()]];
            for v in 0..2 {
                for k in 1..=d {
                    let nxt = tab[v][k - 1].try_mul(&pt[v])?;
                    tab[v].push(nxt);
                }
            }
            pows.push(tab);
        }
        for (e, c) in &self.terms {
            let mut t = f.embed(c)?;
            for (b, tab) in pows.iter().enumerate() {
                t = t.try_mul(&tab[0][e[2 * b] as usize])?;
                t = t.try_mul(&tab[1][e[2 * b + 1] as usize])?;
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Derivative with respect to variable `var` of `block`.
    pub fn partial(&self, block: usize, var: usize) -> MultiPoly {
        let mut degree = self.degree.clone();
        degree[block] = degree[block].saturating_sub(1);
        let mut r = MultiPoly::zero(self.field, &degree);
        let idx = 2 * block + var;
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            let k = self.field.from_i64(e[idx] as i64);
            r.add_term(e2, c * &k).expect("homogeneous");
        }
        r
    }

    /// All partial derivatives, in variable order x0, x1, y0, y1, ...
    pub fn partials(&self) -> Vec<MultiPoly> {
        (0..self.blocks()).flat_map(|b| (0..2).map(move |v| (b, v))).map(|(b, v)| self.partial(b, v)).collect()
    }

    /// Coefficient vector in `component_basis(degree)` order.
    pub fn coeff_vector(&self) -> Vec<Scalar> {
        component_basis(&self.degree).iter().map(|e| self.coeff(e)).collect()
    }

    pub fn from_coeff_vector(field: Field, degree: &[u32], v: &[Scalar]) -> MultiPoly {
        let mut p = MultiPoly::zero(field, degree);
        for (e, c) in component_basis(degree).into_iter().zip(v) {
            p.add_term(e, c.clone()).expect("homogeneous");
        }
        p
    }

    /// Base change to an extension field.
    pub fn embed(&self, field: Field) -> Result<MultiPoly> {
        let mut r = MultiPoly::zero(field, &self.degree);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), field.embed(c)?)?;
        }
        Ok(r)
    }

    /// Substitute `x -> g x` in one block, where g is 2x2 (rows give new x0, x1).
    pub fn substitute_block(&self, block: usize, g: &Matrix) -> Result<MultiPoly> {
        let n = self.blocks();
        let new0 = MultiPoly::linear(n, block, g.get(0, 0), g.get(0, 1));
        let new1 = MultiPoly::linear(n, block, g.get(1, 0), g.get(1, 1));
        let mut r = MultiPoly::zero(self.field, &self.degree);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[2 * block] = 0;
            rest[2 * block + 1] = 0;
            let mut t = MultiPoly::monomial(c.clone(), &rest);
            t = t.mul(&new0.pow(e[2 * block]))?.mul(&new1.pow(e[2 * block + 1]))?;
            r = r.add(&t)?;
        }
        Ok(r)
    }

    /// Fix `block` at a point, leaving a form in the remaining blocks.
    pub fn restrict_block(&self, block: usize, pt: &[Scalar; 2]) -> Result<MultiPoly> {
        let f = pt[0].field();
        let mut degree = self.degree.clone();
        degree.remove(block);
        let mut r = MultiPoly::zero(f, &degree);
        for (e, c) in &self.terms {
            let v = f.embed(c)?.try_mul(&pt[0].pow(e[2 * block] as u64))?.try_mul(&pt[1].pow(e[2 * block + 1] as u64))?;
            let mut e2 = e.clone();
            e2.drain(2 * block..2 * block + 2);
            r.add_term(e2, v)?;
        }
        Ok(r)
    }

    /// Split `f = sum_k x0^(d-k) x1^k * F_k` along `block`; returns the F_k.
    pub fn block_coefficients(&self, block: usize) -> Vec<MultiPoly> {
        let d = self.degree[block];
        let mut rest_deg = self.degree.clone();
        rest_deg.remove(block);
        let mut out = vec![MultiPoly::zero(self.field, &rest_deg); d as usize + 1];
        for (e, c) in &self.terms {
            let k = e[2 * block + 1] as usize;
            let mut e2 = e.clone();
            e2.drain(2 * block..2 * block + 2);
            out[k].add_term(e2, c.clone()).expect("homogeneous");
        }
        out
    }

    /// Re-insert a block of degree 0 at position `block`.
    pub fn insert_block(&self, block: usize) -> MultiPoly {
        let mut degree = self.degree.clone();
        degree.insert(block, 0);
        let mut r = MultiPoly::zero(self.field, &degree);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.insert(2 * block, 0);
            e2.insert(2 * block, 0);
            r.terms.insert(e2, c.clone());
        }
        r
    }

    /// Exact quotient by `g` when `g` divides `self`, else `None`.
    pub fn divide(&self, g: &MultiPoly) -> Result<Option<MultiPoly>> {
        self.same_ring(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut qdeg = Vec::new();
        for (a, b) in self.degree.iter().zip(&g.degree) {
            if b > a {
                return Ok(if self.is_zero() { Some(MultiPoly::zero(self.field, &vec![0; self.blocks()])) } else { None });
            }
            qdeg.push(a - b);
        }
        // Solve g * q = self linearly in the coefficients of q.
        let qbasis = component_basis(&qdeg);
        let target = component_basis(&self.degree);
        let index: BTreeMap<&Exp, usize> = target.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut cols = Vec::with_capacity(qbasis.len());
        for e in &qbasis {
            let prod = g.mul(&MultiPoly::monomial(self.field.one(), e))?;
            let mut col = vec![self.field.zero(); target.len()];
            for (pe, c) in prod.terms() {
                col[index[pe]] = c.clone();
            }
            cols.push(col);
        }
        let m = Matrix::from_columns(self.field, target.len(), &cols);
        Ok(m.solve(&self.coeff_vector()).map(|x| MultiPoly::from_coeff_vector(self.field, &qdeg, &x)))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            blocks: self.blocks(),
            degree: self.degree.clone(),
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coef: c.clone() }).collect(),
        }
    }

    /// Parse; `field` is used when there are no terms and checked otherwise.
    pub fn from_json(j: &PolyJson, field: Field) -> Result<MultiPoly> {
        if j.degree.len() != j.blocks {
            return Err(Error::Invalid("degree length differs from block count".into()));
        }
        let mut p = MultiPoly::zero(field, &j.degree);
        for t in &j.terms {
            p.add_term(t.exp.clone(), t.coef.clone())?;
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub blocks: usize,
    pub degree: Vec<u32>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    /// Field of the first coefficient, if any.
    pub fn field(&self) -> Option<Field> {
        self.terms.first().map(|t| t.coef.field())
    }
}

/// `A1 B2 - A2 B1` for `f_i = A_i z0 + B_i z1` linear in `block`.
pub fn linear_resultant(f1: &MultiPoly, f2: &MultiPoly, block: usize) -> Result<MultiPoly> {
    if f1.degree[block] != 1 || f2.degree[block] != 1 {
        return Err(Error::Invalid("resultant needs forms linear in the eliminated block".into()));
    }
    let c1 = f1.block_coefficients(block);
    let c2 = f2.block_coefficients(block);
    c1[0].mul(&c2[1])?.sub(&c2[0].mul(&c1[1])?)
}

/// Binary form sum_k c_k x0^(d-k) x1^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub coeffs: Vec<Scalar>,
}

pub type BinaryQuartic = BinaryForm;

impl BinaryForm {
    pub fn new(coeffs: Vec<Scalar>) -> BinaryForm {
        BinaryForm { coeffs }
    }

    pub fn from_i64(field: Field, c: &[i64]) -> BinaryForm {
        BinaryForm { coeffs: c.iter().map(|&x| field.from_i64(x)).collect() }
    }

    /// The product of linear forms (r1 x0 - r0 x1) over the given points
    /// [r0 : r1] of P^1, i.e. the form vanishing at those points.
    pub fn from_roots(field: Field, roots: &[[Scalar; 2]]) -> BinaryForm {
        let mut c = vec![field.one()];
        for r in roots {
            // multiply by (r1 x0 - r0 x1)
            let mut n = vec![field.zero(); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                n[k] = &n[k] + &(a * &r[1]);
                n[k + 1] = &n[k + 1] - &(a * &r[0]);
            }
            c = n;
        }
        BinaryForm { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn eval(&self, pt: &[Scalar; 2]) -> Result<Scalar> {
        let d = self.degree() as u64;
        let f = pt[0].field();
        let mut acc = f.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = f.embed(c)?.try_mul(&pt[0].pow(d - k as u64))?.try_mul(&pt[1].pow(k as u64))?;
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Substitute (x0, x1) -> (a x0 + b x1, c x0 + d x1).
    pub fn substitute(&self, g: &Matrix) -> Result<BinaryForm> {
        let d = self.degree();
        let p = MultiPoly::from_coeff_vector(self.field(), &[d as u32], &self.coeffs);
        let q = p.substitute_block(0, g)?;
        Ok(BinaryForm { coeffs: q.coeff_vector() })
    }

    pub fn scale(&self, c: &Scalar) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Dehomogenize at x1 = 1 (t = x0): coefficient list low degree first.
    fn dehomogenize(&self) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = self.coeffs.iter().rev().cloned().collect();
        trim(&mut v);
        v
    }

    /// Multiplicities of the roots over the algebraic closure, sorted
    /// descending. Uses square-free decomposition, so the characteristic must
    /// exceed the degree. Errors on the zero form.
    pub fn root_multiplicities(&self) -> Result<Vec<usize>> {
        if self.is_zero() {
            return Err(Error::Invalid("zero binary form has no root structure".into()));
        }
        let ch = self.field().characteristic();
        if ch != 0 && ch as usize <= self.degree() {
            return Err(Error::Unsupported(format!("square-free decomposition in characteristic {ch}")));
        }
        let t = self.dehomogenize();
        let mut mult = Vec::new();
        let at_inf = self.degree() - (t.len() - 1);
        if at_inf > 0 {
            mult.push(at_inf);
        }
        for (i, factor) in yun(&t)?.iter().enumerate() {
            for _ in 0..(factor.len() - 1) {
                mult.push(i + 1);
            }
        }
        mult.sort_unstable_by(|a, b| b.cmp(a));
        Ok(mult)
    }

    /// True when the form has no repeated root over the algebraic closure.
    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.root_multiplicities()?.iter().all(|&m| m == 1))
    }

    /// Number of leading zero coefficients, i.e. the power of x1 dividing the form.
    fn x1_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Greatest common divisor (monic after dehomogenizing); the zero form
    /// is the identity.
    pub fn gcd(&self, o: &BinaryForm) -> Result<BinaryForm> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        let f = self.field();
        let inf = self.x1_order().min(o.x1_order());
        let g = upoly_gcd(&self.dehomogenize(), &o.dehomogenize())?;
        // back to a binary form: g(x0) * x1^(deg g... ) then times x1^inf
        let dg = g.len() - 1;
        let mut coeffs: Vec<Scalar> = vec![f.zero(); inf];
        coeffs.extend(g.iter().rev().cloned());
        debug_assert_eq!(coeffs.len(), dg + inf + 1);
        Ok(BinaryForm { coeffs })
    }

    /// Exact square root q with q^2 = self, or `None`.
    pub fn sqrt(&self) -> Option<BinaryForm> {
        let d = self.degree();
        if d % 2 == 1 {
            return None;
        }
        let f = self.field();
        let h = d / 2;
        if self.is_zero() {
            return Some(BinaryForm { coeffs: vec![f.zero(); h + 1] });
        }
        let k = self.x1_order();
        if k % 2 == 1 {
            return None;
        }
        let m = k / 2;
        let lead = crate::exactmath::sqrt_in_field(&self.coeffs[k])?;
        let two_lead_inv = (&lead * &f.from_i64(2)).inv().ok()?;
        let mut q = vec![f.zero(); h + 1];
        q[m] = lead;
        for n in 1..=(h - m) {
            let mut acc = self.coeffs[k + n].clone();
            for i in 1..n {
                acc = &acc - &(&q[m + i] * &q[m + n - i]);
            }
            q[m + n] = &acc * &two_lead_inv;
        }
        let cand = BinaryForm { coeffs: q };
        (cand.square() == *self).then_some(cand)
    }

    pub fn mul(&self, o: &BinaryForm) -> BinaryForm {
        let f = self.field();
        let mut c = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        BinaryForm { coeffs: c }
    }

    pub fn square(&self) -> BinaryForm {
        self.mul(self)
    }

    pub fn derivative_x0(&self) -> BinaryForm {
        let d = self.degree();
        let f = self.field();
        if d == 0 {
            return BinaryForm { coeffs: vec![f.zero()] };
        }
        BinaryForm { coeffs: (0..d).map(|k| &self.coeffs[k] * &f.from_i64((d - k) as i64)).collect() }
    }

    /// Base change of the coefficients.
    pub fn embed(&self, field: Field) -> Result<BinaryForm> {
        Ok(BinaryForm { coeffs: self.coeffs.iter().map(|c| field.embed(c)).collect::<Result<_>>()? })
    }

    /// Roots in `field` (the coefficient field or its extension) with
    /// multiplicities, as normalized points of P^1. Roots of square-free
    /// factors of degree >= 3 are found by enumeration, so over Q only
    /// roots of factors of degree <= 2 are reported.
    pub fn roots_in(&self, field: Field) -> Result<Vec<([Scalar; 2], usize)>> {
        if self.is_zero() {
            return Err(Error::Invalid("zero binary form".into()));
        }
        let me = self.embed(field)?;
        let mut out = Vec::new();
        let k = me.x1_order();
        if k > 0 {
            out.push(([field.one(), field.zero()], k));
        }
        let t = me.dehomogenize();
        if t.len() <= 1 {
            return Ok(out);
        }
        for (i, fac) in yun(&t)?.iter().enumerate() {
            let mult = i + 1;
            let deg = fac.len() - 1;
            let roots: Vec<Scalar> = match deg {
                0 => vec![],
                1 => vec![(&fac[0].neg()).div(&fac[1])?],
                2 => {
                    let (c, b, a) = (&fac[0], &fac[1], &fac[2]);
                    let disc = &(b * b) - &(&(a * c) * &field.from_i64(4));
                    match crate::exactmath::sqrt_in_field(&disc) {
                        Some(s) => {
                            let two_a = a * &field.from_i64(2);
                            let r1 = (&b.neg() + &s).div(&two_a)?;
                            let r2 = (&b.neg() - &s).div(&two_a)?;
                            if r1 == r2 { vec![r1] } else { vec![r1, r2] }
                        }
                        None => vec![],
                    }
                }
                _ => {
                    if field.is_finite() {
                        field.elements()?.into_iter().filter(|x| upoly_eval(fac, x).is_zero()).collect()
                    } else {
                        vec![]
                    }
                }
            };
            for r in roots {
                out.push((normalize_p1(&[r, field.one()]), mult));
            }
        }
        Ok(out)
    }
}

/// Scale a homogeneous pair so its first nonzero coordinate is 1.
pub fn normalize_p1(pt: &[Scalar; 2]) -> [Scalar; 2] {
    let lead = if pt[0].is_zero() { &pt[1] } else { &pt[0] };
    let inv = lead.inv().expect("point of P^1 has a nonzero coordinate");
    [&pt[0] * &inv, &pt[1] * &inv]
}

/// All points of P^1 over a finite field, normalized, [1:t] first then [0:1].
pub fn p1_points(field: Field) -> Result<Vec<[Scalar; 2]>> {
    let mut out: Vec<[Scalar; 2]> = field.elements()?.into_iter().map(|t| [field.one(), t]).collect();
    out.push([field.zero(), field.one()]);
    Ok(out)
}

fn trim(v: &mut Vec<Scalar>) {
    while v.len() > 1 && v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
}

pub(crate) fn upoly_eval(p: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = x.field().zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn upoly_deriv(p: &[Scalar]) -> Vec<Scalar> {
    if p.len() <= 1 {
        return vec![p[0].field().zero()];
    }
    let f = p[0].field();
    let mut d: Vec<Scalar> = (1..p.len()).map(|k| &p[k] * &f.from_i64(k as i64)).collect();
    trim(&mut d);
    d
}

fn is_zero_poly(p: &[Scalar]) -> bool {
    p.iter().all(Scalar::is_zero)
}

/// Quotient and remainder of univariate polynomials (low degree first).
fn upoly_divmod(a: &[Scalar], b: &[Scalar]) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let f = a[0].field();
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    if is_zero_poly(&b) {
        return Err(Error::DivisionByZero);
    }
    let db = b.len() - 1;
    let lead_inv = b[db].inv()?;
    if r.len() < b.len() || is_zero_poly(&r) {
        return Ok((vec![f.zero()], r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db && !is_zero_poly(&r) {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&c * bc);
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim(&mut q);
    Ok((q, r))
}

fn monic(p: &[Scalar]) -> Vec<Scalar> {
    let mut p = p.to_vec();
    trim(&mut p);
    let lc = p.last().unwrap().clone();
    if lc.is_zero() {
        return p;
    }
    let inv = lc.inv().expect("nonzero");
    p.iter().map(|c| c * &inv).collect()
}

fn upoly_gcd(a: &[Scalar], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !is_zero_poly(&y) {
        let (_, r) = upoly_divmod(&x, &y)?;
        x = y;
        y = r;
    }
    Ok(monic(&x))
}

/// Yun's square-free decomposition: factors a_1, a_2, ... with p = c prod a_i^i.
fn yun(p: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    let mut out = Vec::new();
    if p.len() <= 1 {
        return Ok(out);
    }
    let dp = upoly_deriv(p);
    let a0 = upoly_gcd(p, &dp)?;
    let mut b = upoly_divmod(p, &a0)?.0;
    let mut c = upoly_divmod(&dp, &a0)?.0;
    let mut d = sub_poly(&c, &upoly_deriv(&b));
    loop {
        let a = upoly_gcd(&b, &d)?;
        out.push(a.clone());
        b = upoly_divmod(&b, &a)?.0;
        if b.len() <= 1 {
            break;
        }
        c = upoly_divmod(&d, &a)?.0;
        d = sub_poly(&c, &upoly_deriv(&b));
    }
    Ok(out)
}

fn sub_poly(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let f = a[0].field();
    let n = a.len().max(b.len());
    let mut r: Vec<Scalar> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            &x - &y
        })
        .collect();
    trim(&mut r);
    r
}

/// `B^2 - 4AC` for `f = A z0^2 + B z0 z1 + C z1^2` quadratic in `block`;
/// the result is a binary form in the other block of a (2,2) form.
pub fn quadratic_discriminant(f: &MultiPoly, block: usize) -> Result<BinaryQuartic> {
    if f.field.characteristic() == 2 {
        return Err(Error::Unsupported("discriminant in characteristic 2".into()));
    }
    if f.blocks() != 2 || f.degree[block] != 2 {
        return Err(Error::Invalid("discriminant needs a form quadratic in the block".into()));
    }
    let c = f.block_coefficients(block);
    let four = f.field.from_i64(4);
    let disc = c[1].mul(&c[1])?.sub(&c[0].mul(&c[2])?.scale(&four))?;
    let other = f.degree[1 - block];
    let disc = if disc.is_zero() { MultiPoly::zero(f.field, &[2 * other]) } else { disc };
    Ok(BinaryForm { coeffs: disc.coeff_vector() })
}

/// Classical invariants (I, J) of a binary quartic.
pub fn quartic_invariants(q: &BinaryQuartic) -> Result<(Scalar, Scalar)> {
    if q.degree() != 4 {
        return Err(Error::Invalid("not a quartic".into()));
    }
    let f = q.field();
    let [a0, a1, a2, a3, a4] = [&q.coeffs[0], &q.coeffs[1], &q.coeffs[2], &q.coeffs[3], &q.coeffs[4]];
    let k = |n: i64| f.from_i64(n);
    let i = &(&(&k(12) * &(a0 * a4)) - &(&k(3) * &(a1 * a3))) + &(a2 * a2);
    let j = &(&(&(&(&k(72) * &(&(a0 * a2) * a4)) + &(&k(9) * &(&(a1 * a2) * a3))) - &(&k(27) * &(&(a0 * a3) * a3)))
        - &(&k(27) * &(&(a4 * a1) * a1)))
        - &(&k(2) * &(&(a2 * a2) * a2));
    Ok((i, j))
}

/// j = 6912 I^3 / (4 I^3 - J^2).
pub fn j_from_quartic(q: &BinaryQuartic) -> Result<Scalar> {
    let f = q.field();
    let ch = f.characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::Unsupported("j-invariant in characteristic 2 or 3".into()));
    }
    let (i, j) = quartic_invariants(q)?;
    let i3 = i.pow(3);
    let den = &(&f.from_i64(4) * &i3) - &(&j * &j);
    if den.is_zero() {
        return Err(Error::SingularJ);
    }
    (&f.from_i64(6912) * &i3).div(&den)
}
