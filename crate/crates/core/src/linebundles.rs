//! Line bundles on (2,2) curves.
//!
//! On reduced W a bundle is kept as O(m,n)|_W(-Z) with Z a signed set of
//! smooth rational points; sections are ambient forms vanishing on Z modulo
//! multiples of f. On the double diagonal 2Δ bundles are given by a two-chart
//! gluing and their cohomology is read off a truncated Cech complex.

use serde::{Deserialize, Serialize};

use crate::curves::{classify_kodaira, factor_11, fiber_points, Axis, CurveW, KodairaType, PointW};
use crate::error::{Error, Result};
use crate::exactmath::{Field, Matrix, Scalar};
use crate::polyring::{component_basis, p1_points, MultiPoly, PolyJson};

/// O(m,n)|_W(-minus + plus) on a reduced curve W.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleRep {
    w: CurveW,
    kind: KodairaType,
    pub m: i64,
    pub n: i64,
    minus: Vec<PointW>,
    plus: Vec<PointW>,
}

fn check_point(w: &CurveW, p: &PointW) -> Result<()> {
    if p.field() != w.field() {
        return Err(Error::Invalid(format!("point {p:?} is not over {}", w.field())));
    }
    if !w.contains(p)? {
        return Err(Error::Invalid(format!("point {p:?} is not on W")));
    }
    if w.is_singular_at(p)? {
        return Err(Error::Invalid(format!("point {p:?} is a singular point of W")));
    }
    Ok(())
}

/// Degree (2m + 2n - |Z| for effective Z) and h^0 on the given curve.
pub fn lb_make(w: &CurveW, m: i64, n: i64, z: &[PointW]) -> Result<LineBundleRep> {
    for (i, p) in z.iter().enumerate() {
        if z[..i].contains(p) {
            return Err(Error::Invalid("repeated point in Z".into()));
        }
    }
    lb_make_signed(w, m, n, z, &[])
}

/// Same as `lb_make` but with virtual points allowed.
pub fn lb_make_signed(w: &CurveW, m: i64, n: i64, minus: &[PointW], plus: &[PointW]) -> Result<LineBundleRep> {
    let kind = classify_kodaira(w)?;
    if kind == KodairaType::NonReduced {
        return Err(Error::Unsupported("divisor representatives need reduced W".into()));
    }
    for p in minus.iter().chain(plus) {
        check_point(w, p)?;
    }
    Ok(LineBundleRep { w: w.clone(), kind, m, n, minus: minus.to_vec(), plus: plus.to_vec() })
}

impl LineBundleRep {
    pub fn curve(&self) -> &CurveW {
        &self.w
    }

    pub fn kind(&self) -> KodairaType {
        self.kind
    }

    pub fn minus(&self) -> &[PointW] {
        &self.minus
    }

    pub fn plus(&self) -> &[PointW] {
        &self.plus
    }

    pub fn field(&self) -> Field {
        self.w.field()
    }

    pub fn degree(&self) -> i64 {
        2 * self.m + 2 * self.n - self.minus.len() as i64 + self.plus.len() as i64
    }

    pub fn is_effective_rep(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn inverse(&self) -> LineBundleRep {
        LineBundleRep {
            w: self.w.clone(),
            kind: self.kind,
            m: -self.m,
            n: -self.n,
            minus: self.plus.clone(),
            plus: self.minus.clone(),
        }
    }

    pub fn tensor(&self, o: &LineBundleRep) -> Result<LineBundleRep> {
        if self.w != o.w {
            return Err(Error::Invalid("bundles live on different curves".into()));
        }
        let mut r = self.clone();
        r.m += o.m;
        r.n += o.n;
        r.minus.extend(o.minus.iter().cloned());
        r.plus.extend(o.plus.iter().cloned());
        Ok(r)
    }

    /// Tensor with O(k_u, k_v)|_W.
    pub fn twist(&self, k_u: i64, k_v: i64) -> LineBundleRep {
        let mut r = self.clone();
        r.m += k_u;
        r.n += k_v;
        r
    }

    /// O(m,n)|_W on the same curve.
    pub fn ambient(&self, m: i64, n: i64) -> LineBundleRep {
        LineBundleRep { w: self.w.clone(), kind: self.kind, m, n, minus: Vec::new(), plus: Vec::new() }
    }

    /// Same bundle on the transported curve (g x g)-image; points move along.
    pub fn transform(&self, g: &Matrix, h: &Matrix) -> Result<LineBundleRep> {
        let w = self.w.transform(g, h)?;
        let mv = |p: &PointW| -> Result<PointW> {
            let x = g.mul_vec(&p.x)?;
            let y = h.mul_vec(&p.y)?;
            Ok(PointW::new([x[0].clone(), x[1].clone()], [y[0].clone(), y[1].clone()]))
        };
        let minus = self.minus.iter().map(mv).collect::<Result<Vec<_>>>()?;
        let plus = self.plus.iter().map(mv).collect::<Result<Vec<_>>>()?;
        lb_make_signed(&w, self.m, self.n, &minus, &plus)
    }

    pub fn to_json(&self) -> BundleJson {
        BundleJson {
            curve: self.w.f().to_json(),
            twist: [self.m, self.n],
            minus_points: self.minus.clone(),
            plus_points: self.plus.clone(),
        }
    }

    pub fn from_json(j: &BundleJson) -> Result<LineBundleRep> {
        let field = j.curve.field().ok_or_else(|| Error::Invalid("curve has no terms".into()))?;
        let w = CurveW::new(MultiPoly::from_json(&j.curve, field)?)?;
        lb_make_signed(&w, j.twist[0], j.twist[1], &j.minus_points, &j.plus_points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub curve: PolyJson,
    pub twist: [i64; 2],
    pub minus_points: Vec<PointW>,
    pub plus_points: Vec<PointW>,
}

fn fiber_coord(p: &PointW, axis: Axis) -> [Scalar; 2] {
    match axis {
        Axis::U => p.x.clone(),
        Axis::V => p.y.clone(),
    }
}

/// The residual point of the fiber through p: fiber . W = p + p'.
fn partner(w: &CurveW, p: &PointW, axis: Axis) -> Result<Option<PointW>> {
    let pts = fiber_points(w, axis, &fiber_coord(p, axis))?;
    for (q, mult) in &pts {
        let Some(q) = q.to_base() else { return Ok(None) };
        if q == *p {
            if *mult >= 2 {
                return Ok(Some(q));
            }
        } else {
            return Ok(if w.is_singular_at(&q)? { None } else { Some(q) });
        }
    }
    Ok(None)
}

fn other_axis(a: Axis) -> Axis {
    match a {
        Axis::U => Axis::V,
        Axis::V => Axis::U,
    }
}

fn bump(l: &mut LineBundleRep, axis: Axis, k: i64) {
    match axis {
        Axis::U => l.m += k,
        Axis::V => l.n += k,
    }
}

fn cancel_pairs(l: &mut LineBundleRep) {
    let mut i = 0;
    while i < l.plus.len() {
        if let Some(j) = l.minus.iter().position(|q| *q == l.plus[i]) {
            l.minus.remove(j);
            l.plus.remove(i);
        } else {
            i += 1;
        }
    }
}

/// Fiber coordinates tried when looking for a split fiber.
fn fiber_candidates(field: Field) -> Result<Vec<[Scalar; 2]>> {
    if field.is_finite() {
        return p1_points(field);
    }
    let mut out = Vec::new();
    for k in 0..=40i64 {
        for t in if k == 0 { vec![0] } else { vec![k, -k] } {
            out.push([field.one(), field.from_i64(t)]);
        }
    }
    out.push([field.zero(), field.one()]);
    Ok(out)
}

/// The linear form of the given axis vanishing at c.
fn fiber_form(field: Field, axis: Axis, c: &[Scalar; 2]) -> MultiPoly {
    let block = match axis {
        Axis::U => 0,
        Axis::V => 1,
    };
    let l = MultiPoly::linear(2, block, &c[1], &c[0].neg());
    debug_assert_eq!(l.field, field);
    l
}

/// Raise along `axis`, returning the multiplier that realizes the isomorphism
/// on sections.
fn raise_tracked(l: &LineBundleRep, axis: Axis, avoid: &[PointW]) -> Result<(LineBundleRep, MultiPoly)> {
    let field = l.field();
    for c in fiber_candidates(field)? {
        let Ok(pts) = fiber_points(&l.w, axis, &c) else { continue };
        if pts.len() != 2 || pts.iter().any(|(_, m)| *m != 1) {
            continue;
        }
        let Some(a) = pts[0].0.to_base() else { continue };
        let Some(b) = pts[1].0.to_base() else { continue };
        let used = |p: &PointW| l.minus.contains(p) || l.plus.contains(p) || avoid.contains(p);
        if used(&a) || used(&b) || l.w.is_singular_at(&a)? || l.w.is_singular_at(&b)? {
            continue;
        }
        let mut r = l.clone();
        bump(&mut r, axis, 1);
        r.minus.push(a);
        r.minus.push(b);
        return Ok((r, fiber_form(field, axis, &c)));
    }
    Err(Error::ExtendField(format!("no split fiber along {axis:?} avoiding the given points")))
}

/// Re-represent via O(1,0)|_W = O(fiber): (m,n) grows by one on `axis` and the
/// two fiber points join Z. Isomorphism class and degree are unchanged.
pub fn lb_raise(l: &LineBundleRep, axis: Axis) -> Result<LineBundleRep> {
    raise_tracked(l, axis, &[]).map(|r| r.0)
}

/// `lb_raise` with the new fiber points kept off `avoid`.
pub fn lb_raise_avoiding(l: &LineBundleRep, axis: Axis, avoid: &[PointW]) -> Result<LineBundleRep> {
    raise_tracked(l, axis, avoid).map(|r| r.0)
}

fn range_ok(m: i64, n: i64) -> bool {
    !((m <= 0 && n >= 2) || (m >= 2 && n <= 0))
}

fn fix_range(l: &LineBundleRep, avoid: &[PointW]) -> Result<(LineBundleRep, MultiPoly)> {
    let mut cur = l.clone();
    let mut mult = MultiPoly::constant(l.field().one(), 2);
    while !range_ok(cur.m, cur.n) {
        let axis = if cur.m <= 0 { Axis::U } else { Axis::V };
        let (next, form) = raise_tracked(&cur, axis, avoid)?;
        mult = mult.mul(&form)?;
        cur = next;
    }
    Ok((cur, mult))
}

const NORMALIZE_STEPS: usize = 256;

/// Effective representative with distinct points, none in `avoid`, and
/// (m,n) in the range where ambient H^1(O(m-2,n-2)) vanishes.
pub fn lb_normalize(l: &LineBundleRep, avoid: &[PointW]) -> Result<LineBundleRep> {
    let mut cur = l.clone();
    cancel_pairs(&mut cur);
    for _ in 0..NORMALIZE_STEPS {
        if let Some(p) = cur.plus.pop() {
            // O(P) = O(fiber)(-P'); prefer a partner that creates no clash.
            let mut options = Vec::new();
            for axis in [Axis::U, Axis::V] {
                if let Some(q) = partner(&cur.w, &p, axis)? {
                    let clash = cur.minus.contains(&q) || avoid.contains(&q);
                    options.push((clash, axis, q));
                }
            }
            options.sort_by_key(|o| o.0);
            let Some((_, axis, q)) = options.into_iter().next() else {
                return Err(Error::ExtendField("no rational fiber partner for a virtual point".into()));
            };
            bump(&mut cur, axis, 1);
            cur.minus.push(q);
            cancel_pairs(&mut cur);
            continue;
        }
        let bad = (0..cur.minus.len()).find(|&i| {
            let p = &cur.minus[i];
            avoid.contains(p) || cur.minus[..i].contains(p)
        });
        let Some(i) = bad else { break };
        let p = cur.minus[i].clone();
        // -P = -(fiber_1) + P' = -(fiber_1) + (fiber_2) - P''.
        let mut moved = false;
        for first in [Axis::U, Axis::V] {
            let Some(p1) = partner(&cur.w, &p, first)? else { continue };
            let Some(p2) = partner(&cur.w, &p1, other_axis(first))? else { continue };
            let rest: Vec<&PointW> = cur.minus.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
            if rest.contains(&&p2) || avoid.contains(&p2) || p2 == p {
                continue;
            }
            bump(&mut cur, first, -1);
            bump(&mut cur, other_axis(first), 1);
            cur.minus[i] = p2;
            moved = true;
            break;
        }
        if !moved {
            return Err(Error::SpecialPosition(format!("cannot move the point {p:?} off the excluded set")));
        }
    }
    if !cur.plus.is_empty() {
        return Err(Error::Internal("normalization did not terminate".into()));
    }
    Ok(fix_range(&cur, avoid)?.0)
}

/// Global sections of a normalized representative.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    /// The effective representative the basis refers to.
    pub rep: LineBundleRep,
    /// Coset representatives, forms of bidegree (rep.m, rep.n).
    pub basis: Vec<MultiPoly>,
    solver: Option<Matrix>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> [u32; 2] {
        [self.rep.m.max(0) as u32, self.rep.n.max(0) as u32]
    }

    /// Coordinates of a form (vanishing on Z) in the basis.
    pub fn coordinates(&self, g: &MultiPoly) -> Result<Vec<Scalar>> {
        let Some(solver) = &self.solver else {
            return Err(Error::Internal("coordinates in a zero section space".into()));
        };
        if g.degree != self.degree() {
            return Err(Error::Invalid(format!("form of bidegree {:?}, expected {:?}", g.degree, self.degree())));
        }
        let x = solver
            .solve(&g.coeff_vector())
            .ok_or_else(|| Error::Internal("form is not a section of the bundle".into()))?;
        Ok(x[..self.basis.len()].to_vec())
    }

    /// Section values at a point (not in Z); used for classifying maps.
    pub fn evaluate(&self, p: &PointW) -> Result<Vec<Scalar>> {
        self.basis.iter().map(|b| b.eval(&p.coords())).collect()
    }
}

fn monomial_value(e: &[u32], p: &PointW) -> Scalar {
    let c = [&p.x[0], &p.x[1], &p.y[0], &p.y[1]];
    let mut v = p.field().one();
    for (k, &ex) in e.iter().enumerate() {
        if ex > 0 {
            v = &v * &c[k].pow(ex as u64);
        }
    }
    v
}

fn sections_of_normalized(rep: LineBundleRep) -> Result<SectionSpace> {
    if rep.m < 0 || rep.n < 0 {
        return Ok(SectionSpace { rep, basis: Vec::new(), solver: None });
    }
    let field = rep.field();
    let deg = [rep.m as u32, rep.n as u32];
    let mons = component_basis(&deg);
    let dim = mons.len();
    let kernel: Vec<Vec<Scalar>> = if rep.minus.is_empty() {
        (0..dim).map(|i| (0..dim).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
    } else {
        let mut ev = Matrix::zeros(field, rep.minus.len(), dim);
        for (i, p) in rep.minus.iter().enumerate() {
            for (j, e) in mons.iter().enumerate() {
                ev.set(i, j, monomial_value(e, p));
            }
        }
        ev.kernel_basis()
    };
    let mut fmult: Vec<Vec<Scalar>> = Vec::new();
    if rep.m >= 2 && rep.n >= 2 {
        for e in component_basis(&[deg[0] - 2, deg[1] - 2]) {
            fmult.push(rep.w.f().mul(&MultiPoly::monomial(field.one(), &e))?.coeff_vector());
        }
    }
    let nf = fmult.len();
    let cols: Vec<Vec<Scalar>> = fmult.iter().chain(kernel.iter()).cloned().collect();
    let (_, pivots) = Matrix::from_columns(field, dim, &cols).rref();
    if pivots.iter().filter(|&&c| c < nf).count() != nf {
        return Err(Error::Internal("multiples of f are linearly dependent".into()));
    }
    let chosen: Vec<Vec<Scalar>> = pivots.iter().filter(|&&c| c >= nf).map(|&c| cols[c].clone()).collect();
    let basis: Vec<MultiPoly> = chosen.iter().map(|v| MultiPoly::from_coeff_vector(field, &deg, v)).collect();
    let solver_cols: Vec<Vec<Scalar>> = chosen.iter().chain(fmult.iter()).cloned().collect();
    let solver = if solver_cols.is_empty() { None } else { Some(Matrix::from_columns(field, dim, &solver_cols)) };
    let space = SectionSpace { rep, basis, solver };
    riemann_roch_check(&space)?;
    Ok(space)
}

/// On integral W (arithmetic genus 1, trivial dualizing sheaf) h^0 is forced
/// by the degree except in degree 0.
fn riemann_roch_check(s: &SectionSpace) -> Result<()> {
    if !s.rep.kind.is_integral() {
        return Ok(());
    }
    let d = s.rep.degree();
    let h = s.dim() as i64;
    let ok = if d >= 1 {
        h == d
    } else if d < 0 {
        h == 0
    } else {
        h <= 1
    };
    if ok {
        Ok(())
    } else {
        Err(Error::SpecialPosition(format!("h0 = {h} for a degree {d} bundle on an integral curve")))
    }
}

/// Basis of H^0 after normalization.
pub fn lb_sections(l: &LineBundleRep) -> Result<SectionSpace> {
    sections_of_normalized(lb_normalize(l, &[])?)
}

pub fn lb_h0(l: &LineBundleRep) -> Result<usize> {
    Ok(lb_sections(l)?.dim())
}

/// h^1 = h^0 - deg, checked against h^0 of the inverse.
pub fn lb_h1(l: &LineBundleRep) -> Result<usize> {
    Ok(lb_cohomology(l)?.1)
}

pub fn lb_cohomology(l: &LineBundleRep) -> Result<(usize, usize)> {
    let h0 = lb_h0(l)? as i64;
    let h1 = h0 - l.degree();
    let dual = lb_h0(&l.inverse())? as i64;
    if h1 < 0 || h1 != dual {
        return Err(Error::Internal(format!("h1 = {h1} but h0 of the inverse is {dual}")));
    }
    Ok((h0 as usize, h1 as usize))
}

/// Multiplication of sections H^0(L_1) x ... x H^0(L_k) -> H^0(L_1 ... L_k).
#[derive(Clone, Debug)]
pub struct MultMap {
    /// Columns indexed by tuples of source basis vectors, first factor most
    /// significant; rows by the target basis.
    pub matrix: Matrix,
    pub sources: Vec<SectionSpace>,
    pub target: SectionSpace,
}

pub fn lb_mult_map_multi(ls: &[&LineBundleRep]) -> Result<MultMap> {
    let first = ls.first().ok_or_else(|| Error::Invalid("empty product".into()))?;
    let field = first.field();
    let sources = ls.iter().map(|l| lb_sections(l)).collect::<Result<Vec<_>>>()?;
    let mut prod = first.ambient(0, 0);
    for s in &sources {
        for p in &s.rep.minus {
            if prod.minus.contains(p) {
                return Err(Error::Invalid("factors share a point of Z; re-represent one of them".into()));
            }
        }
        prod = prod.tensor(&s.rep)?;
    }
    let (rep, multiplier) = fix_range(&prod, &[])?;
    let target = sections_of_normalized(rep)?;
    let ncols: usize = sources.iter().map(SectionSpace::dim).product();
    let mut matrix = Matrix::zeros(field, target.dim(), ncols);
    if ncols == 0 || target.dim() == 0 {
        return Ok(MultMap { matrix, sources, target });
    }
    let dims: Vec<usize> = sources.iter().map(SectionSpace::dim).collect();
    for col in 0..ncols {
        let mut rem = col;
        let mut idx = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            idx[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut g = multiplier.clone();
        for (k, &i) in idx.iter().enumerate() {
            g = g.mul(&sources[k].basis[i])?;
        }
        for (r, c) in target.coordinates(&g)?.into_iter().enumerate() {
            matrix.set(r, col, c);
        }
    }
    Ok(MultMap { matrix, sources, target })
}

/// H^0(L) x H^0(L') -> H^0(L L') in the bases of `lb_sections`.
pub fn lb_mult_map(l: &LineBundleRep, l2: &LineBundleRep) -> Result<Matrix> {
    Ok(lb_mult_map_multi(&[l, l2])?.matrix)
}

/// Degrees on the two components of a reducible W, in the order returned by
/// the (1,1)-factorization; `None` on irreducible W.
pub fn component_degrees(l: &LineBundleRep) -> Result<Option<(i64, i64)>> {
    if !l.kind.is_reducible() {
        return Ok(None);
    }
    let (g, _) = factor_11(l.w.f()).ok_or_else(|| Error::Internal("reducible curve without (1,1) factor".into()))?;
    let on_g = |p: &PointW| -> Result<bool> {
        let pe = PointW::new(
            [g.field.embed(&p.x[0])?, g.field.embed(&p.x[1])?],
            [g.field.embed(&p.y[0])?, g.field.embed(&p.y[1])?],
        );
        Ok(g.eval(&pe.coords())?.is_zero())
    };
    let (mut dg, mut dh) = (l.m + l.n, l.m + l.n);
    for (pts, sign) in [(&l.minus, -1), (&l.plus, 1)] {
        for p in pts {
            if on_g(p)? {
                dg += sign;
            } else {
                dh += sign;
            }
        }
    }
    Ok(Some((dg, dh)))
}

/// Equal degree (componentwise on reducible W) and h^0(L L'^-1) = 1.
pub fn lb_isomorphic(l: &LineBundleRep, l2: &LineBundleRep) -> Result<bool> {
    if l.w != l2.w {
        return Err(Error::Invalid("bundles live on different curves".into()));
    }
    if l.degree() != l2.degree() || component_degrees(l)? != component_degrees(l2)? {
        return Ok(false);
    }
    Ok(lb_h0(&l.tensor(&l2.inverse())?)? == 1)
}

/// Ext^i(i_*U, i_*U) on P1 x P1 for U = O(m,n)|_W, via the resolution by
/// O(m-2,n-2) -> O(m,n): e_i = h^i(O_W) + h^(i-1)(O(2,2)|_W).
pub fn extpair_dims(w: &CurveW, m: i64, n: i64) -> Result<(usize, usize, usize)> {
    let u = lb_make(w, m, n, &[])?;
    let (h0o, h1o) = lb_cohomology(&u.ambient(0, 0))?;
    let (h0n, h1n) = lb_cohomology(&u.ambient(2, 2))?;
    let e = (h0o, h1o + h0n, h1n);
    if e.0 as i64 - e.1 as i64 + e.2 as i64 != -8 {
        return Err(Error::Internal(format!("Ext alternating sum of {e:?} is not -8")));
    }
    Ok(e)
}

/// A line bundle on the double diagonal 2Δ: u*O(k_u) (x) v*O(k_v) (x) L_a,
/// where L_a is glued from the trivial bundles on the charts x != inf and
/// x != 0 by 1 + a z v.
///
/// Charts: (z, u) with x = z, y = z + u; (w, v) with 1/x = w, 1/y = w - v;
/// u = z^2 v on the overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRLineBundle {
    pub k_u: i64,
    pub k_v: i64,
    pub a: Scalar,
}

impl NRLineBundle {
    pub fn new(k_u: i64, k_v: i64, a: Scalar) -> NRLineBundle {
        NRLineBundle { k_u, k_v, a }
    }

    /// L_a with no twists.
    pub fn la(a: Scalar) -> NRLineBundle {
        NRLineBundle { k_u: 0, k_v: 0, a }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    /// Degree on the reduced diagonal.
    pub fn restriction_degree(&self) -> i64 {
        self.k_u + self.k_v
    }

    pub fn chi(&self) -> i64 {
        2 * self.restriction_degree()
    }

    pub fn twist(&self, k_u: i64, k_v: i64) -> NRLineBundle {
        NRLineBundle { k_u: self.k_u + k_u, k_v: self.k_v + k_v, a: self.a.clone() }
    }

    pub fn tensor(&self, o: &NRLineBundle) -> Result<NRLineBundle> {
        Ok(NRLineBundle { k_u: self.k_u + o.k_u, k_v: self.k_v + o.k_v, a: self.a.try_add(&o.a)? })
    }

    /// Transition s_2 = z^-K (1 + c z v) s_1 with K = k_u + k_v, c = a - k_v.
    fn transition(&self) -> (i64, Scalar) {
        let c = self.a.try_sub(&self.field().from_i64(self.k_v)).expect("same field");
        (self.restriction_degree(), c)
    }
}

/// Truncation bound for the Cech complex of a bundle.
pub fn nr_bound(l: &NRLineBundle) -> usize {
    (2 * (l.k_u.abs() + l.k_v.abs()) + 8) as usize
}

/// A divisor on the reduced diagonal inside the chart x != inf: points z_i
/// with multiplicities.
pub type NrDivisor = [(Scalar, u32)];

pub fn divisor_degree(d: &NrDivisor) -> i64 {
    d.iter().map(|(_, k)| *k as i64).sum()
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// (h^0(L), h^1(L), h^0(ker(L -> L|_D))) at truncation bound `n`.
fn cech_at(l: &NRLineBundle, d: &NrDivisor, n: usize) -> Result<(usize, usize, usize)> {
    let field = l.field();
    let (k, c) = l.transition();
    let ni = n as i64;
    let lo = -ni;
    let hi0 = (ni - k).max(0);
    let hi1 = (ni + 2 - k).max(0);
    let rows0 = (hi0 - lo + 1) as usize;
    let rows1 = (hi1 - lo + 1) as usize;
    let cols = 4 * (n + 1);
    let mut m = Matrix::zeros(field, rows0 + rows1, cols);
    let row0 = |e: i64| (e - lo) as usize;
    let row1 = |e: i64| rows0 + (e - lo) as usize;
    let one = field.one();
    let mone = one.neg();
    for i in 0..=n {
        let ii = i as i64;
        // f0_i z^i
        m.set(row0(ii - k), i, one.clone());
        if !c.is_zero() {
            m.set(row1(ii + 1 - k), i, c.clone());
        }
        // f1_i z^i u = z^(i+2) v
        m.set(row1(ii + 2 - k), (n + 1) + i, one.clone());
        // g0_i w^i and g1_i w^i v
        m.set(row0(-ii), 2 * (n + 1) + i, mone.clone());
        m.set(row1(-ii), 3 * (n + 1) + i, mone.clone());
    }
    let rank = m.rank();
    let h0 = cols - rank;
    let h1 = rows0 + rows1 - rank;
    if d.is_empty() {
        return Ok((h0, h1, h0));
    }
    let extra: usize = d.iter().map(|(_, mult)| *mult as usize).sum();
    let mut md = Matrix::zeros(field, rows0 + rows1 + extra, cols);
    for r in 0..rows0 + rows1 {
        for j in 0..cols {
            let v = m.get(r, j);
            if !v.is_zero() {
                md.set(r, j, v.clone());
            }
        }
    }
    let mut r = rows0 + rows1;
    for (z, mult) in d {
        for order in 0..*mult as usize {
            // coefficient of (z - z_i)^order in f0
            for i in order..=n {
                let coef = &field.from_i64(binomial(i, order)) * &z.pow((i - order) as u64);
                md.set(r, i, coef);
            }
            r += 1;
        }
    }
    let hd = cols - md.rank();
    Ok((h0, h1, hd))
}

fn cech_stable(l: &NRLineBundle, d: &NrDivisor) -> Result<(usize, usize, usize)> {
    for (z, _) in d {
        if z.field() != l.field() {
            return Err(Error::Invalid("divisor point over a different field".into()));
        }
    }
    for (i, (z, _)) in d.iter().enumerate() {
        if d[..i].iter().any(|(y, _)| y == z) {
            return Err(Error::Invalid("repeated divisor point; merge multiplicities".into()));
        }
    }
    let n = nr_bound(l) + divisor_degree(d) as usize;
    let a = cech_at(l, d, n)?;
    let b = cech_at(l, d, n + 4)?;
    if a != b {
        return Err(Error::Unstabilized(n));
    }
    Ok(a)
}

/// (h^0, h^1) of the bundle from the two-chart Cech complex.
pub fn nr_cech(l: &NRLineBundle) -> Result<(usize, usize)> {
    let (h0, h1, _) = cech_stable(l, &[])?;
    Ok((h0, h1))
}

/// (h^0, h^1) of U = ker(L -> L|_D) for a divisor D on the reduced diagonal.
pub fn nr_cech_sub(l: &NRLineBundle, d: &NrDivisor) -> Result<(usize, usize)> {
    let (h0, h1, hu) = cech_stable(l, d)?;
    // 0 -> U -> L -> O_D -> 0
    let deg = divisor_degree(d) as usize;
    let image = h0 - hu;
    Ok((hu, h1 + deg - image))
}

/// Splitting type (a, b), a <= b, from h^0 of v-twists: the first j with
/// h^0(twist j) > 0 is -b, then a = chi - 2 - b; the full h^0 sequence over
/// a window past that point is checked.
pub fn split_from_h0(chi: i64, start: i64, mut h0_at: impl FnMut(i64) -> Result<usize>) -> Result<(i64, i64)> {
    if h0_at(start)? != 0 {
        return Err(Error::Internal(format!("h0 already positive at twist {start}")));
    }
    let mut j = start;
    loop {
        j += 1;
        if j > start + 400 {
            return Err(Error::Internal("no twist with sections found".into()));
        }
        if h0_at(j)? > 0 {
            break;
        }
    }
    let b = -j;
    let a = chi - 2 - b;
    if a > b {
        return Err(Error::Internal(format!("inconsistent splitting ({a}, {b}) for chi {chi}")));
    }
    for t in j..=j + (b - a) + 2 {
        let want = (a + t + 1).max(0) + (b + t + 1).max(0);
        let got = h0_at(t)? as i64;
        if got != want {
            return Err(Error::Internal(format!("h0 at twist {t} is {got}, splitting ({a},{b}) predicts {want}")));
        }
    }
    Ok((a, b))
}

/// Splitting type of v_* of the bundle.
pub fn nr_pushforward_split(l: &NRLineBundle) -> Result<(i64, i64)> {
    nr_split_sub(l, &[])
}

/// Splitting type of v_* ker(L -> L|_D).
pub fn nr_split_sub(l: &NRLineBundle, d: &NrDivisor) -> Result<(i64, i64)> {
    let chi = l.chi() - divisor_degree(d);
    let start = -(l.restriction_degree().abs() + 2);
    split_from_h0(chi, start, |j| Ok(nr_cech_sub(&l.twist(0, j), d)?.0))
}

/// Class in Pic(2Δ) = Z x H^1(O(-2)): restriction degree k and the gluing
/// coordinate, normalized so that v*O(k) has coordinate 0.
pub fn nr_pic_coord(l: &NRLineBundle) -> (i64, Scalar) {
    let (k, c) = l.transition();
    (k, c.try_add(&l.field().from_i64(k)).expect("same field"))
}

/// Class of the cocycle z^-k (1 + r(z) v) with r a Laurent polynomial given
/// as (exponent, coefficient) pairs. Coboundaries change r by q(1/z) - z^2 p(z),
/// so only the z^1 coefficient survives.
pub fn nr_pic_coord_cocycle(k: i64, r: &[(i64, Scalar)], field: Field) -> Result<(i64, Scalar)> {
    let mut c = field.zero();
    for (e, x) in r {
        if *e == 1 {
            c = c.try_add(x)?;
        }
    }
    Ok((k, c.try_add(&field.from_i64(k))?))
}

/// True when the bundle is v*O(k) for some k.
pub fn nr_is_pullback(l: &NRLineBundle) -> bool {
    nr_pic_coord(l).1.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::MultiPoly;

    fn f101() -> Field {
        Field::prime(101).unwrap()
    }

    /// y0^2 x0^2 + ... a fixed smooth curve over F_101.
    pub(crate) fn smooth_curve() -> CurveW {
        let fld = f101();
        let coeffs: Vec<i64> = vec![1, 3, -2, 5, 0, 7, -1, 4, 2];
        let f = MultiPoly::from_coeff_vector(fld, &[2, 2], &coeffs.iter().map(|&c| fld.from_i64(c)).collect::<Vec<_>>());
        let w = CurveW::new(f).unwrap();
        assert_eq!(classify_kodaira(&w).unwrap(), KodairaType::I0);
        w
    }

    fn some_points(w: &CurveW, k: usize) -> Vec<PointW> {
        crate::curves::enumerate_points(w, 1).unwrap().into_iter().take(k).collect()
    }

    #[test]
    fn ambient_dims_on_smooth_curve() {
        let w = smooth_curve();
        let o11 = lb_make(&w, 1, 1, &[]).unwrap();
        assert_eq!(o11.degree(), 4);
        assert_eq!(lb_h0(&o11).unwrap(), 4);
        assert_eq!(lb_h0(&o11.ambient(0, 1)).unwrap(), 2);
        assert_eq!(lb_cohomology(&o11.ambient(0, 0)).unwrap(), (1, 1));
    }

    #[test]
    fn points_cut_degree() {
        let w = smooth_curve();
        let pts = some_points(&w, 3);
        let l = lb_make(&w, 1, 1, &pts[..2]).unwrap();
        assert_eq!(l.degree(), 2);
        assert_eq!(lb_cohomology(&l).unwrap(), (2, 0));
        let l3 = lb_make(&w, 0, 1, &pts[..3]).unwrap();
        assert_eq!(lb_cohomology(&l3).unwrap(), (0, 1));
    }

    #[test]
    fn raise_preserves_class() {
        let w = smooth_curve();
        let pts = some_points(&w, 2);
        let l = lb_make(&w, 1, 0, &pts[..1]).unwrap();
        let r = lb_raise(&l, Axis::V).unwrap();
        assert_eq!(r.degree(), l.degree());
        assert!(lb_isomorphic(&l, &r).unwrap());
        assert_eq!(lb_h0(&l).unwrap(), lb_h0(&r).unwrap());
    }

    #[test]
    fn fibers_of_different_rulings_are_not_isomorphic() {
        let w = smooth_curve();
        let a = lb_make(&w, 1, 0, &[]).unwrap();
        let b = a.ambient(0, 1);
        assert!(!lb_isomorphic(&a, &b).unwrap());
        assert!(lb_isomorphic(&a, &a).unwrap());
    }

    #[test]
    fn trivial_double_diagonal() {
        let f = f101();
        assert_eq!(nr_cech(&NRLineBundle::la(f.zero())).unwrap(), (1, 1));
        assert_eq!(nr_cech(&NRLineBundle::la(f.one())).unwrap(), (0, 0));
        assert_eq!(nr_pushforward_split(&NRLineBundle::la(f.zero())).unwrap(), (-2, 0));
        assert_eq!(nr_pushforward_split(&NRLineBundle::la(f.from_i64(7))).unwrap(), (-1, -1));
    }

    #[test]
    fn mixed_twist_has_no_sections() {
        // 0 -> O(-1,-3) -> O(1,-1) -> O_{2Δ}(1,-1) -> 0 and H^0(O(1,-1)) = H^1(O(-1,-3)) = 0.
        let l = NRLineBundle::new(1, -1, f101().zero());
        assert_eq!(nr_cech(&l).unwrap(), (0, 0));
        assert_eq!(nr_pic_coord(&l), (0, f101().one()));
    }

    #[test]
    fn extpair_smooth() {
        assert_eq!(extpair_dims(&smooth_curve(), 1, 0).unwrap(), (1, 9, 0));
    }
}
