//! Bidegree (2,2) curves on P^1 x P^1: support validation, Kodaira types,
//! singular points, fibers, j-invariants, point counts, and complete
//! intersections of two (1,1,1) divisors in (P^1)^3.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{span_rank, Field, Scalar};
use crate::polyring::{
    j_from_quartic, linear_resultant, normalize_p1, p1_points, quadratic_discriminant, BinaryForm, MultiPoly,
};

/// A bidegree (2,2) form with no fiber component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveW {
    f: MultiPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KodairaType {
    I0,
    I1,
    I2,
    II,
    III,
    NonReduced,
}

impl KodairaType {
    pub fn is_reduced(self) -> bool {
        self != KodairaType::NonReduced
    }

    pub fn is_integral(self) -> bool {
        matches!(self, KodairaType::I0 | KodairaType::I1 | KodairaType::II)
    }

    pub fn is_reducible(self) -> bool {
        matches!(self, KodairaType::I2 | KodairaType::III)
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KodairaType::I0 => "I0",
            KodairaType::I1 => "I1",
            KodairaType::I2 => "I2",
            KodairaType::II => "II",
            KodairaType::III => "III",
            KodairaType::NonReduced => "NonReduced",
        };
        f.write_str(s)
    }
}

/// The two projections: `U` forgets y (fibers are x = const), `V` forgets x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    U,
    V,
}

/// A point of P^1 x P^1 with both coordinates normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointW {
    pub x: [Scalar; 2],
    pub y: [Scalar; 2],
}

impl PointW {
    pub fn new(x: [Scalar; 2], y: [Scalar; 2]) -> PointW {
        PointW { x: normalize_p1(&x), y: normalize_p1(&y) }
    }

    pub fn coords(&self) -> Vec<[Scalar; 2]> {
        vec![self.x.clone(), self.y.clone()]
    }

    pub fn field(&self) -> Field {
        self.x[0].field()
    }

    /// True when both coordinates lie in the prime field.
    pub fn is_base(&self) -> bool {
        self.x.iter().chain(self.y.iter()).all(Scalar::is_base)
    }

    /// Move a point with prime-field coordinates down from an extension.
    pub fn to_base(&self) -> Option<PointW> {
        let c = |v: &[Scalar; 2]| -> Option<[Scalar; 2]> { Some([v[0].to_base()?, v[1].to_base()?]) };
        Some(PointW { x: c(&self.x)?, y: c(&self.y)? })
    }
}

fn sort_points(v: &mut Vec<PointW>) {
    v.sort_by_key(|p| format!("{:?}", p));
    v.dedup();
}

/// The three coefficient forms of `f` along `axis`: for `U`, the binary
/// quadratics in x multiplying y0^2, y0 y1, y1^2.
fn coefficient_forms(f: &MultiPoly, axis: Axis) -> Vec<BinaryForm> {
    let (fiber_block, base_deg) = match axis {
        Axis::U => (1, f.degree[0]),
        Axis::V => (0, f.degree[1]),
    };
    f.block_coefficients(fiber_block)
        .into_iter()
        .map(|c| {
            let c = if c.is_zero() { MultiPoly::zero(f.field, &[base_deg]) } else { c };
            BinaryForm::new(c.coeff_vector())
        })
        .collect()
}

/// True when some fiber of `axis` (over the algebraic closure) lies in f = 0.
pub fn has_fiber_component(f: &MultiPoly, axis: Axis) -> Result<bool> {
    let forms = coefficient_forms(f, axis);
    let mut g = BinaryForm::new(vec![f.field.zero()]);
    for form in &forms {
        g = g.gcd(form)?;
    }
    Ok(g.is_zero() || g.degree() >= 1)
}

/// Accept a (2,2) form iff it has no (1,0) or (0,1) factor.
pub fn validate_support(f: &MultiPoly) -> Result<CurveW> {
    if f.blocks() != 2 || f.degree != [2, 2] {
        return Err(Error::Invalid(format!("expected bidegree (2,2), got {:?}", f.degree)));
    }
    if f.is_zero() {
        return Err(Error::Invalid("zero form".into()));
    }
    let ch = f.field.characteristic();
    if ch == 2 || ch == 3 {
        return Err(Error::Unsupported("characteristic 2 or 3".into()));
    }
    if has_fiber_component(f, Axis::U)? || has_fiber_component(f, Axis::V)? {
        return Err(Error::FiberComponent);
    }
    Ok(CurveW { f: f.clone() })
}

impl CurveW {
    pub fn new(f: MultiPoly) -> Result<CurveW> {
        validate_support(&f)
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn field(&self) -> Field {
        self.f.field
    }

    pub fn eval(&self, p: &PointW) -> Result<Scalar> {
        self.f.eval(&p.coords())
    }

    pub fn contains(&self, p: &PointW) -> Result<bool> {
        Ok(self.eval(p)?.is_zero())
    }

    /// True when all partials vanish at a point of W.
    pub fn is_singular_at(&self, p: &PointW) -> Result<bool> {
        if !self.contains(p)? {
            return Ok(false);
        }
        for d in self.f.partials() {
            if !d.eval(&p.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Branch quartic of the projection along `axis` (in the coordinate of
    /// the target P^1).
    pub fn branch_quartic(&self, axis: Axis) -> Result<BinaryForm> {
        match axis {
            Axis::U => quadratic_discriminant(&self.f, 1),
            Axis::V => quadratic_discriminant(&self.f, 0),
        }
    }

    /// Transport along (x, y) -> (g x, h y): the new form is f(g^-1 x, h^-1 y).
    pub fn transform(&self, g: &crate::exactmath::Matrix, h: &crate::exactmath::Matrix) -> Result<CurveW> {
        let f = self.f.substitute_block(0, &g.inverse()?)?.substitute_block(1, &h.inverse()?)?;
        CurveW::new(f)
    }
}

fn first_nonzero_normalize(g: &MultiPoly) -> MultiPoly {
    match g.coeff_vector().into_iter().find(|c| !c.is_zero()) {
        Some(c) => g.scale(&c.inv().expect("nonzero")),
        None => g.clone(),
    }
}

fn swap_y(f: &MultiPoly) -> MultiPoly {
    let fld = f.field;
    let perm = crate::exactmath::Matrix::from_i64(fld, &[&[0, 1], &[1, 0]]);
    f.substitute_block(1, &perm).expect("permutation")
}

/// f = c g^2 with A (the y0^2 coefficient) nonzero.
fn square_root_with_lead(f: &MultiPoly) -> Option<MultiPoly> {
    let fld = f.field;
    let co = f.block_coefficients(1);
    let (a_form, b_form) = (&co[0], &co[1]);
    let alpha = if a_form.is_zero() { return None } else { a_form.coeff_vector() };
    let four = fld.from_i64(4);
    if &alpha[1] * &alpha[1] != &(&four * &alpha[0]) * &alpha[2] {
        return None;
    }
    let (a, c) = if !alpha[0].is_zero() {
        let two_a0 = &alpha[0] * &fld.from_i64(2);
        (MultiPoly::linear(1, 0, &two_a0, &alpha[1]), (&four * &alpha[0]).inv().ok()?)
    } else {
        (MultiPoly::variable(fld, 1, 0, 1), alpha[2].clone())
    };
    let two_c = &c * &fld.from_i64(2);
    let b = if b_form.is_zero() {
        MultiPoly::zero(fld, &[1])
    } else {
        b_form.divide(&a.scale(&two_c)).ok()??
    };
    let y0 = MultiPoly::variable(fld, 2, 1, 0);
    let y1 = MultiPoly::variable(fld, 2, 1, 1);
    let g = a.insert_block(1).mul(&y0).ok()?.add(&b.insert_block(1).mul(&y1).ok()?).ok()?;
    (g.mul(&g).ok()?.scale(&c) == *f).then(|| first_nonzero_normalize(&g))
}

/// g with f = c g^2 for a nonzero constant c, g of bidegree (1,1),
/// normalized so its first nonzero coefficient is 1.
pub fn is_square(f: &MultiPoly) -> Option<MultiPoly> {
    if f.degree != [2, 2] || f.is_zero() {
        return None;
    }
    if let Some(g) = square_root_with_lead(f) {
        return Some(g);
    }
    square_root_with_lead(&swap_y(f)).map(|g| first_nonzero_normalize(&swap_y(&g)))
}

fn factor_in_field(f: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    let fld = f.field;
    let co = f.block_coefficients(1);
    let forms = coefficient_forms(f, Axis::U);
    let disc = forms[1].square().coeffs.iter().zip(forms[0].mul(&forms[2]).coeffs.iter())
        .map(|(b2, ac)| b2 - &(ac * &fld.from_i64(4)))
        .collect::<Vec<_>>();
    let disc = BinaryForm::new(disc);
    if disc.is_zero() {
        let g = is_square(f)?;
        let h = f.divide(&g).ok()??;
        return Some((g, h));
    }
    let s = disc.sqrt()?;
    let s_poly = MultiPoly::from_coeff_vector(fld, &[2], &s.coeffs);
    let y0 = MultiPoly::variable(fld, 2, 1, 0);
    let y1 = MultiPoly::variable(fld, 2, 1, 1);
    let two = fld.from_i64(2);
    // 4 A f = (2A y0 + (B + s) y1)(2A y0 + (B - s) y1); symmetric in A <-> C.
    let (lead, lead_var, other_var) = if !co[0].is_zero() {
        (&co[0], &y0, &y1)
    } else if !co[2].is_zero() {
        (&co[2], &y1, &y0)
    } else {
        // f = B y0 y1
        let roots = forms[1].roots_in(fld).ok()?;
        let mut lins = Vec::new();
        for (r, m) in roots {
            for _ in 0..m {
                lins.push(MultiPoly::linear(1, 0, &r[1], &r[0].neg()));
            }
        }
        if lins.len() != 2 {
            return None;
        }
        let g = lins[0].insert_block(1).mul(&y0).ok()?;
        let h = f.divide(&g).ok()??;
        return Some((g, h));
    };
    for sign in [1i64, -1] {
        let bs = co[1].add(&s_poly.scale(&fld.from_i64(sign))).ok()?;
        let g1 = lead.scale(&two).insert_block(1).mul(lead_var).ok()?.add(&bs.insert_block(1).mul(other_var).ok()?).ok()?;
        let content = BinaryForm::new(lead.scale(&two).coeff_vector()).gcd(&BinaryForm::new(if bs.is_zero() {
            vec![fld.zero(); 3]
        } else {
            bs.coeff_vector()
        })).ok()?;
        if content.degree() != 1 {
            continue;
        }
        let c = MultiPoly::from_coeff_vector(fld, &[1], &content.coeffs).insert_block(1);
        let Some(h) = g1.divide(&c).ok()? else { continue };
        if h.degree != [1, 1] {
            continue;
        }
        if f.divide(&h).ok()?.is_some() {
            let h = first_nonzero_normalize(&h);
            let g = f.divide(&h).ok()??;
            return Some((h, g));
        }
    }
    None
}

/// f = g h with g, h of bidegree (1,1), over the base field or (for finite
/// fields) its quadratic extension. g is normalized; over an extension the
/// returned forms live in the extension.
pub fn factor_11(f: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
    if f.degree != [2, 2] || f.is_zero() {
        return None;
    }
    if let Some(r) = factor_in_field(f) {
        return Some(r);
    }
    if let Field::Fp(_) = f.field {
        let ext = f.field.quadratic_extension().ok()?;
        return factor_in_field(&f.embed(ext).ok()?);
    }
    None
}

fn type_from_pattern(p: &[usize]) -> Result<KodairaType> {
    Ok(match p {
        [1, 1, 1, 1] => KodairaType::I0,
        [2, 1, 1] => KodairaType::I1,
        [3, 1] => KodairaType::II,
        [2, 2] => KodairaType::I2,
        [4] => KodairaType::III,
        _ => return Err(Error::Unclassifiable),
    })
}

/// Kodaira type from the root pattern of both branch quartics, cross-checked
/// against the (1,1)-factor search.
pub fn classify_kodaira(w: &CurveW) -> Result<KodairaType> {
    if is_square(&w.f).is_some() {
        return Ok(KodairaType::NonReduced);
    }
    let du = w.branch_quartic(Axis::U)?;
    let dv = w.branch_quartic(Axis::V)?;
    if du.is_zero() || dv.is_zero() {
        return Err(Error::Unclassifiable);
    }
    let tu = type_from_pattern(&du.root_multiplicities()?)?;
    let tv = type_from_pattern(&dv.root_multiplicities()?)?;
    if tu != tv {
        return Err(Error::Unclassifiable);
    }
    let factored = factor_11(&w.f).is_some();
    let complete = w.field().is_finite();
    if factored != tu.is_reducible() && (complete || factored) {
        return Err(Error::Unclassifiable);
    }
    Ok(tu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "points", rename_all = "snake_case")]
pub enum SingularLocus {
    Points(Vec<PointW>),
    /// Non-reduced W: singular along its whole support.
    AlongSupport,
}

/// Search bound for the exhaustive cross-check over F_{p^2}.
const EXHAUSTIVE_LIMIT: u64 = 13;

/// Common zeros of f and its partials over the field and its quadratic
/// extension, located fiberwise over the multiple roots of the branch quartic.
pub fn singular_points(w: &CurveW) -> Result<SingularLocus> {
    if is_square(&w.f).is_some() {
        return Ok(SingularLocus::AlongSupport);
    }
    let base = w.field();
    let ext = if base.is_finite() { base.quadratic_extension()? } else { base };
    let fe = w.f.embed(ext)?;
    let we = CurveW { f: fe.clone() };
    let du = we.branch_quartic(Axis::U)?;
    let mut pts = Vec::new();
    for (xr, m) in du.roots_in(ext)? {
        if m < 2 {
            continue;
        }
        let fiber = fe.restrict_block(0, &xr)?;
        let c = BinaryForm::new(fiber.coeff_vector());
        let y = if !c.coeffs[0].is_zero() {
            [c.coeffs[1].neg(), &c.coeffs[0] * &ext.from_i64(2)]
        } else {
            [ext.one(), ext.zero()]
        };
        let p = PointW::new(xr, y);
        if we.is_singular_at(&p)? {
            pts.push(p);
        }
    }
    sort_points(&mut pts);
    if base.characteristic() != 0 && base.characteristic() <= EXHAUSTIVE_LIMIT {
        let mut brute: Vec<PointW> = Vec::new();
        for x in p1_points(ext)? {
            for y in p1_points(ext)? {
                let p = PointW::new(x.clone(), y);
                if we.is_singular_at(&p)? {
                    brute.push(p);
                }
            }
        }
        sort_points(&mut brute);
        if brute != pts {
            return Err(Error::Internal("fiberwise and exhaustive singular-point searches disagree".into()));
        }
    }
    Ok(SingularLocus::Points(pts))
}

/// Intersection of W with the fiber through `c` (x = c for `U`, y = c for
/// `V`): two points with multiplicity, over the field or its extension.
pub fn fiber_points(w: &CurveW, axis: Axis, c: &[Scalar; 2]) -> Result<Vec<(PointW, usize)>> {
    let block = match axis {
        Axis::U => 0,
        Axis::V => 1,
    };
    let fiber = w.f.restrict_block(block, c)?;
    if fiber.is_zero() {
        return Err(Error::FiberComponent);
    }
    let form = BinaryForm::new(fiber.coeff_vector());
    let field = c[0].field();
    let mut roots = form.roots_in(field)?;
    if roots.iter().map(|r| r.1).sum::<usize>() < 2 {
        match field {
            Field::Fp(_) => {
                let ext = field.quadratic_extension()?;
                roots = form.roots_in(ext)?;
            }
            _ => return Err(Error::ExtendField("fiber points are irrational".into())),
        }
    }
    let cc = [roots[0].0[0].field().embed(&c[0])?, roots[0].0[0].field().embed(&c[1])?];
    Ok(roots
        .into_iter()
        .map(|(r, m)| match axis {
            Axis::U => (PointW::new(cc.clone(), r), m),
            Axis::V => (PointW::new(r, cc.clone()), m),
        })
        .collect())
}

/// j-invariant of a smooth W from the u-projection branch quartic; the
/// v-projection value must agree.
pub fn j_invariant_curve(w: &CurveW) -> Result<Scalar> {
    if classify_kodaira(w)? != KodairaType::I0 {
        return Err(Error::SingularJ);
    }
    let ju = j_from_quartic(&w.branch_quartic(Axis::U)?)?;
    let jv = j_from_quartic(&w.branch_quartic(Axis::V)?)?;
    if ju != jv {
        return Err(Error::Internal(format!("u- and v-projection j disagree: {ju} vs {jv}")));
    }
    Ok(ju)
}

fn extension_of_degree(base: Field, k: u32) -> Result<Field> {
    if !base.is_finite() {
        return Err(Error::Unsupported("point enumeration over Q".into()));
    }
    match k {
        1 => Ok(base),
        2 => base.quadratic_extension(),
        _ => Err(Error::Unsupported(format!("extension degree {k}"))),
    }
}

/// All points of W over F_{p^k}, k in {1,2}: every x of P^1(F_{p^k}) is
/// scanned and its fiber quadratic solved.
pub fn enumerate_points(w: &CurveW, k: u32) -> Result<Vec<PointW>> {
    let fld = extension_of_degree(w.field(), k)?;
    let fe = w.f.embed(fld)?;
    let mut out = Vec::new();
    for x in p1_points(fld)? {
        let fiber = fe.restrict_block(0, &x)?;
        if fiber.is_zero() {
            for y in p1_points(fld)? {
                out.push(PointW::new(x.clone(), y));
            }
            continue;
        }
        for (y, _) in BinaryForm::new(fiber.coeff_vector()).roots_in(fld)? {
            out.push(PointW::new(x.clone(), y));
        }
    }
    Ok(out)
}

/// |#E(F_q) - (q + 1)| <= 2 sqrt(q).
pub fn within_hasse_bound(count: u64, q: u64) -> bool {
    let diff = count as i128 - (q as i128 + 1);
    diff * diff <= 4 * q as i128
}

/// Complete intersection of two forms linear in each of three P^1 blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIcurve {
    pub f1: MultiPoly,
    pub f2: MultiPoly,
}

impl CIcurve {
    pub fn new(f1: MultiPoly, f2: MultiPoly) -> Result<CIcurve> {
        for f in [&f1, &f2] {
            if f.blocks() != 3 || f.degree.iter().any(|&d| d > 1) {
                return Err(Error::Invalid("complete-intersection forms must be multilinear in 3 blocks".into()));
            }
            if f.is_zero() {
                return Err(Error::LinearlyDependent);
            }
        }
        if f1.field != f2.field {
            return Err(Error::MixedFields(f1.field.to_string(), f2.field.to_string()));
        }
        if f1.degree == f2.degree && span_rank(f1.field, f1.coeff_vector().len(), &[f1.coeff_vector(), f2.coeff_vector()]) < 2 {
            return Err(Error::LinearlyDependent);
        }
        Ok(CIcurve { f1, f2 })
    }

    pub fn field(&self) -> Field {
        self.f1.field
    }

    /// Both forms vanish at a point of (P^1)^3.
    pub fn contains(&self, p: &[[Scalar; 2]]) -> Result<bool> {
        Ok(self.f1.eval(p)?.is_zero() && self.f2.eval(p)?.is_zero())
    }
}

/// Image of C under the projection forgetting `block`, via the linear
/// resultant; the remaining blocks keep their order.
pub fn ci_eliminate(c: &CIcurve, block: usize) -> Result<CurveW> {
    let r = linear_resultant(&c.f1, &c.f2, block)?;
    if r.is_zero() {
        return Err(Error::ProjectionDegenerate);
    }
    if r.degree != [2, 2] {
        return Err(Error::Degenerate(format!("eliminated curve has bidegree {:?}", r.degree)));
    }
    validate_support(&r)
}

/// Solutions z of f1(P, Q, z) = f2(P, Q, z) = 0: none, one, or all of P^1.
fn solve_last_block(c: &CIcurve, pq: &[[Scalar; 2]], fld: Field) -> Result<Option<Vec<[Scalar; 2]>>> {
    let lin = |f: &MultiPoly| -> Result<[Scalar; 2]> {
        let r = f.embed(fld)?.restrict_block(0, &pq[0])?.restrict_block(0, &pq[1])?;
        Ok([r.coeff(&[1, 0]), r.coeff(&[0, 1])])
    };
    let (a, b) = (lin(&c.f1)?, lin(&c.f2)?);
    let det = &(&a[0] * &b[1]) - &(&a[1] * &b[0]);
    if !det.is_zero() {
        return Ok(Some(vec![]));
    }
    let row = if !a[0].is_zero() || !a[1].is_zero() {
        a
    } else if !b[0].is_zero() || !b[1].is_zero() {
        b
    } else {
        return Ok(None);
    };
    Ok(Some(vec![normalize_p1(&[row[1].clone(), row[0].neg()])]))
}

/// All points of C over F_{p^k}, listed by their (block 0, block 1) image.
pub fn ci_enumerate_points(c: &CIcurve, k: u32) -> Result<Vec<Vec<[Scalar; 2]>>> {
    let fld = extension_of_degree(c.field(), k)?;
    let base_points: Vec<Vec<[Scalar; 2]>> = match ci_eliminate(c, 2) {
        Ok(w) => enumerate_points(&w, k)?.into_iter().map(|p| p.coords()).collect(),
        Err(_) => {
            let pts = p1_points(fld)?;
            let mut v = Vec::new();
            for x in &pts {
                for y in &pts {
                    v.push(vec![x.clone(), y.clone()]);
                }
            }
            v
        }
    };
    let mut out = Vec::new();
    for pq in base_points {
        let zs = match solve_last_block(c, &pq, fld)? {
            Some(zs) => zs,
            None => p1_points(fld)?,
        };
        for z in zs {
            out.push(vec![pq[0].clone(), pq[1].clone(), z]);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiBlockReport {
    pub block: usize,
    pub kodaira: Option<KodairaType>,
    pub j: Option<Scalar>,
    pub points: Option<usize>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiSmoothReport {
    pub smooth: bool,
    pub j: Option<Scalar>,
    pub points: Option<usize>,
    pub blocks: Vec<CiBlockReport>,
}

/// Smoothness and j of C from all three eliminations; over a finite field
/// the projections must also be bijective on F_p-points.
pub fn ci_smooth_j(c: &CIcurve) -> Result<CiSmoothReport> {
    let finite = c.field().is_finite();
    let mut blocks = Vec::new();
    for b in 0..3 {
        let mut rep = CiBlockReport { block: b, kodaira: None, j: None, points: None, error: None };
        match ci_eliminate(c, b) {
            Ok(w) => match classify_kodaira(&w) {
                Ok(t) => {
                    rep.kodaira = Some(t);
                    if t == KodairaType::I0 {
                        rep.j = Some(j_invariant_curve(&w)?);
                    }
                    if finite {
                        rep.points = Some(enumerate_points(&w, 1)?.len());
                    }
                }
                Err(e) => rep.error = Some(e.to_string()),
            },
            Err(e) => rep.error = Some(e.to_string()),
        }
        blocks.push(rep);
    }
    let js: Vec<&Scalar> = blocks.iter().filter_map(|b| b.j.as_ref()).collect();
    let all_smooth = blocks.iter().all(|b| b.kodaira == Some(KodairaType::I0));
    let js_equal = js.windows(2).all(|w| w[0] == w[1]);
    let points = if finite { Some(ci_enumerate_points(c, 1)?.len()) } else { None };
    let injective = !finite || blocks.iter().all(|b| b.points == points);
    let smooth = all_smooth && js_equal && injective;
    Ok(CiSmoothReport { smooth, j: if smooth { js.first().map(|j| (*j).clone()) } else { None }, points, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(f: Field) -> MultiPoly {
        MultiPoly::from_terms(f, &[1, 1], vec![(vec![1, 0, 0, 1], f.one()), (vec![0, 1, 1, 0], f.from_i64(-1))]).unwrap()
    }

    fn anti(f: Field) -> MultiPoly {
        MultiPoly::from_terms(f, &[1, 1], vec![(vec![1, 0, 1, 0], f.one()), (vec![0, 1, 0, 1], f.from_i64(-1))]).unwrap()
    }

    #[test]
    fn fiber_components_rejected() {
        let f = Field::Q;
        let xy = MultiPoly::monomial(f.one(), &[1, 1, 1, 1]);
        assert_eq!(validate_support(&xy), Err(Error::FiberComponent));
        let g = diag(f);
        assert!(validate_support(&g.mul(&g).unwrap()).is_ok());
    }

    #[test]
    fn conjugate_fiber_pair_is_a_fiber_component() {
        // (x0^2 + x1^2) * (y0^2 + y0 y1 + y1^2) over F_7: no rational factor but two
        // conjugate u-fibers.
        let f = Field::prime(7).unwrap();
        let a = MultiPoly::from_terms(f, &[2, 0], vec![(vec![2, 0, 0, 0], f.one()), (vec![0, 2, 0, 0], f.one())]).unwrap();
        let b = MultiPoly::from_terms(
            f,
            &[0, 2],
            vec![(vec![0, 0, 2, 0], f.one()), (vec![0, 0, 1, 1], f.one()), (vec![0, 0, 0, 2], f.one())],
        )
        .unwrap();
        assert_eq!(validate_support(&a.mul(&b).unwrap()), Err(Error::FiberComponent));
    }

    #[test]
    fn square_detected_and_normalized() {
        let f = Field::prime(101).unwrap();
        let g = diag(f);
        let w = CurveW::new(g.mul(&g).unwrap().scale(&f.from_i64(7))).unwrap();
        assert_eq!(is_square(w.f()), Some(g));
        assert_eq!(classify_kodaira(&w).unwrap(), KodairaType::NonReduced);
        assert_eq!(singular_points(&w).unwrap(), SingularLocus::AlongSupport);
    }

    #[test]
    fn i2_example_meets_at_two_points() {
        let f = Field::Q;
        let w = CurveW::new(diag(f).mul(&anti(f)).unwrap()).unwrap();
        assert_eq!(classify_kodaira(&w).unwrap(), KodairaType::I2);
        let SingularLocus::Points(pts) = singular_points(&w).unwrap() else { panic!() };
        let one = f.one();
        let m1 = f.from_i64(-1);
        let mut expect = vec![
            PointW::new([one.clone(), one.clone()], [one.clone(), one.clone()]),
            PointW::new([one.clone(), m1.clone()], [one.clone(), m1]),
        ];
        sort_points(&mut expect);
        assert_eq!(pts, expect);
    }

    #[test]
    fn textbook_example_has_a_fiber_component() {
        // x0 x1 (y0^2 + y1^2) + x0^2 y0 y1 is divisible by x0.
        let f = Field::prime(5).unwrap();
        let p = MultiPoly::from_terms(
            f,
            &[2, 2],
            vec![(vec![1, 1, 2, 0], f.one()), (vec![1, 1, 0, 2], f.one()), (vec![2, 0, 1, 1], f.one())],
        )
        .unwrap();
        assert_eq!(validate_support(&p), Err(Error::FiberComponent));
    }

    #[test]
    fn diagonal_square_has_six_points_over_f5() {
        let f = Field::prime(5).unwrap();
        let g = diag(f);
        let w = CurveW::new(g.mul(&g).unwrap()).unwrap();
        assert_eq!(enumerate_points(&w, 1).unwrap().len(), 6);
    }

    #[test]
    fn factor_recovers_product() {
        let f = Field::prime(101).unwrap();
        let g = diag(f);
        let h = MultiPoly::from_terms(
            f,
            &[1, 1],
            vec![(vec![1, 0, 1, 0], f.from_i64(3)), (vec![1, 0, 0, 1], f.from_i64(5)), (vec![0, 1, 0, 1], f.from_i64(7))],
        )
        .unwrap();
        let (a, b) = factor_11(&g.mul(&h).unwrap()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), g.mul(&h).unwrap());
        let an = first_nonzero_normalize(&a);
        assert!(an == first_nonzero_normalize(&g) || an == first_nonzero_normalize(&h));
    }

    #[test]
    fn degenerate_ci_flagged() {
        let f = Field::Q;
        let v = |b, i| MultiPoly::variable(f, 3, b, i);
        let f1 = v(0, 0).mul(&v(2, 0)).unwrap().add(&v(0, 1).mul(&v(2, 1)).unwrap()).unwrap();
        let f2 = v(1, 0).mul(&v(2, 0)).unwrap().add(&v(1, 1).mul(&v(2, 1)).unwrap()).unwrap();
        let c = CIcurve::new(f1.clone(), f2).unwrap();
        assert!(matches!(ci_eliminate(&c, 2), Err(Error::Degenerate(_))));
        assert_eq!(CIcurve::new(f1.clone(), f1.scale(&f.from_i64(3))), Err(Error::LinearlyDependent));
    }

    #[test]
    fn hasse_window() {
        assert!(within_hasse_bound(6, 5));
        assert!(within_hasse_bound(10, 5));
        assert!(!within_hasse_bound(11, 5));
    }
}
