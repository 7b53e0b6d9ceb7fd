//! Bimodules on a smooth W, elliptic quadruples (W, L0, L1, L2) and relations
//! of Q0 / Q1, with the maps between them and the round trip through the
//! representation moduli curve N_I.

use serde::{Deserialize, Serialize};

use crate::bimodules::{classify_bimodule, BimodConcrete, BimodDescriptor};
use crate::curves::{ci_enumerate_points, ci_smooth_j, classify_kodaira, enumerate_points, j_invariant_curve, Axis, CIcurve, CurveW, KodairaType, PointW};
use crate::error::{Error, Result};
use crate::exactmath::{kernel_of_columns, span_rank, Field, Matrix, Scalar};
use crate::linebundles::{lb_isomorphic, lb_make, lb_normalize, lb_raise_avoiding, lb_sections, BundleJson, LineBundleRep, SectionSpace};
use crate::polyring::{normalize_p1, MultiPoly};
use crate::quivers::{path_basis, q0, q1, theta_stable, PathSpace, RelationsIdeal, Rep1111, ThetaVector};

/// (W, L0, L1, L2) on a smooth (2,2) curve, degrees (2,2,2) or (2,1,2).
/// The bundles are kept normalized with pairwise disjoint point sets and
/// both twists positive, so every partial product is again normalized.
#[derive(Clone, Debug)]
pub struct Quadruple {
    pub w: CurveW,
    pub l: [LineBundleRep; 3],
    pub component: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleJson {
    pub component: u8,
    pub bundles: Vec<BundleJson>,
}

fn prepare(l: &LineBundleRep, avoid: &[PointW]) -> Result<LineBundleRep> {
    let mut r = lb_normalize(l, avoid)?;
    let mut all: Vec<PointW> = avoid.to_vec();
    all.extend(r.minus().iter().cloned());
    if r.m < 1 {
        r = lb_raise_avoiding(&r, Axis::U, &all)?;
        all.extend(r.minus().iter().cloned());
    }
    if r.n < 1 {
        r = lb_raise_avoiding(&r, Axis::V, &all)?;
    }
    Ok(r)
}

impl Quadruple {
    pub fn new(w: &CurveW, l0: &LineBundleRep, l1: &LineBundleRep, l2: &LineBundleRep) -> Result<Quadruple> {
        if classify_kodaira(w)? != KodairaType::I0 {
            return Err(Error::Invalid("quadruples need a smooth curve W".into()));
        }
        for l in [l0, l1, l2] {
            if l.curve() != w {
                return Err(Error::Invalid("bundle lives on a different curve".into()));
            }
        }
        let component = match (l0.degree(), l1.degree(), l2.degree()) {
            (2, 2, 2) => 0,
            (2, 1, 2) => 1,
            d => return Err(Error::Invalid(format!("bundle degrees {d:?}, expected (2,2,2) or (2,1,2)"))),
        };
        let p0 = prepare(l0, &[])?;
        let p1 = prepare(l1, p0.minus())?;
        let used: Vec<PointW> = p0.minus().iter().chain(p1.minus()).cloned().collect();
        let p2 = prepare(l2, &used)?;
        Ok(Quadruple { w: w.clone(), l: [p0, p1, p2], component })
    }

    pub fn field(&self) -> Field {
        self.w.field()
    }

    /// Points of W where some representative form is forced to vanish.
    pub fn excluded_points(&self) -> Vec<PointW> {
        self.l.iter().flat_map(|l| l.minus().iter().cloned()).collect()
    }

    pub fn to_json(&self) -> QuadrupleJson {
        QuadrupleJson { component: self.component, bundles: self.l.iter().map(LineBundleRep::to_json).collect() }
    }

    pub fn from_json(j: &QuadrupleJson) -> Result<Quadruple> {
        if j.bundles.len() != 3 {
            return Err(Error::Invalid(format!("{} bundles, expected 3", j.bundles.len())));
        }
        let ls = j.bundles.iter().map(LineBundleRep::from_json).collect::<Result<Vec<_>>>()?;
        let q = Quadruple::new(ls[0].curve(), &ls[0], &ls[1], &ls[2])?;
        if q.component != j.component {
            return Err(Error::Invalid(format!("degrees give component {}, file says {}", q.component, j.component)));
        }
        Ok(q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub l0_l1: bool,
    pub l0_l2: bool,
    pub l1_l2: bool,
}

impl Admissibility {
    /// No two of the bundles are isomorphic.
    pub fn admissible(&self) -> bool {
        !(self.l0_l1 || self.l0_l2 || self.l1_l2)
    }
}

/// Pairwise isomorphism flags.
pub fn admissibility(q: &Quadruple) -> Result<Admissibility> {
    Ok(Admissibility {
        l0_l1: lb_isomorphic(&q.l[0], &q.l[1])?,
        l0_l2: lb_isomorphic(&q.l[0], &q.l[2])?,
        l1_l2: lb_isomorphic(&q.l[1], &q.l[2])?,
    })
}

/// (W, O(0,1), O(-1,1) U, O(1,0)) for an invertible U of degree 1 or 2 on a
/// smooth W. Inadmissible images are an error.
pub fn phi(b: &BimodConcrete) -> Result<Quadruple> {
    let BimodConcrete::Reduced { u } = b else {
        return Err(Error::Invalid("phi needs a bimodule with reduced support".into()));
    };
    let w = u.curve();
    let l0 = lb_make(w, 0, 1, &[])?;
    let l2 = lb_make(w, 1, 0, &[])?;
    let l1 = lb_make(w, -1, 1, &[])?.tensor(u)?;
    let q = Quadruple::new(w, &l0, &l1, &l2)?;
    let adm = admissibility(&q)?;
    if !adm.admissible() {
        return Err(Error::Degenerate(format!("inadmissible quadruple {adm:?}")));
    }
    Ok(q)
}

/// U = L0^-1 L1 L2.
pub fn phi_inverse(q: &Quadruple) -> Result<BimodConcrete> {
    if lb_isomorphic(&q.l[0], &q.l[2])? {
        return Err(Error::Degenerate("L0 and L2 are isomorphic".into()));
    }
    let u = q.l[0].inverse().tensor(&q.l[1])?.tensor(&q.l[2])?;
    Ok(BimodConcrete::Reduced { u: lb_normalize(&u, &[])? })
}

fn product_rep(ls: &[&LineBundleRep]) -> Result<LineBundleRep> {
    let mut r = ls[0].clone();
    for l in &ls[1..] {
        r = r.tensor(l)?;
    }
    Ok(r)
}

fn times(forms: &[&MultiPoly]) -> Result<MultiPoly> {
    let mut g = forms[0].clone();
    for f in &forms[1..] {
        g = g.mul(f)?;
    }
    Ok(g)
}

/// Section spaces of L0, L1, L2 and of L0 L1 L2.
pub struct QuadrupleSections {
    pub s: [SectionSpace; 3],
    pub total: SectionSpace,
}

pub fn quadruple_sections(q: &Quadruple) -> Result<QuadrupleSections> {
    let s = [lb_sections(&q.l[0])?, lb_sections(&q.l[1])?, lb_sections(&q.l[2])?];
    let expected = if q.component == 0 { [2, 2, 2] } else { [2, 1, 2] };
    for (k, sp) in s.iter().enumerate() {
        if sp.dim() != expected[k] {
            return Err(Error::Internal(format!("h0(L{k}) = {}", sp.dim())));
        }
    }
    let total = lb_sections(&product_rep(&[&q.l[0], &q.l[1], &q.l[2]])?)?;
    Ok(QuadrupleSections { s, total })
}

/// Coordinates in H0(L0 L1 L2) of each path, the arrows acting by the given forms.
fn path_images(space: &PathSpace, arrow_forms: &[MultiPoly], total: &SectionSpace) -> Result<Vec<Vec<Scalar>>> {
    space
        .paths
        .iter()
        .map(|p| {
            let forms: Vec<&MultiPoly> = p.iter().map(|&a| &arrow_forms[a]).collect();
            total.coordinates(&times(&forms)?)
        })
        .collect()
}

fn relations_from_images(space: PathSpace, images: &[Vec<Scalar>], total: &SectionSpace, expected: usize) -> Result<RelationsIdeal> {
    let field = total.rep.field();
    let kernel = kernel_of_columns(field, total.dim(), images);
    if kernel.len() != expected {
        return Err(Error::Degenerate(format!("degenerate quadruple: kernel of dimension {}, expected {expected}", kernel.len())));
    }
    Ok(RelationsIdeal::new(space, &kernel, field))
}

fn basis_change(s: &SectionSpace, g: &Matrix) -> Result<Vec<MultiPoly>> {
    if g.rows != s.dim() || g.cols != s.dim() || g.det()?.is_zero() {
        return Err(Error::Invalid("basis change must be invertible of the section dimension".into()));
    }
    (0..s.dim())
        .map(|j| {
            let mut f = MultiPoly::zero(s.rep.field(), &s.degree());
            for (i, b) in s.basis.iter().enumerate() {
                f = f.add(&b.scale(g.get(i, j)))?;
            }
            Ok(f)
        })
        .collect()
}

/// Relations of Q0 in the section bases transformed by g (new j-th basis
/// vector = sum_i g[i][j] s_i).
pub fn psi0_in_bases(q: &Quadruple, g: &[Matrix; 3]) -> Result<RelationsIdeal> {
    if q.component != 0 {
        return Err(Error::Invalid("psi0 needs a quadruple of degrees (2,2,2)".into()));
    }
    let sec = quadruple_sections(q)?;
    if sec.total.dim() != 6 {
        return Err(Error::Internal(format!("h0(L0 L1 L2) = {}", sec.total.dim())));
    }
    let quiver = q0();
    let mut forms = Vec::new();
    for (k, s) in sec.s.iter().enumerate() {
        forms.extend(basis_change(s, &g[k])?);
    }
    // arrows of Q0 are a1 b1 a2 b2 a3 b3, matching L0, L1, L2 pairwise
    let space = path_basis(&quiver, 1, 4)?;
    let images = path_images(&space, &forms, &sec.total)?;
    relations_from_images(space, &images, &sec.total, 2)
}

/// Kernel of H0(L2) x H0(L1) x H0(L0) -> H0(L0 L1 L2) in the path basis of Q0.
pub fn psi0(q: &Quadruple) -> Result<RelationsIdeal> {
    let id = Matrix::identity(q.field(), 2);
    psi0_in_bases(q, &[id.clone(), id.clone(), id])
}

/// Section of L L' spanning a complement of the image of H0(L) x H0(L'):
/// the first basis vector outside the image.
fn pinned_lift(first: &SectionSpace, second: &SectionSpace, product: &SectionSpace) -> Result<MultiPoly> {
    let field = product.rep.field();
    let mut image = Vec::new();
    for f in &first.basis {
        for g in &second.basis {
            image.push(product.coordinates(&f.mul(g)?)?);
        }
    }
    let r = span_rank(field, product.dim(), &image);
    if r != 2 || product.dim() != 3 {
        return Err(Error::Degenerate(format!("composition image of dimension {r} in a space of dimension {}", product.dim())));
    }
    for k in 0..product.dim() {
        let mut e = vec![field.zero(); product.dim()];
        e[k] = field.one();
        let mut with = image.clone();
        with.push(e);
        if span_rank(field, product.dim(), &with) == 3 {
            return Ok(product.basis[k].clone());
        }
    }
    Err(Error::Internal("no standard vector outside a 2-dimensional image".into()))
}

/// Relations of Q1 for a quadruple of degrees (2,1,2).
pub fn psi1(q: &Quadruple) -> Result<RelationsIdeal> {
    if q.component != 1 {
        return Err(Error::Invalid("psi1 needs a quadruple of degrees (2,1,2)".into()));
    }
    let sec = quadruple_sections(q)?;
    if sec.total.dim() != 5 {
        return Err(Error::Internal(format!("h0(L0 L1 L2) = {}", sec.total.dim())));
    }
    let s01 = lb_sections(&product_rep(&[&q.l[0], &q.l[1]])?)?;
    let s12 = lb_sections(&product_rep(&[&q.l[1], &q.l[2]])?)?;
    let lift3 = pinned_lift(&sec.s[0], &sec.s[1], &s01)?;
    let lift6 = pinned_lift(&sec.s[1], &sec.s[2], &s12)?;
    let quiver = q1();
    let mut forms: Vec<MultiPoly> = vec![MultiPoly::zero(q.field(), &[0, 0]); quiver.arrows.len()];
    let [s0, s1, s2] = &sec.s;
    for (label, f) in [
        ("a1", &s0.basis[0]),
        ("a2", &s0.basis[1]),
        ("a7", &s1.basis[0]),
        ("a4", &s2.basis[0]),
        ("a5", &s2.basis[1]),
        ("a3", &lift3),
        ("a6", &lift6),
    ] {
        forms[quiver.arrow(label)?] = f.clone();
    }
    let space = path_basis(&quiver, 1, 4)?;
    let images = path_images(&space, &forms, &sec.total)?;
    relations_from_images(space, &images, &sec.total, 3)
}

/// Per-path exponent choice (index of the arrow among the two parallel ones)
/// for the three steps of a Q0 path.
fn q0_indices(space: &PathSpace, path: usize) -> [usize; 3] {
    let p = &space.paths[path];
    std::array::from_fn(|k| if space.quiver.arrows[p[k]].label.starts_with('a') { 0 } else { 1 })
}

fn trilinear(field: Field, space: &PathSpace, r: &[Scalar]) -> Result<MultiPoly> {
    let mut f = MultiPoly::zero(field, &[1, 1, 1]);
    for (i, c) in r.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let idx = q0_indices(space, i);
        let mut e = Vec::new();
        for k in idx {
            e.extend([1 - k as u32, k as u32]);
        }
        f.add_term(e, c.clone())?;
    }
    Ok(f)
}

/// The two relations as (1,1,1)-forms on P(V1) x P(V2) x P(V3), block k
/// carrying the coordinates of the (k+1)-th arrow pair.
pub fn relations_to_ci(ideal: &RelationsIdeal) -> Result<CIcurve> {
    if ideal.dim() != 2 || ideal.space.quiver.name != "Q0" {
        return Err(Error::Invalid("N_I is built from a 2-dimensional ideal of Q0".into()));
    }
    let field = ideal.basis[0][0].field();
    CIcurve::new(trilinear(field, &ideal.space, &ideal.basis[0])?, trilinear(field, &ideal.space, &ideal.basis[1])?)
}

/// Image of p in P^1 x P^1 x P^1 by the three pencils.
pub fn classifying_point(sec: &QuadrupleSections, q: &Quadruple, p: &PointW) -> Result<[[Scalar; 2]; 3]> {
    if q.excluded_points().contains(p) {
        return Err(Error::SpecialPosition(format!("{p:?} lies in a representing divisor")));
    }
    let mut out: Vec<[Scalar; 2]> = Vec::new();
    for s in &sec.s {
        let v = s.evaluate(p)?;
        if v.iter().all(Scalar::is_zero) {
            return Err(Error::SpecialPosition(format!("{p:?} is a base point")));
        }
        out.push([v[0].clone(), v[1].clone()]);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

pub fn classifying_points(q: &Quadruple, pts: &[PointW]) -> Result<Vec<[[Scalar; 2]; 3]>> {
    if q.component != 0 {
        return Err(Error::Invalid("classifying points are defined for degrees (2,2,2)".into()));
    }
    let sec = quadruple_sections(q)?;
    pts.iter().map(|p| classifying_point(&sec, q, p)).collect()
}

/// The thin representation of Q0 at an image point.
pub fn classifying_rep(image: &[[Scalar; 2]; 3]) -> Rep1111 {
    let values = image.iter().flat_map(|v| v.iter().cloned()).collect();
    Rep1111::new(q0(), values).expect("six arrows")
}

/// Relations of the tautological bundles of N_I: trilinear forms vanishing on
/// all rational points of C.
pub fn recover_relations_from_ci(c: &CIcurve) -> Result<RelationsIdeal> {
    let field = c.field();
    if !field.is_finite() || field.base() != field {
        return Err(Error::Unsupported("recovery enumerates points over a prime field".into()));
    }
    let pts = ci_enumerate_points(c, 1)?;
    for block in 0..3 {
        let cols: Vec<Vec<Scalar>> = pts.iter().map(|p| p[block].to_vec()).collect();
        if span_rank(field, 2, &cols) < 2 {
            return Err(Error::Degenerate(format!("coordinates of block {block} are dependent on N_I")));
        }
    }
    let space = path_basis(&q0(), 1, 4)?;
    let mut columns = Vec::new();
    for i in 0..space.dim() {
        let idx = q0_indices(&space, i);
        columns.push(pts.iter().map(|p| &(&p[0][idx[0]] * &p[1][idx[1]]) * &p[2][idx[2]]).collect::<Vec<_>>());
    }
    let kernel = kernel_of_columns(field, pts.len(), &columns);
    if kernel.len() != 2 {
        return Err(Error::Degenerate(format!("trilinear forms vanishing on N_I: {}", kernel.len())));
    }
    Ok(RelationsIdeal::new(space, &kernel, field))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaSamples {
    pub tested: usize,
    pub stable: usize,
    pub on_ci: usize,
    pub distinct_images: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub descriptor: Option<BimodDescriptor>,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub relations: Vec<Vec<Scalar>>,
    pub smooth: bool,
    pub j_w: Option<Scalar>,
    pub j_ni: Option<Scalar>,
    pub j_equal: bool,
    pub points_w: Option<usize>,
    pub points_ni: Option<usize>,
    pub ideal_equal: bool,
    pub theta: ThetaSamples,
    pub theta_all_stable: bool,
    pub pass: bool,
}

fn stage<T>(rep: &mut RoundTripReport, name: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(x) => Some(x),
        Err(e) => {
            rep.failed_stage = Some(name.to_string());
            rep.error = Some(e.to_string());
            None
        }
    }
}

/// phi, psi0, N_I, and back; every stage failure is recorded in the report.
pub fn roundtrip0(b: &BimodConcrete) -> RoundTripReport {
    let mut rep = RoundTripReport::default();
    rep.descriptor = classify_bimodule(b).ok();
    if b.chi() != 2 {
        rep.failed_stage = Some("input".into());
        rep.error = Some(format!("chi = {}, the round trip needs chi = 2", b.chi()));
        return rep;
    }
    let Some(q) = stage(&mut rep, "phi", phi(b)) else { return rep };
    let Some(ideal) = stage(&mut rep, "psi0", psi0(&q)) else { return rep };
    rep.relations = ideal.basis.clone();
    let Some(ci) = stage(&mut rep, "relations_to_ci", relations_to_ci(&ideal)) else { return rep };
    let Some(sm) = stage(&mut rep, "ci_smooth_j", ci_smooth_j(&ci)) else { return rep };
    rep.smooth = sm.smooth;
    rep.j_ni = sm.j.clone();
    rep.points_ni = sm.points;
    let Some(jw) = stage(&mut rep, "j_invariant_curve", j_invariant_curve(&q.w)) else { return rep };
    rep.j_equal = sm.j.as_ref() == Some(&jw);
    rep.j_w = Some(jw);
    if q.field().is_finite() {
        let Some(pts) = stage(&mut rep, "enumerate_points", enumerate_points(&q.w, 1)) else { return rep };
        rep.points_w = Some(pts.len());
        let Some(sec) = stage(&mut rep, "sections", quadruple_sections(&q)) else { return rep };
        let excluded = q.excluded_points();
        let theta = ThetaVector::standard();
        let mut images = Vec::new();
        for p in pts.iter().filter(|p| !excluded.contains(p)) {
            let Some(img) = stage(&mut rep, "classifying_points", classifying_point(&sec, &q, p)) else { return rep };
            rep.theta.tested += 1;
            if theta_stable(&classifying_rep(&img), &theta) {
                rep.theta.stable += 1;
            }
            if ci.contains(&img).unwrap_or(false) {
                rep.theta.on_ci += 1;
            }
            images.push(img.iter().map(normalize_p1).collect::<Vec<_>>());
        }
        images.sort_by_key(|v| format!("{v:?}"));
        images.dedup();
        rep.theta.distinct_images = images.len();
        rep.theta_all_stable = rep.theta.tested > 0 && rep.theta.stable == rep.theta.tested && rep.theta.on_ci == rep.theta.tested;
        if rep.smooth {
            let Some(back) = stage(&mut rep, "recover_relations_from_ci", recover_relations_from_ci(&ci)) else { return rep };
            rep.ideal_equal = back.same_subspace(&ideal);
        }
    }
    rep.pass = rep.smooth && rep.j_equal && rep.ideal_equal;
    rep
}

/// A smooth W and an invertible U of degree chi whose phi-image is admissible.
pub fn random_admissible<R: rand::Rng>(field: Field, chi: i64, rng: &mut R) -> Result<(BimodConcrete, Quadruple)> {
    for _ in 0..crate::samples::RETRIES {
        let w = crate::samples::random_curve(field, KodairaType::I0, rng)?;
        let Ok(u) = crate::samples::random_bundle(&w, chi, rng) else { continue };
        let b = BimodConcrete::Reduced { u };
        match phi(&b) {
            Ok(q) => return Ok((b, q)),
            Err(Error::Degenerate(_)) | Err(Error::SpecialPosition(_)) | Err(Error::ExtendField(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted(format!("no admissible instance of degree {chi} over {field}")))
}
