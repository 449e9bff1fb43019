//! Rank-2 scattering diagrams.
//!
//! Exponents live in M = Z², written x = z^(1,0) and y = z^(0,1). Crossing
//! an element along a path with velocity v acts by exp(log f ∂_n), with n
//! the primitive normal satisfying n·v > 0. On a counterclockwise loop
//! around a point that is n = rot90(u) = (−u_y, u_x), where u is the
//! direction in which the element leaves the point. A loop product is
//! θ_s∘…∘θ_1 as ring maps, crossings taken in traversal order. With these
//! choices the lines 1+tx, 1+ty are completed by the ray (1,1) with 1+t²xy.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::autom::{self, Elementary, FormalAutomorphism, KSWord};
use crate::error::{Error, Result};
use crate::lattice::{CentralChargeModel, Charge, LatticeContext, QuadraticRefinement};
use crate::rat::{self, Q};
use crate::series::{Grading, Monomial, Series, TruncationContext};

pub type Point = [Q; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Ray,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayLine {
    pub kind: Kind,
    pub base: Point,
    pub direction: [i64; 2],
    pub function: Series,
}

fn cross(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn qcross(a: &Point, b: [i64; 2]) -> Q {
    &a[0] * rat::q(b[1]) - &a[1] * rat::q(b[0])
}

fn qdot(a: &Point, b: [i64; 2]) -> Q {
    &a[0] * rat::q(b[0]) + &a[1] * rat::q(b[1])
}

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

pub fn origin() -> Point {
    [Q::zero(), Q::zero()]
}

pub fn point(x: i64, y: i64) -> Point {
    [rat::q(x), rat::q(y)]
}

fn primitive(d: [i64; 2]) -> [i64; 2] {
    let g = d[0].gcd(&d[1]);
    if g == 0 {
        d
    } else {
        [d[0] / g, d[1] / g]
    }
}

/// Counterclockwise angle order on nonzero integer vectors, starting just
/// past the positive x-axis; the positive x-axis itself comes last.
pub fn loop_angle_cmp(a: [i64; 2], b: [i64; 2]) -> Ordering {
    fn half(v: [i64; 2]) -> u8 {
        if v[1] == 0 && v[0] > 0 {
            2
        } else if v[1] > 0 || (v[1] == 0 && v[0] < 0) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

/// Plain angle order in [0, 2π), used for output sorting.
fn angle_cmp(a: [i64; 2], b: [i64; 2]) -> Ordering {
    let half = |v: [i64; 2]| u8::from(!(v[1] > 0 || (v[1] == 0 && v[0] > 0)));
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

impl RayLine {
    pub fn new(kind: Kind, base: Point, direction: [i64; 2], function: Series) -> Result<Self> {
        let el = RayLine { kind, base, direction, function };
        el.validate()?;
        Ok(el)
    }

    pub fn line(direction: [i64; 2], function: Series) -> Result<Self> {
        Self::new(Kind::Line, origin(), direction, function)
    }

    pub fn ray(base: Point, direction: [i64; 2], function: Series) -> Result<Self> {
        Self::new(Kind::Ray, base, direction, function)
    }

    fn validate(&self) -> Result<()> {
        let d = self.direction;
        if d == [0, 0] || primitive(d) != d {
            return Err(Error::InvalidElement(format!("direction {d:?} is not primitive")));
        }
        if self.function.dim() != 2 || self.function.trunc().grading != Grading::TPower {
            return Err(Error::InvalidElement("functions must be rank-2 series graded by t".into()));
        }
        if !self.function.constant_term().is_one() {
            return Err(Error::InvalidElement(format!("function {} is not 1 mod t", self.function)));
        }
        for (m, _) in self.function.terms() {
            if m.is_one() {
                continue;
            }
            if m.t_power == 0 {
                return Err(Error::InvalidElement(format!("function {} is not 1 mod t", self.function)));
            }
            if cross(d, [m.exponent[0], m.exponent[1]]) != 0 {
                return Err(Error::InvalidElement(format!(
                    "function {} has exponents transverse to the direction {d:?}",
                    self.function
                )));
            }
        }
        Ok(())
    }

    fn is_trivial(&self, order: u32) -> bool {
        self.function.truncate(order).is_one()
    }

    /// Outgoing directions at `p` if the support passes through it.
    fn directions_at(&self, p: &Point) -> Vec<[i64; 2]> {
        let d = self.direction;
        let rel = sub(p, &self.base);
        if !qcross(&rel, d).is_zero() {
            return Vec::new();
        }
        let along = qdot(&rel, d);
        let back = [-d[0], -d[1]];
        match self.kind {
            Kind::Line => vec![d, back],
            Kind::Ray if along.is_zero() => vec![d],
            Kind::Ray if along.is_positive() => vec![d, back],
            Kind::Ray => Vec::new(),
        }
    }

    /// Points where the supports of two elements meet transversally.
    fn intersection(&self, other: &RayLine) -> Option<Point> {
        let (d, e) = (self.direction, other.direction);
        let det = cross(d, e);
        if det == 0 {
            return None;
        }
        let rel = sub(&other.base, &self.base);
        let s = qcross(&rel, e) / rat::q(det);
        let u = qcross(&rel, d) / rat::q(det);
        if (self.kind == Kind::Ray && s.is_negative()) || (other.kind == Kind::Ray && u.is_negative()) {
            return None;
        }
        Some([&self.base[0] + &s * rat::q(d[0]), &self.base[1] + &s * rat::q(d[1])])
    }

    /// A canonical representative of the support: lines get a direction
    /// with positive leading coordinate and the base closest to the origin.
    fn canonical_support(&self) -> (Kind, Point, [i64; 2]) {
        match self.kind {
            Kind::Ray => (Kind::Ray, self.base.clone(), self.direction),
            Kind::Line => {
                let mut d = self.direction;
                if d[0] < 0 || (d[0] == 0 && d[1] < 0) {
                    d = [-d[0], -d[1]];
                }
                let t = qdot(&self.base, d) / rat::q(d[0] * d[0] + d[1] * d[1]);
                let base = [&self.base[0] - &t * rat::q(d[0]), &self.base[1] - &t * rat::q(d[1])];
                (Kind::Line, base, d)
            }
        }
    }
}

fn standard_ctx() -> LatticeContext {
    LatticeContext::standard2()
}

fn crossing_for(function: &Series, u: [i64; 2], trunc: TruncationContext) -> Elementary {
    Elementary::new(function.with_order(trunc.order), vec![-u[1], u[0]])
}

/// exp(log f ∂_n) with n = rot90(direction); `Cw` gives the inverse.
pub fn crossing_automorphism(el: &RayLine, orientation: Orientation) -> Result<FormalAutomorphism> {
    el.validate()?;
    let d = el.direction;
    let u = match orientation {
        Orientation::Ccw => d,
        Orientation::Cw => [-d[0], -d[1]],
    };
    let trunc = el.function.trunc();
    crossing_for(&el.function, u, trunc).build_automorphism(&standard_ctx(), trunc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteringDiagram {
    trunc: TruncationContext,
    elements: Vec<RayLine>,
}

/// Which loop to follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Loop {
    /// A small counterclockwise circle around a point, starting just past
    /// the positive x-direction.
    Around(Point),
    /// A counterclockwise circle of the given radius.
    Circle { center: Point, radius: Q },
    /// Explicit crossings: element index and orientation, in traversal order.
    Crossings(Vec<(usize, Orientation)>),
}

impl ScatteringDiagram {
    pub fn new(trunc: TruncationContext, elements: Vec<RayLine>) -> Result<Self> {
        if trunc.grading != Grading::TPower {
            return Err(Error::ContextMismatch("scattering diagrams are truncated by powers of t".into()));
        }
        for el in &elements {
            el.validate()?;
            if el.function.trunc() != trunc {
                return Err(Error::ContextMismatch("element truncation differs from the diagram".into()));
            }
        }
        Ok(ScatteringDiagram { trunc, elements })
    }

    pub fn empty(trunc: TruncationContext) -> Self {
        ScatteringDiagram { trunc, elements: Vec::new() }
    }

    pub fn trunc(&self) -> TruncationContext {
        self.trunc
    }

    pub fn elements(&self) -> &[RayLine] {
        &self.elements
    }

    pub fn with_order(&self, order: u32) -> Self {
        let trunc = TruncationContext { order, ..self.trunc };
        let elements = self
            .elements
            .iter()
            .map(|e| RayLine { function: e.function.with_order(order), ..e.clone() })
            .collect();
        ScatteringDiagram { trunc, elements }.minimal_normalize()
    }

    /// Drops trivial elements, merges elements with the same support and
    /// sorts by angle, then base point.
    pub fn minimal_normalize(&self) -> Self {
        let mut merged: BTreeMap<(Kind, Vec<Q>, [i64; 2]), Series> = BTreeMap::new();
        for el in &self.elements {
            let (kind, base, dir) = el.canonical_support();
            let key = (kind, base.to_vec(), dir);
            let f = match merged.remove(&key) {
                Some(g) => g.mul_raw(&el.function),
                None => el.function.clone(),
            };
            merged.insert(key, f);
        }
        let mut elements: Vec<RayLine> = merged
            .into_iter()
            .filter(|(_, f)| !f.is_one())
            .map(|((kind, base, direction), function)| RayLine {
                kind,
                base: [base[0].clone(), base[1].clone()],
                direction,
                function,
            })
            .collect();
        elements.sort_by(|a, b| {
            angle_cmp(a.direction, b.direction)
                .then_with(|| a.base.cmp(&b.base))
                .then_with(|| a.kind.cmp(&b.kind))
        });
        ScatteringDiagram { trunc: self.trunc, elements }
    }

    /// Ray base points and transversal intersections of the elements that
    /// are nontrivial mod t^{order+1}.
    pub fn singular_points(&self, order: u32) -> Vec<Point> {
        let live: Vec<&RayLine> = self.elements.iter().filter(|e| !e.is_trivial(order)).collect();
        let mut pts: Vec<Point> = Vec::new();
        for e in &live {
            if e.kind == Kind::Ray {
                pts.push(e.base.clone());
            }
        }
        for (i, a) in live.iter().enumerate() {
            for b in &live[i + 1..] {
                if let Some(p) = a.intersection(b) {
                    pts.push(p);
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    fn loop_around(&self, p: &Point, trunc: TruncationContext) -> Result<FormalAutomorphism> {
        let mut crossings: Vec<([i64; 2], usize)> = Vec::new();
        for (i, el) in self.elements.iter().enumerate() {
            if el.is_trivial(trunc.order) {
                continue;
            }
            for u in el.directions_at(p) {
                crossings.push((u, i));
            }
        }
        crossings.sort_by(|a, b| loop_angle_cmp(a.0, b.0).then(a.1.cmp(&b.1)));
        let mut acc = FormalAutomorphism::identity(&standard_ctx(), trunc);
        for (u, i) in crossings {
            acc = crossing_for(&self.elements[i].function, u, trunc).compose_left(&acc)?;
        }
        Ok(acc)
    }

    fn loop_circle(&self, center: &Point, radius: &Q, trunc: TruncationContext) -> Result<FormalAutomorphism> {
        if !radius.is_positive() {
            return Err(Error::LoopThroughSingularity("loop radius must be positive".into()));
        }
        let r2 = radius * radius;
        let dist2 = |p: &Point| {
            let d = sub(p, center);
            &d[0] * &d[0] + &d[1] * &d[1]
        };
        for p in self.singular_points(trunc.order) {
            if dist2(&p) == r2 {
                return Err(Error::LoopThroughSingularity(format!(
                    "singular point ({}, {}) lies on the loop",
                    rat::fmt(&p[0]),
                    rat::fmt(&p[1])
                )));
            }
        }
        // (angle on the circle, outgoing sign, element)
        let mut crossings: Vec<(f64, [i64; 2], usize)> = Vec::new();
        for (i, el) in self.elements.iter().enumerate() {
            if el.is_trivial(trunc.order) {
                continue;
            }
            let d = el.direction;
            let rel = sub(&el.base, center);
            // |rel + s d|² = r²
            let a = rat::q(d[0] * d[0] + d[1] * d[1]);
            let b = qdot(&rel, d) * rat::q(2);
            let c = &rel[0] * &rel[0] + &rel[1] * &rel[1] - &r2;
            let disc = &b * &b - rat::q(4) * &a * &c;
            if disc.is_zero() {
                return Err(Error::LoopThroughSingularity(format!("the loop is tangent to the element along {d:?}")));
            }
            if disc.is_negative() {
                continue;
            }
            let (af, bf, df) = (rat::to_f64(&a), rat::to_f64(&b), rat::to_f64(&disc).sqrt());
            for (s, sign) in [((-bf - df) / (2.0 * af), -1.0), ((-bf + df) / (2.0 * af), 1.0)] {
                if el.kind == Kind::Ray && s < 0.0 {
                    continue;
                }
                let qx = rat::to_f64(&rel[0]) + s * d[0] as f64;
                let qy = rat::to_f64(&rel[1]) + s * d[1] as f64;
                let mut angle = qy.atan2(qx);
                if angle <= 0.0 {
                    angle += std::f64::consts::TAU;
                }
                // n·v = u·(q − center) for n = rot90(u)
                let u = if sign < 0.0 { [-d[0], -d[1]] } else { d };
                crossings.push((angle, u, i));
            }
        }
        crossings.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.2.cmp(&b.2)));
        let mut acc = FormalAutomorphism::identity(&standard_ctx(), trunc);
        for (_, u, i) in crossings {
            acc = crossing_for(&self.elements[i].function, u, trunc).compose_left(&acc)?;
        }
        Ok(acc)
    }
}

/// θ_s∘…∘θ_1 along the loop, mod t^{order+1}.
pub fn path_ordered_product(d: &ScatteringDiagram, lp: &Loop, order: u32) -> Result<FormalAutomorphism> {
    let trunc = TruncationContext::t(order);
    match lp {
        Loop::Around(p) => d.loop_around(p, trunc),
        Loop::Circle { center, radius } => d.loop_circle(center, radius, trunc),
        Loop::Crossings(list) => {
            let mut acc = FormalAutomorphism::identity(&standard_ctx(), trunc);
            for &(i, o) in list {
                let el = d
                    .elements
                    .get(i)
                    .ok_or_else(|| Error::InvalidElement(format!("no element with index {i}")))?;
                let dir = el.direction;
                let u = match o {
                    Orientation::Ccw => dir,
                    Orientation::Cw => [-dir[0], -dir[1]],
                };
                acc = crossing_for(&el.function, u, trunc).compose_left(&acc)?;
            }
            Ok(acc)
        }
    }
}

/// Order-j terms of a loop product that is trivial below t^j, returned as
/// rays to append at `p`.
fn cancelling_rays(p: &Point, prod: &FormalAutomorphism, j: u32) -> Result<Vec<RayLine>> {
    let mut by_m: BTreeMap<[i64; 2], [Q; 2]> = BTreeMap::new();
    for (i, u) in prod.multipliers().iter().enumerate() {
        for (m, c) in u.terms() {
            if m.is_one() {
                continue;
            }
            if m.t_power < j {
                return Err(Error::NonconvergentOrder(format!(
                    "loop at ({}, {}) is not trivial below order {j}",
                    rat::fmt(&p[0]),
                    rat::fmt(&p[1])
                )));
            }
            let key = [m.exponent[0], m.exponent[1]];
            by_m.entry(key).or_insert_with(|| [Q::zero(), Q::zero()])[i] += c;
        }
    }
    let mut rays = Vec::new();
    for (m, v) in by_m {
        if v[0].is_zero() && v[1].is_zero() {
            continue;
        }
        if m == [0, 0] {
            return Err(Error::NonconvergentOrder(format!("pure t^{j} term in a loop product")));
        }
        // V must be orthogonal to m for the discrepancy to be a log derivation
        if !(&v[0] * rat::q(m[0]) + &v[1] * rat::q(m[1])).is_zero() {
            return Err(Error::NonconvergentOrder(format!(
                "order-{j} discrepancy at exponent {m:?} is not a log derivation"
            )));
        }
        let dir = primitive(m);
        let n = [-dir[1], dir[0]];
        let nn = rat::q(n[0] * n[0] + n[1] * n[1]);
        let a = -(&v[0] * rat::q(n[0]) + &v[1] * rat::q(n[1])) / nn;
        let mut f = Series::one(2, TruncationContext::t(j));
        f.add_term(Monomial::new(m.to_vec(), j), a)?;
        rays.push(RayLine { kind: Kind::Ray, base: p.clone(), direction: dir, function: f });
    }
    Ok(rays)
}

/// The minimal diagram containing `d` that is consistent mod t^{order+1}.
///
/// Order by order: at every singular point the loop product is trivial below
/// t^j, and its t^j part is cancelled by rays emanating from that point.
/// `threads` bounds the number of points processed concurrently.
pub fn complete(d: &ScatteringDiagram, order: u32, threads: usize) -> Result<ScatteringDiagram> {
    let mut diagram = d.with_order(order);
    for j in 1..=order {
        let trunc = TruncationContext::t(j);
        let points = diagram.singular_points(j);
        let work = |p: &Point| -> Result<Vec<RayLine>> {
            let prod = diagram.loop_around(p, trunc)?;
            cancelling_rays(p, &prod, j)
        };
        let results: Vec<Result<Vec<RayLine>>> = if threads <= 1 || points.len() <= 1 {
            points.iter().map(work).collect()
        } else {
            let chunk = points.len().div_ceil(threads);
            std::thread::scope(|s| {
                let handles: Vec<_> = points
                    .chunks(chunk)
                    .map(|c| s.spawn(move || c.iter().map(work).collect::<Vec<_>>()))
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
            })
        };
        let mut added = Vec::new();
        for r in results {
            for mut ray in r? {
                ray.function = ray.function.with_order(order);
                added.push(ray);
            }
        }
        if !added.is_empty() {
            let mut elements = diagram.elements.clone();
            elements.extend(added);
            diagram = ScatteringDiagram { trunc: diagram.trunc, elements }.minimal_normalize();
        }
    }
    Ok(diagram)
}

/// Every singular point has a trivial loop mod t^{order+1}.
pub fn is_consistent(d: &ScatteringDiagram, order: u32) -> Result<bool> {
    let trunc = TruncationContext::t(order);
    for p in d.singular_points(order) {
        if !d.loop_around(&p, trunc)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One BPS ray pair: charge, BPS index and the direction m̄_γ in M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub charge: Charge,
    pub omega: i64,
    pub direction: [i64; 2],
}

/// Where a ray of a marked diagram came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayProvenance {
    pub direction: [i64; 2],
    pub charge: Charge,
    pub omega: i64,
    pub l: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedBPSDiagram {
    pub diagram: ScatteringDiagram,
    pub provenance: Vec<RayProvenance>,
}

/// Rays along ±m̄_γ from the origin, each with (1 − σ(γ)x_γ)^{lΩ} where
/// x_γ = t·z^{m̄_γ}.
pub fn bps_initial_diagram(
    ctx: &LatticeContext,
    spectrum: &[SpectrumEntry],
    r: &QuadraticRefinement,
    l: u32,
    order: u32,
) -> Result<MarkedBPSDiagram> {
    if ctx.rank() != 2 {
        return Err(Error::RankMismatch(format!("BPS diagrams need rank 2, got {}", ctx.rank())));
    }
    let trunc = TruncationContext::t(order);
    let mut elements = Vec::new();
    let mut provenance = Vec::new();
    for e in spectrum {
        if e.charge.rank() != 2 {
            return Err(Error::RankMismatch(format!("charge {} is not of rank 2", e.charge)));
        }
        if e.direction == [0, 0] {
            return Err(Error::InvalidElement(format!("zero direction for {}", e.charge)));
        }
        let sigma = r.sign(ctx, &e.charge)?;
        let mut base = Series::one(2, trunc);
        base.add_term(Monomial::new(e.direction.to_vec(), 1), rat::q(-(sigma as i64)))?;
        let f = base.pow(l as i64 * e.omega)?;
        let dir = primitive(e.direction);
        for u in [dir, [-dir[0], -dir[1]]] {
            elements.push(RayLine::ray(origin(), u, f.clone())?);
            provenance.push(RayProvenance { direction: u, charge: e.charge.clone(), omega: e.omega, l });
        }
    }
    let diagram = ScatteringDiagram::new(trunc, elements)?.minimal_normalize();
    provenance.sort_by(|a, b| angle_cmp(a.direction, b.direction).then_with(|| a.charge.cmp(&b.charge)));
    Ok(MarkedBPSDiagram { diagram, provenance })
}

/// Factorization of a spectrum generator with factors ordered by
/// decreasing BPS ray phase arg(−Z_γ), measured from the bisector of the
/// basis phases so the half-plane never wraps.
pub fn spectrum_generator_factorize(
    s: &FormalAutomorphism,
    r: &QuadraticRefinement,
    model: &CentralChargeModel,
    max_degree: u32,
) -> Result<KSWord> {
    let ctx = s.ctx().clone();
    let phases = std::cell::RefCell::new(None);
    let key = |g: &Charge| match model.cone_phase(&ctx, g) {
        Ok(p) => p,
        Err(e) => {
            phases.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let word = autom::factorize_ordered(s, r, &key, max_degree)?;
    if let Some(e) = phases.into_inner() {
        return Err(e);
    }
    Ok(word)
}

/// The diagram of two lines through the origin with the given functions.
pub fn two_lines(f_x: Series, f_y: Series) -> Result<ScatteringDiagram> {
    let trunc = f_x.trunc();
    ScatteringDiagram::new(trunc, vec![RayLine::line([1, 0], f_x)?, RayLine::line([0, 1], f_y)?])
}

/// 1 + c·t^j·z^m as a series mod t^{order+1}.
pub fn binomial(m: [i64; 2], j: u32, c: Q, order: u32) -> Result<Series> {
    let mut f = Series::one(2, TruncationContext::t(order));
    f.add_term(Monomial::new(m.to_vec(), j), c)?;
    Ok(f)
}
