//! Charges, the skew pairing, degrees, quadratic refinements and the
//! numerical side of central charges (phases, walls, semiflat coordinates).

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::rat::{self, Q};

/// An integer lattice vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Charge(pub Vec<i64>);

impl Charge {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Charge(coords.into())
    }

    pub fn zero(rank: usize) -> Self {
        Charge(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Charge(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Charge {
        Charge(self.0.iter().map(|c| c * k).collect())
    }

    /// gcd of the coordinates (0 for the zero charge).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    /// `(primitive, multiple)` with `self = multiple * primitive`.
    pub fn primitive(&self) -> (Charge, i64) {
        let g = self.content();
        if g == 0 {
            return (self.clone(), 0);
        }
        (Charge(self.0.iter().map(|c| c / g).collect()), g)
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Charge {
    type Output = Charge;
    fn add(self, rhs: &Charge) -> Charge {
        Charge(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Charge {
    type Output = Charge;
    fn sub(self, rhs: &Charge) -> Charge {
        Charge(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Charge {
    type Output = Charge;
    fn neg(self) -> Charge {
        Charge(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for Charge {
    fn from(v: Vec<i64>) -> Self {
        Charge(v)
    }
}

impl<const N: usize> From<[i64; N]> for Charge {
    fn from(v: [i64; N]) -> Self {
        Charge(v.to_vec())
    }
}

/// Rank, skew form, degree basis and flavor directions of a charge lattice.
///
/// The degree basis doubles as the positive cone: a charge has a degree only
/// when its coordinates in this basis are nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeContext {
    skew_form: Vec<Vec<i64>>,
    degree_basis: Vec<Charge>,
    flavor_subspace: Vec<Charge>,
    to_basis: Vec<Vec<Q>>,
    basis_pairing: Vec<Vec<i64>>,
}

impl LatticeContext {
    pub fn new(
        skew_form: Vec<Vec<i64>>,
        degree_basis: Vec<Charge>,
        flavor_subspace: Vec<Charge>,
    ) -> Result<Self> {
        let rank = skew_form.len();
        if rank == 0 {
            return Err(invariant("rank", "rank must be positive"));
        }
        if skew_form.iter().any(|row| row.len() != rank) {
            return Err(invariant("skew_form", "skew_form must be a square rank x rank matrix"));
        }
        for i in 0..rank {
            for j in 0..rank {
                if skew_form[i][j] != -skew_form[j][i] {
                    return Err(invariant(
                        "skew_form",
                        format!("skew_form is not antisymmetric at ({i},{j})"),
                    ));
                }
            }
        }
        if degree_basis.len() != rank || degree_basis.iter().any(|e| e.rank() != rank) {
            return Err(invariant(
                "degree_basis",
                format!("degree_basis must hold {rank} charges of rank {rank}"),
            ));
        }
        // columns are the basis vectors
        let columns: Vec<Vec<i64>> = (0..rank)
            .map(|r| degree_basis.iter().map(|e| e.0[r]).collect())
            .collect();
        let to_basis = rat::inverse(&columns).ok_or_else(|| {
            invariant("degree_basis", "degree_basis charges are linearly dependent")
        })?;
        for f in &flavor_subspace {
            if f.rank() != rank {
                return Err(invariant("flavor_subspace", format!("flavor charge {f} has wrong rank")));
            }
            let radical = (0..rank).all(|i| (0..rank).map(|j| skew_form[i][j] * f.0[j]).sum::<i64>() == 0);
            if !radical {
                return Err(invariant(
                    "flavor_subspace",
                    format!("flavor charge {f} pairs nontrivially with the lattice"),
                ));
            }
        }
        let mut ctx = LatticeContext {
            skew_form,
            degree_basis,
            flavor_subspace,
            to_basis,
            basis_pairing: Vec::new(),
        };
        let bp = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| ctx.raw_pair(&ctx.degree_basis[i], &ctx.degree_basis[j]))
                    .collect()
            })
            .collect();
        ctx.basis_pairing = bp;
        Ok(ctx)
    }

    /// Rank 2, ⟨(p,q),(p',q')⟩ = pq' − qp', standard basis.
    pub fn standard2() -> Self {
        Self::new(
            vec![vec![0, 1], vec![-1, 0]],
            vec![Charge::unit(2, 0), Charge::unit(2, 1)],
            vec![],
        )
        .expect("standard lattice is valid")
    }

    pub fn rank(&self) -> usize {
        self.skew_form.len()
    }

    pub fn skew_form(&self) -> &[Vec<i64>] {
        &self.skew_form
    }

    pub fn degree_basis(&self) -> &[Charge] {
        &self.degree_basis
    }

    pub fn flavor_subspace(&self) -> &[Charge] {
        &self.flavor_subspace
    }

    /// ⟨e_i, e_j⟩ on the degree basis.
    pub fn basis_pairing(&self) -> &[Vec<i64>] {
        &self.basis_pairing
    }

    fn raw_pair(&self, a: &Charge, b: &Charge) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += a.0[i] * self.skew_form[i][j] * b.0[j];
            }
        }
        s
    }

    pub(crate) fn check(&self, g: &Charge) -> Result<()> {
        if g.rank() != self.rank() {
            return Err(Error::InvalidCharge(format!(
                "charge {g} has length {} but the lattice has rank {}",
                g.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    /// aᵀ · skew_form · b.
    pub fn pair(&self, a: &Charge, b: &Charge) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.raw_pair(a, b))
    }

    /// Pairing of two vectors given in degree-basis coordinates.
    pub fn pair_coords(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                s += ai * self.basis_pairing[i][j] * bj;
            }
        }
        s
    }

    /// Rational coordinates in the degree basis.
    pub fn coordinates(&self, g: &Charge) -> Result<Vec<Q>> {
        self.check(g)?;
        Ok(self
            .to_basis
            .iter()
            .map(|row| row.iter().zip(&g.0).map(|(r, &c)| r * rat::q(c)).sum())
            .collect())
    }

    /// Integer coordinates in the degree basis.
    pub fn basis_coords(&self, g: &Charge) -> Result<Vec<i64>> {
        self.coordinates(g)?
            .iter()
            .map(|c| {
                rat::to_int(c).ok_or_else(|| {
                    Error::InvalidCharge(format!("{g} is not an integral combination of the degree basis"))
                })
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[i64]) -> Charge {
        let mut v = vec![0; self.rank()];
        for (ci, e) in c.iter().zip(&self.degree_basis) {
            for (vr, er) in v.iter_mut().zip(&e.0) {
                *vr += ci * er;
            }
        }
        Charge(v)
    }

    /// Sum of the degree-basis coordinates of a charge in the positive cone.
    pub fn degree(&self, g: &Charge) -> Result<u64> {
        let coords = self.coordinates(g)?;
        if coords.iter().any(|c| c.is_negative()) {
            return Err(Error::OutsideCone(format!("{g} has a negative degree-basis coordinate")));
        }
        let mut d = 0u64;
        for c in &coords {
            let Some(ci) = rat::to_int(c) else {
                return Err(Error::OutsideCone(format!("{g} has a non-integral degree-basis coordinate")));
            };
            d += ci as u64;
        }
        Ok(d)
    }
}

/// Signs on the degree basis; extended to the whole lattice by the
/// refinement law σ(a)σ(b) = (−1)^⟨a,b⟩ σ(a+b).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticRefinement {
    pub basis_signs: Vec<i8>,
}

impl QuadraticRefinement {
    pub fn new(basis_signs: Vec<i8>) -> Result<Self> {
        if basis_signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(invariant("refinement", "refinement signs must be +1 or -1"));
        }
        Ok(QuadraticRefinement { basis_signs })
    }

    /// σ ≡ −1 on the degree basis.
    pub fn all_minus(rank: usize) -> Self {
        QuadraticRefinement { basis_signs: vec![-1; rank] }
    }

    pub fn sign_coords(&self, ctx: &LatticeContext, n: &[i64]) -> i8 {
        let mut odd = false;
        for (i, &ni) in n.iter().enumerate() {
            if ni.rem_euclid(2) == 1 && self.basis_signs[i] == -1 {
                odd = !odd;
            }
            for (j, &nj) in n.iter().enumerate().skip(i + 1) {
                if (ni * nj * ctx.basis_pairing[i][j]).rem_euclid(2) == 1 {
                    odd = !odd;
                }
            }
        }
        if odd {
            -1
        } else {
            1
        }
    }

    pub fn sign(&self, ctx: &LatticeContext, g: &Charge) -> Result<i8> {
        if self.basis_signs.len() != ctx.rank() {
            return Err(invariant("refinement", "refinement length differs from the lattice rank"));
        }
        let n = ctx.basis_coords(g)?;
        Ok(self.sign_coords(ctx, &n))
    }
}

/// Checks the refinement law on every pair in the box of degree-basis
/// coordinates `[-radius, radius]^rank`.
pub fn validate_refinement(ctx: &LatticeContext, r: &QuadraticRefinement, radius: i64) -> Result<()> {
    if r.basis_signs.len() != ctx.rank() {
        return Err(invariant("refinement", "refinement length differs from the lattice rank"));
    }
    let points = box_points(ctx.rank(), radius);
    for a in &points {
        let sa = r.sign_coords(ctx, a);
        for b in &points {
            let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let lhs = sa * r.sign_coords(ctx, b);
            let parity = if ctx.pair_coords(a, b).rem_euclid(2) == 0 { 1 } else { -1 };
            if lhs != parity * r.sign_coords(ctx, &sum) {
                return Err(invariant(
                    "refinement",
                    format!("refinement law fails for {:?} and {:?}", a, b),
                ));
            }
        }
    }
    Ok(())
}

fn box_points(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-radius..=radius).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Complex central charges on the degree basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralChargeModel {
    pub basis_values: Vec<Complex64>,
    pub flavor_masses: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallTest {
    Aligned,
    Separated,
}

/// Default tolerance for phase comparisons.
pub const PHASE_TOL: f64 = 1e-12;

fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x <= -PI {
        x += 2.0 * PI;
    } else if x > PI {
        x -= 2.0 * PI;
    }
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl CentralChargeModel {
    pub fn new(basis_values: Vec<Complex64>) -> Self {
        CentralChargeModel { basis_values, flavor_masses: Vec::new() }
    }

    /// Checks lengths, and that each given flavor mass equals Z of the
    /// corresponding flavor generator.
    pub fn validate(&self, ctx: &LatticeContext) -> Result<()> {
        if self.basis_values.len() != ctx.rank() {
            return Err(invariant("central_charges", "one central charge per degree-basis element is required"));
        }
        if self.flavor_masses.is_empty() {
            return Ok(());
        }
        if self.flavor_masses.len() != ctx.flavor_subspace().len() {
            return Err(invariant("flavor_masses", "one mass per flavor generator is required"));
        }
        for (f, m) in ctx.flavor_subspace().iter().zip(&self.flavor_masses) {
            let z = self.central_charge(ctx, f)?;
            if (z - m).norm() > 1e-9 * (1.0 + m.norm()) {
                return Err(invariant(
                    "flavor_masses",
                    format!("flavor mass for {f} disagrees with the central charge of the generator"),
                ));
            }
        }
        Ok(())
    }

    pub fn central_charge(&self, ctx: &LatticeContext, g: &Charge) -> Result<Complex64> {
        let c = ctx.coordinates(g)?;
        Ok(c.iter()
            .zip(&self.basis_values)
            .map(|(ci, z)| z * rat::to_f64(ci))
            .sum())
    }

    fn scale(&self) -> f64 {
        self.basis_values.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    }

    fn nonvanishing(&self, ctx: &LatticeContext, g: &Charge) -> Result<Complex64> {
        let z = self.central_charge(ctx, g)?;
        if z.norm() <= 1e-14 * self.scale() {
            return Err(Error::VanishingCentralCharge(g.to_string()));
        }
        Ok(z)
    }

    /// arg(−Z_γ) in (−π, π].
    pub fn ray_phase(&self, ctx: &LatticeContext, g: &Charge) -> Result<f64> {
        let z = self.nonvanishing(ctx, g)?;
        Ok(wrap_angle((-z).arg()))
    }

    pub fn stability_wall_test(
        &self,
        ctx: &LatticeContext,
        a: &Charge,
        b: &Charge,
        tol: f64,
    ) -> Result<WallTest> {
        let za = self.nonvanishing(ctx, a)?;
        let zb = self.nonvanishing(ctx, b)?;
        let d = wrap_angle(za.arg() - zb.arg());
        Ok(if d.abs() <= tol { WallTest::Aligned } else { WallTest::Separated })
    }

    /// Ray phase measured from the bisector of the degree-basis phases, so
    /// that every charge of the positive cone lands near zero and away from
    /// the branch cut.
    pub fn cone_phase(&self, ctx: &LatticeContext, g: &Charge) -> Result<f64> {
        let bisector: Complex64 = self
            .basis_values
            .iter()
            .filter(|z| z.norm() > 0.0)
            .map(|z| -z / z.norm())
            .sum();
        let z = self.nonvanishing(ctx, g)?;
        let reference = if bisector.norm() > 0.0 { bisector.arg() } else { 0.0 };
        Ok(wrap_angle((-z).arg() - reference))
    }
}

/// ((M⁻¹)ᵀ·γ, s − H·γ) for a unimodular M.
pub fn monodromy_transform(
    m: &[Vec<i64>],
    h: &[Vec<i64>],
    gauge: &Charge,
    s: &Charge,
) -> Result<(Charge, Charge)> {
    let n = gauge.rank();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidMonodromy(format!("monodromy must be {n} x {n}")));
    }
    let d = rat::det(m);
    if d.abs() != rat::q(1) {
        return Err(Error::InvalidMonodromy(format!("determinant {} is not ±1", rat::fmt(&d))));
    }
    let inv = rat::inverse(m).ok_or_else(|| Error::InvalidMonodromy("singular matrix".into()))?;
    let mut g = vec![0i64; n];
    for (i, gi) in g.iter_mut().enumerate() {
        // ((M⁻¹)ᵀ γ)_i = Σ_j (M⁻¹)_{j i} γ_j
        let v: Q = (0..n).map(|j| &inv[j][i] * rat::q(gauge.0[j])).sum();
        *gi = rat::to_int(&v).ok_or_else(|| Error::InvalidMonodromy("inverse is not integral".into()))?;
    }
    let mut out_s = s.0.clone();
    if !h.is_empty() {
        if h.len() != s.rank() || h.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMonodromy(format!(
                "flavor shift must be {} x {n}",
                s.rank()
            )));
        }
        for (k, sk) in out_s.iter_mut().enumerate() {
            *sk -= (0..n).map(|j| h[k][j] * gauge.0[j]).sum::<i64>();
        }
    }
    Ok((Charge(g), Charge(out_s)))
}

/// Radius and additive angles for the semiflat coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiflatContext {
    pub radius: f64,
    /// θ on each degree-basis element; extended additively.
    pub theta: Vec<f64>,
}

/// exp(πR ξ⁻¹ Z_γ + iθ_γ + πR ξ Z̄_γ).
pub fn semiflat_coordinate(
    sf: &SemiflatContext,
    model: &CentralChargeModel,
    ctx: &LatticeContext,
    g: &Charge,
    xi: Complex64,
) -> Result<Complex64> {
    if xi.norm() == 0.0 {
        return Err(Error::InvalidTwistorParameter);
    }
    let z = model.central_charge(ctx, g)?;
    let theta: f64 = ctx
        .coordinates(g)?
        .iter()
        .zip(&sf.theta)
        .map(|(c, t)| rat::to_f64(c) * t)
        .sum();
    let pr = PI * sf.radius;
    let exponent = z * pr / xi + Complex64::new(0.0, theta) + xi * z.conj() * pr;
    Ok(exponent.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i64]) -> Charge {
        Charge(v.to_vec())
    }

    #[test]
    fn pairing_examples() {
        let ctx = LatticeContext::standard2();
        assert_eq!(ctx.pair(&c(&[1, 0]), &c(&[0, 1])).unwrap(), 1);
        assert_eq!(ctx.pair(&c(&[2, -1]), &c(&[0, 1])).unwrap(), 2);
        assert_eq!(ctx.pair(&c(&[3, 5]), &c(&[3, 5])).unwrap(), 0);
        assert!(matches!(ctx.pair(&c(&[1]), &c(&[0, 1])), Err(Error::InvalidCharge(_))));
    }

    #[test]
    fn degree_examples() {
        let ctx = LatticeContext::standard2();
        assert_eq!(ctx.degree(&c(&[1, 0])).unwrap(), 1);
        assert_eq!(ctx.degree(&c(&[2, 3])).unwrap(), 5);
        assert!(matches!(ctx.degree(&c(&[-1, 0])), Err(Error::OutsideCone(_))));
    }

    #[test]
    fn non_unimodular_basis() {
        let ctx = LatticeContext::new(
            vec![vec![0, 1], vec![-1, 0]],
            vec![c(&[2, -1]), c(&[0, 1])],
            vec![],
        )
        .unwrap();
        assert_eq!(ctx.basis_coords(&c(&[2, 0])).unwrap(), vec![1, 1]);
        assert_eq!(ctx.degree(&c(&[4, 1])).unwrap(), 5);
        assert!(ctx.basis_coords(&c(&[1, 0])).is_err());
        assert_eq!(ctx.basis_pairing()[0][1], 2);
    }

    #[test]
    fn refinement_examples() {
        let ctx = LatticeContext::standard2();
        let r = QuadraticRefinement::all_minus(2);
        assert_eq!(r.sign(&ctx, &c(&[1, 1])).unwrap(), -1);
        assert_eq!(r.sign(&ctx, &c(&[0, 0])).unwrap(), 1);
        // split form (−1)^{γe γm} corresponds to +1 on both basis vectors
        let split = QuadraticRefinement::new(vec![1, 1]).unwrap();
        assert_eq!(split.sign(&ctx, &c(&[1, 1])).unwrap(), -1);
        assert_eq!(split.sign(&ctx, &c(&[2, 1])).unwrap(), 1);
        validate_refinement(&ctx, &r, 3).unwrap();
    }

    #[test]
    fn phases() {
        let ctx = LatticeContext::standard2();
        let m = CentralChargeModel::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert_eq!(m.ray_phase(&ctx, &c(&[1, 0])).unwrap(), 0.0);
        assert!((m.ray_phase(&ctx, &c(&[0, 1])).unwrap() + PI / 2.0).abs() < 1e-15);
        let z = CentralChargeModel::new(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            z.ray_phase(&ctx, &c(&[1, -1])),
            Err(Error::VanishingCentralCharge(_))
        ));
        // Z = 1 gives −Z = −1 on the closed end of (−π, π]
        assert_eq!(z.ray_phase(&ctx, &c(&[1, 0])).unwrap(), PI);
    }

    #[test]
    fn walls() {
        let ctx = LatticeContext::standard2();
        let m = CentralChargeModel::new(vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, 2.0)]);
        assert_eq!(
            m.stability_wall_test(&ctx, &c(&[1, 0]), &c(&[0, 1]), PHASE_TOL).unwrap(),
            WallTest::Aligned
        );
        let m = CentralChargeModel::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        assert_eq!(
            m.stability_wall_test(&ctx, &c(&[1, 0]), &c(&[0, 1]), PHASE_TOL).unwrap(),
            WallTest::Separated
        );
        let m = CentralChargeModel::new(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 1e-15)]);
        assert_eq!(
            m.stability_wall_test(&ctx, &c(&[1, 0]), &c(&[0, 1]), 1e-12).unwrap(),
            WallTest::Aligned
        );
    }

    #[test]
    fn monodromy_examples() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let (g, s) = monodromy_transform(&id, &[], &c(&[3, 4]), &c(&[])).unwrap();
        assert_eq!((g, s), (c(&[3, 4]), c(&[])));
        let t = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(monodromy_transform(&t, &[], &c(&[1, 0]), &c(&[])).unwrap().0, c(&[1, -1]));
        let ex1 = vec![vec![1, 0], vec![-1, 1]];
        assert_eq!(monodromy_transform(&ex1, &[], &c(&[0, 1]), &c(&[])).unwrap().0, c(&[1, 1]));
        let bad = vec![vec![2, 0], vec![0, 1]];
        assert!(matches!(
            monodromy_transform(&bad, &[], &c(&[1, 0]), &c(&[])),
            Err(Error::InvalidMonodromy(_))
        ));
        let (_, s) = monodromy_transform(&id, &[vec![1, 2]], &c(&[1, 1]), &c(&[5])).unwrap();
        assert_eq!(s, c(&[2]));
    }

    #[test]
    fn semiflat_examples() {
        let ctx = LatticeContext::standard2();
        let m = CentralChargeModel::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
        let sf = SemiflatContext { radius: 1.0, theta: vec![0.0, 0.3] };
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(semiflat_coordinate(&sf, &m, &ctx, &c(&[0, 0]), one).unwrap(), one);
        let v = semiflat_coordinate(&sf, &m, &ctx, &c(&[1, 0]), one).unwrap();
        assert!((v.re - (2.0 * PI).exp()).abs() < 1e-9 && v.im.abs() < 1e-9);
        assert_eq!(
            semiflat_coordinate(&sf, &m, &ctx, &c(&[1, 0]), Complex64::new(0.0, 0.0)),
            Err(Error::InvalidTwistorParameter)
        );
    }

    #[test]
    fn rejects_bad_contexts() {
        let e = LatticeContext::new(vec![vec![0, 1], vec![1, 0]], vec![c(&[1, 0]), c(&[0, 1])], vec![]);
        assert!(matches!(e, Err(Error::InvariantViolation { ref invariant, .. }) if invariant == "skew_form"));
        let e = LatticeContext::new(vec![vec![0, 1], vec![-1, 0]], vec![c(&[1, 0]), c(&[2, 0])], vec![]);
        assert!(matches!(e, Err(Error::InvariantViolation { ref invariant, .. }) if invariant == "degree_basis"));
        let e = LatticeContext::new(
            vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
            vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])],
            vec![c(&[1, 0, 0])],
        );
        assert!(e.is_err());
        LatticeContext::new(
            vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]],
            vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])],
            vec![c(&[0, 0, 1])],
        )
        .unwrap();
    }
}
