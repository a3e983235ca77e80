//! The rank-3 Hitchin-section Higgs data and its degenerate spectral theory.
//!
//! Against the surface frame `(dz, 1, dz^-1)` (or its `dz/z` analogue on the
//! punctured line) the Higgs field acts by the companion-like matrix with
//! rows `(0, q2, q3)`, `(1, 0, q2)`, `(0, 1, 0)`, whose characteristic
//! polynomial is `t^3 - 2 q2 t - q3`. The covering degenerates to at most
//! two sheets exactly when the discriminant `32 q2^3 - 27 q3^2` vanishes
//! identically, in which case `q2 = 3*2^(-5/3) f^2` and `q3 = f^3` for a
//! single coefficient function `f`, and everything downstream (eigenframe,
//! pairing values, isotropic frame, orders at the punctures) is computed
//! symbolically from `f`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::laurent::{LaurentPoly, RatFunc};
use crate::verify::VerificationLog;

/// The two parabolic base surfaces: `(P^1, {inf})` with differentials
/// against `dz`, and `(P^1, {0, inf})` with differentials against `dz/z`.
/// Both have genus 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    AffineLine,
    PuncturedLine,
}

impl SurfaceKind {
    pub fn punctures(&self) -> &'static [PuncturePoint] {
        match self {
            SurfaceKind::AffineLine => &[PuncturePoint::Infinity],
            SurfaceKind::PuncturedLine => &[PuncturePoint::Zero, PuncturePoint::Infinity],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceKind::AffineLine => "affine_line",
            SurfaceKind::PuncturedLine => "punctured_line",
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PuncturePoint {
    Zero,
    Infinity,
}

impl PuncturePoint {
    pub fn name(&self) -> &'static str {
        match self {
            PuncturePoint::Zero => "zero",
            PuncturePoint::Infinity => "infinity",
        }
    }
}

impl fmt::Display for PuncturePoint {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.name())
    }
}

/// Input data: either the coefficient function `f` directly, or the pair of
/// differential coefficients `(q2, q3)` against the surface's reference
/// differential.
#[derive(Debug, Clone)]
pub enum HiggsPayload {
    Coefficient(LaurentPoly),
    Differentials { q2: LaurentPoly, q3: LaurentPoly },
}

#[derive(Debug, Clone)]
pub struct HiggsInput {
    pub surface: SurfaceKind,
    pub payload: HiggsPayload,
}

impl HiggsInput {
    pub fn from_f(surface: SurfaceKind, f: LaurentPoly) -> Result<Self> {
        if surface == SurfaceKind::AffineLine {
            require_polynomial(&f, "f")?;
        }
        Ok(HiggsInput {
            surface,
            payload: HiggsPayload::Coefficient(f),
        })
    }

    pub fn from_differentials(
        surface: SurfaceKind,
        q2: LaurentPoly,
        q3: LaurentPoly,
    ) -> Result<Self> {
        if surface == SurfaceKind::AffineLine {
            require_polynomial(&q2, "q2")?;
            require_polynomial(&q3, "q3")?;
        }
        Ok(HiggsInput {
            surface,
            payload: HiggsPayload::Differentials { q2, q3 },
        })
    }
}

fn require_polynomial(p: &LaurentPoly, name: &str) -> Result<()> {
    if p.ord_low().is_some_and(|l| l < 0) {
        return Err(Error::InvalidInput(format!(
            "{name} has negative exponents, which the affine line forbids"
        )));
    }
    Ok(())
}

/// Sheet count of the spectral covering, with the extracted coefficient
/// function and eigenvalue coefficients when the covering degenerates.
#[derive(Debug, Clone)]
pub struct SpectralClassification {
    /// 1, 2 or 3.
    pub sheets: u8,
    /// Present iff sheets <= 2; zero iff sheets = 1.
    pub f: Option<LaurentPoly>,
    /// Coefficient of the simple eigenvalue `2^(2/3) f` against the
    /// reference differential; present iff sheets <= 2.
    pub lambda1_coeff: Option<LaurentPoly>,
    /// Coefficient of the double eigenvalue `-2^(-1/3) f`; present iff
    /// sheets <= 2.
    pub lambda2_coeff: Option<LaurentPoly>,
}

/// Coordinates of a local section against the surface frame
/// `(dz, 1, dz^-1)` or its `dz/z` analogue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameVector {
    pub coords: [LaurentPoly; 3],
}

impl FrameVector {
    pub fn new(coords: [LaurentPoly; 3]) -> Self {
        FrameVector { coords }
    }

    pub fn zero() -> Self {
        FrameVector::new([LaurentPoly::zero(), LaurentPoly::zero(), LaurentPoly::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        FrameVector::new([
            &self.coords[0] * c,
            &self.coords[1] * c,
            &self.coords[2] * c,
        ])
    }

    pub fn sub(&self, other: &FrameVector) -> Self {
        FrameVector::new([
            &self.coords[0] - &other.coords[0],
            &self.coords[1] - &other.coords[1],
            &self.coords[2] - &other.coords[2],
        ])
    }
}

impl fmt::Display for FrameVector {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "({}; {}; {})",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

pub type Matrix3 = [[LaurentPoly; 3]; 3];

/// The Higgs matrix `[[0, q2, q3], [1, 0, q2], [0, 1, 0]]` against the
/// surface frame.
pub fn build_theta_matrix(q2: &LaurentPoly, q3: &LaurentPoly) -> Matrix3 {
    let zero = LaurentPoly::zero;
    let one = LaurentPoly::one;
    [
        [zero(), q2.clone(), q3.clone()],
        [one(), zero(), q2.clone()],
        [zero(), one(), zero()],
    ]
}

pub fn apply_matrix(m: &Matrix3, v: &FrameVector) -> FrameVector {
    let mut out = FrameVector::zero();
    for (i, row) in m.iter().enumerate() {
        let mut acc = LaurentPoly::zero();
        for (j, entry) in row.iter().enumerate() {
            acc = &acc + &(entry * &v.coords[j]);
        }
        out.coords[i] = acc;
    }
    out
}

/// Elementary symmetric functions of a generic 3x3 matrix: trace, sum of
/// principal 2x2 minors, determinant. Used as an independent route to the
/// characteristic polynomial `t^3 - e1 t^2 + e2 t - e3`.
pub fn elementary_symmetric(m: &Matrix3) -> (LaurentPoly, LaurentPoly, LaurentPoly) {
    let e1 = &(&m[0][0] + &m[1][1]) + &m[2][2];
    let minor = |i: usize, j: usize| -> LaurentPoly {
        &(&m[i][i] * &m[j][j]) - &(&m[i][j] * &m[j][i])
    };
    let e2 = &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2);
    let e3 = det3(m);
    (e1, e2, e3)
}

pub fn det3(m: &Matrix3) -> LaurentPoly {
    let a = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    let b = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    let c = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    &(&a - &b) + &c
}

/// `32 q2^3 - 27 q3^2`, the discriminant of `t^3 - 2 q2 t - q3` up to the
/// usual sign conventions; it vanishes identically exactly in the one- and
/// two-sheeted cases.
pub fn discriminant(q2: &LaurentPoly, q3: &LaurentPoly) -> LaurentPoly {
    let cube = q2.pow(3).scale(&FieldElem::from_int(32));
    let square = q3.pow(2).scale(&FieldElem::from_int(27));
    &cube - &square
}

/// `3 * 2^(-5/3)`, the coefficient tying `q2` to `f^2`.
pub fn q2_coefficient() -> FieldElem {
    &FieldElem::from_int(3) * &FieldElem::two_pow_third(-5)
}

/// Build `(q2, q3) = (3*2^(-5/3) f^2, f^3)` from the coefficient function.
pub fn differentials_from_f(f: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    (f.pow(2).scale(&q2_coefficient()), f.pow(3))
}

/// Classify the spectral covering.
///
/// A nonvanishing discriminant means three sheets. Otherwise the coefficient
/// function is pinned by the joint system `f^3 = q3` and `3*2^(-5/3) f^2 =
/// q2`; since the field contains no nontrivial cube root of unity, at most
/// one candidate survives, and failure to find it in the supported search
/// class is reported as [`Error::FieldTooSmall`].
pub fn classify(input: &HiggsInput) -> Result<SpectralClassification> {
    match &input.payload {
        HiggsPayload::Coefficient(f) => Ok(classification_from_f(f.clone())),
        HiggsPayload::Differentials { q2, q3 } => {
            if !discriminant(q2, q3).is_zero() {
                return Ok(SpectralClassification {
                    sheets: 3,
                    f: None,
                    lambda1_coeff: None,
                    lambda2_coeff: None,
                });
            }
            if q3.is_zero() {
                // 32 q2^3 = discriminant + 27 q3^2 = 0 forces q2 = 0.
                debug_assert!(q2.is_zero());
                return Ok(classification_from_f(LaurentPoly::zero()));
            }
            let f = q3.cbrt().ok_or_else(|| {
                Error::FieldTooSmall(format!(
                    "q3 = {q3} has no cube root with coefficients in Q(i, 2^(1/3)) \
                     within the supported search class"
                ))
            })?;
            let expected_q2 = f.pow(2).scale(&q2_coefficient());
            if &expected_q2 != q2 {
                return Err(Error::FieldTooSmall(format!(
                    "cube root f = {f} of q3 fails the consistency check \
                     3*2^(-5/3)*f^2 = q2"
                )));
            }
            Ok(classification_from_f(f))
        }
    }
}

fn classification_from_f(f: LaurentPoly) -> SpectralClassification {
    let sheets = if f.is_zero() { 1 } else { 2 };
    let lambda1 = f.scale(&FieldElem::two_pow_third(2));
    let lambda2 = f.scale(&-FieldElem::two_pow_third(-1));
    SpectralClassification {
        sheets,
        f: Some(f),
        lambda1_coeff: Some(lambda1),
        lambda2_coeff: Some(lambda2),
    }
}

/// The local sections `(s1, s2, s3)` putting the Higgs matrix in Jordan
/// form:
///
/// ```text
/// s1 = (5*2^(-5/3) f^2, 2^(2/3) f,  1)
/// s2 = ( -2^(-5/3) f^2, -2^(-1/3) f, 1)
/// s3 = ( -2^(2/3) f,    1,           0)
/// ```
pub fn sections_frame(f: &LaurentPoly) -> [FrameVector; 3] {
    let f_sq = f.pow(2);
    let s1 = FrameVector::new([
        f_sq.scale(&(&FieldElem::from_int(5) * &FieldElem::two_pow_third(-5))),
        f.scale(&FieldElem::two_pow_third(2)),
        LaurentPoly::one(),
    ]);
    let s2 = FrameVector::new([
        f_sq.scale(&-FieldElem::two_pow_third(-5)),
        f.scale(&-FieldElem::two_pow_third(-1)),
        LaurentPoly::one(),
    ]);
    let s3 = FrameVector::new([
        f.scale(&-FieldElem::two_pow_third(2)),
        LaurentPoly::one(),
        LaurentPoly::zero(),
    ]);
    [s1, s2, s3]
}

/// The canonical symmetric pairing on `K + O + K^-1` in the surface frame:
/// the antidiagonal matrix with unit middle entry, i.e.
/// `C(u, w) = u1 w3 + u2 w2 + u3 w1`.
pub fn pairing(u: &FrameVector, w: &FrameVector) -> LaurentPoly {
    let a = &u.coords[0] * &w.coords[2];
    let b = &u.coords[1] * &w.coords[1];
    let c = &u.coords[2] * &w.coords[0];
    &(&a + &b) + &c
}

/// Same pairing over rational-function coordinates.
pub fn pairing_rational(u: &[RatFunc; 3], w: &[RatFunc; 3]) -> RatFunc {
    let a = &u[0] * &w[2];
    let b = &u[1] * &w[1];
    let c = &u[2] * &w[0];
    &(&a + &b) + &c
}

/// Verify the Jordan-frame relations `M s1 = l1 s1`, `M s2 = l2 s2`,
/// `M s3 = l2 s3 + s2` with `l1 = 2^(2/3) f`, `l2 = -2^(-1/3) f`.
///
/// These are theorems of the two-sheeted case, so a nonzero residual is
/// reported as [`Error::IdentityViolated`].
pub fn verify_jordan_frame(f: &LaurentPoly) -> Result<VerificationLog> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "the Jordan frame requires a nonzero coefficient function".into(),
        ));
    }
    let (q2, q3) = differentials_from_f(f);
    let m = build_theta_matrix(&q2, &q3);
    let [s1, s2, s3] = sections_frame(f);
    let lambda1 = f.scale(&FieldElem::two_pow_third(2));
    let lambda2 = f.scale(&-FieldElem::two_pow_third(-1));

    let mut log = VerificationLog::new();
    let checks: [(&str, FrameVector); 3] = [
        ("jordan_frame_s1_eigen", apply_matrix(&m, &s1).sub(&s1.scale(&lambda1))),
        ("jordan_frame_s2_eigen", apply_matrix(&m, &s2).sub(&s2.scale(&lambda2))),
        (
            "jordan_frame_s3_shift",
            apply_matrix(&m, &s3).sub(&s3.scale(&lambda2)).sub(&s2),
        ),
    ];
    for (name, residual) in checks {
        if !log.check(name, residual.is_zero(), || residual.to_string()) {
            return Err(Error::IdentityViolated(name.into()));
        }
    }
    Ok(log)
}

/// One candidate correction coefficient for the isotropic frame, with the
/// isotropy outcome it produces.
#[derive(Debug, Clone)]
pub struct IsotropyCandidate {
    /// Formula of the candidate in terms of the pairing values.
    pub formula: &'static str,
    pub coefficient: RatFunc,
    pub isotropic: bool,
    /// `C(s3 - t s2, s3 - t s2)` for this candidate; zero iff isotropic.
    pub residual: RatFunc,
}

/// The isotropic frame `(v2, v3)` of the generalized eigenplane, together
/// with both correction-coefficient candidates.
#[derive(Debug, Clone)]
pub struct Orthogonalization {
    pub v2: FrameVector,
    /// `v3 = s3 - t s2`; the solved coefficient has denominator
    /// proportional to `f`, so the coordinates are rational functions.
    pub v3: [RatFunc; 3],
    pub solved: IsotropyCandidate,
    pub alternate: IsotropyCandidate,
    /// `C(v2, v3)`, which equals `C(s2, s3) = -3*2^(-1/3) f` exactly.
    pub pairing_v2_v3: LaurentPoly,
}

/// Build the isotropic frame by solving `C(s3 - t s2, s3 - t s2) = 0` for
/// `t`, which is linear because `C(s2, s2) = 0`. The solved coefficient is
/// `C(s3,s3) / (2 C(s2,s3))`; the alternate displayed form
/// `2 C(s3,s3) / C(s2,s3)` is evaluated side by side and leaves the residual
/// `-3 C(s3,s3)`.
pub fn orthogonalize(f: &LaurentPoly) -> Result<Orthogonalization> {
    if f.is_zero() {
        return Err(Error::InvalidInput(
            "the isotropic frame requires a nonzero coefficient function".into(),
        ));
    }
    let [_, s2, s3] = sections_frame(f);
    let c22 = pairing(&s2, &s2);
    let c23 = pairing(&s2, &s3);
    let c33 = pairing(&s3, &s3);
    if !c22.is_zero() {
        return Err(Error::IdentityViolated("pairing_s2_s2_vanishes".into()));
    }
    if c23.is_zero() {
        // C(s2, s3) = -3*2^(-1/3) f is nonzero whenever f is.
        return Err(Error::IdentityViolated("pairing_s2_s3_nonzero".into()));
    }

    let c23_r = RatFunc::from_poly(c23.clone());
    let c33_r = RatFunc::from_poly(c33.clone());
    let two = RatFunc::from_poly(LaurentPoly::constant(FieldElem::from_int(2)));
    let solved_t = c33_r.div(&(&two * &c23_r))?;
    let alternate_t = (&two * &c33_r).div(&c23_r)?;

    let s2_r = s2.coords.clone().map(RatFunc::from_poly);
    let s3_r = s3.coords.clone().map(RatFunc::from_poly);
    let correct = |t: &RatFunc| -> [RatFunc; 3] {
        [
            &s3_r[0] - &(t * &s2_r[0]),
            &s3_r[1] - &(t * &s2_r[1]),
            &s3_r[2] - &(t * &s2_r[2]),
        ]
    };
    let v3 = correct(&solved_t);
    let v3_alternate = correct(&alternate_t);
    let solved_residual = pairing_rational(&v3, &v3);
    let alternate_residual = pairing_rational(&v3_alternate, &v3_alternate);
    if !solved_residual.is_zero() {
        return Err(Error::IdentityViolated("isotropy_v3_solved".into()));
    }

    Ok(Orthogonalization {
        v2: s2,
        v3,
        solved: IsotropyCandidate {
            formula: "C(s3,s3)/(2*C(s2,s3))",
            coefficient: solved_t,
            isotropic: true,
            residual: solved_residual,
        },
        alternate: IsotropyCandidate {
            formula: "2*C(s3,s3)/C(s2,s3)",
            coefficient: alternate_t,
            isotropic: alternate_residual.is_zero(),
            residual: alternate_residual,
        },
        pairing_v2_v3: c23,
    })
}

/// Order of the meromorphic 1-form `omega = f * (reference differential)`
/// at a puncture, against the local coordinate differential there.
///
/// On the affine line the only puncture is infinity, where the order is
/// `-(deg f + 2)`. On the punctured line the orders are `ord_low(f) - 1` at
/// zero and `-deg_high(f) - 1` at infinity. Together with the interior zero
/// count these always sum to `-2`.
pub fn ord_omega_at_puncture(
    f: &LaurentPoly,
    surface: SurfaceKind,
    puncture: PuncturePoint,
) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match (surface, puncture) {
        (SurfaceKind::AffineLine, PuncturePoint::Infinity) => {
            Ok(-(f.deg_high().unwrap() + 2))
        }
        (SurfaceKind::AffineLine, PuncturePoint::Zero) => Err(Error::InvalidPuncture {
            puncture: puncture.to_string(),
            surface: surface.to_string(),
        }),
        (SurfaceKind::PuncturedLine, PuncturePoint::Zero) => Ok(f.ord_low().unwrap() - 1),
        (SurfaceKind::PuncturedLine, PuncturePoint::Infinity) => {
            Ok(-f.deg_high().unwrap() - 1)
        }
    }
}

/// Sum of puncture orders and interior zeros; `-2` for every nonzero `f` on
/// both surfaces (the degree of a 1-form on the projective line).
pub fn global_degree_sum(f: &LaurentPoly, surface: SurfaceKind) -> Result<i64> {
    let mut total = f.zero_count(surface)? as i64;
    for p in surface.punctures() {
        total += ord_omega_at_puncture(f, surface, *p)?;
    }
    Ok(total)
}
