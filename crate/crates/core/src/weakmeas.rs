//! Conditional states under weak measurement and the one-variable objective.
//!
//! Measuring subsystem B with the operator pair P(+-x) leaves subsystem A in
//! one of two conditional states whose eigenvalues depend on the measurement
//! direction only through z and the combination theta. Because the averaged
//! conditional entropy is strictly decreasing in theta, the two-variable
//! objective G(theta, z) collapses onto its upper theta boundary
//! `theta = b^2 + (c3^2 - b^2) z^2`, leaving the one-variable function F(z)
//! whose minimum over [0, 1] determines the discord. This module evaluates
//! F, its endpoints and its first two derivatives in the closed forms used
//! by the Newton iteration.

use thiserror::Error;

use crate::entropy::{entropic_e, TOL_NUM};
use crate::xstate::{coherence_cross, BlochX};

/// Branch probabilities below this are degenerate; the branch contributes 0
/// to the conditional entropy (the limit value).
pub const TOL_DEG: f64 = 1e-12;
/// Radicands may undershoot zero by this much before we call it a caller bug.
pub const RADICAND_SLACK: f64 = 1e-12;
/// Above this strength tanh saturates to 1 in double precision and results
/// coincide with the projective-measurement limit.
pub const PROJECTIVE_X: f64 = 19.0;
/// Largest accepted measurement strength.
pub const MAX_X: f64 = 700.0;

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeakmeasError {
    #[error("measurement strength {x} outside [0, {MAX_X}]")]
    DomainError { x: f64 },
    #[error("branch {branch} has probability {p:.3e} <= {TOL_DEG:e}")]
    DegenerateBranch { branch: char, p: f64 },
    #[error("radicand {value:.3e} below the clamping slack; (z, theta) outside the valid region")]
    InvalidRegion { value: f64 },
    #[error("vanishing radicand H{sign} = {h:.3e}; derivative is singular")]
    SingularDerivative { sign: char, h: f64 },
}

/// Frozen inputs for evaluating F and its derivatives: the state, the
/// measurement strength and the cached tanh x and b^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FContext {
    pub bloch: BlochX,
    pub x: f64,
    tx: f64,
    b2: f64,
}

impl FContext {
    pub fn new(bloch: BlochX, x: f64) -> Result<Self, WeakmeasError> {
        if !(0.0..=MAX_X).contains(&x) || !x.is_finite() {
            return Err(WeakmeasError::DomainError { x });
        }
        Ok(FContext { bloch, x, tx: x.tanh(), b2: bloch.b_squared() })
    }

    /// tanh x, cached.
    pub fn tx(&self) -> f64 {
        self.tx
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    /// True when tanh x has saturated to 1 in double precision, i.e. the
    /// results coincide with the usual projective-measurement discord.
    pub fn projective_limit(&self) -> bool {
        self.x >= PROJECTIVE_X
    }

    /// Test seam: a context with an explicitly chosen tanh value. Used to
    /// probe the evenness of F under x -> -x without widening the domain.
    pub fn with_raw_tanh(bloch: BlochX, tx: f64) -> Self {
        FContext { bloch, x: tx.atanh(), tx, b2: bloch.b_squared() }
    }
}

/// The direction-dependent combination
/// `theta = z1^2 |c1|^2 + z2^2 |c2|^2 + 2 z1 z2 (a1 b2 - a2 b1) + c3^2 z^2`.
///
/// The cross term is signed: that is what reproduces the conditional-state
/// radicands pointwise for every direction; the magnitude form only matters
/// for the maximum over directions, which is b^2 by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue(f64);

impl ThetaValue {
    pub fn new(theta: f64) -> Self {
        ThetaValue(theta)
    }

    /// Theta evaluated at a concrete measurement direction (z1, z2, z).
    pub fn from_direction(p: &BlochX, z1: f64, z2: f64, z: f64) -> Self {
        let cross = coherence_cross(p.c1, p.c2);
        ThetaValue(
            z1 * z1 * p.c1.norm_sqr()
                + z2 * z2 * p.c2.norm_sqr()
                + 2.0 * z1 * z2 * cross
                + p.c3 * p.c3 * z * z,
        )
    }

    /// The largest theta achievable at a given z: b^2 + (c3^2 - b^2) z^2.
    pub fn max_at(ctx: &FContext, z: f64) -> Self {
        ThetaValue(ctx.b2 + (ctx.bloch.c3 * ctx.bloch.c3 - ctx.b2) * z * z)
    }

    /// The smallest theta achievable at a given z (bottom eigenvalue of the
    /// coherence form).
    pub fn min_at(ctx: &FContext, z: f64) -> Self {
        let p = &ctx.bloch;
        let n1 = p.c1.norm_sqr();
        let n2 = p.c2.norm_sqr();
        let cross = coherence_cross(p.c1, p.c2);
        let lam_min = 0.5 * (n1 + n2 - ((n1 - n2).powi(2) + 4.0 * cross * cross).sqrt());
        ThetaValue(lam_min * (1.0 - z * z) + p.c3 * p.c3 * z * z)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Probabilities and conditional-state eigenvalues for the two branches.
/// `plus` refers to the P(+x) outcome: p(+x) = (1 - s z tanh x)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalOutcome {
    pub p_plus: f64,
    pub p_minus: f64,
    pub lam_plus_pos: f64,
    pub lam_plus_neg: f64,
    pub lam_minus_pos: f64,
    pub lam_minus_neg: f64,
}

impl ConditionalOutcome {
    /// Averaged conditional entropy p(+x) S(rho_{A|+x}) + p(-x) S(rho_{A|-x}),
    /// degenerate branches contributing 0.
    pub fn conditional_entropy(&self) -> f64 {
        let branch = |p: f64, lam_pos: f64| {
            if p <= TOL_DEG {
                0.0
            } else {
                p * entropic_e((2.0 * lam_pos - 1.0).clamp(-1.0, 1.0)).unwrap()
            }
        };
        branch(self.p_plus, self.lam_plus_pos) + branch(self.p_minus, self.lam_minus_pos)
    }
}

fn clamped_radicand(value: f64) -> Result<f64, WeakmeasError> {
    if value < -RADICAND_SLACK {
        return Err(WeakmeasError::InvalidRegion { value });
    }
    Ok(value.max(0.0))
}

/// Conditional-state eigenvalues at measurement direction data (z, theta):
/// the +x branch carries the radicand r^2 - 2 r c3 z tanh x + theta tanh^2 x,
/// the -x branch the opposite sign.
pub fn conditional_outcome(
    ctx: &FContext,
    z: f64,
    theta: ThetaValue,
) -> Result<ConditionalOutcome, WeakmeasError> {
    let t = ctx.tx;
    let p = &ctx.bloch;
    let szt = p.s * z * t;
    let v = 1.0 - szt;
    let u = 1.0 + szt;
    let p_plus = 0.5 * v;
    let p_minus = 0.5 * u;
    if p_plus <= TOL_DEG {
        return Err(WeakmeasError::DegenerateBranch { branch: '+', p: p_plus });
    }
    if p_minus <= TOL_DEG {
        return Err(WeakmeasError::DegenerateBranch { branch: '-', p: p_minus });
    }
    let base = p.r * p.r + theta.value() * t * t;
    let cross = 2.0 * p.r * p.c3 * z * t;
    let rad_plus = clamped_radicand(base - cross)?.sqrt();
    let rad_minus = clamped_radicand(base + cross)?.sqrt();
    let clamp01 = |lam: f64| lam.clamp(0.0, 1.0);
    Ok(ConditionalOutcome {
        p_plus,
        p_minus,
        lam_plus_pos: clamp01((v + rad_plus) / (2.0 * v)),
        lam_plus_neg: clamp01((v - rad_plus) / (2.0 * v)),
        lam_minus_pos: clamp01((u + rad_minus) / (2.0 * u)),
        lam_minus_neg: clamp01((u - rad_minus) / (2.0 * u)),
    })
}

/// w * log2(w / denom), with the w -> 0 limit taken as 0. Tiny negative w
/// from cancellation is treated as 0.
fn term(w: f64, denom: f64) -> f64 {
    if w <= 1e-15 {
        0.0
    } else {
        w * (w / denom).ln() / LN_2
    }
}

/// The two-variable objective: averaged conditional entropy minus one,
/// evaluated as the four-term expression in (z, theta). Even in z.
pub fn g_value(ctx: &FContext, z: f64, theta: ThetaValue) -> Result<f64, WeakmeasError> {
    let t = ctx.tx;
    let p = &ctx.bloch;
    let szt = p.s * z * t;
    let u = 1.0 + szt;
    let v = 1.0 - szt;
    let base = p.r * p.r + theta.value() * t * t;
    let cross = 2.0 * p.r * p.c3 * z * t;
    let r_plus = clamped_radicand(base + cross)?.sqrt();
    let r_minus = clamped_radicand(base - cross)?.sqrt();
    Ok(-0.25
        * (term(u + r_plus, u)
            + term((u - r_plus).max(0.0), u)
            + term(v + r_minus, v)
            + term((v - r_minus).max(0.0), v)))
}

/// H+-, their first two z-derivatives, and the normalized amplitudes A+-.
/// Note the subscript convention: H_plus (radicand sign +) pairs with the
/// 1 + s z tanh x denominator, i.e. the P(-x) branch. The derivative and
/// amplitude fields are meaningful only where H+- > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTerms {
    pub h_plus: f64,
    pub h_minus: f64,
    pub hp_prime: f64,
    pub hm_prime: f64,
    pub hp_second: f64,
    pub hm_second: f64,
    pub a_plus: f64,
    pub a_minus: f64,
}

impl FTerms {
    pub fn eval(ctx: &FContext, z: f64) -> FTerms {
        let t = ctx.tx;
        let p = &ctx.bloch;
        let szt = p.s * z * t;
        let transverse = ctx.b2 * (1.0 - z * z) * t * t;
        let h_plus = (transverse + (p.r + p.c3 * z * t).powi(2)).sqrt();
        let h_minus = (transverse + (p.r - p.c3 * z * t).powi(2)).sqrt();
        let dd = (p.c3 * p.c3 - ctx.b2) * z * t * t;
        let rc3t = p.r * p.c3 * t;
        // H H' = +- r c3 t + (c3^2 - b^2) z t^2; H'' from differentiating it.
        let hp_prime = (rc3t + dd) / h_plus;
        let hm_prime = (-rc3t + dd) / h_minus;
        let curv = (p.c3 * p.c3 - ctx.b2) * t * t;
        FTerms {
            h_plus,
            h_minus,
            hp_prime,
            hm_prime,
            hp_second: (curv - hp_prime * hp_prime) / h_plus,
            hm_second: (curv - hm_prime * hm_prime) / h_minus,
            a_plus: h_plus / (1.0 + szt),
            a_minus: h_minus / (1.0 - szt),
        }
    }
}

/// The reduced one-variable objective
/// F(z) = G(b^2 + (c3^2 - b^2) z^2, z); always <= 0 and continuous on [0, 1].
pub fn f_value(ctx: &FContext, z: f64) -> f64 {
    let t = ctx.tx;
    let p = &ctx.bloch;
    let szt = p.s * z * t;
    let u = 1.0 + szt;
    let v = 1.0 - szt;
    let ft = FTerms::eval(ctx, z);
    -0.25
        * (term(u + ft.h_plus, u)
            + term((u - ft.h_plus).max(0.0), u)
            + term(v + ft.h_minus, v)
            + term((v - ft.h_minus).max(0.0), v))
}

/// F(0) in closed form: E(sqrt(r^2 + b^2 tanh^2 x)) - 1. Reduces to
/// E(b tanh x) - 1 when r = 0 and to E(sqrt(r^2 + c3^2 tanh^2 x)) - 1 when
/// b^2 = c3^2.
pub fn f_endpoint_0(ctx: &FContext) -> f64 {
    let t = ctx.tx;
    let amp = (ctx.bloch.r * ctx.bloch.r + ctx.b2 * t * t).sqrt().min(1.0);
    entropic_e(amp).unwrap() - 1.0
}

/// F(1) in closed form: the four-term endpoint expression in r, s, c3 only
/// (the transverse coherences drop out at z = 1).
pub fn f_endpoint_1(ctx: &FContext) -> f64 {
    let t = ctx.tx;
    let p = &ctx.bloch;
    let u = 1.0 + p.s * t;
    let v = 1.0 - p.s * t;
    let sum_ct = (p.s + p.c3) * t;
    let dif_ct = (p.s - p.c3) * t;
    -0.25
        * (term((1.0 + p.r + sum_ct).max(0.0), u)
            + term((1.0 - p.r + dif_ct).max(0.0), u)
            + term((1.0 + p.r - sum_ct).max(0.0), v)
            + term((1.0 - p.r - dif_ct).max(0.0), v))
}

fn check_singular(ft: &FTerms) -> Result<(), WeakmeasError> {
    if ft.h_plus < TOL_NUM {
        return Err(WeakmeasError::SingularDerivative { sign: '+', h: ft.h_plus });
    }
    if ft.h_minus < TOL_NUM {
        return Err(WeakmeasError::SingularDerivative { sign: '-', h: ft.h_minus });
    }
    Ok(())
}

/// r = b = c3 = 0 makes F identically zero (for any s), so all derivatives
/// vanish even though the printed forms are 0/0 there.
fn identically_flat(ctx: &FContext) -> bool {
    ctx.bloch.r == 0.0 && ctx.bloch.c3 == 0.0 && ctx.b2 == 0.0
}

/// F'(z) evaluated through two algebraically equivalent closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FPrimeForms {
    /// Written with logarithms of the branch numerators u ± H±.
    pub log_form: f64,
    /// Written in the normalized amplitudes A± = H±/(1 ± s z tanh x).
    pub amplitude_form: f64,
}

/// First derivative of F (the log form). Endpoint values are the one-sided
/// limits.
pub fn f_prime(ctx: &FContext, z: f64) -> Result<f64, WeakmeasError> {
    Ok(f_prime_forms(ctx, z)?.log_form)
}

/// Evaluates F'(z) through both closed-form routes; the pair is a test asset
/// (the forms must agree to ~1e-10).
pub fn f_prime_forms(ctx: &FContext, z: f64) -> Result<FPrimeForms, WeakmeasError> {
    if identically_flat(ctx) {
        return Ok(FPrimeForms { log_form: 0.0, amplitude_form: 0.0 });
    }
    let t = ctx.tx;
    let p = &ctx.bloch;
    let szt = p.s * z * t;
    let u = 1.0 + szt;
    let v = 1.0 - szt;
    let st = p.s * t;
    let ft = FTerms::eval(ctx, z);
    check_singular(&ft)?;

    let gap_plus = u * u - ft.h_plus * ft.h_plus;
    let gap_minus = v * v - ft.h_minus * ft.h_minus;
    let log_form = -(st * ((gap_plus * v * v) / (gap_minus * u * u)).ln()
        + ft.hp_prime * ((u + ft.h_plus) / (u - ft.h_plus)).ln()
        + ft.hm_prime * ((v + ft.h_minus) / (v - ft.h_minus)).ln())
        / (4.0 * LN_2);

    let dd = (p.c3 * p.c3 - ctx.b2) * z * t * t;
    let rc3t = p.r * p.c3 * t;
    let log_ratio = |a: f64| ((1.0 + a) / (1.0 - a)).ln() / LN_2;
    let amplitude_form = -0.25
        * (st * ((1.0 - ft.a_plus * ft.a_plus) / (1.0 - ft.a_minus * ft.a_minus)).ln() / LN_2
            + (rc3t + dd) / u / ft.a_plus * log_ratio(ft.a_plus)
            + (-rc3t + dd) / v / ft.a_minus * log_ratio(ft.a_minus));

    Ok(FPrimeForms { log_form, amplitude_form })
}

/// Second derivative of F in its closed form.
pub fn f_second(ctx: &FContext, z: f64) -> Result<f64, WeakmeasError> {
    if identically_flat(ctx) {
        return Ok(0.0);
    }
    let t = ctx.tx;
    let p = &ctx.bloch;
    let szt = p.s * z * t;
    let u = 1.0 + szt;
    let v = 1.0 - szt;
    let st = p.s * t;
    let st2 = st * st;
    let ft = FTerms::eval(ctx, z);
    check_singular(&ft)?;

    let gap_plus = u * u - ft.h_plus * ft.h_plus;
    let gap_minus = v * v - ft.h_minus * ft.h_minus;
    let frac_plus = ((st2 + ft.hp_prime * ft.hp_prime) * u
        - 2.0 * st * ft.h_plus * ft.hp_prime)
        / gap_plus;
    let frac_minus = ((st2 + ft.hm_prime * ft.hm_prime) * v
        + 2.0 * st * ft.h_minus * ft.hm_prime)
        / gap_minus;
    let middle = 2.0 * st2 / (1.0 - szt * szt);
    let log_plus = ((u + ft.h_plus) / (u - ft.h_plus)).ln();
    let log_minus = ((v + ft.h_minus) / (v - ft.h_minus)).ln();
    Ok(
        -(frac_plus + frac_minus - middle
            + 0.5 * ft.hp_second * log_plus
            + 0.5 * ft.hm_second * log_minus)
            / (2.0 * LN_2),
    )
}
