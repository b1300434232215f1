//! Assembly of the super quantum discord from its pieces.
//!
//! SD(rho) = I(rho) - J(rho) = S(rho_B) - S(rho_AB) + min S(A|{P^B(x)}),
//! with the minimal averaged conditional entropy coming from the one-variable
//! minimization. Every report carries the intermediates (spectrum, mutual
//! information, optimization trace) so results can be audited term by term.

use thiserror::Error;

use crate::entropy::{
    entropic_e, entropy4, joint_entropy_closed_form, mutual_information, xlog2x, EntropyError,
    MutualInfoBreakdown,
};
use crate::optimizer::{minimize_f, OptimizationResult, OptimizerError};
use crate::weakmeas::{FContext, WeakmeasError};
use crate::xstate::{BlochX, SpectrumX, XStateError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SqdError {
    #[error(transparent)]
    State(#[from] XStateError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Weakmeas(#[from] WeakmeasError),
}

/// Full accounting of one discord computation.
#[derive(Debug, Clone, PartialEq)]
pub struct SqdReport {
    pub x: f64,
    pub bloch: BlochX,
    pub spectrum: SpectrumX,
    pub mutual: MutualInfoBreakdown,
    /// min over measurements of S(A|{P^B(x)}) = 1 + min F.
    pub cond_entropy_min: f64,
    /// Classical correlation J = S(rho_A) - cond_entropy_min.
    pub classical_corr: f64,
    pub sqd: f64,
    pub opt: OptimizationResult,
}

/// Minimal averaged conditional entropy, 1 + min F, in [0, 1].
pub fn conditional_entropy_min(ctx: &FContext) -> Result<f64, SqdError> {
    Ok((1.0 + minimize_f(ctx)?.f_min).clamp(0.0, 1.0))
}

/// Classical correlation J = E(r) - min S(A|{P^B(x)}).
pub fn classical_correlation(ctx: &FContext) -> Result<f64, SqdError> {
    Ok(entropic_e(ctx.bloch.r)? - conditional_entropy_min(ctx)?)
}

/// Computes the discord and every intermediate.
///
/// Two routes are evaluated and must agree: the definitional
/// S(rho_B) - S(rho_AB) + (1 + min F), and the closed-form assembly in which
/// S(rho_AB) is replaced by its E-term expression. At x = 0 the measurement
/// is trivial, so J = 0 and the discord degenerates to the total correlation
/// I(rho).
pub fn super_quantum_discord(ctx: &FContext) -> Result<SqdReport, SqdError> {
    let bloch = ctx.bloch;
    let spectrum = bloch.spectrum();
    let mutual = mutual_information(&bloch)?;
    let opt = minimize_f(ctx)?;
    let cond_entropy_min = (1.0 + opt.f_min).clamp(0.0, 1.0);
    let classical_corr = mutual.s_a - cond_entropy_min;
    let sqd = mutual.i - classical_corr;

    let closed_form = mutual.s_b - joint_entropy_closed_form(&bloch)? + cond_entropy_min;
    debug_assert!(
        (sqd - closed_form).abs() < 1e-10,
        "discord routes disagree: {sqd} vs {closed_form}"
    );
    if ctx.x == 0.0 {
        debug_assert!(classical_corr.abs() < 1e-9, "J({classical_corr}) != 0 at x = 0");
    }

    Ok(SqdReport { x: ctx.x, bloch, spectrum, mutual, cond_entropy_min, classical_corr, sqd, opt })
}

/// Closed-form discord of a Bell-diagonal state (r = s = 0, real c1, c2),
/// with C = max(|c3|, b): the eigenvalue-sum terms plus E(C tanh x).
pub fn bell_diagonal_sqd(c1: f64, c2: f64, c3: f64, x: f64) -> Result<f64, SqdError> {
    let bloch = BlochX::bell_diagonal(c1, c2, c3);
    bloch.to_density()?; // NotPositive for invalid coefficient triples
    let t = x.tanh();
    let cap = bloch.c3.abs().max(bloch.b());
    let quarter_terms = 0.25
        * (xlog2x(1.0 - c3 + c1 + c2)
            + xlog2x(1.0 - c3 - c1 - c2)
            + xlog2x(1.0 + c3 + c1 - c2)
            + xlog2x(1.0 + c3 - c1 + c2));
    Ok(quarter_terms - 0.5 * xlog2x(1.0 + cap * t) - 0.5 * xlog2x(1.0 - cap * t))
}

/// The constant part of the report assembly, 1 + E(s) + sum(lambda log2 lambda);
/// the discord is this constant plus min F.
pub fn assembly_constant(report: &SqdReport) -> f64 {
    1.0 + report.mutual.s_b - entropy4(&report.spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstate;

    fn ctx_for(dm: &xstate::XDensityMatrix, x: f64) -> FContext {
        FContext::new(dm.bloch(), x).unwrap()
    }

    #[test]
    fn maximally_mixed_has_zero_discord() {
        let ctx = ctx_for(&xstate::maximally_mixed(), 1.0);
        assert_eq!(conditional_entropy_min(&ctx).unwrap(), 1.0);
        let report = super_quantum_discord(&ctx).unwrap();
        assert_eq!(report.sqd, 0.0);
        assert_eq!(report.classical_corr, 0.0);
    }

    #[test]
    fn example_three_matches_the_printed_discord() {
        let ctx3 = ctx_for(&xstate::example_three(), 3.0);
        let report3 = super_quantum_discord(&ctx3).unwrap();
        assert!((report3.sqd - 0.1332).abs() < 5e-4, "sqd = {}", report3.sqd);
        assert!((report3.opt.z_hat - 0.47747).abs() < 1e-4);

        let ctx4 = ctx_for(&xstate::example_three(), 4.0);
        let report4 = super_quantum_discord(&ctx4).unwrap();
        assert!((report4.sqd - 0.1328).abs() < 5e-4, "sqd = {}", report4.sqd);
        assert!((report4.opt.z_hat - 0.84639).abs() < 1e-4);
    }

    #[test]
    fn example_two_assembly_constant_is_printed_value() {
        for x in [1.0, 2.0, 3.0] {
            let report = super_quantum_discord(&ctx_for(&xstate::example_two(), x)).unwrap();
            let constant = assembly_constant(&report);
            assert!((constant - 0.3899).abs() < 5e-4, "constant = {constant}");
            assert!((report.sqd - (constant + report.opt.f_min)).abs() < 1e-12);
        }
    }

    #[test]
    fn werner_projective_limit() {
        // a = 1 Bell state at saturated strength: conditional entropy -> 0,
        // J -> 1, discord -> 1.
        let ctx = FContext::new(BlochX::werner(1.0), 20.0).unwrap();
        let cond = conditional_entropy_min(&ctx).unwrap();
        assert!(cond <= 1e-6, "cond = {cond}");
        let j = classical_correlation(&ctx).unwrap();
        assert!((j - 1.0).abs() < 1e-6);
    }

    #[test]
    fn product_state_has_zero_classical_correlation() {
        // A product X state rho_A (x) rho_B has c1 = c2 = 0 and c3 = r s;
        // measuring B then says nothing about A.
        for (r, s) in [(0.3, -0.2), (0.3, 0.0), (0.0, -0.6)] {
            let p = BlochX::new(r, s, r * s, crate::mat::ZERO, crate::mat::ZERO);
            let ctx = FContext::new(p, 2.0).unwrap();
            let j = classical_correlation(&ctx).unwrap();
            assert!(j.abs() < 1e-12, "J = {j} for r={r}, s={s}");
            let report = super_quantum_discord(&ctx).unwrap();
            assert!(report.sqd.abs() < 1e-12);
            assert!(report.mutual.i.abs() < 1e-12);
        }
    }

    #[test]
    fn x_zero_degenerates_to_mutual_information() {
        let ctx = ctx_for(&xstate::example_two(), 0.0);
        let report = super_quantum_discord(&ctx).unwrap();
        assert!(report.classical_corr.abs() < 1e-12);
        assert!((report.sqd - report.mutual.i).abs() < 1e-12);
    }

    #[test]
    fn bell_diagonal_closed_form_matches_pipeline() {
        for (c1, c2, c3, x) in [
            (-0.3, -0.3, -0.3, 1.0),
            (-0.7, -0.7, -0.7, 3.0),
            (0.0, 0.0, 0.5, 2.0),
            (0.25, -0.15, 0.4, 1.5),
        ] {
            let closed = bell_diagonal_sqd(c1, c2, c3, x).unwrap();
            let ctx = FContext::new(BlochX::bell_diagonal(c1, c2, c3), x).unwrap();
            let full = super_quantum_discord(&ctx).unwrap().sqd;
            assert!((closed - full).abs() < 1e-10, "({c1},{c2},{c3},{x}): {closed} vs {full}");
        }
        // Werner a = 0 is the maximally mixed state.
        assert_eq!(bell_diagonal_sqd(0.0, 0.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn bell_diagonal_rejects_nonstates() {
        assert!(matches!(
            bell_diagonal_sqd(1.0, 1.0, 1.0, 1.0),
            Err(SqdError::State(XStateError::NotPositive { .. }))
        ));
    }
}
