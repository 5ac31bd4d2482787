//! Fourier-interferometer photon distillation: closed-form success and
//! transmittance formulas plus the exact simulation they are checked
//! against.

use crate::error::{Error, Result};
use crate::fock::{conditional_state, FockState, HeraldSpec};
use crate::loss::{compose_lossy, DesignKind, LossModel};
use crate::metrics::conditional_transmittance;
use crate::numerics::fourier_unitary;

/// Desk-scale cap on the distillation circuit size.
pub const MAX_DISTILL_PHOTONS: usize = 5;

/// N-photon distillation circuit: one photon per input mode of an N-mode
/// Fourier interferometer, heralded on one photon in each measured mode,
/// with the distilled photon expected in `output_mode`.
#[derive(Debug, Clone)]
pub struct DistillationSpec {
    pub n: usize,
    pub design: DesignKind,
    pub eta: f64,
    /// Zero-based distilled output port.
    pub output_mode: usize,
}

impl DistillationSpec {
    /// Default distilled port: the last mode for the triangular design
    /// (its least lossy path) and the first mode for the rectangular
    /// design (arbitrary under uniform loss).
    pub fn new(n: usize, design: DesignKind, eta: f64) -> Self {
        let output_mode = match design {
            DesignKind::Rectangular => 0,
            DesignKind::Triangular => n - 1,
        };
        Self {
            n,
            design,
            eta,
            output_mode,
        }
    }

    pub fn herald(&self) -> HeraldSpec {
        let measured: Vec<usize> = (0..self.n).filter(|&m| m != self.output_mode).collect();
        HeraldSpec::single_photons(measured)
    }
}

/// Lossless circuit success probability
/// p₀ = Σ_{j=0}^{N−1} (−1)^j (j+1) ∏_{i=1}^{j} (1 − i/N).
pub fn p0_lossless(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewModes { m: n, min: 2 });
    }
    let nf = n as f64;
    let mut total = 0.0;
    for j in 0..n {
        let mut term = (j + 1) as f64;
        if j % 2 == 1 {
            term = -term;
        }
        for i in 1..=j {
            term *= 1.0 - i as f64 / nf;
        }
        total += term;
    }
    Ok(total)
}

/// Conditional transmittance of the rectangular design: η^N.
pub fn lambda_rect_closed(n: usize, eta: f64) -> Result<f64> {
    check_args(n, eta)?;
    Ok(eta.powi(n as i32))
}

/// Conditional transmittance of the triangular design:
/// N(1−η)η^N / (2η − η² − η^N), with the removable limits Λ(1) = 1 and
/// Λ(0) = 0 filled in by continuity.
pub fn lambda_tri_closed(n: usize, eta: f64) -> Result<f64> {
    check_args(n, eta)?;
    if eta == 1.0 {
        return Ok(1.0);
    }
    if eta == 0.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    Ok(nf * (1.0 - eta) * eta.powi(n as i32) / (2.0 * eta - eta * eta - eta.powi(n as i32)))
}

/// Circuit success probability of the rectangular design:
/// p₀ · η^(N(N−1)).
pub fn ps_rect_closed(n: usize, eta: f64) -> Result<f64> {
    check_args(n, eta)?;
    Ok(p0_lossless(n)? * eta.powi((n * (n - 1)) as i32))
}

/// Exact simulation outcome of one distillation circuit.
#[derive(Debug, Clone, Copy)]
pub struct DistillationOutcome {
    pub p_s: f64,
    pub lambda: f64,
}

/// Runs the distillation circuit exactly: Fourier transform, design loss,
/// herald of one photon per measured mode.
pub fn distill_simulate(spec: &DistillationSpec) -> Result<DistillationOutcome> {
    if spec.n > MAX_DISTILL_PHOTONS {
        return Err(Error::TooManyPhotons {
            photons: spec.n,
            max: MAX_DISTILL_PHOTONS,
        });
    }
    check_args(spec.n, spec.eta)?;
    if spec.output_mode >= spec.n {
        return Err(Error::ModeOutOfRange {
            mode: spec.output_mode,
            m: spec.n,
        });
    }
    let u = fourier_unitary(spec.n)?;
    let loss = LossModel::for_design(spec.design, spec.n, spec.eta)?;
    let transform = compose_lossy(&u, &loss)?;
    let input = FockState::uniform_single(spec.n);
    let cs = conditional_state(&transform, &input, &spec.herald())?;
    if cs.is_degenerate() {
        return Err(Error::DegenerateHerald);
    }
    Ok(DistillationOutcome {
        p_s: cs.p_s(),
        lambda: conditional_transmittance(&cs)?,
    })
}

fn check_args(n: usize, eta: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewModes { m: n, min: 2 });
    }
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        return Err(Error::InvalidEta { eta });
    }
    Ok(())
}
