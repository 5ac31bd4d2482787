//! Seeded Haar-random sweeps for single-photon fidelity metrics.

use rayon::prelude::*;

use crate::error::Result;
use crate::loss::{compose_lossy, eta_from_db, DesignKind, LossModel};
use crate::metrics::{postselected_fidelity, preimage_fidelities};
use crate::numerics::{haar_unitary, RNG_ALGORITHM};

/// Provenance of one sweep: everything needed to reproduce it bit for bit.
#[derive(Debug, Clone)]
pub struct SweepMeta {
    pub designs: Vec<DesignKind>,
    pub grid: Vec<f64>,
    pub samples: usize,
    pub base_seed: u64,
    pub rng_algorithm: &'static str,
}

/// Tabular sweep output: fixed record order (design-major, then grid).
#[derive(Debug, Clone)]
pub struct ExperimentSweep<R> {
    pub meta: SweepMeta,
    pub records: Vec<R>,
}

#[derive(Debug, Clone, Copy)]
pub struct PreimageRecord {
    pub design: DesignKind,
    pub eta: f64,
    pub avg_fidelity: f64,
    pub min_mode_fidelity: f64,
    pub max_mode_fidelity: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct PostselectedRecord {
    pub design: DesignKind,
    pub loss_db: f64,
    pub mean_fidelity: f64,
    pub samples: usize,
}

/// Sweeps the non-postselected single-photon preimage fidelity over an
/// efficiency grid.
///
/// Sample s draws the Haar unitary with seed `base_seed + s`, so results
/// are independent of evaluation order and thread count; the same sample
/// set is reused across designs and grid points.
pub fn preimage_sweep(
    m: usize,
    designs: &[DesignKind],
    eta_grid: &[f64],
    samples: usize,
    base_seed: u64,
) -> Result<ExperimentSweep<PreimageRecord>> {
    let loss_models = build_models(designs, m, eta_grid, |&eta| eta)?;

    let per_sample: Vec<Vec<(f64, f64, f64)>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let u = haar_unitary(m, base_seed.wrapping_add(s))?;
            loss_models
                .iter()
                .map(|(_, _, loss)| {
                    let t = compose_lossy(&u, loss)?;
                    let fids = preimage_fidelities(&u, t.t())?;
                    let avg = fids.iter().sum::<f64>() / m as f64;
                    let min = fids.iter().copied().fold(f64::INFINITY, f64::min);
                    let max = fids.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    Ok((avg, min, max))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let records = loss_models
        .iter()
        .enumerate()
        .map(|(k, (design, eta, _))| {
            let mut sums = (0.0, 0.0, 0.0);
            for row in &per_sample {
                sums.0 += row[k].0;
                sums.1 += row[k].1;
                sums.2 += row[k].2;
            }
            let n = samples as f64;
            PreimageRecord {
                design: *design,
                eta: *eta,
                avg_fidelity: sums.0 / n,
                min_mode_fidelity: sums.1 / n,
                max_mode_fidelity: sums.2 / n,
                samples,
            }
        })
        .collect();

    Ok(ExperimentSweep {
        meta: SweepMeta {
            designs: designs.to_vec(),
            grid: eta_grid.to_vec(),
            samples,
            base_seed,
            rng_algorithm: RNG_ALGORITHM,
        },
        records,
    })
}

/// Sweeps the postselected circuit fidelity over a uniform per-cell loss
/// grid in dB.
pub fn postselected_sweep(
    m: usize,
    designs: &[DesignKind],
    loss_db_grid: &[f64],
    samples: usize,
    base_seed: u64,
) -> Result<ExperimentSweep<PostselectedRecord>> {
    let loss_models = build_models(designs, m, loss_db_grid, |&db| {
        eta_from_db(db).expect("grid validated below")
    })?;
    for &db in loss_db_grid {
        eta_from_db(db)?;
    }

    let per_sample: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let u = haar_unitary(m, base_seed.wrapping_add(s))?;
            loss_models
                .iter()
                .map(|(_, _, loss)| {
                    let t = compose_lossy(&u, loss)?;
                    postselected_fidelity(&u, t.t())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let records = loss_models
        .iter()
        .enumerate()
        .map(|(k, (design, db, _))| {
            let mean = per_sample.iter().map(|row| row[k]).sum::<f64>() / samples as f64;
            PostselectedRecord {
                design: *design,
                loss_db: *db,
                mean_fidelity: mean,
                samples,
            }
        })
        .collect();

    Ok(ExperimentSweep {
        meta: SweepMeta {
            designs: designs.to_vec(),
            grid: loss_db_grid.to_vec(),
            samples,
            base_seed,
            rng_algorithm: RNG_ALGORITHM,
        },
        records,
    })
}

/// Design-major list of (design, grid value, loss model).
fn build_models(
    designs: &[DesignKind],
    m: usize,
    grid: &[f64],
    to_eta: impl Fn(&f64) -> f64,
) -> Result<Vec<(DesignKind, f64, LossModel)>> {
    let mut out = Vec::with_capacity(designs.len() * grid.len());
    for &design in designs {
        for value in grid {
            out.push((design, *value, LossModel::for_design(design, m, to_eta(value))?));
        }
    }
    Ok(out)
}
