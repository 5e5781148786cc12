use serde::{Deserialize, Serialize};

use mccsim_core::analytics::{
    ope_bounds_cc_rich, ope_bounds_cc_sparse, ope_bounds_typical, BoundPair,
};
use mccsim_core::channel::ScatteringKind;
use mccsim_core::geometry::Scenario;
use mccsim_core::simcore::{estimate_outage, OutageEstimate};

use crate::config::ExperimentSpec;
use crate::error::{Error, Result};

/// One estimated outage probability with the analytic exponent bounds that
/// apply to its scenario/scattering combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub ell: f64,
    pub scenario: Scenario,
    pub scattering: ScatteringKind,
    pub trials: u64,
    pub outage_count: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `-ln p_hat`; absent when no outage was observed.
    pub ope_hat: Option<f64>,
    /// Lower bound on the outage-probability exponent, when one is known.
    pub bound_lower: Option<f64>,
    /// Upper bound on the outage-probability exponent, when one is known.
    pub bound_upper: Option<f64>,
}

/// Reproducibility envelope of a table: the full spec plus the artifact
/// version, and any per-row failures (a non-empty list flags a partial
/// table).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMetadata {
    pub artifact_version: String,
    pub spec: ExperimentSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_errors: Vec<String>,
}

impl TableMetadata {
    pub fn new(spec: &ExperimentSpec) -> Self {
        TableMetadata {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            spec: spec.clone(),
            row_errors: Vec::new(),
        }
    }
}

/// Outage-probability table over the sweep and scenario/scattering grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: TableMetadata,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// False when any row failed and was skipped.
    pub fn is_complete(&self) -> bool {
        self.metadata.row_errors.is_empty()
    }

    /// Rows of one scenario/scattering combination, in sweep order.
    pub fn select(&self, scenario: Scenario, scattering: ScatteringKind) -> Vec<&ResultRow> {
        self.rows
            .iter()
            .filter(|r| r.scenario == scenario && r.scattering == scattering)
            .collect()
    }
}

/// Analytic exponent bounds for one row, where the theory provides them.
/// The no-cooperation baseline has no cluster to grow, hence no bounds.
pub fn bounds_for(
    spec: &ExperimentSpec,
    ell: f64,
    scenario: Scenario,
    kind: ScatteringKind,
) -> Result<Option<BoundPair>> {
    let pair = match (scenario, kind) {
        (Scenario::ClusterCenter, ScatteringKind::Sparse) => {
            Some(ope_bounds_cc_sparse(ell, &spec.model_params(kind)?)?)
        }
        (Scenario::ClusterCenter, ScatteringKind::Rich) => {
            Some(ope_bounds_cc_rich(ell, spec.alpha, spec.diversity_order)?)
        }
        (Scenario::Typical, _) if ell >= 1.0 => {
            Some(ope_bounds_typical(ell, spec.alpha)?)
        }
        _ => None,
    };
    Ok(pair)
}

fn push_row(
    table: &mut ResultTable,
    spec: &ExperimentSpec,
    ell: f64,
    scenario: Scenario,
    kind: ScatteringKind,
) {
    let run = || -> Result<ResultRow> {
        let cfg = spec.sim_config(ell, scenario, kind)?;
        let est: OutageEstimate = estimate_outage(&cfg)?;
        let bounds = bounds_for(spec, ell, scenario, kind)?;
        Ok(ResultRow {
            ell,
            scenario,
            scattering: kind,
            trials: est.trials,
            outage_count: est.outage_count,
            p_hat: est.p_hat,
            ci_low: est.ci.0,
            ci_high: est.ci.1,
            ope_hat: est.ope,
            bound_lower: bounds.map(|b| b.lower),
            bound_upper: bounds.map(|b| b.upper),
        })
    };
    match run() {
        Ok(row) => table.rows.push(row),
        Err(e) => table
            .metadata
            .row_errors
            .push(format!("ell={ell} {scenario} {kind}: {e}")),
    }
}

/// Runs the outage-probability sweep: every (ℓ, scenario, scattering)
/// combination of the spec, plus one no-cooperation baseline row per
/// scattering kind (evaluated at the first sweep point, where the cluster
/// size only labels the row).
///
/// Rows that fail are recorded in `metadata.row_errors` and skipped, so a
/// partial table is visibly partial rather than silently truncated.
pub fn run_fig3(spec: &ExperimentSpec) -> Result<ResultTable> {
    spec.validate()?;
    let mut table = ResultTable {
        metadata: TableMetadata::new(spec),
        rows: Vec::new(),
    };
    for &kind in &spec.scatterings {
        for &scenario in &spec.scenarios {
            for &ell in &spec.sweep {
                push_row(&mut table, spec, ell, scenario, kind);
            }
        }
        if !spec.scenarios.contains(&Scenario::NoMcc) {
            push_row(&mut table, spec, spec.sweep[0], Scenario::NoMcc, kind);
        }
    }
    Ok(table)
}

/// Which exponent bound an overlay curve follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSide {
    Lower,
    Upper,
}

/// A calibrated analytic curve `b exp(-phi(ell))` sampled on the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayCurve {
    pub scenario: Scenario,
    pub scattering: ScatteringKind,
    pub side: BoundSide,
    /// Sweep point the constant was anchored at.
    pub anchor_ell: f64,
    /// Calibration constant `b`.
    pub scale: f64,
    /// `(ell, curve value)` pairs in sweep order.
    pub points: Vec<(f64, f64)>,
}

/// Calibrates `b exp(-phi(ell))` against the simulated rows of one
/// combination: `phi` is the chosen exponent bound and `b` is fixed by
/// equality at the largest sweep point with a positive estimate, so the
/// analytic curve and the simulated curve meet at their rightmost usable
/// points.
pub fn calibrate_overlay(
    table: &ResultTable,
    scenario: Scenario,
    scattering: ScatteringKind,
    side: BoundSide,
) -> Result<OverlayCurve> {
    let rows = table.select(scenario, scattering);
    if rows.is_empty() {
        return Err(Error::Calibration(format!(
            "table has no rows for {scenario}/{scattering}"
        )));
    }
    let spec = &table.metadata.spec;
    let phi = |ell: f64| -> Result<f64> {
        let pair = bounds_for(spec, ell, scenario, scattering)?.ok_or_else(|| {
            Error::Calibration(format!("no exponent bound for {scenario}/{scattering}"))
        })?;
        Ok(match side {
            BoundSide::Lower => pair.lower,
            BoundSide::Upper => pair.upper,
        })
    };
    let anchor = rows
        .iter()
        .filter(|r| r.p_hat > 0.0)
        .max_by(|a, b| a.ell.total_cmp(&b.ell))
        .ok_or_else(|| {
            Error::Calibration(format!(
                "every estimate for {scenario}/{scattering} is zero"
            ))
        })?;
    let scale = anchor.p_hat * phi(anchor.ell)?.exp();
    let points = rows
        .iter()
        .map(|r| Ok((r.ell, scale * (-phi(r.ell)?).exp())))
        .collect::<Result<Vec<_>>>()?;
    Ok(OverlayCurve {
        scenario,
        scattering,
        side,
        anchor_ell: anchor.ell,
        scale,
        points,
    })
}

/// One analytic exponent-bound row, for the `bounds` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub ell: f64,
    pub scenario: Scenario,
    pub scattering: ScatteringKind,
    pub phi_lower: f64,
    pub phi_upper: f64,
    pub regime: String,
}

/// Evaluates the exponent bounds on the sweep for every combination that
/// has them.
pub fn bound_curves(spec: &ExperimentSpec) -> Result<Vec<BoundRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &kind in &spec.scatterings {
        for &scenario in &spec.scenarios {
            for &ell in &spec.sweep {
                if let Some(pair) = bounds_for(spec, ell, scenario, kind)? {
                    rows.push(BoundRow {
                        ell,
                        scenario,
                        scattering: kind,
                        phi_lower: pair.lower,
                        phi_upper: pair.upper,
                        regime: pair.regime.to_string(),
                    });
                }
            }
        }
    }
    Ok(rows)
}
