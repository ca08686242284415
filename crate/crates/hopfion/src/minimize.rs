//! Energy descent over sphere-valued maps with charge monitoring.

use crate::energy::{energy_gradient, energy_map_with, Model};
use crate::error::{Error, Result};
use crate::fields::{MapField, Target};
use crate::lattice::LatticeField;
use crate::topology::whitehead_charge;
use serde::{Deserialize, Serialize};

/// Smallest trial step before the run is declared stalled.
pub const MIN_STEP: f64 = 1e-14;

/// Default threshold of [`charge_guard`].
pub const DEFAULT_GUARD: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Constant step, every step accepted.
    Fixed,
    /// Barzilai-Borwein trial step with backtracking fallback.
    BarzilaiBorwein,
    /// Step halving until the energy decreases, doubling after success.
    Backtracking,
}

impl StepRule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed" => Some(StepRule::Fixed),
            "barzilai_borwein" => Some(StepRule::BarzilaiBorwein),
            "backtracking" => Some(StepRule::Backtracking),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StepRule::Fixed => "fixed",
            StepRule::BarzilaiBorwein => "barzilai_borwein",
            StepRule::Backtracking => "backtracking",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxConfig {
    pub max_iters: usize,
    /// Stop once the gradient norm falls below `grad_tol` times its initial value.
    pub grad_tol: f64,
    pub step_init: f64,
    pub step_rule: StepRule,
    /// Checkpoint cadence in iterations (0 disables).
    pub checkpoint_every: usize,
    /// Charge cadence in iterations (0 disables; the endpoints are always measured).
    pub charge_check_every: usize,
    pub model: Model,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig {
            max_iters: 2000,
            grad_tol: 1e-3,
            step_init: 1e-3,
            step_rule: StepRule::BarzilaiBorwein,
            checkpoint_every: 0,
            charge_check_every: 50,
            model: Model::default(),
        }
    }
}

impl RelaxConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::Config("optimizer.max_iters must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0 && self.grad_tol < 1.0) {
            return Err(Error::Config("optimizer.grad_tol must lie in (0, 1)".into()));
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return Err(Error::Config("optimizer.step_init must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub iter: usize,
    pub energy: f64,
    pub dirichlet: f64,
    pub skyrme: f64,
    pub grad_norm: f64,
    /// Step that produced this iterate (0 for the start).
    pub step: f64,
    pub charge: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIters,
    Stalled,
    Diverged,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIters => "max_iters",
            Termination::Stalled => "stalled",
            Termination::Diverged => "diverged",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelaxRun {
    pub history: Vec<HistoryEntry>,
    /// Last accepted iterate.
    pub psi: MapField,
    pub reason: Termination,
}

impl RelaxRun {
    /// History as CSV with header `iter,energy,dirichlet,skyrme,grad_norm,step,charge`.
    pub fn history_csv(&self) -> String {
        let mut s = String::from("iter,energy,dirichlet,skyrme,grad_norm,step,charge\n");
        for h in &self.history {
            let c = h.charge.map(|c| c.to_string()).unwrap_or_default();
            s.push_str(&format!("{},{},{},{},{},{},{}\n", h.iter, h.energy, h.dirichlet, h.skyrme, h.grad_norm, h.step, c));
        }
        s
    }
}

fn inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct State {
    psi: MapField,
    energy: f64,
    dirichlet: f64,
    skyrme: f64,
    grad: LatticeField,
    grad_norm: f64,
}

fn evaluate(psi: MapField, model: &Model) -> Result<State> {
    let rep = energy_map_with(&psi, model)?;
    let grad = energy_gradient(&psi, model)?;
    let grad_norm = grad.norm();
    Ok(State { energy: rep.total, dirichlet: rep.dirichlet, skyrme: rep.skyrme, grad, grad_norm, psi })
}

/// `normalize(ψ - t G)` pointwise.
fn retract(psi: &MapField, grad: &LatticeField, t: f64) -> MapField {
    let mut data: Vec<f64> = psi.data.iter().zip(&grad.data).map(|(p, g)| p - t * g).collect();
    for v in data.chunks_mut(3) {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.iter_mut().for_each(|x| *x /= n);
    }
    MapField { grid: psi.grid, target: Target::Sphere, data }
}

/// [`relax_with`] without checkpoints.
pub fn relax(psi0: &MapField, cfg: &RelaxConfig) -> Result<RelaxRun> {
    relax_with(psi0, cfg, |_, _| Ok(()))
}

/// Descent `ψ ← normalize(ψ - t ∇E)`; `checkpoint(iter, ψ)` is called in
/// order at the configured cadence and for the final iterate.
pub fn relax_with<F>(psi0: &MapField, cfg: &RelaxConfig, mut checkpoint: F) -> Result<RelaxRun>
where
    F: FnMut(usize, &MapField) -> Result<()>,
{
    cfg.validate()?;
    if psi0.target != Target::Sphere {
        return Err(Error::Unsupported("relax needs a sphere-valued map".into()));
    }
    let model = cfg.model;
    let charge_at = |psi: &MapField| whitehead_charge(psi).ok();
    let mut cur = evaluate(psi0.clone(), &model)?;
    let g0 = cur.grad_norm;
    let target = cfg.grad_tol * g0;
    let mut history = vec![HistoryEntry {
        iter: 0,
        energy: cur.energy,
        dirichlet: cur.dirichlet,
        skyrme: cur.skyrme,
        grad_norm: cur.grad_norm,
        step: 0.0,
        charge: charge_at(&cur.psi),
    }];
    if !cur.energy.is_finite() {
        return Ok(RelaxRun { history, psi: cur.psi, reason: Termination::Diverged });
    }
    let mut step = cfg.step_init;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut reason = Termination::MaxIters;
    for iter in 1..=cfg.max_iters {
        if cur.grad_norm <= target || cur.grad_norm <= 1e-14 {
            reason = Termination::Converged;
            break;
        }
        let mut t = match (cfg.step_rule, &prev) {
            (StepRule::Fixed, _) => cfg.step_init,
            (StepRule::Backtracking, _) => 2.0 * step,
            (StepRule::BarzilaiBorwein, None) => cfg.step_init,
            (StepRule::BarzilaiBorwein, Some((s, y))) => {
                let sy = inner(s, y);
                let ss = inner(s, s);
                if sy > 0.0 && ss > 0.0 {
                    ss / sy
                } else {
                    2.0 * step
                }
            }
        };
        let next = loop {
            let trial = retract(&cur.psi, &cur.grad, t);
            let st = evaluate(trial, &model)?;
            if !st.energy.is_finite() {
                if cfg.step_rule == StepRule::Fixed {
                    reason = Termination::Diverged;
                    break None;
                }
            } else if cfg.step_rule == StepRule::Fixed || st.energy < cur.energy {
                break Some(st);
            }
            t *= 0.5;
            if t < MIN_STEP {
                reason = Termination::Stalled;
                break None;
            }
        };
        let Some(next) = next else { break };
        if cfg.step_rule == StepRule::Fixed && !next.energy.is_finite() {
            reason = Termination::Diverged;
            break;
        }
        let s: Vec<f64> = next.psi.data.iter().zip(&cur.psi.data).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next.grad.data.iter().zip(&cur.grad.data).map(|(a, b)| a - b).collect();
        prev = Some((s, y));
        step = t;
        cur = next;
        let check = cfg.charge_check_every > 0 && iter % cfg.charge_check_every == 0;
        history.push(HistoryEntry {
            iter,
            energy: cur.energy,
            dirichlet: cur.dirichlet,
            skyrme: cur.skyrme,
            grad_norm: cur.grad_norm,
            step: t,
            charge: if check { charge_at(&cur.psi) } else { None },
        });
        if cfg.checkpoint_every > 0 && iter % cfg.checkpoint_every == 0 {
            checkpoint(iter, &cur.psi)?;
        }
    }
    if cur.grad_norm <= target || cur.grad_norm <= 1e-14 {
        reason = Termination::Converged;
    }
    if let Some(last) = history.last_mut() {
        if last.charge.is_none() {
            last.charge = charge_at(&cur.psi);
        }
    }
    let last_iter = history.last().map_or(0, |h| h.iter);
    checkpoint(last_iter, &cur.psi)?;
    Ok(RelaxRun { history, psi: cur.psi, reason })
}

/// Iterations whose charge estimate differs from the previous estimate by more than `threshold`.
pub fn charge_guard(run: &RelaxRun, threshold: f64) -> Vec<usize> {
    let est: Vec<(usize, f64)> = run.history.iter().filter_map(|h| h.charge.map(|c| (h.iter, c))).collect();
    est.windows(2).filter(|w| (w[1].1 - w[0].1).abs() > threshold).map(|w| w[1].0).collect()
}
