//! Hopf invariant and lift degree by three routes, plus sector bookkeeping.

pub mod cs;
pub mod linking;
pub mod preimage;
pub mod simplex;
pub mod whitehead;

pub use cs::{chern_simons_terms, chern_simons_value, lift_charge, C_SU2};
pub use linking::{linking_charge, linking_number, preimage_curves};
pub use preimage::preimage_degree;
pub use whitehead::{whitehead_charge, whitehead_raw};

use crate::algebra::{HomogeneousPair, PairKind};
use crate::error::{Error, Result};
use crate::fields::{act, LiftField, MapField, PotentialField, Target};
use serde::{Deserialize, Serialize};

/// Residual allowed between `ψ` and `act(u, φ)` in [`assign_sector`].
pub const FACTORIZATION_TOL: f64 = 1e-10;

/// Charges from the available routes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeReport {
    /// One entry per simple block of the group (SU₂ has one).
    #[serde(rename = "cs")]
    pub cs_value: Vec<f64>,
    #[serde(rename = "whitehead")]
    pub whitehead_value: Option<f64>,
    #[serde(rename = "linking")]
    pub linking_value: Option<i64>,
    pub rounded: Vec<i64>,
    /// Largest distance of a real-valued route from `rounded`.
    #[serde(rename = "deviation")]
    pub max_deviation: f64,
}

impl ChargeReport {
    /// Rounds the Chern-Simons values (or, without them, the Whitehead value)
    /// and records the largest deviation of any real route.
    pub fn assemble(cs_value: Vec<f64>, whitehead_value: Option<f64>, linking_value: Option<i64>) -> Self {
        let basis: Vec<f64> = if cs_value.is_empty() { whitehead_value.into_iter().collect() } else { cs_value.clone() };
        let rounded: Vec<i64> = basis.iter().map(|v| v.round() as i64).collect();
        let mut dev = basis.iter().zip(&rounded).map(|(v, r)| (v - *r as f64).abs()).fold(0.0, f64::max);
        if let (Some(w), Some(&r)) = (whitehead_value, rounded.first()) {
            dev = dev.max((w - r as f64).abs());
        }
        ChargeReport { cs_value, whitehead_value, linking_value, rounded, max_deviation: dev }
    }

    /// Whether every available route rounds to the same integer.
    pub fn routes_agree(&self) -> bool {
        let Some(&r) = self.rounded.first() else { return true };
        self.whitehead_value.map_or(true, |w| w.round() as i64 == r) && self.linking_value.map_or(true, |l| l == r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}

/// Homotopy-sector label of `ψ = u φ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorLabel {
    pub reference_id: String,
    pub charge: Vec<i64>,
    pub modulus_note: String,
}

/// Chern-Simons charge of a potential for the given pair.
///
/// For su2_u1 the four split terms use the cached reference map (or `φ ≡ i`);
/// for the group pair the isotropy is trivial and only the coisotropic term survives.
pub fn chern_simons_charge(a: &PotentialField, pair: &HomogeneousPair) -> Result<ChargeReport> {
    let v = match pair.kind {
        PairKind::Su2U1 => {
            let phi = cs::default_reference(a);
            chern_simons_value(a, Some(&phi))
        }
        PairKind::Su2Group => chern_simons_value(a, None),
        PairKind::Su3Flag => {
            return Err(Error::Unsupported("potentials are su2-valued; no SU₃ Chern-Simons route".into()))
        }
    };
    Ok(ChargeReport::assemble(vec![v], None, None))
}

/// Every route available for a sphere-valued `ψ` and, optionally, a lift `u`.
/// Routes that fail (rough lift, flux, degenerate preimages) are left empty.
pub fn charge_report(psi: &MapField, u: Option<&LiftField>) -> Result<ChargeReport> {
    let cs = match u {
        Some(u) => vec![lift_charge(u)?],
        None => Vec::new(),
    };
    let (wh, lk) = if psi.target == Target::Sphere {
        (whitehead_charge(psi).ok(), linking_charge(psi, [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).ok())
    } else {
        (None, None)
    };
    Ok(ChargeReport::assemble(cs, wh, lk))
}

/// 64-bit FNV-1a digest of the reference data, used as its identifier.
fn digest(m: &MapField) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    for b in (m.grid.n as u64).to_le_bytes().into_iter().chain(m.grid.length.to_le_bytes()) {
        eat(b);
    }
    for x in &m.data {
        for b in x.to_le_bytes() {
            eat(b);
        }
    }
    format!("{:?}:{h:016x}", m.target).to_lowercase()
}

fn is_constant(m: &MapField) -> bool {
    let c = m.target.comps();
    m.data.chunks(c).all(|v| v == &m.data[..c])
}

/// Labels `ψ` by its reference `φ` and the rounded charge of a lift `u` with `ψ = u φ`.
pub fn assign_sector(psi: &MapField, phi: &MapField, u: &LiftField) -> Result<SectorLabel> {
    let back = act(u, phi)?;
    if back.target != psi.target || back.grid != psi.grid {
        return Err(Error::Shape("assign_sector: ψ and φ differ in grid or target".into()));
    }
    let c = psi.target.comps();
    let res = back
        .data
        .chunks(c)
        .zip(psi.data.chunks(c))
        .map(|(x, y)| x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if !(res <= FACTORIZATION_TOL) {
        return Err(Error::Factorization(res));
    }
    let q = lift_charge(u)?;
    let modulus_note = if is_constant(phi) {
        "constant reference: stabilizer charges vanish, label is absolute".to_string()
    } else {
        "non-constant reference: raw integer; equality modulo the stabilizer-charge subgroup is not decided".to_string()
    };
    Ok(SectorLabel { reference_id: digest(phi), charge: vec![q.round() as i64], modulus_note })
}
