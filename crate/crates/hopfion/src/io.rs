//! Binary snapshots and the flat key-value run configuration.

use crate::algebra::{PairKind, Quat};
use crate::energy::{Model, Variant};
use crate::error::{Error, Result};
use crate::fields::{AnsatzKind, LiftField, MapField, PotentialField, Target};
use crate::lattice::{Grid, LatticeField};
use crate::minimize::{RelaxConfig, StepRule};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 4] = b"HOPF";
pub const FORMAT_VERSION: u32 = 1;
const MAX_META: u32 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    MapS2,
    LiftSu2,
    Potential,
}

impl FieldKind {
    pub fn components(self) -> usize {
        match self {
            FieldKind::MapS2 => 3,
            FieldKind::LiftSu2 => 4,
            FieldKind::Potential => 9,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::MapS2 => "map_s2",
            FieldKind::LiftSu2 => "lift_su2",
            FieldKind::Potential => "potential",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub n: usize,
    pub length: f64,
    pub kind: FieldKind,
    pub components: usize,
    /// Free-form provenance, e.g. the command that produced the file.
    pub creation: String,
    /// Charge report or estimate attached by the producer.
    pub charge: Option<serde_json::Value>,
}

/// Site-major, components-innermost field dump with a JSON header.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub meta: SnapshotMeta,
    pub data: Vec<f64>,
}

impl Snapshot {
    pub fn new(grid: Grid, kind: FieldKind, data: Vec<f64>, creation: impl Into<String>) -> Result<Self> {
        let comps = kind.components();
        if data.len() != grid.sites() * comps {
            return Err(Error::Snapshot(format!("{} values for {} on n = {}", data.len(), kind.name(), grid.n)));
        }
        Ok(Snapshot {
            meta: SnapshotMeta { n: grid.n, length: grid.length, kind, components: comps, creation: creation.into(), charge: None },
            data,
        })
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.meta.n, self.meta.length).map_err(|e| Error::Snapshot(e.to_string()))
    }

    pub fn from_map(m: &MapField, creation: impl Into<String>) -> Result<Self> {
        let kind = match m.target {
            Target::Sphere => FieldKind::MapS2,
            Target::Su2 => FieldKind::LiftSu2,
            Target::Su3 => return Err(Error::Unsupported("snapshots hold sphere, SU₂ or potential fields".into())),
        };
        Snapshot::new(m.grid, kind, m.data.clone(), creation)
    }

    pub fn from_lift(u: &LiftField, creation: impl Into<String>) -> Result<Self> {
        Snapshot::new(u.grid, FieldKind::LiftSu2, u.data.iter().flat_map(|q| q.to_array()).collect(), creation)
    }

    pub fn from_potential(a: &PotentialField, creation: impl Into<String>) -> Result<Self> {
        Snapshot::new(a.grid(), FieldKind::Potential, a.a.data.clone(), creation)
    }

    fn expect(&self, kind: FieldKind) -> Result<Grid> {
        if self.meta.kind != kind {
            return Err(Error::Snapshot(format!("expected a {} snapshot, found {}", kind.name(), self.meta.kind.name())));
        }
        self.grid()
    }

    pub fn to_map(&self) -> Result<MapField> {
        match self.meta.kind {
            FieldKind::MapS2 => MapField::from_raw(self.grid()?, Target::Sphere, self.data.clone()),
            FieldKind::LiftSu2 => MapField::from_raw(self.grid()?, Target::Su2, self.data.clone()),
            FieldKind::Potential => Err(Error::Snapshot("a potential snapshot is not a map".into())),
        }
    }

    pub fn to_lift(&self) -> Result<LiftField> {
        let g = self.expect(FieldKind::LiftSu2)?;
        Ok(LiftField { grid: g, data: self.data.chunks(4).map(|c| Quat::new(c[0], c[1], c[2], c[3])).collect() })
    }

    pub fn to_potential(&self) -> Result<PotentialField> {
        let g = self.expect(FieldKind::Potential)?;
        let mut a = LatticeField::zeros(g, 1, 3);
        a.data.copy_from_slice(&self.data);
        PotentialField::new(a)
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        let meta = serde_json::to_vec(&self.meta)?;
        let mut out = Vec::with_capacity(12 + meta.len() + 8 * self.data.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(meta.len() as u32).to_le_bytes());
        out.extend_from_slice(&meta);
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    /// Parses and validates a snapshot; the payload must match the header exactly.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(Error::Snapshot("bad magic (not a HOPF snapshot)".into()));
        }
        let word = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().expect("4 bytes"));
        let version = word(4);
        if version != FORMAT_VERSION {
            return Err(Error::Snapshot(format!("unsupported format version {version}")));
        }
        let mlen = word(8);
        if mlen > MAX_META || 12 + mlen as usize > bytes.len() {
            return Err(Error::Snapshot(format!("metadata length {mlen} exceeds file")));
        }
        let mend = 12 + mlen as usize;
        let meta: SnapshotMeta =
            serde_json::from_slice(&bytes[12..mend]).map_err(|e| Error::Snapshot(format!("metadata: {e}")))?;
        if meta.components != meta.kind.components() {
            return Err(Error::Snapshot(format!("{} components for {}", meta.components, meta.kind.name())));
        }
        let want = meta
            .n
            .checked_pow(3)
            .and_then(|v| v.checked_mul(meta.components * 8))
            .ok_or_else(|| Error::Snapshot("grid too large".into()))?;
        let payload = &bytes[mend..];
        if payload.len() != want {
            return Err(Error::Snapshot(format!("payload has {} bytes, header implies {want}", payload.len())));
        }
        let data = payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        let s = Snapshot { meta, data };
        s.grid()?;
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.encode()?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::Snapshot(format!("{}: {e}", path.display())))?;
        Snapshot::decode(&bytes)
    }
}

/// Writes to a temporary sibling, syncs and renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Io(std::io::Error::other("path has no file name")))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Run configuration; every key has a default.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid_n: usize,
    pub grid_length: f64,
    pub pair: PairKind,
    pub variant: Variant,
    pub dirichlet_scale: f64,
    pub skyrme_scale: f64,
    pub ansatz_kind: AnsatzKind,
    pub ansatz_charge: i32,
    pub optimizer: RelaxConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid_n: 32,
            grid_length: 2.0 * std::f64::consts::PI,
            pair: PairKind::Su2U1,
            variant: Variant::Coisotropy,
            dirichlet_scale: 1.0,
            skyrme_scale: 1.0,
            ansatz_kind: AnsatzKind::Hopf,
            ansatz_charge: 1,
            optimizer: RelaxConfig::default(),
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

/// Recognized keys with their documentation.
pub const CONFIG_KEYS: [(&str, &str); 16] = [
    ("grid.n", "sites per axis (≥ 4)"),
    ("grid.length", "side of the periodic cell"),
    ("model.pair", "su2_u1 | su2_group | su3_flag"),
    ("model.variant", "coisotropy | cross_product | isotropic_skyrme"),
    ("model.dirichlet_scale", "global factor on the Dirichlet term"),
    ("model.skyrme_scale", "global factor on the Skyrme term"),
    ("ansatz.kind", "constant | hopf | ball_degree | great_circle"),
    ("ansatz.charge", "integer charge of the ansatz"),
    ("optimizer.max_iters", "iteration cap (≥ 1)"),
    ("optimizer.grad_tol", "relative gradient-norm target in (0, 1)"),
    ("optimizer.step_init", "first trial step (> 0)"),
    ("optimizer.step_rule", "fixed | barzilai_borwein | backtracking"),
    ("optimizer.checkpoint_every", "checkpoint cadence in iterations (0 = final only)"),
    ("optimizer.charge_check_every", "charge cadence in iterations (0 = endpoints only)"),
    ("output.dir", "directory for checkpoints and history"),
    ("seed", "seed for randomized inputs"),
];

fn parse_num<T: std::str::FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("line {line}: invalid value {v:?} for {key}")))
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
    /// keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected `key = value`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k.to_string()) {
                return Err(Error::Config(format!("line {line}: duplicate key {k}")));
            }
            let bad = |what: &str| Error::Config(format!("line {line}: invalid {what} {v:?}"));
            match k {
                "grid.n" => c.grid_n = parse_num(k, v, line)?,
                "grid.length" => c.grid_length = parse_num(k, v, line)?,
                "model.pair" => c.pair = PairKind::parse(v).ok_or_else(|| bad("pair"))?,
                "model.variant" => c.variant = Variant::parse(v).ok_or_else(|| bad("variant"))?,
                "model.dirichlet_scale" => c.dirichlet_scale = parse_num(k, v, line)?,
                "model.skyrme_scale" => c.skyrme_scale = parse_num(k, v, line)?,
                "ansatz.kind" => c.ansatz_kind = AnsatzKind::parse(v).ok_or_else(|| bad("ansatz kind"))?,
                "ansatz.charge" => c.ansatz_charge = parse_num(k, v, line)?,
                "optimizer.max_iters" => c.optimizer.max_iters = parse_num(k, v, line)?,
                "optimizer.grad_tol" => c.optimizer.grad_tol = parse_num(k, v, line)?,
                "optimizer.step_init" => c.optimizer.step_init = parse_num(k, v, line)?,
                "optimizer.step_rule" => c.optimizer.step_rule = StepRule::parse(v).ok_or_else(|| bad("step rule"))?,
                "optimizer.checkpoint_every" => c.optimizer.checkpoint_every = parse_num(k, v, line)?,
                "optimizer.charge_check_every" => c.optimizer.charge_check_every = parse_num(k, v, line)?,
                "output.dir" => c.output_dir = PathBuf::from(v),
                "seed" => c.seed = parse_num(k, v, line)?,
                _ => return Err(Error::Config(format!("line {line}: unknown key {k}"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.grid_n, self.grid_length).map_err(|e| Error::Config(e.to_string()))?;
        self.relax_config().validate()
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_n, self.grid_length)
    }

    pub fn model(&self) -> Model {
        Model { variant: self.variant, dirichlet_scale: self.dirichlet_scale, skyrme_scale: self.skyrme_scale }
    }

    pub fn relax_config(&self) -> RelaxConfig {
        RelaxConfig { model: self.model(), ..self.optimizer }
    }

    /// Canonical text form; parses back to an equal configuration.
    pub fn to_text(&self) -> String {
        let o = &self.optimizer;
        format!(
            "grid.n = {}\ngrid.length = {}\nmodel.pair = {}\nmodel.variant = {}\nmodel.dirichlet_scale = {}\n\
             model.skyrme_scale = {}\nansatz.kind = {}\nansatz.charge = {}\noptimizer.max_iters = {}\n\
             optimizer.grad_tol = {}\noptimizer.step_init = {}\noptimizer.step_rule = {}\n\
             optimizer.checkpoint_every = {}\noptimizer.charge_check_every = {}\noutput.dir = {}\nseed = {}\n",
            self.grid_n,
            self.grid_length,
            self.pair.name(),
            self.variant.name(),
            self.dirichlet_scale,
            self.skyrme_scale,
            self.ansatz_kind.name(),
            self.ansatz_charge,
            o.max_iters,
            o.grad_tol,
            o.step_init,
            o.step_rule.name(),
            o.checkpoint_every,
            o.charge_check_every,
            self.output_dir.display(),
            self.seed
        )
    }
}
