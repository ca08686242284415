use hopfion::algebra::PairKind;
use hopfion::energy::Variant;
use hopfion::fields::{make_ansatz, pure_gauge_potential, AnsatzKind};
use hopfion::io::{FieldKind, RunConfig, Snapshot, CONFIG_KEYS, FORMAT_VERSION, MAGIC};
use hopfion::lattice::Grid;
use hopfion::minimize::StepRule;
use hopfion::Error;
use proptest::prelude::*;
use std::path::PathBuf;

fn sample_snapshot() -> Snapshot {
    let (psi, _) = make_ansatz(AnsatzKind::Hopf, Grid::new(6, 2.5).unwrap(), 1).unwrap();
    Snapshot::from_map(&psi, "test").unwrap()
}

#[test]
fn header_layout() {
    let s = sample_snapshot();
    let bytes = s.encode().unwrap();
    assert_eq!(&bytes[..4], MAGIC);
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), FORMAT_VERSION);
    let mlen = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let meta: serde_json::Value = serde_json::from_slice(&bytes[12..12 + mlen]).unwrap();
    assert_eq!(meta["kind"], "map_s2");
    assert_eq!(meta["components"], 3);
    assert_eq!(meta["n"], 6);
    assert_eq!(bytes.len() - 12 - mlen, 6 * 6 * 6 * 3 * 8);
    let first = f64::from_le_bytes(bytes[12 + mlen..20 + mlen].try_into().unwrap());
    assert_eq!(first.to_bits(), s.data[0].to_bits());
}

#[test]
fn corrupt_snapshots_are_rejected() {
    let bytes = sample_snapshot().encode().unwrap();
    let mut bad_magic = bytes.clone();
    bad_magic[0] = b'X';
    let mut bad_version = bytes.clone();
    bad_version[4] = 9;
    let truncated = &bytes[..bytes.len() - 8];
    let mut extended = bytes.clone();
    extended.extend_from_slice(&[0u8; 8]);
    let mut huge_meta = bytes.clone();
    huge_meta[8..12].copy_from_slice(&u32::MAX.to_le_bytes());
    for b in [&bad_magic[..], &bad_version[..], truncated, &extended[..], &huge_meta[..], &bytes[..5]] {
        assert!(matches!(Snapshot::decode(b), Err(Error::Snapshot(_))));
    }
}

#[test]
fn kinds_convert_back() {
    let g = Grid::new(5, 1.0).unwrap();
    let (psi, u) = make_ansatz(AnsatzKind::BallDegree, g, 1).unwrap();
    let a = pure_gauge_potential(&u).unwrap();
    let sm = Snapshot::decode(&Snapshot::from_map(&psi, "m").unwrap().encode().unwrap()).unwrap();
    let su = Snapshot::decode(&Snapshot::from_lift(&u, "u").unwrap().encode().unwrap()).unwrap();
    let sa = Snapshot::decode(&Snapshot::from_potential(&a, "a").unwrap().encode().unwrap()).unwrap();
    assert_eq!(sm.to_map().unwrap(), psi);
    assert_eq!(su.to_lift().unwrap(), u);
    assert_eq!(sa.to_potential().unwrap().a, a.a);
    assert_eq!(sa.meta.kind, FieldKind::Potential);
    assert!(sa.to_map().is_err());
    assert!(sm.to_lift().is_err());
    assert!(Snapshot::new(g, FieldKind::MapS2, vec![0.0; 7], "x").is_err());
}

#[test]
fn file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.hopf");
    let s = sample_snapshot();
    s.write(&path).unwrap();
    assert_eq!(Snapshot::read(&path).unwrap(), s);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    assert!(Snapshot::read(&dir.path().join("missing")).is_err());
}

#[test]
fn config_defaults_and_comments() {
    let c = RunConfig::parse("# nothing\n\n  grid.n = 24 # trailing\nmodel.variant=cross_product\n").unwrap();
    assert_eq!(c.grid_n, 24);
    assert_eq!(c.variant, Variant::CrossProduct);
    assert_eq!(c.pair, PairKind::Su2U1);
    assert_eq!(c.optimizer.step_rule, StepRule::BarzilaiBorwein);
    assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    assert_eq!(CONFIG_KEYS.len(), 16);
}

#[test]
fn config_errors() {
    for text in [
        "grid.nn = 4",
        "grid.n = 8\ngrid.n = 8",
        "grid.n = 3",
        "grid.n = eight",
        "model.variant = manton",
        "optimizer.grad_tol = 2",
        "just words",
    ] {
        assert!(matches!(RunConfig::parse(text), Err(Error::Config(_))), "{text}");
    }
}

#[test]
fn every_documented_key_parses() {
    let c = RunConfig::default();
    let text = c.to_text();
    let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap().trim()).collect();
    let documented: Vec<&str> = CONFIG_KEYS.iter().map(|(k, _)| *k).collect();
    assert_eq!(keys, documented);
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    (
        4usize..200,
        0.1f64..100.0,
        prop::sample::select(vec![PairKind::Su2U1, PairKind::Su2Group, PairKind::Su3Flag]),
        prop::sample::select(vec![Variant::Coisotropy, Variant::CrossProduct, Variant::IsotropicSkyrme]),
        (0.0f64..10.0, 0.0f64..10.0),
        (prop::sample::select(vec![AnsatzKind::Constant, AnsatzKind::Hopf, AnsatzKind::BallDegree]), -5i32..6),
        (1usize..10_000, 1e-9f64..0.99, 1e-6f64..1.0),
        prop::sample::select(vec![StepRule::Fixed, StepRule::BarzilaiBorwein, StepRule::Backtracking]),
        (0usize..100, 0usize..100),
        "[a-z][a-z0-9_/]{0,12}",
        any::<u64>(),
    )
        .prop_map(|(n, len, pair, variant, (sd, ss), (kind, q), (it, tol, step), rule, (ce, cc), dir, seed)| {
            let mut c = RunConfig {
                grid_n: n,
                grid_length: len,
                pair,
                variant,
                dirichlet_scale: sd,
                skyrme_scale: ss,
                ansatz_kind: kind,
                ansatz_charge: q,
                output_dir: PathBuf::from(dir),
                seed,
                ..RunConfig::default()
            };
            c.optimizer.max_iters = it;
            c.optimizer.grad_tol = tol;
            c.optimizer.step_init = step;
            c.optimizer.step_rule = rule;
            c.optimizer.checkpoint_every = ce;
            c.optimizer.charge_check_every = cc;
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snapshot_roundtrip_is_bitwise(n in 4usize..7, kind in 0usize..3, seed in any::<u64>(), special in any::<bool>()) {
        let g = Grid::new(n, 1.0 + (seed % 5) as f64).unwrap();
        let kind = [FieldKind::MapS2, FieldKind::LiftSu2, FieldKind::Potential][kind];
        let mut f = hopfion::checks::random_field(g, 0, kind.components(), seed).data;
        if special {
            f[0] = -0.0;
            f[1] = f64::MIN_POSITIVE / 2.0;
            f[2] = f64::MAX;
        }
        let s = Snapshot::new(g, kind, f, format!("seed {seed}")).unwrap();
        let back = Snapshot::decode(&s.encode().unwrap()).unwrap();
        prop_assert_eq!(&back.meta, &s.meta);
        prop_assert!(back.data.iter().zip(&s.data).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert_eq!(back.encode().unwrap(), s.encode().unwrap());
    }

    #[test]
    fn config_roundtrip(c in arb_config()) {
        let back = RunConfig::parse(&c.to_text()).unwrap();
        prop_assert_eq!(back, c);
    }
}
